"""Input validation helpers shared by the kernels and the estimator."""

import numpy as np

from .errors import ShapeMismatchError

__all__ = [
    "as_float32",
    "check_input",
    "check_output",
    "check_weights",
    "check_weights_smm",
    "check_matrix",
]


def as_float32(arr, name="array"):
    """Coerce to a C-contiguous float32 ndarray (copying only if needed)."""
    try:
        return np.ascontiguousarray(arr, dtype=np.float32)
    except (TypeError, ValueError) as exc:
        raise ShapeMismatchError(f"{name} is not numeric: {exc}") from exc


def _check_dense(arr, shape, name):
    if not isinstance(arr, np.ndarray):
        raise ShapeMismatchError(f"{name} must be a numpy array")
    if arr.shape != shape:
        raise ShapeMismatchError(f"{name} has shape {arr.shape}, expected {shape}")
    if arr.dtype != np.float32:
        raise ShapeMismatchError(f"{name} must be float32, got {arr.dtype}")
    if not arr.flags.c_contiguous:
        raise ShapeMismatchError(f"{name} must be C-contiguous")
    return arr


def check_input(inp, geom):
    return _check_dense(inp, geom.input_shape, "input tensor")


def check_output(out, geom):
    return _check_dense(out, geom.output_shape, "output tensor")


def check_weights(weights, geom):
    return _check_dense(weights, geom.weights_shape, "weight tensor")


def check_weights_smm(weights, geom):
    return _check_dense(weights, geom.weights_smm_shape, "repacked weight tensor")


def check_matrix(mat, name="matrix"):
    if not isinstance(mat, np.ndarray) or mat.ndim != 2:
        raise ShapeMismatchError(f"{name} must be a 2-D numpy array")
    if mat.dtype != np.float32:
        raise ShapeMismatchError(f"{name} must be float32, got {mat.dtype}")
    return mat
