"""Scikit-learn style transformer over the convolution backends.

Conv2D turns a batch of channels-first images into a batch of feature maps
using any backend in this package, so the kernels compose with pipelines and
model-selection tooling.  When no weights are supplied, ``fit`` materializes
deterministic pseudo-random ones, which makes the transformer usable as a
fixed (untrained) convolutional feature extractor.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .geometry import ConvGeometry
from .im2col import conv_im2col
from .mec import conv_mec
from .reference import conv_ref
from .smm import repack_weights, smm_conv_parallel, smm_conv_single
from .tensors import random_tensor
from .validation import as_float32

__all__ = ["Conv2D", "BACKENDS"]

BACKENDS = ("ref", "im2col", "mec", "smm")


def _as_pair(value, name):
    if isinstance(value, int):
        return (value, value)
    pair = tuple(value)
    if len(pair) != 2 or not all(isinstance(v, int) for v in pair):
        raise ValueError(f"{name} must be an int or a pair of ints")
    return pair


class Conv2D(TransformerMixin, BaseEstimator):
    """Fixed-weight 2-D convolution as a transformer.

    Parameters
    ----------
    out_channels : number of output feature maps.
    kernel_size, stride, padding : int or (height, width) pair.
    backend : one of "ref", "im2col", "mec", "smm".
    threads : worker count for the "smm" backend (1 = single-threaded).
    weights : optional (out_channels, in_channels, k_h, k_w) array; when
        omitted, deterministic pseudo-random weights are drawn from ``seed``.
    seed : seed for the deterministic weight fill.
    """

    def __init__(self, out_channels=8, kernel_size=3, stride=1, padding=0,
                 backend="smm", threads=1, weights=None, seed=0):
        self.out_channels = out_channels
        self.kernel_size = kernel_size
        self.stride = stride
        self.padding = padding
        self.backend = backend
        self.threads = threads
        self.weights = weights
        self.seed = seed

    def _validate_batch(self, X):
        X = np.asarray(X)
        if X.ndim != 4:
            raise ValueError(
                f"expected X with shape (n_samples, channels, height, width), "
                f"got ndim={X.ndim}")
        if not np.isfinite(X).all():
            raise ValueError("X contains non-finite values")
        return as_float32(X, "X")

    def fit(self, X, y=None):
        """Bind geometry to the batch shape and materialize weights."""
        X = self._validate_batch(X)
        if self.backend not in BACKENDS:
            raise ValueError(
                f"unknown backend {self.backend!r}; choose from {BACKENDS}")
        k_h, k_w = _as_pair(self.kernel_size, "kernel_size")
        s_h, s_w = _as_pair(self.stride, "stride")
        p_h, p_w = _as_pair(self.padding, "padding")
        _, in_channels, in_h, in_w = X.shape
        self.geometry_ = ConvGeometry(
            in_channels=in_channels, out_channels=self.out_channels,
            in_h=in_h, in_w=in_w, k_h=k_h, k_w=k_w,
            stride_h=s_h, stride_w=s_w, pad_h=p_h, pad_w=p_w)
        if self.weights is not None:
            weights = as_float32(self.weights, "weights")
            if weights.shape != self.geometry_.weights_shape:
                raise ValueError(
                    f"weights shape {weights.shape} does not match "
                    f"{self.geometry_.weights_shape}")
            self.weights_ = weights
        else:
            self.weights_ = random_tensor(self.geometry_.weights_shape,
                                          self.seed)
        self.weights_smm_ = (repack_weights(self.weights_, self.geometry_)
                             if self.backend == "smm" else None)
        return self

    def _conv_one(self, image):
        geom = self.geometry_
        if self.backend == "ref":
            return conv_ref(image, self.weights_, geom)
        if self.backend == "im2col":
            return conv_im2col(image, self.weights_, geom)
        if self.backend == "mec":
            return conv_mec(image, self.weights_, geom)
        if self.threads > 1:
            return smm_conv_parallel(image, self.weights_smm_, geom,
                                     self.threads)
        return smm_conv_single(image, self.weights_smm_, geom)

    def transform(self, X):
        """Convolve each sample; returns (n_samples, out_ch, out_h, out_w)."""
        if not hasattr(self, "geometry_"):
            raise NotFittedError("Conv2D must be fitted before transform")
        X = self._validate_batch(X)
        geom = self.geometry_
        if X.shape[1:] != geom.input_shape:
            raise ValueError(
                f"X samples have shape {X.shape[1:]}, fitted for "
                f"{geom.input_shape}")
        out = np.empty((X.shape[0],) + geom.output_shape, dtype=np.float32)
        for i in range(X.shape[0]):
            out[i] = self._conv_one(np.ascontiguousarray(X[i]))
        return out
