"""Dense channels-first tensors, deterministic fills and comparison helpers.

Tensors are plain float32 numpy arrays in C order, so the flat layout of an
input tensor of shape (channels, height, width) is exactly

    flat[c*height*width + r*width + x] == tensor[c, r, x]

and likewise for weights and outputs.  The helpers below pin those index maps
for tests and provide a fixed, platform-independent pseudo-random fill.
"""

import numpy as np

from .errors import ShapeMismatchError

__all__ = [
    "fill_deterministic",
    "random_tensor",
    "max_rel_diff",
    "input_flat_index",
    "output_flat_index",
    "weight_flat_index",
    "smm_weight_flat_index",
]

# splitmix64 constants (Steele, Lea & Flood's mixer); the generator is fixed
# here so fixtures reproduce bit-exactly on every platform.
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(state):
    z = state.copy()
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


def fill_deterministic(out, seed):
    """Fill ``out`` in place with reproducible values in [0, 1).

    Element i receives the i-th output of a splitmix64 stream seeded with
    ``seed``, reduced to its top 24 bits and scaled by 2**-24, so the values
    are exactly representable in float32 and identical across platforms,
    numpy versions and array shapes (only the element count matters).
    """
    n = out.size
    with np.errstate(over="ignore"):
        state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + np.arange(
            1, n + 1, dtype=np.uint64) * _GOLDEN
        bits = _splitmix64(state) >> np.uint64(40)
    out.reshape(-1)[:] = bits.astype(np.float32) * np.float32(2.0 ** -24)
    return out


def random_tensor(shape, seed):
    """Allocate a float32 tensor of ``shape`` and fill it deterministically."""
    return fill_deterministic(np.empty(shape, dtype=np.float32), seed)


def max_rel_diff(a, b):
    """Largest elementwise relative difference between two equal-shaped tensors.

    Computed as max |a-b| / max(|a|, |b|, 1e-12); identical tensors give 0.0
    even where both are zero.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-12)
    return float(np.max(np.abs(a.astype(np.float64) - b.astype(np.float64)) / denom))


def _check_range(name, value, bound):
    if not 0 <= value < bound:
        raise IndexError(f"{name}={value} out of range [0, {bound})")


def input_flat_index(geom, c, r, x):
    _check_range("c", c, geom.in_channels)
    _check_range("r", r, geom.in_h)
    _check_range("x", x, geom.in_w)
    return (c * geom.in_h + r) * geom.in_w + x


def output_flat_index(geom, m, r, x):
    _check_range("m", m, geom.out_channels)
    _check_range("r", r, geom.out_h)
    _check_range("x", x, geom.out_w)
    return (m * geom.out_h + r) * geom.out_w + x


def weight_flat_index(geom, m, c, k, j):
    """Flat offset in the conventional (out_ch, in_ch, k_h, k_w) layout."""
    _check_range("m", m, geom.out_channels)
    _check_range("c", c, geom.in_channels)
    _check_range("k", k, geom.k_h)
    _check_range("j", j, geom.k_w)
    return ((m * geom.in_channels + c) * geom.k_h + k) * geom.k_w + j


def smm_weight_flat_index(geom, c, j, k, m):
    """Flat offset in the access-order (in_ch, k_w, k_h, out_ch) layout."""
    _check_range("c", c, geom.in_channels)
    _check_range("j", j, geom.k_w)
    _check_range("k", k, geom.k_h)
    _check_range("m", m, geom.out_channels)
    return ((c * geom.k_w + j) * geom.k_h + k) * geom.out_channels + m
