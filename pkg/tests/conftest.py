"""Shared test helpers: an independent convolution oracle and geometry sampling."""

import numpy as np
import pytest

from smmconv import ConvGeometry

# Keep hypothesis/numba interplay quiet and deterministic in CI-like runs.
from hypothesis import HealthCheck, settings

settings.register_profile(
    "kernels", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("kernels")


def conv_loops(inp, weights, geom):
    """Brute-force convolution written independently of the library kernels.

    Scalar numpy float32 arithmetic in the same per-element accumulation
    order (channel, kernel row, kernel column) as the library's reference
    backend, so results must agree bitwise.
    """
    out = np.zeros(geom.output_shape, dtype=np.float32)
    for m in range(geom.out_channels):
        for r in range(geom.out_h):
            for x in range(geom.out_w):
                acc = np.float32(0.0)
                for c in range(geom.in_channels):
                    for k in range(geom.k_h):
                        rr = r * geom.stride_h + k - geom.pad_h
                        if not 0 <= rr < geom.in_h:
                            continue
                        for j in range(geom.k_w):
                            xx = x * geom.stride_w + j - geom.pad_w
                            if not 0 <= xx < geom.in_w:
                                continue
                            acc += weights[m, c, k, j] * inp[c, rr, xx]
                out[m, r, x] = acc
    return out


def padded_input(inp, geom):
    """Zero-extended copy of the input, for window-extraction oracles."""
    c, h, w = inp.shape
    padded = np.zeros((c, h + 2 * geom.pad_h, w + 2 * geom.pad_w),
                      dtype=inp.dtype)
    padded[:, geom.pad_h:geom.pad_h + h, geom.pad_w:geom.pad_w + w] = inp
    return padded


def sample_geometry(rng, max_channels=4, max_hw=12, kernels=(1, 3, 5),
                    strides=(1, 2), paddings=(0, 1)):
    """Draw one valid random geometry from the classic small-test grid."""
    while True:
        kw = dict(
            in_channels=int(rng.integers(1, max_channels + 1)),
            out_channels=int(rng.integers(1, max_channels + 1)),
            in_h=int(rng.integers(4, max_hw + 1)),
            in_w=int(rng.integers(4, max_hw + 1)),
            k_h=int(rng.choice(kernels)),
            k_w=int(rng.choice(kernels)),
            stride_h=int(rng.choice(strides)),
            stride_w=int(rng.choice(strides)),
            pad_h=int(rng.choice(paddings)),
            pad_w=int(rng.choice(paddings)),
        )
        if kw["k_h"] <= kw["in_h"] + 2 * kw["pad_h"] \
                and kw["k_w"] <= kw["in_w"] + 2 * kw["pad_w"]:
            return ConvGeometry(**kw)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
