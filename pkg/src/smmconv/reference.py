"""Naive direct convolution, the correctness oracle for every other backend.

Cross-correlation semantics (no kernel flip), zero padding, single threaded.
The accumulation order per output element is fixed: input channel outermost,
then kernel row, then kernel column.  Other backends are compared against this
either bitwise (when they share the order) or within a small relative
tolerance (when they do not).
"""

import numpy as np
from numba import njit

from .validation import check_input, check_weights

__all__ = ["conv_ref"]


@njit(cache=True, nogil=True)
def _conv_ref_kernel(inp, weights, out, stride_h, stride_w, pad_h, pad_w):
    out_channels, out_h, out_w = out.shape
    in_channels, in_h, in_w = inp.shape
    k_h = weights.shape[2]
    k_w = weights.shape[3]
    for m in range(out_channels):
        for r in range(out_h):
            for x in range(out_w):
                acc = np.float32(0.0)
                for c in range(in_channels):
                    for k in range(k_h):
                        rr = r * stride_h + k - pad_h
                        if rr < 0 or rr >= in_h:
                            continue
                        for j in range(k_w):
                            xx = x * stride_w + j - pad_w
                            if xx < 0 or xx >= in_w:
                                continue
                            acc += weights[m, c, k, j] * inp[c, rr, xx]
                out[m, r, x] = acc


def conv_ref(inp, weights, geom):
    """Direct convolution of ``inp`` with ``weights`` under ``geom``.

    Returns a freshly allocated (out_channels, out_h, out_w) float32 tensor.
    """
    check_input(inp, geom)
    check_weights(weights, geom)
    out = np.empty(geom.output_shape, dtype=np.float32)
    _conv_ref_kernel(inp, weights, out, geom.stride_h, geom.stride_w,
                     geom.pad_h, geom.pad_w)
    return out
