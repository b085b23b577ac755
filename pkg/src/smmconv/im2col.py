"""Convolution by window packing plus one large matrix multiply.

Every receptive field of the input is copied into one column of a lowered
matrix with c_i*k_h*k_w rows and out_h*out_w columns (duplicating overlapping
pixels, zero-filling padded positions), after which the convolution is a
single GEMM with the weight tensor viewed as an (out_channels x
c_i*k_h*k_w) matrix.  Column t corresponds to output position
(t // out_w, t % out_w), so reshaping the product back to the output tensor
is free.
"""

import numpy as np
from numba import njit

from .gemm import gemm
from .validation import check_input, check_weights
from .workspace import record_copy, scratch_buffer

__all__ = ["im2col_pack", "conv_im2col", "im2col_workspace_elements"]


@njit(cache=True, nogil=True)
def _im2col_kernel(inp, lowered, k_h, k_w, stride_h, stride_w, pad_h, pad_w,
                   out_h, out_w):
    in_channels, in_h, in_w = inp.shape
    for c in range(in_channels):
        for k in range(k_h):
            for j in range(k_w):
                row = (c * k_h + k) * k_w + j
                for r in range(out_h):
                    rr = r * stride_h + k - pad_h
                    base = r * out_w
                    if rr < 0 or rr >= in_h:
                        for x in range(out_w):
                            lowered[row, base + x] = 0.0
                        continue
                    for x in range(out_w):
                        xx = x * stride_w + j - pad_w
                        if xx < 0 or xx >= in_w:
                            lowered[row, base + x] = 0.0
                        else:
                            lowered[row, base + x] = inp[c, rr, xx]


def im2col_workspace_elements(geom):
    """Scratch elements the lowered matrix occupies."""
    return (geom.in_channels * geom.k_h * geom.k_w) * (geom.out_h * geom.out_w)


def im2col_pack(inp, geom):
    """Pack ``inp`` into the lowered (c_i*k_h*k_w) x (out_h*out_w) matrix."""
    check_input(inp, geom)
    rows = geom.in_channels * geom.k_h * geom.k_w
    cols = geom.out_h * geom.out_w
    lowered = scratch_buffer((rows, cols), tag="im2col_lowered")
    _im2col_kernel(inp, lowered, geom.k_h, geom.k_w, geom.stride_h,
                   geom.stride_w, geom.pad_h, geom.pad_w, geom.out_h,
                   geom.out_w)
    record_copy("im2col_pack", rows * cols)
    return lowered


def conv_im2col(inp, weights, geom, use_blas=False):
    """Convolution via im2col packing and a single GEMM."""
    check_weights(weights, geom)
    lowered = im2col_pack(inp, geom)
    w_mat = weights.reshape(geom.out_channels, -1)  # layout match, no copy
    out = np.empty(geom.output_shape, dtype=np.float32)
    gemm(w_mat, lowered, out=out.reshape(geom.out_channels, -1),
         use_blas=use_blas)
    return out
