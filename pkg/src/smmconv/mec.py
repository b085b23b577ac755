"""Memory-efficient lowered convolution baseline (stride 1 only).

Instead of copying every receptive field like im2col, this lowering copies
each k_w-wide vertical strip of a channel exactly once: slab x holds the
padded strip I[c, :, x : x+k_w] flattened row-major, for x in [0, out_w).
Overlapping output windows then live in overlapping column ranges of the
lowered matrix, so each output row r is one small matrix multiply against the
shifted column window [r*k_w, r*k_w + k_h*k_w) -- no further packing.

We lower along the output-width axis and batch one channel at a time into a
single reused buffer of out_w x (padded_h * k_w) values, which is what the
memory accounting reports.  This backend exists as a correctness-true,
memory-shape-true comparator; it is not a tuned reproduction of any
particular implementation.
"""

import numpy as np
from numba import njit

from .errors import BackendUnsupportedError
from .validation import check_input, check_weights
from .workspace import record_copy, scratch_buffer

__all__ = ["mec_pack", "conv_mec", "mec_supported", "mec_workspace_elements"]


@njit(cache=True, nogil=True)
def _mec_pack_kernel(inp, lowered, c, k_w, pad_h, pad_w):
    in_h = inp.shape[1]
    in_w = inp.shape[2]
    n_slabs = lowered.shape[0]
    h_pad = in_h + 2 * pad_h
    for x in range(n_slabs):
        for rr in range(h_pad):
            src_r = rr - pad_h
            base = rr * k_w
            for jj in range(k_w):
                src_c = x + jj - pad_w
                if 0 <= src_r < in_h and 0 <= src_c < in_w:
                    lowered[x, base + jj] = inp[c, src_r, src_c]
                else:
                    lowered[x, base + jj] = 0.0


@njit(cache=True, nogil=True, fastmath=True)
def _mec_accumulate(lowered, w_mat, out, k_h, k_w):
    out_channels, out_h, out_w = out.shape
    k_total = k_h * k_w
    for r in range(out_h):
        off = r * k_w
        for m in range(out_channels):
            for x in range(out_w):
                acc = np.float32(0.0)
                for u in range(k_total):
                    acc += w_mat[m, u] * lowered[x, off + u]
                out[m, r, x] += acc


def mec_supported(geom):
    """This backend handles stride 1 only (padding is fine)."""
    return geom.stride_h == 1 and geom.stride_w == 1


def _require_supported(geom):
    if not mec_supported(geom):
        raise BackendUnsupportedError(
            f"mec backend requires stride 1, got "
            f"{geom.stride_h}x{geom.stride_w}")


def mec_workspace_elements(geom):
    """Scratch elements of the reused per-channel lowered buffer."""
    return geom.out_w * geom.padded_h * geom.k_w


def mec_pack(inp, geom, c):
    """Lower one input channel into its out_w x (padded_h*k_w) strip matrix."""
    check_input(inp, geom)
    _require_supported(geom)
    if not 0 <= c < geom.in_channels:
        raise IndexError(f"channel {c} out of range [0, {geom.in_channels})")
    lowered = scratch_buffer((geom.out_w, geom.padded_h * geom.k_w),
                             tag="mec_lowered")
    _mec_pack_kernel(inp, lowered, c, geom.k_w, geom.pad_h, geom.pad_w)
    record_copy("mec_pack", lowered.size)
    return lowered


def conv_mec(inp, weights, geom):
    """Convolution via strip lowering and per-output-row small multiplies."""
    check_input(inp, geom)
    check_weights(weights, geom)
    _require_supported(geom)
    out = np.zeros(geom.output_shape, dtype=np.float32)
    lowered = scratch_buffer((geom.out_w, geom.padded_h * geom.k_w),
                             tag="mec_lowered")
    k_flat = geom.k_h * geom.k_w
    for c in range(geom.in_channels):
        _mec_pack_kernel(inp, lowered, c, geom.k_w, geom.pad_h, geom.pad_w)
        record_copy("mec_pack", lowered.size)
        w_mat = weights[:, c].reshape(geom.out_channels, k_flat)
        _mec_accumulate(lowered, w_mat, out, geom.k_h, geom.k_w)
    return out
