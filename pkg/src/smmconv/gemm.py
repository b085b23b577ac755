"""Portable blocked matrix multiply used by the im2col backend.

The kernel tiles all three loop dimensions so the hot data stays cache
resident: for each row block and K panel, a scalar of A is broadcast against a
contiguous row segment of B and accumulated into the matching segment of C.
The innermost loop is therefore a unit-stride multiply-accumulate that the
compiler vectorizes.  Row blocks are independent, so the kernel threads over
them; results do not depend on the thread count.

An optional hook (``use_blas=True``) routes the same signature to the
platform BLAS behind numpy instead, for benchmarking against a vendor
library.  Library code and tests use the in-repo kernel.
"""

import numpy as np
from numba import njit, prange

from .errors import ShapeMismatchError
from .validation import check_matrix

__all__ = ["gemm", "gemm_naive"]

_ROW_BLOCK = 48
_COL_BLOCK = 512
_K_BLOCK = 128


@njit(cache=True, parallel=True, fastmath=True)
def _gemm_blocked(a, b, c):
    m, kdim = a.shape
    n = b.shape[1]
    n_row_blocks = (m + _ROW_BLOCK - 1) // _ROW_BLOCK
    for rb in prange(n_row_blocks):
        i0 = rb * _ROW_BLOCK
        i1 = min(i0 + _ROW_BLOCK, m)
        for p0 in range(0, kdim, _K_BLOCK):
            p1 = min(p0 + _K_BLOCK, kdim)
            for j0 in range(0, n, _COL_BLOCK):
                j1 = min(j0 + _COL_BLOCK, n)
                for i in range(i0, i1):
                    for p in range(p0, p1):
                        a_ip = a[i, p]
                        for j in range(j0, j1):
                            c[i, j] += a_ip * b[p, j]


@njit(cache=True)
def _gemm_naive(a, b, c):
    m, kdim = a.shape
    n = b.shape[1]
    for i in range(m):
        for j in range(n):
            acc = np.float32(0.0)
            for p in range(kdim):
                acc += a[i, p] * b[p, j]
            c[i, j] = acc


def _check_dims(a, b, out):
    check_matrix(a, "a")
    check_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatchError(
            f"inner dimensions disagree: {a.shape} x {b.shape}")
    shape = (a.shape[0], b.shape[1])
    if out is None:
        out = np.empty(shape, dtype=np.float32)
    elif out.shape != shape or out.dtype != np.float32:
        raise ShapeMismatchError(f"out must be float32 with shape {shape}")
    return out


def gemm(a, b, out=None, use_blas=False):
    """C = A @ B for float32 matrices; writes into ``out`` when given."""
    out = _check_dims(a, b, out)
    if use_blas:
        np.matmul(a, b, out=out)
    else:
        out[:] = 0.0
        _gemm_blocked(a, b, out)
    return out


def gemm_naive(a, b, out=None):
    """Triple-loop reference multiply (the oracle gemm is tested against)."""
    out = _check_dims(a, b, out)
    _gemm_naive(a, b, out)
    return out
