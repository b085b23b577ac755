"""Convolution as scalar-matrix multiply-accumulate over a reused slice buffer.

The 2-D convolution of one input channel with one kernel is a sum of k_h*k_w
scaled, shifted windows of the input.  This backend exploits that directly:

* For input channel c and kernel column j, the slice buffer receives the
  padded_h x out_w sub-matrix whose column t holds input column
  j + t*stride_w (zero where padding applies).  This is the only copy of
  input data the backend ever makes, and the same buffer is reused for every
  (c, j) pair.
* "Shifting" selects the out_h x out_w window of the buffer that starts at
  row k, one per kernel row.  It is pure view arithmetic: no element moves.
* Every arithmetic step is then ``dst += alpha * src`` over such a window --
  a scalar-matrix fused multiply-accumulate whose inner loop walks contiguous
  memory.  For each shift, one such update per output channel accumulates the
  weight at (c, j, k) into that channel.

Weights are repacked once per layer into (in_ch, k_w, k_h, out_ch) order so
the innermost loops read them contiguously.

The parallel driver processes (c, j) pairs in groups of d threads: each
thread fills its own slice buffer (phase 1), a barrier separates writes from
reads, then every thread walks all freshly filled buffers in global pair
order, updating only its own block of output channels (phase 2).  Because
each output element sees the identical update sequence and the identical
per-element arithmetic, the parallel result is bitwise equal to the
single-threaded one for any thread count.

Arithmetic kernels here are compiled without fastmath: fused-multiply-add
contraction or reassociation would break the bitwise-reproducibility
contract between the fused, unfused and parallel paths.
"""

import threading
import time

import numpy as np
from numba import njit

from .errors import ShapeMismatchError
from .validation import check_input, check_weights, check_weights_smm
from .workspace import record_copy, scratch_buffer

__all__ = [
    "repack_weights",
    "unpack_weights",
    "extract_slice",
    "shifted_view",
    "scalar_matrix_fma",
    "smm_conv_single",
    "smm_conv_parallel",
    "smm_workspace_elements",
]


@njit(cache=True, nogil=True)
def _extract_kernel(inp, buf, c, j, stride_w, pad_h, pad_w):
    in_h = inp.shape[1]
    in_w = inp.shape[2]
    h_pad = buf.shape[0]
    w_out = buf.shape[1]
    for rr in range(h_pad):
        src_r = rr - pad_h
        if src_r < 0 or src_r >= in_h:
            for t in range(w_out):
                buf[rr, t] = 0.0
            continue
        for t in range(w_out):
            src_c = j + t * stride_w - pad_w
            if src_c < 0 or src_c >= in_w:
                buf[rr, t] = 0.0
            else:
                buf[rr, t] = inp[c, src_r, src_c]


@njit(cache=True, nogil=True)
def _fma_kernel(alpha, src, dst):
    rows, cols = dst.shape
    for r in range(rows):
        for t in range(cols):
            dst[r, t] += alpha * src[r, t]


@njit(cache=True, nogil=True)
def _fma_channel_range(buf, w_kj, out, m0, m1, out_h, stride_h):
    # w_kj is the (k_h, out_channels) weight slice for one (c, j) pair.
    # Every update is exactly one multiply and one add (no fastmath, so no
    # fma contraction or reassociation), and for any fixed output element the
    # kernel rows k are applied in ascending order; both properties together
    # make every loop arrangement here produce bitwise-identical results.
    k_h = w_kj.shape[0]
    w_out = buf.shape[1]
    if stride_h == 1:
        # The shifted window starting at row k is one contiguous run of
        # out_h*w_out floats of the buffer: stream it with one flat loop,
        # keeping the window hot across the whole channel sweep.
        flat = buf.reshape(buf.size)
        out2 = out.reshape(out.shape[0], out_h * w_out)
        n = out_h * w_out
        for k in range(k_h):
            base = k * w_out
            for m in range(m0, m1):
                alpha = w_kj[k, m]
                dst = out2[m]
                for i in range(n):
                    dst[i] += alpha * flat[base + i]
    else:
        for k in range(k_h):
            for m in range(m0, m1):
                alpha = w_kj[k, m]
                for r in range(out_h):
                    rr = k + r * stride_h
                    for t in range(w_out):
                        out[m, r, t] += alpha * buf[rr, t]


@njit(cache=True, nogil=True)
def _fma_group(bufs, pairs, g0, g1, weights, out, m0, m1, out_h, stride_h):
    # Phase 2 of one group: all freshly filled buffers in global pair order,
    # restricted to one worker's channel block.
    for idx in range(g0, g1):
        _fma_channel_range(bufs[idx - g0],
                           weights[pairs[idx, 0], pairs[idx, 1]],
                           out, m0, m1, out_h, stride_h)


class _SpinBarrier:
    """Sense-reversing barrier that spins with sched-yield while waiting.

    Orders of magnitude cheaper than threading.Barrier for the short,
    kernel-bounded phases here, where stock barrier wakeups would dominate
    small layers.  Attribute reads/writes are GIL-synchronized, so flipping
    ``sense`` safely releases the spinners.
    """

    __slots__ = ("parties", "_count", "_sense", "_lock", "broken")

    def __init__(self, parties):
        self.parties = parties
        self._count = 0
        self._sense = False
        self._lock = threading.Lock()
        self.broken = False

    def wait(self):
        if self.broken:
            raise threading.BrokenBarrierError
        sense = self._sense
        with self._lock:
            self._count += 1
            if self._count == self.parties:
                self._count = 0
                self._sense = not sense
                return
        while self._sense == sense:
            if self.broken:
                raise threading.BrokenBarrierError
            time.sleep(0)

    def abort(self):
        self.broken = True


def repack_weights(weights, geom):
    """Reorder (out_ch, in_ch, k_h, k_w) weights to (in_ch, k_w, k_h, out_ch)."""
    check_weights(weights, geom)
    return np.ascontiguousarray(weights.transpose(1, 3, 2, 0))


def unpack_weights(weights_smm, geom):
    """Inverse of repack_weights."""
    check_weights_smm(weights_smm, geom)
    return np.ascontiguousarray(weights_smm.transpose(3, 0, 2, 1))


def smm_workspace_elements(geom, threads=1):
    """Scratch elements for a run with ``threads`` slice buffers."""
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads * geom.padded_h * geom.out_w


def _extract_into(inp, geom, c, j, buf):
    # Hot path shared by the drivers: arguments already validated.
    _extract_kernel(inp, buf, c, j, geom.stride_w, geom.pad_h, geom.pad_w)
    record_copy("slice_extract", buf.size)
    return buf


def extract_slice(inp, geom, c, j, buf):
    """Fill ``buf`` with the padded slice for channel c, kernel column j.

    After the call, buf[r, t] equals the padded input at row r, column
    j + t*stride_w of channel c (zero where the coordinate falls in padding).
    """
    if not 0 <= c < geom.in_channels:
        raise IndexError(f"channel {c} out of range [0, {geom.in_channels})")
    if not 0 <= j < geom.k_w:
        raise IndexError(f"kernel column {j} out of range [0, {geom.k_w})")
    if buf.shape != (geom.padded_h, geom.out_w) or buf.dtype != np.float32:
        raise ShapeMismatchError(
            f"slice buffer must be float32 {(geom.padded_h, geom.out_w)}")
    return _extract_into(inp, geom, c, j, buf)


def shifted_view(buf, k, geom):
    """The out_h x out_w window of the slice buffer starting at row k.

    A strided view into ``buf``; no data is copied or moved.
    """
    if not 0 <= k < geom.k_h:
        raise IndexError(f"kernel row {k} out of range [0, {geom.k_h})")
    stop = k + geom.out_h * geom.stride_h
    return buf[k:stop:geom.stride_h, :]


def scalar_matrix_fma(alpha, src, dst):
    """dst += alpha * src, elementwise over equal-shaped 2-D views."""
    if src.shape != dst.shape or src.ndim != 2:
        raise ShapeMismatchError(
            f"fma views must be equal-shaped 2-D: {src.shape} vs {dst.shape}")
    _fma_kernel(np.float32(alpha), src, dst)
    return dst


def smm_conv_single(inp, weights_smm, geom, fused=True):
    """Single-threaded slice-buffer convolution.

    One padded_h x out_w slice buffer serves the whole call.  With
    ``fused=False`` the k/m loops issue one scalar_matrix_fma call per
    (kernel row, output channel) pair instead of running inside one compiled
    kernel; the result is bitwise identical, only the call overhead differs.
    """
    check_input(inp, geom)
    check_weights_smm(weights_smm, geom)
    out = np.zeros(geom.output_shape, dtype=np.float32)
    buf = scratch_buffer((geom.padded_h, geom.out_w), tag="smm_slice_buffer")
    for c in range(geom.in_channels):
        for j in range(geom.k_w):
            _extract_into(inp, geom, c, j, buf)
            if fused:
                _fma_channel_range(buf, weights_smm[c, j], out, 0,
                                   geom.out_channels, geom.out_h,
                                   geom.stride_h)
            else:
                for k in range(geom.k_h):
                    view = shifted_view(buf, k, geom)
                    for m in range(geom.out_channels):
                        scalar_matrix_fma(weights_smm[c, j, k, m], view,
                                          out[m])
    return out


def smm_conv_parallel(inp, weights_smm, geom, threads):
    """Phase-parallel slice-buffer convolution over ``threads`` workers.

    Bitwise identical to smm_conv_single for every thread count.  Worker n
    owns slice buffer n and the contiguous output-channel block
    [n*ceil(out_ch/threads), ...); when threads does not divide the (c, j)
    pair count the final group simply runs part-filled.
    """
    check_input(inp, geom)
    check_weights_smm(weights_smm, geom)
    if threads < 1:
        raise ValueError("threads must be >= 1")
    d = threads
    out = np.zeros(geom.output_shape, dtype=np.float32)
    bufs = scratch_buffer((d, geom.padded_h, geom.out_w),
                          tag="smm_slice_buffer")
    pairs = np.array([(c, j) for c in range(geom.in_channels)
                      for j in range(geom.k_w)], dtype=np.int64)
    n_pairs = len(pairs)
    chunk = -(-geom.out_channels // d)
    barrier = _SpinBarrier(d)
    failures = []

    def worker(n):
        m0 = min(n * chunk, geom.out_channels)
        m1 = min(m0 + chunk, geom.out_channels)
        my_buf = bufs[n]
        try:
            for g0 in range(0, n_pairs, d):
                g1 = min(g0 + d, n_pairs)
                if g0 + n < g1:
                    _extract_into(inp, geom, int(pairs[g0 + n, 0]),
                                  int(pairs[g0 + n, 1]), my_buf)
                barrier.wait()  # phase 1 writes before phase 2 reads
                if m1 > m0:
                    _fma_group(bufs, pairs, g0, g1, weights_smm, out, m0, m1,
                               geom.out_h, geom.stride_h)
                barrier.wait()  # phase 2 reads before the next refill
        except threading.BrokenBarrierError:
            pass
        except BaseException as exc:  # propagate to the caller, unblock peers
            failures.append(exc)
            barrier.abort()

    workers = [threading.Thread(target=worker, args=(n,), daemon=True)
               for n in range(d)]
    for t in workers:
        t.start()
    for t in workers:
        t.join()
    if failures:
        raise failures[0]
    return out
