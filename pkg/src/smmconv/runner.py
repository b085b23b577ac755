"""Benchmark execution: timing, checksums and scratch verification.

For every (layer, backend) pair the runner fills deterministic inputs, does
one metered warmup run (verifying the backend's scratch allocation against
its accounting formula), then times ``repeats`` runs and reports the median.
Checksums (plain float64 sum of the output) must agree across backends within
1e-3 relative before any timing is trusted; disagreement is a hard error.
Timed regions cover packing/extraction plus arithmetic; weight repacking for
the slice-buffer backend happens before timing, mirroring inference where
weights are preprocessed once.
"""

import os
import statistics
import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from numba import config as numba_config, set_num_threads

from .errors import ChecksumMismatchError, SmmConvError
from .im2col import conv_im2col, im2col_workspace_elements
from .mec import conv_mec, mec_supported, mec_workspace_elements
from .reference import conv_ref
from .smm import (repack_weights, smm_conv_parallel, smm_conv_single,
                  smm_workspace_elements)
from .tensors import random_tensor
from .workspace import metered

__all__ = ["BenchRecord", "run_bench", "BACKEND_ORDER", "default_threads"]

BACKEND_ORDER = ("ref", "im2col", "mec", "smm")

FLOAT_BYTES = 4
_CHECKSUM_RTOL = 1e-3


@dataclass(frozen=True)
class BenchRecord:
    """One benchmark measurement (or an explicit 'unsupported' marker)."""
    layer: str
    backend: str
    threads: int
    repeats: int
    median_time_s: Optional[float]
    scratch_bytes: int
    speedup_vs_im2col: Optional[float]
    checksum: Optional[float]

    @property
    def unsupported(self):
        return self.median_time_s is None


def default_threads():
    """Core count detected at startup; the harness-wide default."""
    return os.cpu_count() or 1


def _apply_numba_threads(threads):
    set_num_threads(max(1, min(threads, numba_config.NUMBA_NUM_THREADS)))


def _backend_plan(backend, geom, weights, weights_smm, threads, use_blas):
    """Returns (supported, runner, scratch_elements) for one pair."""
    if backend == "ref":
        return True, (lambda inp: conv_ref(inp, weights, geom)), 0
    if backend == "im2col":
        return True, (lambda inp: conv_im2col(inp, weights, geom,
                                              use_blas=use_blas)), \
            im2col_workspace_elements(geom)
    if backend == "mec":
        if not mec_supported(geom):
            return False, None, 0
        return True, (lambda inp: conv_mec(inp, weights, geom)), \
            mec_workspace_elements(geom)
    if backend == "smm":
        if threads > 1:
            return True, (lambda inp: smm_conv_parallel(inp, weights_smm,
                                                        geom, threads)), \
                smm_workspace_elements(geom, threads)
        return True, (lambda inp: smm_conv_single(inp, weights_smm, geom)), \
            smm_workspace_elements(geom, 1)
    raise ValueError(f"unknown backend {backend!r}; "
                     f"available: {', '.join(BACKEND_ORDER)}")


def _checksum(out):
    return float(np.sum(out, dtype=np.float64))


def _rel_diff(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-12)


def run_bench(specs, backends, repeats=5, threads=None, seed=0,
              use_blas=False):
    """Benchmark every backend on every layer spec.

    Returns one BenchRecord per (spec, backend), in that nesting order.
    """
    if repeats < 3:
        raise ValueError("repeats must be >= 3")
    for backend in backends:
        if backend not in BACKEND_ORDER:
            raise ValueError(f"unknown backend {backend!r}; "
                             f"available: {', '.join(BACKEND_ORDER)}")
    if threads is None:
        threads = default_threads()
    if threads < 1:
        raise ValueError("threads must be >= 1")
    _apply_numba_threads(threads)

    records = []
    for spec in specs:
        geom = spec.geometry
        inp = random_tensor(geom.input_shape, seed)
        weights = random_tensor(geom.weights_shape, seed + 1)
        weights_smm = repack_weights(weights, geom) if "smm" in backends \
            else None

        spec_records = []
        checksums = {}
        for backend in backends:
            supported, runner, scratch_elements = _backend_plan(
                backend, geom, weights, weights_smm, threads, use_blas)
            if not supported:
                spec_records.append(BenchRecord(
                    layer=spec.name, backend=backend, threads=threads,
                    repeats=repeats, median_time_s=None, scratch_bytes=0,
                    speedup_vs_im2col=None, checksum=None))
                continue
            with metered() as meter:
                out = runner(inp)
            if meter.total_alloc_elements() != scratch_elements:
                raise SmmConvError(
                    f"scratch accounting mismatch for {backend} on "
                    f"{spec.name}: counted {meter.total_alloc_elements()} "
                    f"elements, formula says {scratch_elements}")
            times = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                out = runner(inp)
                t1 = time.perf_counter()
                times.append(t1 - t0)
            checksums[backend] = _checksum(out)
            spec_records.append(BenchRecord(
                layer=spec.name, backend=backend, threads=threads,
                repeats=repeats, median_time_s=statistics.median(times),
                scratch_bytes=scratch_elements * FLOAT_BYTES,
                speedup_vs_im2col=None, checksum=checksums[backend]))

        if len(checksums) > 1:
            ordered = list(checksums)
            base = ordered[0]
            for other in ordered[1:]:
                if _rel_diff(checksums[base], checksums[other]) > _CHECKSUM_RTOL:
                    raise ChecksumMismatchError(
                        f"checksum divergence on layer {spec.name!r}: "
                        f"{base}={checksums[base]!r} vs "
                        f"{other}={checksums[other]!r}")
        im2col_median = next(
            (r.median_time_s for r in spec_records
             if r.backend == "im2col" and not r.unsupported), None)
        for record in spec_records:
            if im2col_median is not None and not record.unsupported:
                record = replace(
                    record,
                    speedup_vs_im2col=im2col_median / record.median_time_s)
            records.append(record)
    return records
