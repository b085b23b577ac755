"""Instrumented accounting of scratch memory and bulk element copies.

Every backend obtains its scratch buffers through :func:`scratch_buffer` and
reports bulk data movement through :func:`record_copy`.  While a meter is
active (``with metered() as m:``) those events are tallied per tag, which lets
tests assert exact scratch footprints (e.g. the im2col-to-slice-buffer memory
ratio) and prove that the shifting step of the slice-buffer backend moves no
data at all.  With no active meter the overhead is a single global read.
"""

import threading
from collections import Counter
from contextlib import contextmanager

import numpy as np

__all__ = ["WorkspaceMeter", "metered", "scratch_buffer", "record_copy"]

_lock = threading.Lock()
_active = None


class WorkspaceMeter:
    """Tallies of scratch allocations and bulk copies, per tag."""

    def __init__(self):
        self.alloc_elements = Counter()
        self.alloc_calls = Counter()
        self.copy_elements = Counter()
        self.copy_calls = Counter()

    def total_alloc_elements(self):
        return sum(self.alloc_elements.values())

    def total_copy_elements(self):
        return sum(self.copy_elements.values())

    def total_alloc_bytes(self, itemsize=4):
        return self.total_alloc_elements() * itemsize

    def _record_alloc(self, tag, n_elements):
        with _lock:
            self.alloc_elements[tag] += n_elements
            self.alloc_calls[tag] += 1

    def _record_copy(self, tag, n_elements):
        with _lock:
            self.copy_elements[tag] += n_elements
            self.copy_calls[tag] += 1


@contextmanager
def metered():
    """Activate a fresh meter for the duration of the block (not reentrant)."""
    global _active
    meter = WorkspaceMeter()
    with _lock:
        if _active is not None:
            raise RuntimeError("a workspace meter is already active")
        _active = meter
    try:
        yield meter
    finally:
        _active = None


def scratch_buffer(shape, tag, dtype=np.float32):
    """Allocate backend scratch, recording its size under ``tag`` if metered.

    Contents are uninitialized; callers overwrite every element.
    """
    arr = np.empty(shape, dtype=dtype)
    meter = _active
    if meter is not None:
        meter._record_alloc(tag, arr.size)
    return arr


def record_copy(tag, n_elements):
    """Record one bulk copy of ``n_elements`` under ``tag`` if metered."""
    meter = _active
    if meter is not None:
        meter._record_copy(tag, n_elements)
