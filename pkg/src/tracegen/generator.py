"""Trace synthesis from a profile: reuse-driven and popularity-driven arrivals.

The dependent process keeps every one of the m working-set items asleep in a
min-heap keyed by wake time; each emission pops the earliest sleeper, writes
its address, draws a fresh distance t from the IRD spec, and re-inserts the
item t accesses later.  A drawn distance of infinity instead emits a fresh
singleton address that never recurs.  The independent process draws items
i.i.d. from a popularity spec.  A profile mixes the two per position with
probability p_irm.

Addresses: dependent items occupy 0..m-1, singletons count up from m, and
independent arrivals live in a disjoint region offset by 2^48 so that each
process owns its reuse statistics (an overlap flag folds them together for
experiments that want contention).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from heapq import heapify, heapreplace
from typing import Optional

import numpy as np

from .distributions import IrdSpec, IrmSpec, Rng, auto_tune_tmax, sample_irds, sample_items

IRM_ADDRESS_OFFSET = 1 << 48

# per-reference source tags (service-side annotation, never serialized)
SRC_DEPENDENT = 0
SRC_INDEPENDENT = 1
SRC_SINGLETON = 2

# substream layout under a profile's root seed; fixed so that a profile with
# p_irm = 0 consumes exactly the stream gen_from_ird would
_STREAM_BRANCH = 0
_STREAM_IRD = 1
_STREAM_IRM = 2
_STREAM_DECOR = 3

_BATCH = 8192

DEFAULT_SEED = 20260214


@dataclass(frozen=True)
class SizeDist:
    """Weighted choice over request sizes in blocks."""

    weights: tuple[float, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("size distribution needs at least one value")
        if len(self.weights) != len(self.values):
            raise ValueError("one weight per size value required")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if any(int(v) != v or v < 1 for v in self.values):
            raise ValueError("sizes must be positive integers")


@dataclass(frozen=True)
class TraceProfile:
    """Everything needed to reproduce a trace.

    The mixing weight decides which distribution must be present: a pure
    popularity stream (p_irm = 1) needs g, a pure reuse stream (p_irm = 0)
    needs f, anything between needs both.
    """

    p_irm: float
    g: Optional[IrmSpec]
    f: Optional[IrdSpec]
    m: int
    n: int
    seed: int = DEFAULT_SEED
    read_fraction: Optional[float] = None
    size_dist: Optional[SizeDist] = None
    overlap_irm: bool = False

    def __post_init__(self):
        if not (0.0 <= self.p_irm <= 1.0):
            raise ValueError("p_irm must lie in [0, 1]")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be >= 1")
        if self.p_irm < 1.0 and self.f is None:
            raise ValueError("p_irm < 1 requires an IRD distribution f")
        if self.p_irm > 0.0 and self.g is None:
            raise ValueError("p_irm > 0 requires a popularity distribution g")
        if self.read_fraction is not None and not (0.0 <= self.read_fraction <= 1.0):
            raise ValueError("read_fraction must lie in [0, 1]")


@dataclass(frozen=True)
class Trace:
    """A reference stream with optional per-reference decoration.

    ``refs`` holds 64-bit item ids.  ``reads`` marks read requests (True)
    versus writes, ``sizes`` holds block counts; both default to None for
    bare traces.  ``sources`` tags each position with the emitting process
    (dependent / independent / singleton) and exists only in memory.
    """

    refs: np.ndarray
    reads: Optional[np.ndarray] = None
    sizes: Optional[np.ndarray] = None
    sources: Optional[np.ndarray] = None

    def __post_init__(self):
        refs = np.ascontiguousarray(self.refs, dtype=np.uint64)
        refs.setflags(write=False)
        object.__setattr__(self, "refs", refs)
        for name in ("reads", "sizes", "sources"):
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.asarray(arr)
            if arr.shape != refs.shape:
                raise ValueError(f"{name} must parallel refs")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return int(self.refs.size)

    def block_refs(self) -> np.ndarray:
        """Per-block reference stream: multi-block requests touch consecutive ids."""
        if self.sizes is None:
            return self.refs
        sizes = self.sizes.astype(np.int64)
        total = int(sizes.sum())
        out = np.repeat(self.refs, sizes)
        starts = np.concatenate(([0], np.cumsum(sizes[:-1])))
        out += (np.arange(total) - np.repeat(starts, sizes)).astype(np.uint64)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented

        def same(a, b):
            if a is None or b is None:
                return a is None and b is None
            return np.array_equal(a, b)

        return (
            np.array_equal(self.refs, other.refs)
            and same(self.reads, other.reads)
            and same(self.sizes, other.sizes)
        )


def _tuned(f: IrdSpec, m: int) -> IrdSpec:
    return f if f.tuned else auto_tune_tmax(f, m)


def _init_sleepers(f: IrdSpec, m: int, ird_rng: Rng):
    """Fill the heap with m finite sleepers; return leftover buffered draws.

    Infinite initial draws are skipped without consuming an address, so the
    loop runs until m finite wake times have been drawn (expected
    m / (1 - p_infinite) draws).
    """
    if f.p_infinite >= 1.0:
        raise ValueError("cannot seed a working set from a distribution that is all singletons")
    heap: list[tuple[float, int, int]] = []
    tie = 0
    buf = sample_irds(f, ird_rng, _BATCH)
    pos = 0
    while tie < m:
        if pos == len(buf):
            buf = sample_irds(f, ird_rng, _BATCH)
            pos = 0
        t = buf[pos]
        pos += 1
        if t == np.inf:
            continue
        heap.append((float(t), tie, tie))  # wake, insertion tie-break, address
        tie += 1
    heapify(heap)
    return heap, tie, buf, pos


def gen_from_ird(f: IrdSpec, m: int, n: int, rng: Rng) -> Trace:
    """Generate n references whose reuse distances follow f over m items.

    If f has no sample space yet it is auto-tuned for m.  Each position
    draws t ~ f: finite t wakes the earliest sleeper, emits it, and puts it
    back t accesses later; infinite t emits a fresh singleton id (counting
    up from m).  Wake times are cumulative, so realized distances track the
    drawn ones only in distribution, not pointwise.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    f = _tuned(f, m)
    ird_rng = rng.child(_STREAM_IRD)
    heap, tie, buf, pos = _init_sleepers(f, m, ird_rng)

    refs = np.empty(n, dtype=np.uint64)
    sources = np.zeros(n, dtype=np.uint8)
    singleton = m
    buf_len = len(buf)
    for j in range(n):
        if pos == buf_len:
            buf = sample_irds(f, ird_rng, _BATCH)
            buf_len = len(buf)
            pos = 0
        t = buf[pos]
        pos += 1
        if t == np.inf:
            refs[j] = singleton
            sources[j] = SRC_SINGLETON
            singleton += 1
        else:
            wake, _, addr = heap[0]
            refs[j] = addr
            heapreplace(heap, (wake + t, tie, addr))
            tie += 1
    return Trace(refs=refs, sources=sources)


def gen_from_2d(profile: TraceProfile) -> Trace:
    """Generate a trace by mixing popularity and reuse arrivals per position.

    p_irm = 0 reduces to gen_from_ird bit for bit (same seed, same trace);
    p_irm = 1 is a pure i.i.d. popularity stream.  Decoration from the
    profile (read fraction, size distribution) is applied before returning.
    """
    root = Rng(profile.seed)
    p = profile.p_irm

    if p == 0.0:
        trace = gen_from_ird(profile.f, profile.m, profile.n, root)
    elif p == 1.0:
        items = sample_items(profile.g, root.child(_STREAM_IRM), profile.n)
        refs = items.astype(np.uint64)
        if not profile.overlap_irm:
            refs += np.uint64(IRM_ADDRESS_OFFSET)
        trace = Trace(refs=refs, sources=np.full(profile.n, SRC_INDEPENDENT, np.uint8))
    else:
        trace = _gen_mixed(profile, root)

    if profile.read_fraction is not None or profile.size_dist is not None:
        trace = decorate(
            trace, profile.read_fraction, profile.size_dist, root.child(_STREAM_DECOR)
        )
    return trace


def _gen_mixed(profile: TraceProfile, root: Rng) -> Trace:
    f = _tuned(profile.f, profile.m)
    m, n, p = profile.m, profile.n, profile.p_irm
    branch_rng = root.child(_STREAM_BRANCH)
    ird_rng = root.child(_STREAM_IRD)
    irm_rng = root.child(_STREAM_IRM)
    irm_offset = 0 if profile.overlap_irm else IRM_ADDRESS_OFFSET

    heap, tie, ird_buf, ird_pos = _init_sleepers(f, m, ird_rng)
    ird_len = len(ird_buf)

    refs = np.empty(n, dtype=np.uint64)
    sources = np.zeros(n, dtype=np.uint8)
    singleton = m
    branch_buf = branch_rng.random(_BATCH)
    branch_pos = 0
    irm_buf = sample_items(profile.g, irm_rng, _BATCH)
    irm_pos = 0
    for j in range(n):
        if branch_pos == _BATCH:
            branch_buf = branch_rng.random(_BATCH)
            branch_pos = 0
        take_irm = branch_buf[branch_pos] < p
        branch_pos += 1
        if take_irm:
            if irm_pos == _BATCH:
                irm_buf = sample_items(profile.g, irm_rng, _BATCH)
                irm_pos = 0
            refs[j] = irm_offset + irm_buf[irm_pos]
            irm_pos += 1
            sources[j] = SRC_INDEPENDENT
        else:
            if ird_pos == ird_len:
                ird_buf = sample_irds(f, ird_rng, _BATCH)
                ird_len = len(ird_buf)
                ird_pos = 0
            t = ird_buf[ird_pos]
            ird_pos += 1
            if t == np.inf:
                refs[j] = singleton
                sources[j] = SRC_SINGLETON
                singleton += 1
            else:
                wake, _, addr = heap[0]
                refs[j] = addr
                heapreplace(heap, (wake + t, tie, addr))
                tie += 1
    return Trace(refs=refs, sources=sources)


def decorate(
    trace: Trace,
    read_fraction: Optional[float],
    size_dist: Optional[SizeDist],
    rng: Rng,
) -> Trace:
    """Attach op and size decoration to a trace, returning a new one.

    Reads are Bernoulli(read_fraction); sizes are weighted choices from
    size_dist.  A None for either leaves that decoration absent.
    """
    n = len(trace)
    reads = trace.reads
    sizes = trace.sizes
    if read_fraction is not None:
        if not (0.0 <= read_fraction <= 1.0):
            raise ValueError("read_fraction must lie in [0, 1]")
        reads = rng.random(n) < read_fraction
    if size_dist is not None:
        weights = np.asarray(size_dist.weights, dtype=np.float64)
        cum = np.cumsum(weights / weights.sum())
        choice = np.searchsorted(cum, rng.random(n), side="right")
        choice = np.minimum(choice, len(size_dist.values) - 1)
        sizes = np.asarray(size_dist.values, dtype=np.int64)[choice]
    return replace(trace, reads=reads, sizes=sizes)
