"""Cache simulation and hit-ratio curves.

``simulate`` replays a trace against LRU, FIFO, CLOCK, or LFU at one cache
size; ``exact_lru_hrc`` computes the whole LRU curve in a single pass by
counting stack distances with a Fenwick tree.  Decorated multi-block
requests are expanded block-wise first (a request of s blocks at address a
touches a..a+s-1), so hit ratios are always block-granularity.

Stack distances here include the re-referenced item's own slot: a reference
hits an LRU cache of size C exactly when at most C distinct items (itself
included) were touched since its previous occurrence.  All caches start
cold; first touches are always misses.
"""

from __future__ import annotations

import heapq
from collections import OrderedDict, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .generator import Trace

POLICIES = ("lru", "fifo", "clock", "lfu")


@dataclass(frozen=True)
class HitRatioCurve:
    """Hit ratio as a step function of cache size, for one policy.

    ``sizes`` are the step knots (strictly increasing); the curve holds the
    value ``hit_ratios[i]`` on [sizes[i], sizes[i+1]) and 0 below sizes[0].
    ``footprint`` and ``length`` describe the source trace so sizes can be
    normalized for comparison across scales.
    """

    policy: str
    sizes: np.ndarray
    hit_ratios: np.ndarray
    footprint: int
    length: int

    def __post_init__(self):
        sizes = np.asarray(self.sizes, dtype=np.float64)
        ratios = np.asarray(self.hit_ratios, dtype=np.float64)
        if sizes.size == 0 or sizes.shape != ratios.shape:
            raise ValueError("curve needs matching, non-empty sizes and ratios")
        if np.any(np.diff(sizes) <= 0):
            raise ValueError("cache sizes must be strictly increasing")
        if np.any((ratios < 0) | (ratios > 1)):
            raise ValueError("hit ratios must lie in [0, 1]")
        sizes.setflags(write=False)
        ratios.setflags(write=False)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "hit_ratios", ratios)

    @property
    def normalized_sizes(self) -> np.ndarray:
        if self.footprint <= 0:
            return self.sizes
        return self.sizes / float(self.footprint)

    def hit_ratio_at(self, cache_size: float) -> float:
        """Step-function evaluation; 0 below the first knot."""
        idx = int(np.searchsorted(self.sizes, cache_size, side="right")) - 1
        if idx < 0:
            return 0.0
        return float(self.hit_ratios[idx])


def measure_footprint(trace: Trace) -> tuple[int, int]:
    """Distinct block count and block-reference length of a trace."""
    refs = trace.block_refs()
    if refs.size == 0:
        return 0, 0
    return int(np.unique(refs).size), int(refs.size)


def simulate(trace: Trace, policy: str, cache_size: int) -> float:
    """Replay the trace against one policy at one size; returns hits / N.

    Determinism pins: CLOCK's hand starts at slot 0 and newly inserted
    residents start with a clear reference bit; LFU counts in-cache
    frequencies only (counts reset on eviction) and breaks ties by evicting
    the least recently used among the least frequent.
    """
    if cache_size < 1:
        raise ValueError("cache size must be >= 1")
    policy = policy.lower()
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    refs = trace.block_refs()
    if refs.size == 0:
        return 0.0
    stream = refs.tolist()
    if policy == "lru":
        hits = _sim_lru(stream, cache_size)
    elif policy == "fifo":
        hits = _sim_fifo(stream, cache_size)
    elif policy == "clock":
        hits = _sim_clock(stream, cache_size)
    else:
        hits = _sim_lfu(stream, cache_size)
    return hits / len(stream)


def _sim_lru(stream: Iterable[int], size: int) -> int:
    cache: OrderedDict[int, None] = OrderedDict()
    hits = 0
    for r in stream:
        if r in cache:
            cache.move_to_end(r)
            hits += 1
        else:
            if len(cache) >= size:
                cache.popitem(last=False)
            cache[r] = None
    return hits


def _sim_fifo(stream: Iterable[int], size: int) -> int:
    resident: set[int] = set()
    order: deque[int] = deque()
    hits = 0
    for r in stream:
        if r in resident:
            hits += 1
        else:
            if len(resident) >= size:
                resident.remove(order.popleft())
            resident.add(r)
            order.append(r)
    return hits


def _sim_clock(stream: Iterable[int], size: int) -> int:
    slots: list[int] = []
    bits: list[int] = []
    where: dict[int, int] = {}
    hand = 0
    hits = 0
    for r in stream:
        slot = where.get(r)
        if slot is not None:
            bits[slot] = 1
            hits += 1
            continue
        if len(slots) < size:
            where[r] = len(slots)
            slots.append(r)
            bits.append(0)
            continue
        while bits[hand]:
            bits[hand] = 0
            hand = (hand + 1) % size
        del where[slots[hand]]
        slots[hand] = r
        bits[hand] = 0
        where[r] = hand
        hand = (hand + 1) % size
    return hits


def _sim_lfu(stream: Iterable[int], size: int) -> int:
    freq: dict[int, int] = {}
    last_use: dict[int, int] = {}
    heap: list[tuple[int, int, int]] = []  # (freq, last_use, addr), lazily stale
    hits = 0
    for step, r in enumerate(stream):
        if r in freq:
            hits += 1
            freq[r] += 1
        else:
            if len(freq) >= size:
                while True:
                    f, t, victim = heapq.heappop(heap)
                    if freq.get(victim) == f and last_use[victim] == t:
                        break
                del freq[victim]
                del last_use[victim]
            freq[r] = 1
        last_use[r] = step
        heapq.heappush(heap, (freq[r], step, r))
    return hits


def _stack_distance_counts(refs: np.ndarray) -> tuple[list[int], int]:
    """One pass over the trace: per-reference stack distances.

    A Fenwick tree marks, for every item seen so far, the position of its
    most recent occurrence; the number of marks strictly between two
    occurrences of an item is the count of distinct items touched in
    between, and +1 (the item's own slot) gives the distance that decides
    LRU hits.  Returns the finite distances and the first-touch count.
    """
    n = int(refs.size)
    tree = [0] * (n + 1)
    last: dict[int, int] = {}
    distances: list[int] = []
    inf_count = 0
    for i, r in enumerate(refs.tolist(), start=1):
        p = last.get(r)
        if p is None:
            inf_count += 1
        else:
            s = 0
            x = i - 1
            while x > 0:
                s += tree[x]
                x -= x & -x
            x = p
            while x > 0:
                s -= tree[x]
                x -= x & -x
            distances.append(s + 1)
            x = p
            while x <= n:
                tree[x] -= 1
                x += x & -x
        last[r] = i
        x = i
        while x <= n:
            tree[x] += 1
            x += x & -x
    return distances, inf_count


def exact_lru_hrc(trace: Trace) -> HitRatioCurve:
    """The full LRU hit-ratio curve from one stack-distance pass.

    Agrees with ``simulate(trace, "lru", C)`` exactly at every size C.  The
    returned knots cover 1..max finite distance densely, plus a final knot
    at the footprint.
    """
    refs = trace.block_refs()
    n = int(refs.size)
    if n == 0:
        return HitRatioCurve("lru", np.array([1.0]), np.array([0.0]), 0, 0)
    distances, _ = _stack_distance_counts(refs)
    footprint = int(np.unique(refs).size)
    if distances:
        per_sd = np.bincount(distances)  # index = distance, 0 unused
        cum_hits = np.cumsum(per_sd[1:])
        sizes = np.arange(1, per_sd.size, dtype=np.float64)
        ratios = cum_hits / n
    else:
        sizes = np.empty(0)
        ratios = np.empty(0)
    if sizes.size == 0 or sizes[-1] < footprint:
        tail = ratios[-1] if ratios.size else 0.0
        sizes = np.append(sizes, float(footprint))
        ratios = np.append(ratios, tail)
    return HitRatioCurve("lru", sizes, ratios, footprint, n)


def default_size_grid(footprint: int, count: int = 64) -> np.ndarray:
    """Geometrically spaced integer cache sizes from 1 to the footprint."""
    if footprint < 1:
        return np.array([1], dtype=np.int64)
    grid = np.geomspace(1.0, float(footprint), count)
    return np.unique(np.rint(grid).astype(np.int64))


def hrc(
    trace: Trace,
    policy: str = "lru",
    sizes: Optional[Sequence[int]] = None,
    workers: Optional[int] = None,
) -> HitRatioCurve:
    """Hit-ratio curve for any policy over a size grid.

    LRU takes the exact single-pass route and samples it at the grid; other
    policies simulate each size independently (fanned out over worker
    threads).  Default grid: 64 geometric sizes from 1 to the footprint.
    """
    policy = policy.lower()
    footprint, length = measure_footprint(trace)
    if sizes is None:
        grid = default_size_grid(max(footprint, 1))
    else:
        grid = np.unique(np.asarray(list(sizes), dtype=np.int64))
        if grid.size == 0:
            raise ValueError("empty size grid")
        if np.any(grid < 1):
            raise ValueError("cache sizes must be >= 1")
    if policy == "lru":
        exact = exact_lru_hrc(trace)
        ratios = np.array([exact.hit_ratio_at(int(c)) for c in grid])
    else:
        with ThreadPoolExecutor(max_workers=workers or min(8, grid.size)) as pool:
            ratios = np.array(
                list(pool.map(lambda c: simulate(trace, policy, int(c)), grid))
            )
    return HitRatioCurve(policy, grid.astype(np.float64), ratios, footprint, length)
