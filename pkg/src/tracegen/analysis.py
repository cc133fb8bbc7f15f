"""Trace characterization and cache-model math.

Measures inter-reference distance (IRD) histograms, converts an IRD
distribution into a predicted LRU hit-ratio curve through the working-set
sweep (for each eviction age tau, the implied cache size is the expected
number of distinct items younger than tau, and the hit ratio is the mass of
distances at most tau), locates where an IRD spike will land on the cache
size axis, and scores curves against each other (mean absolute error on a
normalized-size grid, distance from the least concave majorant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cachesim import HitRatioCurve
from .distributions import IrdSpec, empirical_ird
from .generator import Trace

PREDICTED_POLICY = "lru-predicted"


@dataclass(frozen=True)
class IrdHistogram:
    """Exact finite-distance counts plus the first-touch (infinite) count.

    ``values``/``counts`` list every observed finite distance exactly;
    ``bin_edges``/``bin_counts`` give a log-spaced summary view for display.
    The first-touch count doubles as the distinct-item count of the source
    trace.
    """

    values: np.ndarray
    counts: np.ndarray
    inf_count: int
    total: int
    bin_edges: np.ndarray
    bin_counts: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.int64)
        counts = np.asarray(self.counts, dtype=np.int64)
        if values.shape != counts.shape:
            raise ValueError("values and counts must align")
        if np.any(counts < 0) or self.inf_count < 0:
            raise ValueError("counts must be non-negative")
        if int(counts.sum()) + self.inf_count != self.total:
            raise ValueError("counts plus first touches must equal the total")
        for name, arr in (
            ("values", values),
            ("counts", counts),
            ("bin_edges", np.asarray(self.bin_edges, dtype=np.float64)),
            ("bin_counts", np.asarray(self.bin_counts, dtype=np.int64)),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def finite_total(self) -> int:
        return self.total - self.inf_count

    def to_ird_spec(self) -> IrdSpec:
        """Turn measured counts into a sampleable empirical distribution."""
        if self.values.size == 0:
            raise ValueError("histogram has no finite distances")
        return empirical_ird(self.values, self.counts, self.inf_count)


def measure_ird(trace: Trace, bins: int = 64) -> IrdHistogram:
    """Distance between each reference and the previous touch of its item.

    The distance is the index difference j - i (so back-to-back repeats are
    at distance 1); first touches are recorded separately as infinite.
    Multi-block requests are expanded before measuring.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    ids = trace.block_refs()
    n = int(ids.size)
    if n == 0:
        raise ValueError("empty trace")
    order = np.argsort(ids, kind="stable")
    sorted_ids = ids[order]
    positions = order.astype(np.int64)
    same_item = sorted_ids[1:] == sorted_ids[:-1]
    gaps = (positions[1:] - positions[:-1])[same_item]
    inf_count = n - int(gaps.size)
    if gaps.size:
        values, counts = np.unique(gaps, return_counts=True)
        hi = float(values[-1])
        edges = np.geomspace(1.0, hi + 1.0, bins + 1) if hi > 1 else np.array([1.0, 2.0])
        bin_counts, edges = np.histogram(gaps, bins=edges)
    else:
        values = np.empty(0, dtype=np.int64)
        counts = np.empty(0, dtype=np.int64)
        edges = np.array([1.0, 2.0])
        bin_counts = np.zeros(1, dtype=np.int64)
    return IrdHistogram(
        values=values,
        counts=counts,
        inf_count=inf_count,
        total=n,
        bin_edges=edges,
        bin_counts=bin_counts,
    )


@dataclass(frozen=True)
class AetCurve:
    """Predicted cache behavior swept over eviction age tau = 1..T.

    ``cache_sizes[i]`` is the implied size after waiting tau[i] accesses and
    ``hit_ratios[i]`` the predicted hit ratio there.  Both are
    non-decreasing; flat cache_size stretches (zero-probability distance
    regions) collapse to their left endpoint when converted to a curve.
    """

    tau: np.ndarray
    cache_sizes: np.ndarray
    hit_ratios: np.ndarray
    source_footprint: int = 0
    source_length: int = 0

    def __post_init__(self):
        for name in ("tau", "cache_sizes", "hit_ratios"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.tau.size == 0:
            raise ValueError("empty sweep")
        if np.any(np.diff(self.cache_sizes) < 0) or np.any(np.diff(self.hit_ratios) < 0):
            raise ValueError("sweep must be non-decreasing")

    def to_hrc(self) -> HitRatioCurve:
        """Collapse the sweep into a step curve over strictly increasing sizes."""
        sizes = self.cache_sizes
        # keep the last (highest hit ratio) entry of every flat stretch
        keep = np.append(np.diff(sizes) > 0, True)
        sizes = sizes[keep]
        ratios = self.hit_ratios[keep]
        if sizes[0] <= 0:
            sizes, ratios = sizes[1:], ratios[1:]
        if sizes.size == 0:
            sizes, ratios = np.array([1.0]), np.array([float(self.hit_ratios[-1])])
        return HitRatioCurve(
            PREDICTED_POLICY, sizes, ratios, self.source_footprint, self.source_length
        )


def _sweep_from_pmf(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Core sweep over probs[t] = Pr[distance = t] for t = 1..T (index 0 unused).

    Returns (tau, C, hit) where C(tau) = sum_{t=1..tau} Pr[distance > t]
    and hit(tau) = Pr[distance <= tau].  Mass missing from probs is the
    infinite (one-hit wonder) part; it floors every tail probability and so
    caps the predicted hit ratio at 1 minus itself.
    """
    t_count = probs.size - 1  # index 0 unused
    if t_count < 1:
        raise ValueError("no finite distance mass")
    cdf = np.cumsum(probs[1:])
    tail = 1.0 - cdf  # Pr[distance > t], bounded below by q
    np.clip(tail, 0.0, None, out=tail)
    cache = np.cumsum(tail)
    tau = np.arange(1, t_count + 1, dtype=np.float64)
    return tau, cache, cdf


def che_predict(hist: IrdHistogram) -> AetCurve:
    """Predicted LRU hit-ratio sweep from a measured IRD histogram.

    For each eviction age tau, the implied cache size accumulates the tail
    probabilities Pr[IRD > t] for t = 1..tau, and the predicted hit ratio is
    the distance CDF at tau.  The sweep covers tau = 1..max finite distance.
    """
    if hist.total == 0:
        raise ValueError("empty histogram")
    if hist.values.size == 0:
        raise ValueError("histogram has no finite distances")
    t_max = int(hist.values[-1])
    probs = np.zeros(t_max + 1)
    probs[hist.values] = hist.counts / hist.total
    tau, cache, cdf = _sweep_from_pmf(probs)
    return AetCurve(
        tau=tau,
        cache_sizes=cache,
        hit_ratios=cdf,
        source_footprint=hist.inf_count,
        source_length=hist.total,
    )


def ird_spec_pmf(spec: IrdSpec) -> np.ndarray:
    """Exact per-integer PMF a spec induces, indexed 1..t_max (index 0 unused).

    Stepwise bins draw a continuous point uniformly inside the bin and round
    it to the next integer, so integers straddling a bin edge receive
    partial mass from both sides; this computes that discretization exactly.
    """
    if not spec.tuned:
        raise ValueError("spec has no sample space; auto-tune it first")
    dense = np.zeros(spec.t_max + 1)
    if spec.source == "empirical":
        dense[spec.values] = spec.bin_probs
        return dense
    width = spec.t_max / spec.k
    for j in range(spec.k):
        mass = spec.bin_probs[j]
        if mass == 0.0:
            continue
        lo, hi = j * width, (j + 1) * width
        first = int(math.floor(lo)) + 1
        last = int(math.ceil(hi))
        ints = np.arange(first, last + 1, dtype=np.float64)
        overlap = np.minimum(ints, hi) - np.maximum(ints - 1.0, lo)
        np.clip(overlap, 0.0, None, out=overlap)
        dense[first : last + 1] += mass * overlap / width
    return dense


def spike_to_cliff(spec: IrdSpec, spike_bin: int) -> tuple[float, float]:
    """Cache-size interval where a stepwise bin's mass lands on the curve.

    Maps the bin's distance edges through the predicted cache-size sweep of
    the distribution's idealized histogram: the returned [C_lo, C_hi]
    brackets the hit-ratio cliff the bin produces.  Fractional distance
    edges are resolved by linear interpolation of the sweep.
    """
    if spec.source != "fgen":
        raise ValueError("cliff prediction applies to stepwise specs")
    if not (0 <= spike_bin < spec.k):
        raise ValueError(f"bin {spike_bin} out of range [0, {spec.k})")
    dense = ird_spec_pmf(spec)
    _, cache, _ = _sweep_from_pmf(dense)
    knots = np.concatenate(([0.0], cache))  # C(0) = 0
    width = spec.t_max / spec.k
    edges = np.array([spike_bin * width, (spike_bin + 1) * width])
    lo, hi = np.interp(edges, np.arange(knots.size, dtype=np.float64), knots)
    return float(lo), float(hi)


def predicted_cliffs(spec: IrdSpec) -> list[tuple[int, tuple[float, float]]]:
    """spike_to_cliff for every spike bin, in bin order."""
    bins = spec.spikes if spec.spikes is not None else range(spec.k)
    return [(int(b), spike_to_cliff(spec, int(b))) for b in bins]


def hrc_mae(
    a: HitRatioCurve,
    b: HitRatioCurve,
    grid: Optional[Sequence[float]] = None,
) -> float:
    """Mean absolute gap between two curves on a normalized-size grid.

    Each curve is read at sizes normalized to its own footprint (so traces
    of different scales compare like for like), linearly interpolated, and
    clamped flat outside its knots.  Default grid: 100 even points in
    (0, 1].
    """
    if grid is None:
        grid_arr = np.linspace(0.01, 1.0, 100)
    else:
        grid_arr = np.asarray(list(grid), dtype=np.float64)
        if grid_arr.size == 0:
            raise ValueError("empty grid")
    ya = np.interp(grid_arr, a.normalized_sizes, a.hit_ratios)
    yb = np.interp(grid_arr, b.normalized_sizes, b.hit_ratios)
    return float(np.mean(np.abs(ya - yb)))


def concavity_gap(curve: HitRatioCurve) -> float:
    """Largest vertical distance from the curve to its least concave majorant.

    Zero means the curve is concave (no cliff/plateau structure); bigger
    values mean deeper non-concavity.  Computed on normalized sizes with the
    origin anchored at (0, 0).
    """
    if curve.sizes.size < 3:
        raise ValueError("need at least 3 points")
    x = curve.normalized_sizes
    y = curve.hit_ratios
    if x[0] > 0:
        x = np.concatenate(([0.0], x))
        y = np.concatenate(([0.0], y))
    hull_x: list[float] = []
    hull_y: list[float] = []
    for px, py in zip(x, y):
        while len(hull_x) >= 2:
            ox, oy = hull_x[-2], hull_y[-2]
            ax, ay = hull_x[-1], hull_y[-1]
            # pop the middle point whenever it sits on or under the chord
            if (ax - ox) * (py - oy) - (ay - oy) * (px - ox) >= 0:
                hull_x.pop()
                hull_y.pop()
            else:
                break
        hull_x.append(float(px))
        hull_y.append(float(py))
    majorant = np.interp(x, hull_x, hull_y)
    return float(np.max(np.clip(majorant - y, 0.0, None)))
