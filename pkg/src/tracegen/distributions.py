"""Distribution machinery: spiked inter-reference distance PMFs and item popularity.

Two families live here.  The inter-reference distance (IRD) family is a
k-bin stepwise PMF over an integer sample space [1, t_max], optionally with
explicit mass at infinity for items that never recur; ``fgen`` builds the
spiked variant and ``auto_tune_tmax`` sizes the sample space so the mean
drawn distance matches a target footprint.  The item-popularity family
covers Zipf, Pareto, truncated Normal, Uniform, and empirical counts over a
finite universe, sampled by inverse CDF.

All sampling goes through :class:`Rng`, a thin wrapper around a fixed,
seedable generator so that equal seeds give equal streams everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

INFINITE = math.inf


class Rng:
    """Seedable random stream with deterministic, independent substreams.

    Wraps numpy's PCG64 behind a fixed contract: the only primitive drawn is
    the 53-bit uniform double, so the stream for a given seed is stable
    across platforms and releases.  Substreams come from ``child(key)``,
    which derives a new seed via ``SeedSequence(seed, spawn_key=...)``;
    children with distinct keys are statistically independent and children
    with equal keys are identical.

    One Rng instance must not be shared across threads; specs are the
    shareable objects, streams are single-owner.
    """

    def __init__(self, seed: int, _spawn_key: tuple[int, ...] = ()):
        self.seed = int(seed)
        self._spawn_key = _spawn_key
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=_spawn_key))
        )

    def child(self, key: int) -> "Rng":
        """Derive the key-th independent substream of this stream."""
        return Rng(self.seed, self._spawn_key + (int(key),))

    def random(self, size: Optional[int] = None):
        """Uniform double(s) in [0, 1)."""
        return self._gen.random(size)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Rng(seed={self.seed}, spawn_key={self._spawn_key})"


@dataclass(frozen=True, eq=False)
class IrdSpec:
    """A PMF over integer inter-reference distances, plus mass at infinity.

    ``source`` is either ``"fgen"`` (stepwise: ``bin_probs[i]`` is the mass
    of bin i, which spans the integers in (i*t_max/k, (i+1)*t_max/k] using
    0-based i) or ``"empirical"`` (``values[i]`` carries mass
    ``bin_probs[i]`` directly).  ``t_max`` is None until the sample space is
    sized; empirical specs are born with t_max = max(values).
    """

    k: int
    bin_probs: np.ndarray
    p_infinite: float
    t_max: Optional[int]
    source: str
    spikes: Optional[tuple[int, ...]] = None
    epsilon: Optional[float] = None
    values: Optional[np.ndarray] = None
    _cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        probs = np.asarray(self.bin_probs, dtype=np.float64)
        probs.setflags(write=False)
        object.__setattr__(self, "bin_probs", probs)
        if self.k < 1:
            raise ValueError("need at least one bin")
        if probs.shape != (self.k,):
            raise ValueError(f"expected {self.k} bin probabilities, got {probs.shape}")
        if np.any(probs < 0) or not (0.0 <= self.p_infinite <= 1.0):
            raise ValueError("probabilities must be non-negative")
        total = float(probs.sum()) + self.p_infinite
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        if self.t_max is not None and self.t_max < self.k:
            raise ValueError(f"t_max={self.t_max} smaller than bin count {self.k}")
        if self.source == "empirical":
            vals = np.asarray(self.values, dtype=np.int64)
            vals.setflags(write=False)
            object.__setattr__(self, "values", vals)
            if vals.shape != (self.k,):
                raise ValueError("one value per probability required")
            if np.any(vals < 1):
                raise ValueError("distances must be >= 1")
            if np.any(np.diff(vals) <= 0):
                raise ValueError("values must be strictly increasing")
        elif self.source != "fgen":
            raise ValueError(f"unknown source {self.source!r}")
        cum = np.cumsum(probs)
        cum.setflags(write=False)
        object.__setattr__(self, "_cum", cum)

    @property
    def finite_mass(self) -> float:
        return float(self.bin_probs.sum())

    @property
    def tuned(self) -> bool:
        return self.t_max is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, IrdSpec):
            return NotImplemented
        return (
            self.k == other.k
            and self.source == other.source
            and self.t_max == other.t_max
            and self.p_infinite == other.p_infinite
            and np.array_equal(self.bin_probs, other.bin_probs)
            and (
                self.values is None
                and other.values is None
                or (
                    self.values is not None
                    and other.values is not None
                    and np.array_equal(self.values, other.values)
                )
            )
        )

    def __hash__(self):
        return hash((self.k, self.source, self.t_max, self.p_infinite))


def fgen(k: int, spikes: Iterable[int], epsilon: float) -> IrdSpec:
    """Build a spiked k-bin IRD PMF.

    Spike bins (0-based indices) share probability 1 - epsilon equally; the
    remaining hole bins share epsilon equally.  The result has exactly two
    distinct bin probabilities unless every bin is a spike, in which case
    epsilon must be 0 and the PMF is uniform.

    The returned spec has no sample space yet; apply :func:`auto_tune_tmax`
    before sampling.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    spike_list = [int(s) for s in spikes]
    spike_set = frozenset(spike_list)
    if len(spike_set) != len(spike_list):
        raise ValueError("duplicate spike indices")
    if not spike_set:
        raise ValueError("need at least one spike bin")
    if any(s < 0 or s >= k for s in spike_set):
        raise ValueError(f"spike indices must lie in [0, {k})")
    if not (0.0 <= epsilon < 1.0):
        raise ValueError("epsilon must lie in [0, 1)")
    if len(spike_set) == k and epsilon != 0.0:
        raise ValueError("epsilon must be 0 when every bin is a spike")

    probs = np.empty(k, dtype=np.float64)
    if len(spike_set) == k:
        probs.fill(1.0 / k)
    else:
        probs.fill(epsilon / (k - len(spike_set)))
        probs[sorted(spike_set)] = (1.0 - epsilon) / len(spike_set)
    return IrdSpec(
        k=k,
        bin_probs=probs,
        p_infinite=0.0,
        t_max=None,
        source="fgen",
        spikes=tuple(sorted(spike_set)),
        epsilon=float(epsilon),
    )


def empirical_ird(
    values: Sequence[int],
    counts: Sequence[float],
    inf_count: float = 0.0,
) -> IrdSpec:
    """Build an IRD spec from measured (distance, count) pairs.

    ``inf_count`` is the number of first-touch references (distance
    infinity).  Counts are normalized; sampling returns the listed
    distances verbatim, so the sample space is fixed at max(values).
    """
    vals = np.asarray(values, dtype=np.int64)
    cnts = np.asarray(counts, dtype=np.float64)
    if vals.size == 0:
        raise ValueError("empty histogram")
    if vals.shape != cnts.shape:
        raise ValueError("values and counts must align")
    if np.any(cnts < 0) or inf_count < 0:
        raise ValueError("counts must be non-negative")
    order = np.argsort(vals)
    vals = vals[order]
    cnts = cnts[order]
    if np.any(np.diff(vals) == 0):
        raise ValueError("duplicate distance values")
    total = float(cnts.sum()) + float(inf_count)
    if total <= 0:
        raise ValueError("histogram has no mass")
    keep = cnts > 0
    if not np.any(keep):
        # all finite rows zero: pure-singleton spec, keep one placeholder bin
        vals, cnts = vals[:1], np.zeros(1)
    else:
        vals, cnts = vals[keep], cnts[keep]
    return IrdSpec(
        k=int(vals.size),
        bin_probs=cnts / total,
        p_infinite=float(inf_count) / total,
        t_max=int(vals.max()),
        source="empirical",
        values=vals,
    )


def auto_tune_tmax(spec: IrdSpec, footprint_m: int) -> IrdSpec:
    """Size a stepwise spec's sample space so mean drawn distance tracks M.

    With bin i (1-based) spanning ((i-1)*t_max/k, i*t_max/k], the bin
    midpoint is (2i-1)/2 * t_max/k; solving mean = M gives
    t_max = 2*M*k / sum((2i-1) * f(i)), rounded up to an integer.
    """
    if footprint_m < 1:
        raise ValueError("footprint must be >= 1")
    if spec.source != "fgen":
        raise ValueError("sample space of an empirical spec is fixed by its data")
    denom = float(np.dot(2.0 * np.arange(1, spec.k + 1) - 1.0, spec.bin_probs))
    if denom <= 0.0:
        raise ValueError("spec has no finite mass to tune")
    t_max = math.ceil(2.0 * footprint_m * spec.k / denom)
    t_max = max(t_max, spec.k)  # keep every bin at least one integer wide
    return IrdSpec(
        k=spec.k,
        bin_probs=spec.bin_probs,
        p_infinite=spec.p_infinite,
        t_max=t_max,
        source=spec.source,
        spikes=spec.spikes,
        epsilon=spec.epsilon,
    )


def sample_irds(spec: IrdSpec, rng: Rng, size: int) -> np.ndarray:
    """Draw a batch of distances as float64; singletons come out as inf.

    Stepwise specs use two uniforms per draw (bin choice, then position
    within the bin); empirical specs consume the same two for stream-layout
    stability even though the second is unused.
    """
    if not spec.tuned:
        raise ValueError("spec has no sample space; auto-tune it first")
    u_bin = rng.random(size)
    u_pos = rng.random(size)
    bins = np.searchsorted(spec._cum, u_bin, side="right")
    inf_mask = bins >= spec.k
    bins = np.minimum(bins, spec.k - 1)
    if spec.source == "empirical":
        out = spec.values[bins].astype(np.float64)
    else:
        width = spec.t_max / spec.k
        out = np.floor((bins + u_pos) * width) + 1.0
        np.clip(out, 1.0, float(spec.t_max), out=out)
    out[inf_mask] = np.inf
    return out


def sample_ird(spec: IrdSpec, rng: Rng):
    """Draw one distance: a positive int, or INFINITE for a singleton."""
    value = sample_irds(spec, rng, 1)[0]
    return INFINITE if math.isinf(value) else int(value)


_IRM_FAMILIES = ("zipf", "pareto", "normal", "uniform", "empirical")


@dataclass(frozen=True, eq=False)
class IrmSpec:
    """Normalized popularity PMF over item indices 0..universe_size-1.

    Index j corresponds to popularity rank i = j + 1 in the closed-form
    families.
    """

    family: str
    universe_size: int
    params: tuple[tuple[str, float], ...]
    pmf: np.ndarray
    _cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pmf = np.asarray(self.pmf, dtype=np.float64)
        pmf.setflags(write=False)
        object.__setattr__(self, "pmf", pmf)
        if self.universe_size < 1:
            raise ValueError("universe must contain at least one item")
        if pmf.shape != (self.universe_size,):
            raise ValueError("PMF length must equal universe size")
        if np.any(pmf < 0):
            raise ValueError("PMF entries must be non-negative")
        if abs(float(pmf.sum()) - 1.0) > 1e-9:
            raise ValueError("PMF must sum to 1")
        cdf = np.cumsum(pmf)
        cdf.setflags(write=False)
        object.__setattr__(self, "_cdf", cdf)

    def param(self, name: str) -> float:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IrmSpec):
            return NotImplemented
        return (
            self.family == other.family
            and self.universe_size == other.universe_size
            and self.params == other.params
            and np.array_equal(self.pmf, other.pmf)
        )

    def __hash__(self):
        return hash((self.family, self.universe_size, self.params))


def build_irm(
    family: str,
    universe_size: int,
    *,
    alpha: Optional[float] = None,
    x_m: Optional[float] = None,
    mu: Optional[float] = None,
    sigma: Optional[float] = None,
    counts: Optional[Sequence[float]] = None,
) -> IrmSpec:
    """Build a popularity PMF of the named family over a finite universe.

    Families and their weight functions over rank i = 1..universe_size:

    - ``zipf``: (1/i)^alpha, alpha defaults to 1.2
    - ``pareto``: (x_m/i)^alpha for i >= x_m, zero below; alpha defaults to
      2.5, x_m to 1
    - ``normal``: exp(-(i-mu)^2 / (2 sigma^2)), truncated to [1, universe]
      and renormalized; mu and sigma required
    - ``uniform``: 1/universe_size for every item
    - ``empirical``: provided counts, normalized

    Weights are normalized exactly over the universe; no asymptotic
    approximations.
    """
    family = family.lower()
    if family not in _IRM_FAMILIES:
        raise ValueError(f"unknown popularity family {family!r}")
    if universe_size < 1:
        raise ValueError("universe must contain at least one item")
    ranks = np.arange(1, universe_size + 1, dtype=np.float64)
    params: tuple[tuple[str, float], ...] = ()

    if family == "zipf":
        alpha = 1.2 if alpha is None else float(alpha)
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        weights = ranks ** (-alpha)
        params = (("alpha", alpha),)
    elif family == "pareto":
        alpha = 2.5 if alpha is None else float(alpha)
        x_m = 1.0 if x_m is None else float(x_m)
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        if x_m < 1:
            raise ValueError("x_m must be >= 1")
        if x_m > universe_size:
            raise ValueError("x_m exceeds the universe")
        weights = np.where(ranks >= x_m, (x_m / ranks) ** alpha, 0.0)
        params = (("alpha", alpha), ("x_m", x_m))
    elif family == "normal":
        if mu is None or sigma is None:
            raise ValueError("normal family requires mu and sigma")
        mu, sigma = float(mu), float(sigma)
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        # truncation to [1, universe] happens implicitly: weights exist only there
        weights = np.exp(-((ranks - mu) ** 2) / (2.0 * sigma * sigma))
        params = (("mu", mu), ("sigma", sigma))
    elif family == "uniform":
        weights = np.ones(universe_size)
    else:  # empirical
        if counts is None:
            raise ValueError("empirical family requires counts")
        weights = np.asarray(counts, dtype=np.float64)
        if weights.size == 0:
            raise ValueError("empty counts")
        if weights.shape != (universe_size,):
            raise ValueError("counts length must equal universe size")
        if np.any(weights < 0):
            raise ValueError("counts must be non-negative")

    total = float(weights.sum())
    if total <= 0 or not math.isfinite(total):
        raise ValueError("popularity weights have no usable mass")
    return IrmSpec(
        family=family,
        universe_size=universe_size,
        params=params,
        pmf=weights / total,
    )


def sample_items(spec: IrmSpec, rng: Rng, size: int) -> np.ndarray:
    """Draw a batch of item indices by inverse CDF (int64 in [0, universe))."""
    u = rng.random(size)
    idx = np.searchsorted(spec._cdf, u, side="right")
    return np.minimum(idx, spec.universe_size - 1).astype(np.int64)


def sample_item(spec: IrmSpec, rng: Rng) -> int:
    """Draw one item index distributed per the PMF."""
    return int(sample_items(spec, rng, 1)[0])
