"""Synthetic block I/O traces with tunable hit-ratio cliffs and plateaus.

The package generates storage reference streams whose locality is controlled
by a compact profile: a mixing weight between reuse-driven and
popularity-driven arrivals, a popularity distribution over a fixed working
set, and a spiked inter-reference distance distribution.  Alongside the
generator it ships the measurement side of the workbench: reuse-distance
histograms, exact and simulated hit-ratio curves, a working-set-based
hit-ratio predictor, and trace import/export in common formats.
"""

from .distributions import (
    INFINITE,
    IrdSpec,
    IrmSpec,
    Rng,
    auto_tune_tmax,
    build_irm,
    fgen,
    sample_ird,
    sample_item,
)
from .generator import (
    IRM_ADDRESS_OFFSET,
    SizeDist,
    Trace,
    TraceProfile,
    decorate,
    gen_from_2d,
    gen_from_ird,
)
from .cachesim import (
    HitRatioCurve,
    exact_lru_hrc,
    hrc,
    measure_footprint,
    simulate,
)
from .analysis import (
    AetCurve,
    IrdHistogram,
    che_predict,
    concavity_gap,
    hrc_mae,
    measure_ird,
    predicted_cliffs,
    spike_to_cliff,
)
from .profiles import PRESETS, get_preset, parse_profile, render_profile

__version__ = "0.1.0"

__all__ = [
    "INFINITE",
    "IRM_ADDRESS_OFFSET",
    "AetCurve",
    "HitRatioCurve",
    "IrdHistogram",
    "IrdSpec",
    "IrmSpec",
    "PRESETS",
    "Rng",
    "SizeDist",
    "Trace",
    "TraceProfile",
    "auto_tune_tmax",
    "build_irm",
    "che_predict",
    "concavity_gap",
    "decorate",
    "exact_lru_hrc",
    "fgen",
    "gen_from_2d",
    "gen_from_ird",
    "get_preset",
    "hrc",
    "hrc_mae",
    "measure_footprint",
    "measure_ird",
    "parse_profile",
    "predicted_cliffs",
    "render_profile",
    "sample_ird",
    "sample_item",
    "simulate",
    "spike_to_cliff",
]
