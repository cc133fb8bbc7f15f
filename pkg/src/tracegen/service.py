"""HTTP/JSON service for interactive profile tuning.

POST /v1/hrc generates a small trace from the requested profile, simulates
the chosen eviction policy over a size grid, and returns the curve together
with per-source IRD histograms (dependent, independent, merged) so a
frontend can redraw on every slider change.  GET /v1/presets exposes the
named profile registry; GET /v1/health is a liveness probe.

The service is stateless: every request owns its generator and random
stream, so identical requests produce identical results and concurrent
requests cannot interleave.  Scale is capped (m <= 1e5, n <= 1e7) to keep
the endpoint interactive; use the CLI for full-size traces.

Error mapping: malformed or out-of-range fields answer 400 with per-field
messages, a profile whose distributions do not match its mixing weight
answers 422, and scale-cap violations answer 413.
"""

from __future__ import annotations

import os
import time
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import analysis, cachesim, profiles
from .generator import (
    DEFAULT_SEED,
    SRC_INDEPENDENT,
    Trace,
    TraceProfile,
    gen_from_2d,
)

MAX_M = 100_000
MAX_N = 10_000_000


class TuneRequest(BaseModel):
    preset: Optional[str] = None
    p_irm: float = Field(default=0.0, ge=0.0, le=1.0)
    f: Optional[str] = None
    g: Optional[str] = None
    m: int = Field(default=100, ge=1)
    n: int = Field(default=10_000, ge=1)
    seed: int = DEFAULT_SEED
    policy: str = "lru"
    sizes: Optional[list[int]] = None
    bins: int = Field(default=48, ge=1, le=512)


def _field_error(field: str, message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=[{"field": field, "message": message}])


def _histogram_payload(hist: Optional[analysis.IrdHistogram]) -> dict:
    if hist is None:
        return {"bin_edges": [1.0, 2.0], "bin_counts": [0], "inf_count": 0, "total": 0}
    return {
        "bin_edges": [float(e) for e in hist.bin_edges],
        "bin_counts": [int(c) for c in hist.bin_counts],
        "inf_count": int(hist.inf_count),
        "total": int(hist.total),
    }


def _curve_payload(curve: cachesim.HitRatioCurve) -> dict:
    return {
        "policy": curve.policy,
        "sizes": [float(s) for s in curve.sizes],
        "normalized_sizes": [float(s) for s in curve.normalized_sizes],
        "hit_ratios": [float(r) for r in curve.hit_ratios],
        "footprint": curve.footprint,
        "length": curve.length,
    }


def _build_profile(req: TuneRequest) -> TraceProfile:
    if req.m > MAX_M or req.n > MAX_N:
        raise HTTPException(
            status_code=413,
            detail=f"scale cap exceeded: m <= {MAX_M} and n <= {MAX_N}; use the CLI for more",
        )
    p_irm, f_txt, g_txt = req.p_irm, req.f, req.g
    if req.preset is not None:
        try:
            preset = profiles.get_preset(req.preset)
        except KeyError as exc:
            raise _field_error("preset", str(exc.args[0])) from None
        p_irm = preset.p_irm
        f_txt = preset.f_fragment()
        g_txt = preset.g_fragment()
    try:
        f = profiles.parse_f_fragment(f_txt) if f_txt is not None else None
    except ValueError as exc:
        raise _field_error("f", str(exc)) from None
    try:
        g = profiles.parse_g_fragment(g_txt, req.m) if g_txt is not None else None
    except ValueError as exc:
        raise _field_error("g", str(exc)) from None
    if req.policy.lower() not in cachesim.POLICIES:
        raise _field_error("policy", f"unknown policy {req.policy!r}")
    if req.sizes is not None and (len(req.sizes) == 0 or any(s < 1 for s in req.sizes)):
        raise _field_error("sizes", "sizes must be positive cache sizes")
    try:
        return TraceProfile(p_irm=p_irm, g=g, f=f, m=req.m, n=req.n, seed=req.seed)
    except ValueError as exc:
        # the triplet invariant: distributions must match the mixing weight
        raise HTTPException(status_code=422, detail=str(exc)) from None


def _source_histograms(trace: Trace, bins: int) -> dict:
    merged = analysis.measure_ird(trace, bins=bins)
    dependent = None
    independent = None
    if trace.sources is not None:
        ind_mask = trace.sources == SRC_INDEPENDENT
        dep_mask = ~ind_mask  # dependent items plus their singletons
        if dep_mask.any():
            dependent = analysis.measure_ird(Trace(refs=trace.refs[dep_mask]), bins=bins)
        if ind_mask.any():
            independent = analysis.measure_ird(Trace(refs=trace.refs[ind_mask]), bins=bins)
    return {
        "dependent": _histogram_payload(dependent),
        "independent": _histogram_payload(independent),
        "merged": _histogram_payload(merged),
    }


def create_app() -> FastAPI:
    app = FastAPI(title="trace profile tuner", version="0.1.0")
    origins = os.environ.get("TRACEGEN_UI_ORIGIN", "*")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[o.strip() for o in origins.split(",")],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def field_errors(request, exc: RequestValidationError):
        detail = [
            {
                "field": ".".join(str(p) for p in err["loc"] if p != "body"),
                "message": err["msg"],
            }
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.get("/v1/presets")
    def presets():
        return [
            {
                "name": p.name,
                "p_irm": p.p_irm,
                "g": p.g_fragment(),
                "f": p.f_fragment(),
                "note": p.note,
                "recommended_min_m": p.recommended_min_m,
                "recommended_min_n": p.recommended_min_n,
            }
            for p in profiles.PRESETS.values()
        ]

    @app.post("/v1/hrc")
    def tune(req: TuneRequest):
        started = time.perf_counter()
        profile = _build_profile(req)
        trace = gen_from_2d(profile)
        curve = cachesim.hrc(trace, policy=req.policy.lower(), sizes=req.sizes)
        histograms = _source_histograms(trace, req.bins)
        footprint, length = cachesim.measure_footprint(trace)
        if curve.sizes.size >= 3:
            gap = analysis.concavity_gap(curve)
        else:
            gap = 0.0
        try:
            profile_text = profiles.render_profile(profile)
        except ValueError:  # empirical specs render by file reference only
            profile_text = None
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        return {
            "hrc": _curve_payload(curve),
            "histograms": histograms,
            "footprint": footprint,
            "length": length,
            "concavity_gap": gap,
            "profile": profile_text,
            "elapsed_ms": elapsed_ms,
        }

    return app
