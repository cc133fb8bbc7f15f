"""Named workload presets and the text form of a trace profile.

Presets are scale-free triplets (mixing weight, popularity family, spiked
IRD parameters); instantiating one binds footprint, length, and seed.  The
letters a..g cover canonical behaviors from a pure popularity stream to
single- and multi-spike reuse patterns; the w*/v* names are calibrated
counterfeits of real block traces.

The profile config format is line-oriented `key = value` text with the
fragment grammars:

    g:  zipf[:alpha] | pareto[:alpha[,x_m]] | normal:mu,sigma | uniform
        | empirical:<histogram.csv> | none
    f:  fgen:<k>:<epsilon>:<i,j,...> | empirical:<histogram.csv> | none
    sizedist:  w,w,..:v,v,..  (weights : block counts)

`parse_profile(render_profile(p))` is the identity for any profile built
from fgen/closed-form fragments (empirical specs live in separate histogram
files and render by reference only).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .distributions import IrdSpec, IrmSpec, build_irm, fgen
from .generator import DEFAULT_SEED, SizeDist, TraceProfile


@dataclass(frozen=True)
class ProfilePreset:
    """A scale-free profile template: everything but m, n, and seed."""

    name: str
    p_irm: float
    g_family: Optional[tuple]  # (family, {param: value}) or None
    f_args: Optional[tuple]  # (k, spikes, epsilon) or None
    note: str = ""
    recommended_min_m: Optional[int] = None
    recommended_min_n: Optional[int] = None

    def f_spec(self) -> Optional[IrdSpec]:
        if self.f_args is None:
            return None
        k, spikes, epsilon = self.f_args
        return fgen(k, spikes, epsilon)

    def g_spec(self, universe_size: int) -> Optional[IrmSpec]:
        if self.g_family is None:
            return None
        family, params = self.g_family
        return build_irm(family, universe_size, **params)

    def f_fragment(self) -> str:
        if self.f_args is None:
            return "none"
        k, spikes, epsilon = self.f_args
        return f"fgen:{k}:{epsilon!r}:{','.join(str(s) for s in spikes)}"

    def g_fragment(self) -> str:
        if self.g_family is None:
            return "none"
        family, params = self.g_family
        return _render_g_params(family, params)

    def instantiate(
        self,
        m: int,
        n: int,
        seed: int = DEFAULT_SEED,
        read_fraction: Optional[float] = None,
        size_dist: Optional[SizeDist] = None,
    ) -> TraceProfile:
        return TraceProfile(
            p_irm=self.p_irm,
            g=self.g_spec(m),
            f=self.f_spec(),
            m=m,
            n=n,
            seed=seed,
            read_fraction=read_fraction,
            size_dist=size_dist,
        )


def _p(name, p_irm, g_family, f_args, **kw) -> ProfilePreset:
    return ProfilePreset(name, p_irm, g_family, f_args, **kw)


PRESETS: dict[str, ProfilePreset] = {
    preset.name: preset
    for preset in (
        _p("a", 1.0, ("zipf", {"alpha": 3.0}), None),
        _p("b", 0.0, None, (20, (0, 3), 5e-3)),
        _p("c", 0.0, None, (20, (2, 9), 5e-3)),
        _p("d", 0.0, None, (5, (0, 4), 1e-2)),
        _p("e", 0.0, None, (20, (1,), 5e-3)),
        _p("f", 0.0, None, (5, (2,), 5e-3)),
        _p(
            "g",
            0.0,
            None,
            (54, (5, 11, 12, 13, 14, 17, 30, 50), 1e-2),
            note="spike mass is split evenly across the listed bins",
        ),
        _p("w11", 1.0, ("zipf", {"alpha": 1.3}), None),
        _p("w24", 0.45, ("zipf", {"alpha": 1.2}), (30, (1, 2), 5e-3)),
        _p(
            "w44",
            0.0,
            None,
            (30, (9, 13, 17, 19), 2.5e-2),
            note="high-resolution reproduction wants a large scale",
            recommended_min_m=10_000,
            recommended_min_n=1_000_000,
        ),
        _p("w82", 0.2, ("zipf", {"alpha": 1.2}), (100, (12, 13, 19), 1e-3)),
        _p("v521", 0.0, None, (100, (2,), 2e-3)),
        _p("v538", 0.1, ("zipf", {"alpha": 1.2}), (40, (3, 4), 5e-3)),
        _p("v766", 0.0, None, (40, (0, 5), 5.7e-3)),
        _p("v827", 0.2, ("zipf", {"alpha": 1.2}), (60, (0, 13), 5e-3)),
    )
}


def get_preset(name: str) -> ProfilePreset:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset {name!r}; known presets: {known}") from None


def parse_f_fragment(text: str, allow_preset: bool = True) -> Optional[IrdSpec]:
    """Parse an IRD fragment: none, a preset name, fgen:..., or empirical:<path>."""
    text = text.strip()
    if text.lower() in ("none", ""):
        return None
    if allow_preset and text in PRESETS:
        spec = PRESETS[text].f_spec()
        if spec is None:
            raise ValueError(f"preset {text!r} has no dependent distribution")
        return spec
    head, _, rest = text.partition(":")
    head = head.lower()
    if head == "fgen":
        parts = rest.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected fgen:<k>:<epsilon>:<i,j,...>, got {text!r}")
        try:
            k = int(parts[0])
            epsilon = float(parts[1])
            spikes = [int(s) for s in parts[2].split(",") if s.strip() != ""]
        except ValueError as exc:
            raise ValueError(f"bad fgen fragment {text!r}: {exc}") from None
        return fgen(k, spikes, epsilon)
    if head == "empirical":
        if not rest:
            raise ValueError("empirical fragment needs a histogram path")
        from .traceio import load_empirical_histogram

        return load_empirical_histogram(rest).to_ird_spec()
    raise ValueError(f"unknown IRD fragment {text!r}")


def parse_g_fragment(text: str, universe_size: int) -> Optional[IrmSpec]:
    """Parse a popularity fragment like zipf:1.2 or pareto:2.5,1."""
    text = text.strip()
    if text.lower() in ("none", ""):
        return None
    head, _, rest = text.partition(":")
    family = head.lower()
    if family == "empirical":
        if not rest:
            raise ValueError("empirical fragment needs a histogram path")
        from .traceio import load_empirical_histogram

        return load_empirical_histogram(rest).to_irm_spec()
    try:
        params = [float(p) for p in rest.split(",") if p.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"bad popularity fragment {text!r}: {exc}") from None
    if family == "zipf":
        if len(params) > 1:
            raise ValueError("zipf takes at most one parameter (alpha)")
        return build_irm("zipf", universe_size, alpha=params[0] if params else None)
    if family == "pareto":
        if len(params) > 2:
            raise ValueError("pareto takes at most two parameters (alpha, x_m)")
        return build_irm(
            "pareto",
            universe_size,
            alpha=params[0] if params else None,
            x_m=params[1] if len(params) > 1 else None,
        )
    if family == "normal":
        if len(params) != 2:
            raise ValueError("normal requires two parameters (mu, sigma)")
        return build_irm("normal", universe_size, mu=params[0], sigma=params[1])
    if family == "uniform":
        if params:
            raise ValueError("uniform takes no parameters")
        return build_irm("uniform", universe_size)
    raise ValueError(f"unknown popularity family {head!r}")


def parse_size_dist(text: str) -> SizeDist:
    """Parse `w,w,..:v,v,..` into a weighted size distribution."""
    weights_txt, sep, values_txt = text.partition(":")
    if not sep:
        raise ValueError(f"expected `weights:values`, got {text!r}")
    try:
        weights = tuple(float(w) for w in weights_txt.split(","))
        values = tuple(int(v) for v in values_txt.split(","))
    except ValueError as exc:
        raise ValueError(f"bad size distribution {text!r}: {exc}") from None
    return SizeDist(weights=weights, values=values)


def render_size_dist(dist: SizeDist) -> str:
    weights = ",".join(_fmt_num(w) for w in dist.weights)
    values = ",".join(str(v) for v in dist.values)
    return f"{weights}:{values}"


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _render_g_params(family: str, params: dict) -> str:
    if family == "zipf":
        return f"zipf:{_fmt_num(params['alpha'])}"
    if family == "pareto":
        return f"pareto:{_fmt_num(params['alpha'])},{_fmt_num(params['x_m'])}"
    if family == "normal":
        return f"normal:{_fmt_num(params['mu'])},{_fmt_num(params['sigma'])}"
    if family == "uniform":
        return "uniform"
    raise ValueError(f"{family} distributions do not render to a fragment")


def render_g_fragment(spec: Optional[IrmSpec]) -> str:
    if spec is None:
        return "none"
    return _render_g_params(spec.family, dict(spec.params))


def render_f_fragment(spec: Optional[IrdSpec]) -> str:
    if spec is None:
        return "none"
    if spec.source != "fgen":
        raise ValueError(
            "empirical distributions render by file reference; save the histogram separately"
        )
    spikes = ",".join(str(s) for s in spec.spikes)
    return f"fgen:{spec.k}:{spec.epsilon!r}:{spikes}"


_PROFILE_KEYS = ("p_irm", "g", "f", "m", "n", "seed", "rw", "sizedist", "overlap_irm")


def parse_profile(text: str) -> TraceProfile:
    """Parse `key = value` profile text into a TraceProfile."""
    raw: dict[str, tuple[int, str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected `key = value`, got {stripped!r}")
        key = key.strip().lower()
        if key not in _PROFILE_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = (lineno, value.strip())

    def take(key: str, default=None):
        return raw.pop(key, (0, default))

    def fail(lineno: int, msg: str):
        raise ValueError(f"line {lineno}: {msg}")

    lineno, m_txt = take("m", "100")
    try:
        m = int(m_txt)
    except ValueError:
        fail(lineno, f"bad m {m_txt!r}")
    lineno, n_txt = take("n", "10000")
    try:
        n = int(n_txt)
    except ValueError:
        fail(lineno, f"bad n {n_txt!r}")
    lineno, p_txt = take("p_irm", "0")
    try:
        p_irm = float(p_txt)
    except ValueError:
        fail(lineno, f"bad p_irm {p_txt!r}")
    lineno, seed_txt = take("seed", str(DEFAULT_SEED))
    try:
        seed = int(seed_txt)
    except ValueError:
        fail(lineno, f"bad seed {seed_txt!r}")

    lineno, g_txt = take("g", "none")
    try:
        g = parse_g_fragment(g_txt, m)
    except ValueError as exc:
        fail(lineno, str(exc))
    lineno, f_txt = take("f", "none")
    try:
        f = parse_f_fragment(f_txt)
    except ValueError as exc:
        fail(lineno, str(exc))

    read_fraction = None
    lineno, rw_txt = take("rw")
    if rw_txt is not None:
        try:
            read_fraction = float(rw_txt)
        except ValueError:
            fail(lineno, f"bad rw {rw_txt!r}")

    size_dist = None
    lineno, sd_txt = take("sizedist")
    if sd_txt is not None:
        try:
            size_dist = parse_size_dist(sd_txt)
        except ValueError as exc:
            fail(lineno, str(exc))

    overlap = False
    lineno, ov_txt = take("overlap_irm")
    if ov_txt is not None:
        if ov_txt.lower() not in ("true", "false"):
            fail(lineno, f"overlap_irm must be true or false, got {ov_txt!r}")
        overlap = ov_txt.lower() == "true"

    return TraceProfile(
        p_irm=p_irm,
        g=g,
        f=f,
        m=m,
        n=n,
        seed=seed,
        read_fraction=read_fraction,
        size_dist=size_dist,
        overlap_irm=overlap,
    )


def render_profile(profile: TraceProfile) -> str:
    """Render a profile as config text that parse_profile reads back."""
    lines = [
        f"p_irm = {_fmt_num(profile.p_irm)}",
        f"g = {render_g_fragment(profile.g)}",
        f"f = {render_f_fragment(profile.f)}",
        f"m = {profile.m}",
        f"n = {profile.n}",
        f"seed = {profile.seed}",
    ]
    if profile.read_fraction is not None:
        lines.append(f"rw = {_fmt_num(profile.read_fraction)}")
    if profile.size_dist is not None:
        lines.append(f"sizedist = {render_size_dist(profile.size_dist)}")
    if profile.overlap_irm:
        lines.append("overlap_irm = true")
    return "\n".join(lines) + "\n"
