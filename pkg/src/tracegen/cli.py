"""The trace-gen command-line tool.

Bare invocation generates a trace from flags; named subcommands analyze
existing traces, compare curves, render report figures, or start the tuner
service.  Standard output carries machine-readable data (one-line JSON
summaries, CSV); diagnostics go to standard error.

Exit codes: 0 success, 2 usage, 3 I/O or file-format failure, 4 validation.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import analysis, cachesim, plotting, profiles, traceio
from .generator import DEFAULT_SEED, Trace, TraceProfile, gen_from_2d
from .traceio import TraceFormatError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4

SUBCOMMANDS = ("generate", "ird", "hrc", "predict", "mae", "footprint", "report", "serve")


def main(argv: Optional[list[str]] = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    if args and args[0] in SUBCOMMANDS:
        command, rest = args[0], args[1:]
    else:
        command, rest = "generate", args
    handler = {
        "generate": _cmd_generate,
        "ird": _cmd_ird,
        "hrc": _cmd_hrc,
        "predict": _cmd_predict,
        "mae": _cmd_mae,
        "footprint": _cmd_footprint,
        "report": _cmd_report,
        "serve": _cmd_serve,
    }[command]
    try:
        return handler(rest)
    except (TraceFormatError, OSError) as exc:
        print(f"trace-gen: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"trace-gen: {message}", file=sys.stderr)
        return EXIT_VALIDATION


def _parser(name: str, description: str) -> argparse.ArgumentParser:
    return argparse.ArgumentParser(prog=f"trace-gen {name}".strip(), description=description)


def _seed_arg(text: str) -> Optional[int]:
    if text == "random":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer or 'random', got {text!r}")


def _build_profile(args, parser: argparse.ArgumentParser) -> TraceProfile:
    base: Optional[TraceProfile] = None
    if args.profile:
        base = profiles.parse_profile(Path(args.profile).read_text(encoding="utf-8"))

    m = args.m if args.m is not None else (base.m if base else None)
    n = args.n if args.n is not None else (base.n if base else None)
    if m is None or n is None:
        parser.error("both -m and -n are required (or supply --profile)")
    p_irm = args.p if args.p is not None else (base.p_irm if base else 0.0)

    if args.f is not None:
        f = profiles.parse_f_fragment(args.f)
    else:
        f = base.f if base else None
    if args.g is not None:
        g = profiles.parse_g_fragment(args.g, m)
    else:
        g = base.g if base else None
        if g is not None and g.universe_size != m and g.family != "empirical":
            g = profiles.parse_g_fragment(profiles.render_g_fragment(g), m)

    # a mixed stream defaults its popularity side; a pure one must be explicit
    if g is None and 0.0 < p_irm < 1.0:
        g = profiles.parse_g_fragment("zipf:1.2", m)
    if p_irm == 1.0 and g is None:
        parser.error("-p 1.0 is a pure popularity stream: specify -g")
    if p_irm < 1.0 and f is None:
        parser.error("p_irm < 1 needs a dependent distribution: specify -f")

    seed = args.seed
    if seed is None:  # --seed random
        seed = secrets.randbits(48)
    read_fraction = args.rw if args.rw is not None else (base.read_fraction if base else None)
    if args.sizedist is not None:
        size_dist = profiles.parse_size_dist(args.sizedist)
    else:
        size_dist = base.size_dist if base else None
    return TraceProfile(
        p_irm=p_irm,
        g=g,
        f=f,
        m=m,
        n=n,
        seed=seed,
        read_fraction=read_fraction,
        size_dist=size_dist,
        overlap_irm=args.overlap_irm or (base.overlap_irm if base else False),
    )


def _add_generate_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-m", type=int, default=None, help="footprint: working-set items")
    parser.add_argument("-n", type=int, default=None, help="trace length: references")
    parser.add_argument(
        "-f",
        default=None,
        metavar="SPEC",
        help="IRD distribution: preset name (a..g, w11, ...), fgen:<k>:<eps>:<i,j,..>, "
        "empirical:<hist.csv>, or none",
    )
    parser.add_argument(
        "-g",
        default=None,
        metavar="SPEC",
        help="popularity distribution: zipf[:a], pareto[:a[,xm]], normal:mu,sigma, "
        "uniform, empirical:<hist.csv> (default zipf:1.2 when 0 < p < 1)",
    )
    parser.add_argument("-p", type=float, default=None, metavar="P_IRM",
                        help="fraction of independent (popularity-driven) arrivals")
    parser.add_argument("--seed", type=_seed_arg, default=DEFAULT_SEED,
                        help="integer seed, or 'random' (default: fixed constant)")
    parser.add_argument("--rw", type=float, default=None, metavar="FRAC",
                        help="read fraction for op decoration")
    parser.add_argument("--sizedist", default=None, metavar="W,..:V,..",
                        help="request-size distribution, weights:block-counts")
    parser.add_argument("--profile", default=None, metavar="PATH",
                        help="profile config file; explicit flags override it")
    parser.add_argument("--overlap-irm", dest="overlap_irm", action="store_true",
                        help="let popularity arrivals share the dependent address range")


def _cmd_generate(argv: list[str]) -> int:
    parser = _parser("", "Generate a synthetic trace from profile flags.")
    _add_generate_flags(parser)
    parser.add_argument("-o", "--output", default=None, help="output path")
    parser.add_argument("--format", choices=("parda", "spc"), default="parda",
                        help="output format (default parda)")
    parser.add_argument("--block-size", type=int, default=traceio.DEFAULT_BLOCK_SIZE)
    args = parser.parse_args(argv)
    profile = _build_profile(args, parser)
    trace = gen_from_2d(profile)
    out = args.output or ("trace.bin" if args.format == "parda" else "trace.spc")
    if args.format == "parda":
        traceio.write_parda(trace, out)
    else:
        traceio.write_spc(trace, out, block_size=args.block_size)
    footprint, length = cachesim.measure_footprint(trace)
    print(json.dumps({
        "path": out,
        "format": args.format,
        "length": length,
        "footprint": footprint,
        "m": profile.m,
        "n": profile.n,
        "p_irm": profile.p_irm,
        "seed": profile.seed,
    }))
    return EXIT_OK


def _add_trace_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("trace", help="input trace file")
    parser.add_argument("--input-format", choices=("parda", "spc"), default=None,
                        help="default: by extension (.spc/.csv/.txt are text records)")
    parser.add_argument("--block-size", type=int, default=traceio.DEFAULT_BLOCK_SIZE)


def _load_trace(args) -> Trace:
    fmt = args.input_format
    if fmt is None:
        fmt = "spc" if Path(args.trace).suffix.lower() in (".spc", ".csv", ".txt") else "parda"
    if fmt == "spc":
        return traceio.read_spc(args.trace, block_size=args.block_size)
    return traceio.read_parda(args.trace)


def _cmd_ird(argv: list[str]) -> int:
    parser = _parser("ird", "Measure the inter-reference distance histogram of a trace.")
    _add_trace_input(parser)
    parser.add_argument("--bins", type=int, default=64)
    parser.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    parser.add_argument("--plot", default=None, metavar="PNG", help="also render a figure")
    args = parser.parse_args(argv)
    hist = analysis.measure_ird(_load_trace(args), bins=args.bins)
    traceio.save_histogram_csv(hist, args.output or sys.stdout)
    if args.plot:
        plotting.plot_ird([("measured", hist)], args.plot)
    return EXIT_OK


def _parse_sizes(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    try:
        return [int(s) for s in text.split(",") if s.strip() != ""]
    except ValueError:
        raise ValueError(f"bad size list {text!r}") from None


def _cmd_hrc(argv: list[str]) -> int:
    parser = _parser("hrc", "Simulate a hit-ratio curve over a size grid.")
    _add_trace_input(parser)
    parser.add_argument("--policy", default="lru", choices=cachesim.POLICIES)
    parser.add_argument("--sizes", default=None, help="comma-separated cache sizes")
    parser.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    parser.add_argument("--plot", default=None, metavar="PNG")
    args = parser.parse_args(argv)
    curve = cachesim.hrc(_load_trace(args), policy=args.policy, sizes=_parse_sizes(args.sizes))
    traceio.save_hrc_csv(curve, args.output or sys.stdout)
    if args.plot:
        plotting.plot_hrc([curve], args.plot)
    return EXIT_OK


def _cmd_predict(argv: list[str]) -> int:
    parser = _parser("predict", "Predict the LRU hit-ratio curve from measured distances.")
    _add_trace_input(parser)
    parser.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    parser.add_argument("--plot", default=None, metavar="PNG")
    args = parser.parse_args(argv)
    hist = analysis.measure_ird(_load_trace(args))
    curve = analysis.che_predict(hist).to_hrc()
    traceio.save_hrc_csv(curve, args.output or sys.stdout)
    if args.plot:
        plotting.plot_hrc([curve], args.plot)
    return EXIT_OK


def _cmd_mae(argv: list[str]) -> int:
    parser = _parser("mae", "Mean absolute error between two saved curves.")
    parser.add_argument("curve_a")
    parser.add_argument("curve_b")
    parser.add_argument("--grid", type=int, default=100, help="normalized-size grid points")
    args = parser.parse_args(argv)
    a = traceio.load_hrc_csv(args.curve_a)
    b = traceio.load_hrc_csv(args.curve_b)
    grid = np.linspace(0.01, 1.0, args.grid)
    print(json.dumps({"mae": analysis.hrc_mae(a, b, grid)}))
    return EXIT_OK


def _cmd_footprint(argv: list[str]) -> int:
    parser = _parser("footprint", "Distinct items and length of a trace.")
    _add_trace_input(parser)
    args = parser.parse_args(argv)
    footprint, length = cachesim.measure_footprint(_load_trace(args))
    print(json.dumps({"footprint": footprint, "length": length}))
    return EXIT_OK


def _cmd_report(argv: list[str]) -> int:
    parser = _parser("report", "Measure, simulate, predict, and render figures into a directory.")
    parser.add_argument("trace", nargs="?", default=None, help="input trace file")
    parser.add_argument("--input-format", choices=("parda", "spc"), default=None)
    parser.add_argument("--block-size", type=int, default=traceio.DEFAULT_BLOCK_SIZE)
    parser.add_argument("--preset", default=None, help="generate from a named preset instead")
    _add_generate_flags(parser)
    parser.add_argument("--policy", default="lru", choices=cachesim.POLICIES)
    parser.add_argument("--bins", type=int, default=64)
    parser.add_argument("-o", "--output", required=True, metavar="DIR")
    args = parser.parse_args(argv)

    generating = args.preset is not None or args.profile is not None or args.f is not None or args.p is not None
    if args.trace is not None and generating:
        parser.error("give either a trace file or generation flags, not both")
    if args.trace is None and not generating:
        parser.error("give a trace file, --preset, --profile, or generation flags")
    if args.trace is not None:
        trace = _load_trace(args)
        label = Path(args.trace).name
    else:
        if args.preset:
            preset = profiles.get_preset(args.preset)
            m = args.m if args.m is not None else 10_000
            n = args.n if args.n is not None else 1_000_000
            seed = args.seed if args.seed is not None else secrets.randbits(48)
            profile = preset.instantiate(m, n, seed=seed)
            label = f"preset {args.preset}"
        else:
            profile = _build_profile(args, parser)
            label = "profile"
        trace = gen_from_2d(profile)

    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    hist = analysis.measure_ird(trace, bins=args.bins)
    curve = cachesim.hrc(trace, policy=args.policy)
    predicted = analysis.che_predict(hist).to_hrc()
    footprint, length = cachesim.measure_footprint(trace)

    traceio.save_histogram_csv(hist, outdir / "ird.csv")
    traceio.save_hrc_csv(curve, outdir / "hrc.csv")
    traceio.save_hrc_csv(predicted, outdir / "predicted.csv")
    plotting.plot_hrc([curve, predicted], str(outdir / "hrc.png"),
                      labels=[args.policy, "predicted"], title=label)
    panels = [("merged", hist)]
    if trace.sources is not None:
        from .generator import SRC_DEPENDENT, SRC_INDEPENDENT, SRC_SINGLETON

        dep_mask = (trace.sources == SRC_DEPENDENT) | (trace.sources == SRC_SINGLETON)
        ind_mask = trace.sources == SRC_INDEPENDENT
        if dep_mask.any() and ind_mask.any():
            panels = [
                ("dependent", analysis.measure_ird(Trace(refs=trace.refs[dep_mask]), bins=args.bins)),
                ("independent", analysis.measure_ird(Trace(refs=trace.refs[ind_mask]), bins=args.bins)),
                ("merged", hist),
            ]
    plotting.plot_ird(panels, str(outdir / "ird.png"), title=label)
    gap = analysis.concavity_gap(curve) if curve.sizes.size >= 3 else 0.0
    print(json.dumps({
        "output_dir": str(outdir),
        "footprint": footprint,
        "length": length,
        "policy": args.policy,
        "concavity_gap": gap,
        "predicted_vs_simulated_mae": analysis.hrc_mae(curve, predicted),
        "files": ["ird.csv", "hrc.csv", "predicted.csv", "hrc.png", "ird.png"],
    }))
    return EXIT_OK


def _cmd_serve(argv: list[str]) -> int:
    import os

    parser = _parser("serve", "Run the interactive tuner HTTP service.")
    parser.add_argument("--bind", default=os.environ.get("TRACEGEN_BIND", "127.0.0.1"))
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("TRACEGEN_PORT", "8710")))
    args = parser.parse_args(argv)
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.bind, port=args.port, log_level="info")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
