"""Command-line front end.

Every report starts with comment lines carrying the tool version and the
full run configuration, so a run can be repeated from its own output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    BoundaryData,
    ModelKind,
    SeedSpec,
    format_boundary,
    format_field,
    optimal_boundary,
    parse_boundary,
    parse_field,
    parse_rational,
    sample_boundary,
    sample_cross_field,
)


def _header(config: dict) -> str:
    return f"# hammersley {__version__}\n# config: {json.dumps(config, sort_keys=True)}\n"


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv(config: dict, rows: list[dict], path) -> None:
    buf = io.StringIO()
    buf.write(_header(config))
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    _write(path, buf.getvalue())


def _json(config: dict, record: dict, path) -> None:
    payload = {"version": __version__, "config": config, "report": record}
    _write(path, json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")


def _figure_path(args, suffix: str = ".png"):
    if getattr(args, "figure", None):
        return Path(args.figure)
    out = getattr(args, "out", None)
    if out and out != "-":
        return Path(out).with_suffix(suffix)
    return None


def _field_and_boundary(args, model: ModelKind):
    if args.field:
        field = parse_field(Path(args.field).read_text())
    else:
        field = sample_cross_field(args.n, args.m, args.p, SeedSpec(args.seed, "field"))
    if args.boundary:
        boundary = parse_boundary(Path(args.boundary).read_text(), model)
    elif args.alpha is not None:
        star = None if args.star is None else float(parse_rational(args.star))
        boundary = sample_boundary(model, field.n, field.m, float(parse_rational(args.alpha)), args.p,
                                   SeedSpec(args.seed, "boundary"), star=star)
    else:
        boundary = BoundaryData.zero(model, field.n, field.m)
    return field, boundary


# -- subcommands ------------------------------------------------------------

def cmd_sample(args, config) -> bool:
    model = ModelKind.parse(args.model)
    field, boundary = _field_and_boundary(args, model)
    text = format_field(field)
    if args.boundary_out:
        Path(args.boundary_out).write_text(format_boundary(boundary))
    elif not boundary.is_zero():
        text += format_boundary(boundary)
    _write(args.out, text)
    return True


def cmd_lines(args, config) -> bool:
    from .lines import build_lines_boundary, top_exit_count
    from .subseq import optimal_path

    model = ModelKind.parse(args.model)
    field, boundary = _field_and_boundary(args, model)
    diagram = build_lines_boundary(field, boundary, model)
    chain = optimal_path(field, boundary, model)
    record = {
        "lines": len(diagram),
        "top_exits": top_exit_count(diagram),
        "chain": chain.as_record(),
        "line_paths": [
            {"entry": list(ln.entry), "exit": list(ln.exit), "vertices": [list(v) for v in ln.vertices]}
            for ln in diagram.lines
        ],
    }
    _json(config, record, args.out)
    if args.svg:
        from .svg import render_svg

        Path(args.svg).write_text(render_svg(diagram, field))
    if args.figure:
        from .plotting import diagram_figure

        diagram_figure(diagram, field.points(), args.figure)
    return len(diagram) == chain.length


def cmd_simulate(args, config) -> bool:
    from .dynamics import evolve, format_trajectory

    model = ModelKind.parse(args.model)
    field, boundary = _field_and_boundary(args, model)
    traj = evolve(model, field, boundary)
    _write(args.trajectory, format_trajectory(traj))
    if args.figure:
        from .plotting import trajectory_figure

        trajectory_figure(traj, args.figure)
    return True


def cmd_lln(args, config) -> bool:
    from .experiments import mc_estimate

    rep = mc_estimate(args.model, args.a, args.b, args.p, args.n, args.reps, args.seed, tolerance=args.tolerance)
    _csv(config, [rep.as_row()], args.out)
    fig = _figure_path(args)
    if fig:
        from .plotting import lln_histogram

        lln_histogram(rep.samples, rep.target, fig, title=f"model {rep.model}, n={rep.n}")
    return rep.passed


def cmd_stationary(args, config) -> bool:
    from .experiments import SIGMA_BAND, stationarity_test

    model = ModelKind.parse(args.model)
    if args.alpha is None:
        alpha = optimal_boundary(model, 1.0, 1.0, args.p)[0]
    else:
        alpha = float(parse_rational(args.alpha))
    star = None if args.star is None else float(parse_rational(args.star))
    rep = stationarity_test(model, args.n, args.m, alpha, args.p, args.reps, args.seed, star=star)
    rows = [
        {"t": t, "mean": float(mu), "z": float(z)} for t, (mu, z) in enumerate(zip(rep.slice_means, rep.slice_z))
    ]
    summary = rep.as_record()
    buf_cfg = dict(config, summary=summary)
    _csv(buf_cfg, rows, args.out)
    fig = _figure_path(args)
    if fig:
        from .plotting import slice_means

        se = float(np.sqrt(rep.n * rep.alpha * (1 - rep.alpha) / rep.replicas))
        slice_means(rep.slice_means, rep.n * rep.alpha, se, fig, band=SIGMA_BAND)
    if args.out not in (None, "-"):
        print(json.dumps(summary, sort_keys=True))
    return rep.passed


def cmd_balance(args, config) -> bool:
    from .balance import pushforward_check

    rep = pushforward_check(args.model, parse_rational(args.alpha), parse_rational(args.p), K=args.K,
                            star=None if args.star is None else parse_rational(args.star))
    _json(config, rep.as_record(), args.out)
    return rep.passed


def cmd_coupling(args, config) -> bool:
    from .experiments import coupling_sweep

    spans = tuple(int(s) for s in str(args.spans).split(","))
    rep = coupling_sweep(args.trials, args.seed, N=args.N, spans=spans)
    row = rep.as_record()
    row["spans"] = ",".join(map(str, rep.spans))
    _csv(config, [row], args.out)
    ok = rep.passed
    if args.steps > 0:
        from .experiments import coupling_trace

        trace = coupling_trace(args.N, args.steps, args.alpha, args.p, args.seed, n=spans[0])
        _csv(config, trace, args.trace)
        ok = ok and all(r["holds"] for r in trace)
    return ok


def cmd_ulam(args, config) -> bool:
    from .experiments import ulam_estimate

    ks = [int(k) for k in str(args.k).split(",")]
    reports = [ulam_estimate(k, args.n, args.reps, args.seed) for k in ks]
    _csv(config, [r.as_record() for r in reports], args.out)
    fig = _figure_path(args)
    if fig:
        from .plotting import ulam_curve

        ulam_curve(ks, [r.discretized for r in reports], [r.closed_form for r in reports],
                   reports[-1].direct, fig)
    disc = [r.discretized for r in reports]
    increasing = all(b > a for a, b in zip(disc, disc[1:]))
    return increasing and all(r.coupling_ok for r in reports) and reports[-1].direct_in_band


def cmd_oracle(args, config) -> bool:
    from .experiments import chain_oracle, dynamics_oracle, dynamics_random

    reports = []
    for side in range(1, args.max_side + 1):
        reports.append(chain_oracle(side, side))
    reports.append(dynamics_oracle(min(args.max_side, 3), min(args.max_side, 3), max_sink=2))
    for model in ModelKind:
        reports.append(dynamics_random(model, args.random, args.seed))
    _csv(config, [r.as_record() for r in reports], args.out)
    return all(r.passed for r in reports)


# -- parser -----------------------------------------------------------------

def _add_field_args(sp):
    sp.add_argument("--model", default="1")
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--m", type=int, default=10)
    sp.add_argument("--p", type=float, default=0.25)
    sp.add_argument("--alpha", default=None, help="sample a Ber(alpha) source boundary with stationary sinks")
    sp.add_argument("--star", default=None, help="override the sink parameter")
    sp.add_argument("--field", default=None, help="read the field from a text file")
    sp.add_argument("--boundary", default=None, help="read the boundary from a text file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hammersley", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", default=None, help="key = value file mirroring the flags")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="report path (stdout if omitted)")
        sp.set_defaults(func=func)
        return sp

    sp = add("sample", cmd_sample, "emit a random field (and boundary)")
    _add_field_args(sp)
    sp.add_argument("--boundary-out", default=None, help="write the boundary to its own file")

    sp = add("lines", cmd_lines, "build the line diagram")
    _add_field_args(sp)
    sp.add_argument("--svg", default=None)
    sp.add_argument("--figure", default=None)

    sp = add("simulate", cmd_simulate, "run the particle dynamics")
    _add_field_args(sp)
    sp.add_argument("--trajectory", default=None, help="trajectory dump path (stdout if omitted)")
    sp.add_argument("--figure", default=None)

    sp = add("lln", cmd_lln, "Monte Carlo estimate of L/n against its limit")
    sp.add_argument("--model", default="1")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=1.0)
    sp.add_argument("--p", type=float, default=0.25)
    sp.add_argument("--n", type=int, default=500)
    sp.add_argument("--reps", type=int, default=50)
    sp.add_argument("--tolerance", type=float, default=0.02)
    sp.add_argument("--figure", default=None)

    sp = add("stationary", cmd_stationary, "stationarity battery under the stationary boundary")
    sp.add_argument("--model", default="1")
    sp.add_argument("--n", type=int, default=40)
    sp.add_argument("--m", type=int, default=40)
    sp.add_argument("--p", type=float, default=0.25)
    sp.add_argument("--alpha", default=None, help="defaults to the optimal value for a square")
    sp.add_argument("--star", default=None)
    sp.add_argument("--reps", type=int, default=2000)
    sp.add_argument("--figure", default=None)

    sp = add("balance", cmd_balance, "exact single-vertex pushforward check")
    sp.add_argument("--model", default="1")
    sp.add_argument("--alpha", required=False, default="1/2")
    sp.add_argument("--p", default="1/4")
    sp.add_argument("--star", default=None)
    sp.add_argument("--K", type=int, default=32)

    sp = add("coupling", cmd_coupling, "randomized sweep of the coupling inequality")
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--N", type=int, default=256)
    sp.add_argument("--spans", default="2,4,8")
    sp.add_argument("--steps", type=int, default=0, help="also write a per-step discrepancy trace")
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--p", type=float, default=0.25)
    sp.add_argument("--trace", default=None, help="trace CSV path (stdout if omitted)")

    sp = add("ulam", cmd_ulam, "Ulam constant estimates")
    sp.add_argument("--k", default="2,5,10,20")
    sp.add_argument("--n", type=float, default=10000)
    sp.add_argument("--reps", type=int, default=20)
    sp.add_argument("--figure", default=None)

    sp = add("oracle", cmd_oracle, "exhaustive equivalence suites")
    sp.add_argument("--max-side", type=int, default=4)
    sp.add_argument("--random", type=int, default=1000)
    return ap


def read_config(path) -> list[str]:
    """Turn a key = value file into flag tokens; '#' starts a comment."""
    tokens = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line without '=': {raw!r}")
        key = key.strip().replace("_", "-")
        tokens += [f"--{key}", value.strip()]
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValueError("--config needs a path")
    extra = read_config(argv[i + 1])
    rest = argv[:i] + argv[i + 2:]
    # file values first so explicit flags win
    return rest[:1] + extra + rest[1:]


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(argv)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    args = parser.parse_args(argv)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config")}
    try:
        ok = args.func(args, config)
    except ValueError as exc:
        print(f"hammersley {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
