"""Command-line orchestration: construct nested families, run the seeded
verification suites, drive the iterated-winding convergence checks, and
render half-plane figures.

Exit codes: 0 all checks pass, 1 a quantitative bound was violated,
2 usage, I/O, or construction errors.

File formats (schema 1): sequences and runs are JSON with every real
written as decimal text at 17 significant digits (lossless binary64
round-trip, human-diffable); convergence reports are CSV with header
``t,n_star,d1_upper,d2_upper,bound,level``; figures are static SVG 1.1
with heights log-compressed above 10 so deep crossings stay visible.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .plane import BoundaryPoint
from .moebius import AxisData, MoebiusMap
from .schottky import (
    DepthOverflowError,
    NestedSequence,
    NestedSpec,
    SpecInvalidError,
    build_nested,
    validate_nested,
)
from .checks import run_all_suites
from .walpha import (
    AlphaRun,
    ConvergenceReport,
    InsufficientDepthError,
    diagonal_avoid,
    diagonal_margins,
    run_alpha,
    verify_wss,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

SCHEMA = 1


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def sequence_to_dict(seq: NestedSequence) -> dict:
    return {
        "meta": {"schema": SCHEMA, "kind": "sequence"},
        "generators": [
            {"a": _fmt(g.a), "b": _fmt(g.b), "c": _fmt(g.c), "d": _fmt(g.d)}
            for g in seq.gens
        ],
        "lengths": [_fmt(l) for l in seq.lengths],
        "axes": [
            {"minus": _fmt(ax.minus.x), "plus": _fmt(ax.plus.x)} for ax in seq.axes
        ],
        "scales_log": [_fmt(t) for t in seq.t],
    }


def sequence_from_dict(data: dict) -> NestedSequence:
    meta = data.get("meta", {})
    if meta.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {meta.get('schema')!r}")
    gens = [
        MoebiusMap.from_entries(float(g["a"]), float(g["b"]), float(g["c"]), float(g["d"]))
        for g in data["generators"]
    ]
    lengths = [float(l) for l in data["lengths"]]
    axes = [
        AxisData(
            minus=BoundaryPoint(float(ax["minus"])),
            plus=BoundaryPoint(float(ax["plus"])),
            length=l,
        )
        for ax, l in zip(data["axes"], lengths)
    ]
    t = [float(v) for v in data["scales_log"]]
    if not (len(gens) == len(lengths) == len(axes) == len(t)) or not gens:
        raise ValueError("inconsistent or empty sequence file")
    intervals = []
    for ax in axes:
        a = ax.plus.x
        lo = a * math.tanh(ax.length / 4.0)
        hi = a / math.tanh(ax.length / 4.0)
        intervals.append(((-hi, -lo), (lo, hi)))
    return NestedSequence(gens=gens, axes=axes, t=t, intervals=intervals)


def run_to_dict(seq: NestedSequence, pick: list[int]) -> dict:
    return {
        "meta": {"schema": SCHEMA, "kind": "run"},
        "sequence": sequence_to_dict(seq),
        "pick": list(pick),
    }


def _dump_json(data: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def report_to_csv(report: ConvergenceReport, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("t,n_star,d1_upper,d2_upper,bound,level\n")
        for t, n_star, v1, v2, bound, level in report.rows():
            fh.write(
                f"{_fmt(t)},{n_star},{_fmt(v1)},{_fmt(v2)},{_fmt(bound)},{level}\n"
            )


# ---------------------------------------------------------------- figures

_W, _H = 840, 560
_MARGIN = 42.0
_COMPRESS_KNEE = 10.0


def _compress(v: float) -> float:
    a = abs(v)
    c = a if a <= _COMPRESS_KNEE else _COMPRESS_KNEE * (1.0 + math.log(a / _COMPRESS_KNEE))
    return math.copysign(c, v)


def _svg_figure(seq: NestedSequence, run: AlphaRun | None) -> str:
    xmax = max(_compress(ax.plus.x) for ax in seq.axes) * 1.05
    ymax = xmax
    sx = lambda x: _MARGIN + (x + xmax) / (2.0 * xmax) * (_W - 2 * _MARGIN)
    sy = lambda y: (_H - _MARGIN) - y / ymax * (_H - 2 * _MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_MARGIN:.3f}" y1="{sy(0.0):.3f}" x2="{_W - _MARGIN:.3f}" '
        f'y2="{sy(0.0):.3f}" stroke="black" stroke-width="1"/>',
    ]
    # Reference vertical ray.
    parts.append(
        f'<line x1="{sx(0.0):.3f}" y1="{sy(0.0):.3f}" x2="{sx(0.0):.3f}" '
        f'y2="{sy(ymax):.3f}" stroke="#c02020" stroke-width="1.5"/>'
    )
    # Axis semicircles, sampled through the compression map.
    for ax in seq.axes:
        radius = ax.plus.x
        pts = []
        for k in range(129):
            th = math.pi * k / 128.0
            x = _compress(radius * math.cos(th))
            y = _compress(radius * math.sin(th))
            pts.append(f"{sx(x):.3f},{sy(y):.3f}")
        parts.append(
            '<path d="M ' + " L ".join(pts) + '" fill="none" stroke="#2040c0" stroke-width="1"/>'
        )
    # Crossing-height labels on the ray.
    for n, ax in enumerate(seq.axes):
        y = _compress(ax.plus.x)
        parts.append(
            f'<text x="{sx(0.0) + 5:.3f}" y="{sy(y) - 3:.3f}" font-size="11" '
            f'fill="#444444">t{n} = {math.log(ax.plus.x):.3f}</text>'
        )
    # Wound ray of the deepest run vector.
    if run is not None:
        v = run.v[-1]
        t_top = math.log(max(ax.plus.x for ax in seq.axes)) + 1.5
        pts = []
        steps = 400
        for k in range(steps + 1):
            t = t_top * k / steps
            p = v.point_at(t)
            pts.append(f"{sx(_compress(p.x)):.3f},{sy(_compress(p.y)):.3f}")
        parts.append(
            '<polyline points="' + " ".join(pts) + '" fill="none" stroke="#108030" stroke-width="1.5"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------- commands

def _cmd_construct(args) -> int:
    lengths = None
    if args.lengths is not None:
        try:
            lengths = tuple(float(x) for x in args.lengths.split(","))
        except ValueError:
            print(f"construct: cannot parse lengths {args.lengths!r}", file=sys.stderr)
            return EXIT_USAGE
    spec = NestedSpec(
        depth=args.depth,
        lengths=lengths,
        first_scale=args.first_scale,
        margin=args.margin,
    )
    try:
        seq = build_nested(spec)
    except (SpecInvalidError, DepthOverflowError) as exc:
        print(f"construct: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _dump_json(sequence_to_dict(seq), args.out)
    print(f"wrote {len(seq)} generators to {args.out}")
    return EXIT_OK


def _cmd_check(args) -> int:
    if args.trials <= 0:
        print("check: --trials must be positive", file=sys.stderr)
        return EXIT_USAGE
    if not (0.0 < args.step <= 1.0) or args.t_max <= 0:
        print("check: need t-max > 0 and step in (0, 1]", file=sys.stderr)
        return EXIT_USAGE
    results = run_all_suites(args.seed, args.trials, t_max=args.t_max, step=args.step)
    payload = {
        "meta": {
            "schema": SCHEMA,
            "kind": "check-report",
            "seed": args.seed,
            "trials": args.trials,
            "t_max": _fmt(args.t_max),
            "step": _fmt(args.step),
        },
        "suites": [
            {
                "suite": r.suite,
                "trials": r.trials,
                "worst_slack": _fmt(r.worst_slack),
                "violations": r.violations,
            }
            for r in results
        ],
    }
    _dump_json(payload, args.out)
    total = sum(r.violations for r in results)
    for r in results:
        status = "pass" if r.violations == 0 else f"FAIL ({r.violations})"
        print(f"{r.suite:24s} trials={r.trials:<7d} worst_slack={r.worst_slack:+.3e}  {status}")
    return EXIT_OK if total == 0 else EXIT_VIOLATION


def _load_sequence(path: str) -> NestedSequence:
    data = _load_json(path)
    if data.get("meta", {}).get("kind") == "run":
        data = data["sequence"]
    return sequence_from_dict(data)


def _cmd_walpha(args) -> int:
    try:
        seq = _load_sequence(args.sequence)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"walpha: cannot load {args.sequence}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    vrep = validate_nested(seq)
    if not vrep.ok:
        print(f"walpha: sequence fails validation: {vrep.failures}", file=sys.stderr)
        return EXIT_USAGE

    if args.avoid is not None:
        try:
            targets = [float(x) for x in args.avoid.split(",")]
        except ValueError:
            print(f"walpha: cannot parse targets {args.avoid!r}", file=sys.stderr)
            return EXIT_USAGE
        try:
            pick = diagonal_avoid(seq, targets)
        except InsufficientDepthError as exc:
            print(f"walpha: {exc}", file=sys.stderr)
            return EXIT_USAGE
        margins = diagonal_margins(seq, pick, targets)
        print(f"avoid pick: {pick}")
        for x, gap in zip(targets, margins.endpoint_gaps):
            print(f"  endpoint gap to {x:g}: {gap:.6g}")
    elif args.pick is not None:
        try:
            pick = [int(x) for x in args.pick.split(",")]
        except ValueError:
            print(f"walpha: cannot parse pick {args.pick!r}", file=sys.stderr)
            return EXIT_USAGE
    else:
        pick = list(range(len(seq)))

    try:
        run = run_alpha(seq, pick)
    except (IndexError, ArithmeticError) as exc:
        print(f"walpha: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = verify_wss(run, args.t_max, args.step, args.levels)
    report_to_csv(report, args.csv)
    if args.run_out:
        _dump_json(run_to_dict(seq, pick), args.run_out)
    print(
        f"depth={len(run)} grid={len(report.ts)} levels={report.levels} "
        f"T={['%.2f' % t for t in report.T_levels]} pass={report.passed}"
    )
    if not report.passed:
        for t, level, value in report.violations[:10]:
            print(f"  violation at t={t:g} level={level}: {value:.6g}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_plot(args) -> int:
    try:
        data = _load_json(args.input)
        run = None
        if data.get("meta", {}).get("kind") == "run":
            seq = sequence_from_dict(data["sequence"])
            run = run_alpha(seq, [int(i) for i in data["pick"]])
        else:
            seq = sequence_from_dict(data)
    except (OSError, ValueError, KeyError, IndexError, json.JSONDecodeError) as exc:
        print(f"plot: cannot load {args.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    svg = _svg_figure(seq, run)
    try:
        with open(args.svg, "w") as fh:
            fh.write(svg)
    except OSError as exc:
        print(f"plot: cannot write {args.svg}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {args.svg}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypwind",
        description="nested short-geodesic families and winding-bound verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a nested family and write it as JSON")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--first-scale", type=float, default=math.e)
    p.add_argument("--margin", type=float, default=4.0)
    p.add_argument("--lengths", type=str, default=None,
                   help="comma-separated translation lengths (default: 2^-(2n+3))")
    p.add_argument("--out", type=str, default="seq.json")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("check", help="run the seeded verification suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--t-max", type=float, default=20.0)
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--out", type=str, default="report.json")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("walpha", help="iterated winding run and convergence report")
    p.add_argument("sequence", type=str)
    p.add_argument("--pick", type=str, default=None,
                   help="comma-separated generator indices (default: all)")
    p.add_argument("--avoid", type=str, default=None,
                   help="comma-separated boundary targets the endpoint must avoid")
    p.add_argument("--t-max", type=float, default=25.0)
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--csv", type=str, default="walpha.csv")
    p.add_argument("--run-out", type=str, default=None,
                   help="also write the run (sequence + pick) as JSON")
    p.set_defaults(func=_cmd_walpha)

    p = sub.add_parser("plot", help="render a sequence or run as SVG")
    p.add_argument("input", type=str)
    p.add_argument("--svg", type=str, default="figure.svg")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
