"""Command-line front end.

Exit codes: 0 on success, 1 on bad input, 2 when a verification verdict
fails (an equivalence gap above tolerance, a Wulff violation, a negative
Brunn-Minkowski margin).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .construction import check_equivalence, fu_shape, wulff_shape
from .duality import polar
from .energy import (
    DEFAULT_H,
    extrapolate_limit,
    growth_derivative,
    optimality_trial,
    random_competitor,
    scale_to_volume,
    surface_energy,
)
from .errors import WulffError
from .geometry import TOL, volume
from .integrand import load_integrand
from .rearrangement import brunn_minkowski_margin, iterate_symmetrizations, steiner_3d

VERDICT_FAILED = 2


class InputError(WulffError):
    pass


def _require_seed(args) -> int:
    if args.seed is None:
        raise InputError(f"{args.command} is randomized and requires an explicit --seed")
    return args.seed


def _out(args) -> Path:
    return Path(args.out)


def _polytope_name(P, stem: str, fmt_name: str | None) -> tuple[str, str]:
    fmt_name = fmt_name or ("off" if P.dim == 3 else "csv")
    if fmt_name == "off" and P.dim == 2:
        raise InputError("OFF output needs a 3-D body; use --format csv, svg or json")
    if fmt_name in ("csv", "svg") and P.dim == 3:
        raise InputError(f"--format {fmt_name} needs a 2-D body; use off or json")
    return f"{stem}.{fmt_name}", fmt_name


def _write_body(P, args, stem: str) -> Path:
    name, fmt_name = _polytope_name(P, stem, args.format)
    return io.write_polytope(P, _out(args) / name, fmt_name)


def _write_report(args, name: str, doc: dict) -> None:
    text = io.dump_json(doc)
    io.atomic_write(_out(args) / name, text)
    sys.stdout.write(text)


def cmd_build(args) -> int:
    I = load_integrand(args.integrand)
    W = wulff_shape(I)
    if W.dim == 2 and args.format == "svg":
        io.emit_svg(W, _out(args) / "wulff.svg", overlay=fu_shape(I, args.samples))
    else:
        _write_body(W, args, "wulff")
    rep = surface_energy(W, I)
    doc = {
        "dimension": W.dim,
        "vertices": len(W.vertices),
        "facets": len(W.facets),
        "redundant": list(W.redundant),
        **rep.to_dict(),
    }
    _write_report(args, "report.json", doc)
    return 0


def cmd_check_equivalence(args) -> int:
    I = load_integrand(args.integrand)
    rep = check_equivalence(I, args.samples, args.tol)
    _write_report(args, "equivalence.json", rep.to_dict())
    return 0 if rep.verdict else VERDICT_FAILED


def cmd_polar(args) -> int:
    P = io.read_polytope(args.input)
    Q = polar(P)
    _write_body(Q, args, "polar")
    _write_report(args, "polar.json", {
        "input_volume": volume(P),
        "polar_volume": volume(Q),
        "vertices": len(Q.vertices),
        "facets": len(Q.facets),
    })
    return 0


def _body_from(args):
    if args.input:
        return io.read_polytope(args.input)
    if args.integrand:
        return wulff_shape(load_integrand(args.integrand))
    raise InputError("give a body with --input or --integrand")


def cmd_symmetrize(args) -> int:
    seed = _require_seed(args)
    B = _body_from(args)
    body, trace = iterate_symmetrizations(B, seed, args.count)
    _write_body(body, args, "symmetrized")
    io.atomic_write(_out(args) / "asphericity.csv",
                    "step,asphericity\n" + "".join(f"{k},{io.fmt(a)}\n" for k, a in enumerate(trace)))
    doc = {
        "count": args.count,
        "seed": seed,
        "input_volume": volume(B),
        "output_volume": volume(body),
        "final_asphericity": trace[-1],
    }
    if B.dim == 3:
        slab = steiner_3d(B, np.random.default_rng(seed).normal(size=3), args.resolution)
        doc["slab_resolution"] = args.resolution
        doc["slab_volume"] = slab.volume
    _write_report(args, "symmetrize.json", doc)
    return 0


def cmd_brunn_minkowski(args) -> int:
    rows = []
    if args.a and args.b:
        rows.append((io.read_polytope(args.a), io.read_polytope(args.b)))
    else:
        seed = _require_seed(args)
        for k in range(args.pairs):
            rng = np.random.default_rng(seed ^ k)
            rows.append((random_competitor(rng, args.dim, args.complexity),
                         random_competitor(rng, args.dim, args.complexity)))
    lines = ["pair,volume_a,volume_b,margin"]
    worst = np.inf
    for k, (A, B) in enumerate(rows):
        m = brunn_minkowski_margin(A, B)
        worst = min(worst, m)
        lines.append(f"{k},{io.fmt(volume(A))},{io.fmt(volume(B))},{io.fmt(m)}")
    io.atomic_write(_out(args) / "brunn_minkowski.csv", "\n".join(lines) + "\n")
    _write_report(args, "brunn_minkowski.json", {"pairs": len(rows), "min_margin": worst})
    return 0 if worst >= -args.tol else VERDICT_FAILED


def cmd_energy(args) -> int:
    I = load_integrand(args.integrand)
    P = io.read_polytope(args.input) if args.input else wulff_shape(I)
    _write_report(args, "energy.json", surface_energy(P, I).to_dict())
    return 0


def cmd_derivative(args) -> int:
    I = load_integrand(args.integrand)
    W = wulff_shape(I)
    P = io.read_polytope(args.input) if args.input else W
    P = scale_to_volume(P, volume(W))
    pairs = growth_derivative(P, I, args.h)
    _write_report(args, "derivative.json", {
        "slopes": [{"h": h, "slope": s} for h, s in pairs],
        "extrapolated_limit": extrapolate_limit(pairs),
        "surface_energy": surface_energy(P, I).surface_energy,
        "lower_bound": W.dim * volume(W),
    })
    return 0


def cmd_optimality(args) -> int:
    seed = _require_seed(args)
    I = load_integrand(args.integrand)
    rep = optimality_trial(I, args.trials, args.complexity, seed, tol=args.tol)
    counts, edges = rep.histogram_counts, rep.histogram_edges
    io.atomic_write(_out(args) / "histogram.csv", "lo,hi,count\n" + "".join(
        f"{io.fmt(edges[i])},{io.fmt(edges[i + 1])},{c}\n" for i, c in enumerate(counts)))
    _write_report(args, "optimality.json", rep.to_dict())
    return 0 if rep.violations == 0 else VERDICT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=".")
    common.add_argument("--format", choices=["off", "csv", "svg", "json"], default=None)

    parser = argparse.ArgumentParser(prog="wulff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="Wulff shape of an integrand")
    p.add_argument("--integrand", required=True)
    p.add_argument("--samples", type=int, default=360,
                   help="radial samples for the SVG overlay")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check-equivalence", parents=[common], help="half-space vs radial construction")
    p.add_argument("--integrand", required=True)
    p.add_argument("--samples", type=int, default=720)
    p.set_defaults(func=cmd_check_equivalence)

    p = sub.add_parser("polar", parents=[common], help="polar body of a polytope file")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_polar)

    p = sub.add_parser("symmetrize", parents=[common], help="random Steiner symmetrizations")
    p.add_argument("--input")
    p.add_argument("--integrand")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--resolution", type=int, default=128)
    p.set_defaults(func=cmd_symmetrize)

    p = sub.add_parser("brunn-minkowski", parents=[common], help="Brunn-Minkowski margins")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--pairs", type=int, default=100)
    p.add_argument("--dim", type=int, choices=[2, 3], default=2)
    p.add_argument("--complexity", type=int, default=12)
    p.set_defaults(func=cmd_brunn_minkowski)

    p = sub.add_parser("energy", parents=[common], help="surface energy of a body")
    p.add_argument("--integrand", required=True)
    p.add_argument("--input")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("derivative", parents=[common], help="growth derivative |P + hW|")
    p.add_argument("--integrand", required=True)
    p.add_argument("--input")
    p.add_argument("--h", type=float, nargs="+", default=list(DEFAULT_H))
    p.set_defaults(func=cmd_derivative)

    p = sub.add_parser("optimality", parents=[common], help="randomized Wulff optimality trial")
    p.add_argument("--integrand", required=True)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--complexity", type=int, default=12)
    p.set_defaults(func=cmd_optimality)
    return parser


def _validate(args) -> None:
    if args.tol is not None and not args.tol > 0:
        raise InputError("--tol must be positive")
    if args.command != "check-equivalence" and args.tol is None:
        args.tol = TOL


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        _validate(args)
        return args.func(args)
    except (WulffError, OSError, KeyError, ValueError) as exc:
        print(f"wulff {args.command}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
