"""Command line interface.

Exit codes: 0 success, 2 input error, 3 semantic invariant violation,
4 mathematical refusal or failed verification.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import configio
from .configio import InvariantError, ParseError
from .errors import DimensionMismatch, RigidityError
from .generate import STRUCTURES, generate_instance
from .inversive import ExtendedPoint, HalfSpace, Sphere, lift_point
from .minkowski import CausalClass, gram_matrix, validate_lorentz
from .render import render_svg
from .solver import (
    Kind,
    classify_uniqueness,
    detect_common_boundary,
    full_cross_ratio_check,
    scaled_point_frames,
    side_assignments,
    solve_balls,
    solve_points,
    verify_correspondence,
)

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_REFUSED = 0, 2, 3, 4

log = logging.getLogger("mobius_rigidity")


class UsageError(Exception):
    pass


def _item_dict(x):
    if isinstance(x, Sphere):
        return {"type": "sphere", "center": list(x.center), "radius": x.radius, "side": x.side.value}
    if isinstance(x, HalfSpace):
        return {"type": "halfspace", "normal": list(x.normal), "offset": x.offset}
    if isinstance(x, ExtendedPoint):
        return {"type": "infinity"} if x.is_infinite else {"type": "finite", "coords": list(x.coords)}
    if x is None:
        return None
    return {"type": "vector", "coords": [float(c) for c in np.asarray(x)]}


def _describe(x):
    d = _item_dict(x)
    if d is None:
        return "none"
    if d["type"] == "sphere":
        return f"sphere center={d['center']} radius={d['radius']:.12g} ({d['side']})"
    if d["type"] == "halfspace":
        return f"half-space normal={d['normal']} offset={d['offset']:.12g}"
    if d["type"] == "infinity":
        return "the point at infinity"
    return f"{d['type']} {d['coords']}"


def _plain(o):
    # numpy scalars that slipped into a payload
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, default=_plain))
    else:
        print(text)


def _format_matrix(labels, G):
    w = max(10, *(len(x) for x in labels)) + 2
    head = " " * w + "".join(f"{x:>{w}}" for x in labels)
    rows = [f"{a:>{w}}" + "".join(f"{v:>{w}.6g}" for v in row) for a, row in zip(labels, G)]
    return "\n".join([head, *rows])


def _pair(args):
    A = configio.load_config(args.a)
    B = configio.load_config(args.b)
    if A.dim != B.dim:
        raise UsageError(f"dimensions differ: {A.dim} vs {B.dim}")
    if A.kind is not B.kind:
        raise UsageError(f"kinds differ: {A.kind.value} vs {B.kind.value}")
    if A.labels != B.labels:
        if len(A) != len(B):
            raise UsageError(f"configurations have {len(A)} and {len(B)} items")
        log.warning("labels differ; items are matched by position")
    return A, B


def cmd_gram(args):
    conf = configio.load_config(args.config)
    if conf.kind is Kind.BALLS:
        G = gram_matrix(conf.lifts())
        what = "signed inversive distance"
    else:
        G = gram_matrix(np.array([lift_point(p) for p in conf.items]))
        what = "chordal Gram <u_a, u_b> = -|a - b|^2 / 2"
    _emit(args, {"kind": conf.kind.value, "labels": list(conf.labels), "matrix": G.tolist()},
          f"# {what}\n{_format_matrix(conf.labels, G)}")
    return EXIT_OK


def cmd_solve(args):
    A, B = _pair(args)
    if A.kind.value != args.kind:
        raise UsageError(f"'solve {args.kind}' given {A.kind.value} configurations")
    solve = solve_balls if A.kind is Kind.BALLS else solve_points
    out = solve(A, B, tol=args.tol)
    rep = validate_lorentz(out.map)
    payload = configio.map_to_dict(out.map, A.dim)
    payload.update(out.to_dict())
    payload["lorentz_residual"] = rep.residual
    payload["witness"] = _item_dict(out.witness)
    if args.output:
        configio.save_map(out.map, A.dim, args.output)
    lines = [
        f"mode: {out.mode.value}",
        f"uniqueness: {out.uniqueness.value}",
        f"residual_gram: {out.residual_gram:.3g}",
        f"residual_match: {out.residual_match:.3g}",
        f"lorentz_residual: {rep.residual:.3g}",
        "matrix:",
        *("  " + " ".join(f"{v: .12g}" for v in row) for row in out.map.matrix),
    ]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args):
    conf = configio.load_config(args.config)
    rep = classify_uniqueness(conf)
    payload = {
        "kind": conf.kind.value,
        "span": {"kind": rep.span.kind.value, "dim": rep.span.dim},
        "uniqueness": rep.kind.value,
        "witness": _item_dict(rep.witness),
    }
    lines = [f"span: {rep.span.kind.value}, dim {rep.span.dim} (ambient {conf.ambient})"]
    if conf.kind is Kind.BALLS:
        common, _ = detect_common_boundary(conf)
        payload["common_boundary_point"] = common
        lines.append(f"common boundary point: {'yes' if common else 'no'}")
    lines.append(f"uniqueness: {rep.kind.value}")
    if rep.witness is not None:
        lines.append(f"witness: {_describe(rep.witness)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_apply(args):
    g = configio.load_map(args.map)
    conf = configio.load_config(args.config)
    if g.dim != conf.ambient:
        raise UsageError(f"map of size {g.dim} does not act on dimension {conf.dim}")
    print(configio.dumps(configio.config_to_dict(conf.transformed(g))), end="")
    return EXIT_OK


def _verify_invariants(args, A, B):
    payload = {"map": None}
    lines = []
    ok = True
    if A.kind is Kind.BALLS:
        V, W = A.lifts(), B.lifts()
        G, H = gram_matrix(V), gram_matrix(W)
        tol = args.tol if args.tol is not None else 1e-8 * (1 + np.max(np.abs(G)))
        signed = float(np.max(np.abs(G - H)))
        unsigned = float(np.max(np.abs(np.abs(G) - np.abs(H))))
        ok = signed <= tol
        payload.update(signed_discrepancy=signed, unsigned_discrepancy=unsigned, tol=tol)
        lines += [f"signed inversive distances: max discrepancy {signed:.3g} (tol {tol:.3g})",
                  f"unsigned inversive distances: max discrepancy {unsigned:.3g}"]
        if not ok and len(B) <= 16:
            assigns = side_assignments(A, B)
            payload["side_assignments"] = [
                {"complemented": [lab for lab, f in zip(B.labels, a.flips) if f],
                 "max_discrepancy": a.max_discrepancy, "match": a.max_discrepancy <= tol}
                for a in assigns
            ]
            n_match = sum(a.max_discrepancy <= tol for a in assigns)
            lines.append(f"side assignments of B: {len(assigns)} tried, {n_match} give signed equality")
            for a in assigns:
                flipped = [lab for lab, f in zip(B.labels, a.flips) if f] or ["-"]
                lines.append(f"  complement {','.join(flipped)}: max discrepancy {a.max_discrepancy:.3g}")
    else:
        if len(A) >= 3:
            V, W = scaled_point_frames(A, B)
            G = gram_matrix(W)
            tol = args.tol if args.tol is not None else 1e-8 * (1 + np.max(np.abs(G)))
            res = float(np.max(np.abs(gram_matrix(V) - G)))
            ok = res <= tol
            payload.update(rescaled_gram_discrepancy=res, tol=tol)
            lines.append(f"rescaled light-ray Gram: max discrepancy {res:.3g} (tol {tol:.3g})")
        else:
            lines.append("fewer than three points: always Mobius equivalent")
        if args.full_cross_ratios:
            if len(A) < 4:
                lines.append("fewer than four points: no cross-ratios to compare")
            else:
                rep = full_cross_ratio_check(A, B, tol=args.tol if args.tol is not None else 1e-9)
                ok = ok and rep.passed
                payload["cross_ratios"] = {"max_discrepancy": rep.max_discrepancy, "witness": list(rep.witness),
                                           "tuples_checked": rep.tuples_checked, "passed": rep.passed}
                lines.append(f"cross-ratios over {rep.tuples_checked} ordered 4-tuples: max discrepancy "
                             f"{rep.max_discrepancy:.3g} at ({', '.join(rep.witness)})")
    return ok, payload, lines


def cmd_verify(args):
    A, B = _pair(args)
    if args.map:
        g = configio.load_map(args.map)
        if g.dim != A.ambient:
            raise UsageError(f"map of size {g.dim} does not act on dimension {A.dim}")
        rep = verify_correspondence(A, B, g, tol=args.tol)
        worst = int(np.argmax(rep.errors)) if rep.errors else None
        payload = {
            "passed": rep.passed,
            "mode": rep.mode.value if rep.mode else None,
            "errors": dict(zip(A.labels, rep.errors)),
            "max_error": rep.max_error,
            "gram_residual": rep.gram_residual,
            "reason": rep.reason,
        }
        lines = [f"mode: {payload['mode']}", f"max item error: {rep.max_error:.3g}"
                 + (f" ({A.labels[worst]})" if worst is not None else ""),
                 f"invariant residual: {rep.gram_residual:.3g}"]
        if rep.reason:
            lines.append(f"reason: {rep.reason}")
        ok = rep.passed
    else:
        ok, payload, lines = _verify_invariants(args, A, B)
    payload["passed"] = ok
    lines.append("PASS" if ok else "FAIL")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_REFUSED


def cmd_generate(args):
    try:
        A, B, g = generate_instance(args.kind, args.n, args.dim, args.seed, args.structure, args.flip)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"A": out / f"{args.prefix}A.json", "B": out / f"{args.prefix}B.json",
             "map": out / f"{args.prefix}map.json"}
    configio.save_config(A, paths["A"])
    configio.save_config(B, paths["B"])
    configio.save_map(g, args.dim, paths["map"])
    _emit(args, {k: str(v) for k, v in paths.items()}, "\n".join(f"{k}: {v}" for k, v in paths.items()))
    return EXIT_OK


def cmd_render(args):
    conf = configio.load_config(args.config)
    if conf.dim != 2:
        raise UsageError(f"render needs dim 2, got {conf.dim}")
    svg = render_svg(conf, title=Path(args.config).name)
    if args.output:
        Path(args.output).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="comparison tolerance")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (generate)")

    p = argparse.ArgumentParser(prog="mobius-rigidity", parents=[common], description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gram", parents=[common], help="pairwise invariant table")
    s.add_argument("config")
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("solve", parents=[common], help="find the Mobius map between two configurations")
    s.add_argument("kind", choices=["balls", "points"])
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-o", "--output", help="write the map JSON here")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("classify", parents=[common], help="span class and uniqueness")
    s.add_argument("config")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("apply", parents=[common], help="apply a map file to a configuration")
    s.add_argument("map")
    s.add_argument("config")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("verify", parents=[common], help="compare invariants or check a map")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--map")
    s.add_argument("--full-cross-ratios", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("generate", parents=[common], help="random configuration and its image")
    s.add_argument("--kind", choices=["balls", "points"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--structure", choices=STRUCTURES, default="full")
    s.add_argument("--flip", action="store_true", help="complement every ball of B")
    s.add_argument("--out", default=".")
    s.add_argument("--prefix", default="")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("render", parents=[common], help="SVG drawing of a planar configuration")
    s.add_argument("config")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    for name, default in (("tol", None), ("json", False), ("seed", 0)):
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, UsageError, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except RigidityError as exc:
        if args.json:
            print(json.dumps(exc.to_dict(), indent=2))
        else:
            print(f"{exc.name}: {exc}")
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
