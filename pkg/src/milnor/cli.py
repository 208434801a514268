"""Command-line interface: one binary, batch subcommands, JSON in and out.

Output is deterministic: keys sorted, floats printed to 12 significant
digits.  Exit codes: 0 success, 1 domain/model error, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from sympy import Matrix, Rational

from . import geometry, motivic, plotting, simplicial
from .cocubical import (
    CocubicalSystem,
    FDComplex,
    SimplicialComplex,
    adjunction_system,
    quasi_iso_check,
    simple_complex,
)
from .errors import MilnorError, ParseError
from .series_expr import parse_series
from .strata import StrataModel, load


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(obj) -> None:
    print(json.dumps(_round_floats(obj), sort_keys=True, indent=2))


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> None:
    model = load(args.model)
    _emit(
        {
            "ok": True,
            "components": list(model.components),
            "strata": len(model.strata),
        }
    )


def _dot_output(model: StrataModel) -> str:
    g = plotting.skeleton_graph(model)
    lines = ["graph skeleton {"]
    for node in sorted(g.nodes):
        lines.append(f'  "{node}" [label="{node}"];')
    for u, v, key in sorted(g.edges(keys=True)):
        lines.append(f'  "{u}" -- "{v}" [label="{key}"];')
    lines.append("}")
    return "\n".join(lines)


def cmd_complex(args) -> None:
    model = load(args.model)
    if args.emit_model:
        _emit(model.to_dict())
        return
    if args.dot:
        print(_dot_output(model))
        return
    dx = simplicial.build_DX(model)
    top = dx.top_nondegenerate_dim()
    # each cell corresponds to a stratum; report the stratum ids per dimension
    cells = {str(n): [c[0] for c in dx.cells(n)] for n in range(top + 1)}
    out = {
        "cells": cells,
        "cell_counts": dx.cell_counts(),
        "euler_characteristic": dx.euler_characteristic(),
    }
    if args.figure:
        out["figure"] = plotting.render_skeleton(model, args.figure)
    _emit(out)


def cmd_homology(args) -> None:
    model = load(args.model)
    dx = simplicial.build_DX(model)
    sub = None
    if args.relative_to:
        E = args.relative_to.split(",")
        sub = simplicial.build_DX(model.restrict_to(E))
    _emit(
        {
            "H": [g.to_dict() for g in simplicial.homology(dx, sub)],
            "cohomology": [g.to_dict() for g in simplicial.cohomology(dx, sub)],
        }
    )


def cmd_les(args) -> None:
    model = load(args.model)
    E = args.sub.split(",")
    report = simplicial.longexact_check(model, E)
    _emit(report.to_dict())


def cmd_retract(args) -> None:
    model = load(args.model)
    point = _load_json(args.point)
    try:
        stratum = point["stratum"]
        values = {str(k): float(v) for k, v in point["values"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad point description: {exc}") from exc
    sample = geometry.AnalyticSample(stratum, values, model.r)
    tau = geometry.tau_retract(model, sample)
    out = {"tau": tau.to_dict()}
    if "E" in point:
        rho = float(point.get("rho", 1.0))
        comps = sorted(tau.bary)
        coloured = geometry.colour([tau.bary[c] for c in comps], 0.0)
        z = geometry.ColouredPoint(tau.stratum, dict(zip(comps, coloured)), 0.0)
        moved = geometry.phi_retract(model, point["E"], z, rho)
        comps2 = sorted(moved.u)
        bary = geometry.uncolour([moved.u[c] for c in comps2], 0.0)
        out["retracted"] = {
            "coloured": moved.to_dict(),
            "bary": {
                "stratum": moved.stratum,
                "bary": dict(zip(comps2, bary)),
            },
        }
    _emit(out)


def cmd_motivic(args) -> None:
    model = load(args.model)
    data = motivic.SemiStableModelClassData(model, d_rel=args.d_rel, d=args.d)
    cls = motivic.motivic_volume(data) if args.volume else motivic.nearby_cycles(data)
    _emit({"class": cls.to_dict()["L"], "euler": cls.euler()})


def cmd_series(args) -> None:
    value = parse_series(args.expr)
    out = {}
    if all(j == 0 and not f for _, j, f in value.terms):
        cls = motivic.GClass()
        for c, _, _ in value.terms:
            cls = cls + c
        out["class"] = cls.to_dict()["L"]
    else:
        out["terms"] = [
            {"coef": c.to_dict()["L"], "j": j, "factors": [list(p) for p in f]}
            for c, j, f in value.terms
        ]
    if args.expand is not None:
        out["expansion"] = [c.to_dict()["L"] for c in value.expand(args.expand)]
    _emit(out)


def _parse_rational(v) -> Rational:
    return Rational(v)


def _parse_matrix(rows, shape) -> Matrix:
    if not rows:
        return Matrix.zeros(*shape)
    m = Matrix([[_parse_rational(v) for v in row] for row in rows])
    return m


def _parse_fdcomplex(raw) -> FDComplex:
    dims = {int(k): int(v) for k, v in raw.get("dims", {}).items()}
    d = {}
    for k, rows in raw.get("d", {}).items():
        p = int(k)
        d[p] = _parse_matrix(rows, (dims.get(p + 1, 0), dims.get(p, 0)))
    filts = {}
    for name in ("F", "W"):
        if name in raw:
            filts[name] = {
                int(p): {
                    int(r): _parse_matrix(rows, (dims.get(int(p), 0), 0))
                    for r, rows in levels.items()
                }
                for p, levels in raw[name].items()
            }
    return FDComplex(dims, d, filts.get("F"), filts.get("W"))


def _subset_key(text: str) -> frozenset:
    return frozenset(int(v) for v in text.split(","))


def cmd_cocubical(args) -> None:
    raw = _load_json(args.input)
    if "cover" in raw:
        spec = raw["cover"]
        K = SimplicialComplex(spec["complex"])
        pieces = [SimplicialComplex(p) for p in spec["pieces"]]
        sys_, aug = adjunction_system(K, pieces)
        total = simple_complex(sys_)
        verdicts = quasi_iso_check(aug)
        _emit(
            {
                "cohomology": {str(p): r for p, r in total.cohomology_ranks().items()},
                "euler": total.euler_characteristic(),
                "quasi_iso": {str(p): v for p, v in verdicts.items()},
            }
        )
        return
    try:
        n = int(raw["n"])
        complexes = {
            _subset_key(k): _parse_fdcomplex(v) for k, v in raw["complexes"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad cocubical description: {exc}") from exc
    face_maps = {}
    for key, mats in raw.get("face_maps", {}).items():
        try:
            src_txt, dst_txt = key.split("->")
        except ValueError as exc:
            raise ParseError(f"bad face-map key {key!r}") from exc
        src, dst = _subset_key(src_txt), _subset_key(dst_txt)
        dims_dst = complexes[dst].dims
        dims_src = complexes[src].dims
        face_maps[(src, dst)] = {
            int(p): _parse_matrix(
                rows, (dims_dst.get(int(p), 0), dims_src.get(int(p), 0))
            )
            for p, rows in mats.items()
        }
    sys_ = CocubicalSystem(n, complexes, face_maps)
    total = simple_complex(sys_)
    _emit(
        {
            "cohomology": {str(p): r for p, r in total.cohomology_ranks().items()},
            "euler": total.euler_characteristic(),
        }
    )


def cmd_compare_models(args) -> None:
    out = {}
    classes = []
    for label, path in (("a", args.model_a), ("b", args.model_b)):
        model = load(path)
        data = motivic.SemiStableModelClassData(model)
        cls = motivic.nearby_cycles(data)
        classes.append(cls)
        out[f"class_{label}"] = cls.to_dict()["L"]
        out[f"euler_{label}"] = cls.euler()
    out["equal"] = classes[0] == classes[1]
    _emit(out)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milnor",
        description="Dual complexes of semi-stable degenerations: skeleta, "
        "retractions, homology, motivic nearby cycles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("complex", help="cells of the dual complex")
    p.add_argument("model")
    p.add_argument("--dot", action="store_true", help="emit the 1-skeleton as DOT")
    p.add_argument("--emit-model", action="store_true", help="re-emit the parsed model")
    p.add_argument("--figure", help="render the 1-skeleton to this image file")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("homology", help="integral (co)homology of the dual complex")
    p.add_argument("model")
    p.add_argument(
        "--relative-to",
        help="comma-separated components: homology of the pair relative to their sub-complex",
    )
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("les", help="long exact sequence of a sub-complex pair")
    p.add_argument("model")
    p.add_argument("--sub", required=True, help="comma-separated component subset E")
    p.set_defaults(func=cmd_les)

    p = sub.add_parser("retract", help="specialization and deformation retractions")
    p.add_argument("model")
    p.add_argument("point", help="JSON point file with stratum/values and optional rho/E")
    p.set_defaults(func=cmd_retract)

    p = sub.add_parser("motivic", help="nearby-cycles class of a model with classes")
    p.add_argument("model")
    p.add_argument("--volume", action="store_true", help="multiply by L^d_rel")
    p.add_argument("--d-rel", type=int, default=0)
    p.add_argument("--d", type=int, default=1)
    p.set_defaults(func=cmd_motivic)

    p = sub.add_parser("series", help="evaluate a rational-series expression")
    p.add_argument("expr")
    p.add_argument("--expand", type=int, help="also print the expansion to this order")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("cocubical", help="totalize a cocubical system")
    p.add_argument("input")
    p.set_defaults(func=cmd_cocubical)

    p = sub.add_parser("compare-models", help="nearby cycles of two models of one germ")
    p.add_argument("model_a")
    p.add_argument("model_b")
    p.set_defaults(func=cmd_compare_models)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MilnorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
