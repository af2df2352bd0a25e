"""Command-line surface tying the modules together.

Every subcommand emits a JSON report embedding the tool version, the seed,
and the tolerance set, so identical invocations produce byte-identical
output.  Exit codes: 0 success, 1 input validation failure, 2 property or
verdict failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from bellows import __version__
from bellows import collapse as collapse_mod
from bellows import flex as flex_mod
from bellows import sabitov as sabitov_mod
from bellows.faceposet import (
    FacePlanarityError,
    build_generalized_triangulation,
    load_poset,
    triangulation_invariance,
    validate_incidence,
    volume_ns,
)
from bellows.geometry import (
    CmInput,
    Embedding,
    Polyhedron,
    cayley_menger,
    normalized_volume,
    oriented_volume,
    simplex_monic_relation,
    volume_upper_bound,
)
from bellows.homology import UnfillableError, fill_boundary
from bellows.report import render_flex_report
from bellows.simplicial import (
    SimplicialComplex,
    boundary,
    cycle_to_json,
    load_cycle,
    support,
    validate_pseudomanifold,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERDICT = 2
EXIT_IO = 3


class VerdictFailure(Exception):
    """Carries a report whose verdict failed."""

    def __init__(self, result: dict):
        super().__init__("verdict failure")
        self.result = result


def _scalar_str(x) -> str:
    return str(x)


def _emit(args, command: str, result: dict, seed: int | None = None) -> None:
    report = {
        "tool": "bellows",
        "version": __version__,
        "command": command,
        "seed": seed if seed is not None else getattr(args, "seed", None),
        "tolerances": {
            "edge_tol": getattr(args, "edge_tol", None),
            "vol_tol": getattr(args, "vol_tol", None),
            "rank_gap": getattr(args, "rank_gap", None),
        },
        "result": result,
    }
    if getattr(args, "format", "json") == "text":
        lines = [f"{k}: {v}" for k, v in sorted(_flatten(report).items())]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flatten(data, prefix: str = "") -> dict:
    out = {}
    if isinstance(data, dict):
        for k, v in data.items():
            out.update(_flatten(v, f"{prefix}{k}."))
    elif isinstance(data, (list, tuple)):
        out[prefix[:-1]] = json.dumps(data, default=str)
    else:
        out[prefix[:-1]] = data
    return out


def _load_complex(path: str) -> SimplicialComplex:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "maximal" in data:
        return SimplicialComplex.from_simplices(tuple(s) for s in data["maximal"])
    if "cycle" in data:
        return SimplicialComplex.from_simplices(e["simplex"] for e in data["cycle"])
    raise ValueError("complex file needs 'maximal' or 'cycle'")


# -- subcommand handlers -----------------------------------------------------------


def _cmd_validate(args) -> dict:
    cycle = load_cycle(args.cycle)
    K = support(cycle)
    rep = validate_pseudomanifold(K, cycle.dim)
    result = {
        "dimension": cycle.dim,
        "is_cycle": boundary(cycle).is_zero,
        "is_pseudomanifold": rep.is_pseudomanifold,
        "is_strongly_connected": rep.is_strongly_connected,
        "facet_defects": [[list(f), c] for f, c in rep.facet_defects],
        "num_top_simplices": len(cycle.terms),
    }
    if not (result["is_cycle"] and rep.is_pseudomanifold and rep.is_strongly_connected):
        raise VerdictFailure(result)
    return result


def _cmd_volume(args) -> dict:
    cycle = load_cycle(args.cycle)
    emb = Embedding.load(args.coords)
    poly = Polyhedron(cycle, emb)
    v = oriented_volume(poly)
    w = normalized_volume(poly)
    return {
        "n": emb.dim,
        "field": emb.field,
        "oriented_volume": _scalar_str(v),
        "normalized_volume": _scalar_str(w),
        "normalization_factor": f"2^{emb.dim // 2} * {emb.dim}!",
    }


def _cmd_cm(args) -> dict:
    if args.symbolic is not None:
        rel = simplex_monic_relation(args.symbolic)
        return {"symbolic_dimension": args.symbolic, "monic_relation": str(rel)}
    if args.sq_dists:
        with open(args.sq_dists, "r", encoding="utf-8") as fh:
            grid = json.load(fh)
        parsed = [[Fraction(str(x)) for x in row] for row in grid]
        value = cayley_menger(CmInput.from_sq_dists(parsed))
        return {"points": len(parsed), "cayley_menger": _scalar_str(value)}
    emb = Embedding.load(args.coords)
    verts = args.vertices.split(",") if args.vertices else emb.vertices()
    value = cayley_menger(CmInput.from_points([emb.point(v) for v in verts]))
    return {"points": len(verts), "cayley_menger": _scalar_str(value)}


def _cmd_fill(args) -> dict:
    cycle = load_cycle(args.cycle)
    K = _load_complex(args.complex)
    try:
        Y = fill_boundary(cycle, K)
    except UnfillableError as exc:
        raise VerdictFailure(
            {"fillable": False, "obstruction": [list(t) for t in exc.obstruction]}
        ) from exc
    return {
        "fillable": True,
        "filling": cycle_to_json(Y),
        "verified": boundary(Y) == cycle,
    }


def _cmd_collapse(args) -> dict:
    profile = None
    if args.profile:
        with open(args.profile, "r", encoding="utf-8") as fh:
            profile = {k: tuple(v) for k, v in json.load(fh).items()}
    sim = collapse_mod.simulate_place(args.n, args.vertices, profile, seed=args.seed)
    ordering = collapse_mod.build_ordering(sim)
    rep = collapse_mod.validate_ordering(sim, ordering)
    result = {
        "n": args.n,
        "vertices": args.vertices,
        "edges": len(sim.edges()),
        "simplices": [len(level) for level in sim.simplices_by_dim()],
        "ordering_violations": rep.total(),
    }
    try:
        trace = collapse_mod.collapse_schedule(sim, ordering, args.target_dim)
    except collapse_mod.ScheduleFailureError as exc:
        result.update({"schedule_failed": True, "blocking": str(exc)})
        raise VerdictFailure(result) from exc
    result.update(
        {
            "schedule_failed": False,
            "collapse_steps": len(trace.steps),
            "trace": [[list(s), list(t)] for s, t in trace.steps],
            "residual_dimension": trace.residual_dim,
            "target_dimension": trace.target_dim,
            "residual_simplices": trace.residual.num_simplices(),
            "residual_maximal": sorted(list(s) for s in trace.residual.maximal_simplices),
        }
    )
    if not rep.ok or trace.residual_dim > trace.target_dim:
        raise VerdictFailure(result)
    return result


def _cmd_prop61(args) -> dict:
    total = 0
    worst = []
    for i in range(args.trials):
        seed = args.seed + i
        rng_profile = collapse_mod.random_profile(
            args.n, args.vertices, random.Random(2_654_435_761 * seed + 97)
        )
        sim = collapse_mod.simulate_place(args.n, args.vertices, rng_profile, seed=seed)
        ordering = collapse_mod.build_ordering(sim)
        violations = collapse_mod.check_proposition_union(sim, ordering)
        total += len(violations)
        if violations:
            worst.append({"seed": seed, "pairs": [[list(a), list(b)] for a, b in violations[:3]]})
    result = {
        "n": args.n,
        "vertices": args.vertices,
        "trials": args.trials,
        "violations": total,
        "examples": worst[:5],
    }
    if total:
        raise VerdictFailure(result)
    return result


def _cmd_flex(args) -> dict:
    if args.flex_cmd == "trace":
        if args.square:
            from bellows.simplicial import Chain

            cycle = Chain.from_simplices(
                [(("a", "b"), 1), (("b", "c"), 1), (("c", "d"), 1), (("d", "a"), 1)]
            )
            emb = Embedding(
                2, "float64", {"a": (0.0, 0.0), "b": (1.0, 0.0), "c": (1.0, 1.0), "d": (0.0, 1.0)}
            )
            start = Polyhedron(cycle, emb)
        else:
            start = flex_mod.bricard_type1(seed=args.seed)
        fam = flex_mod.trace_flex(
            start, steps=args.steps, step_size=args.step_size, edge_tol=args.edge_tol
        )
        flex_mod.save_flex(fam, args.out_family)
        return {
            "samples": len(fam),
            "truncated": fam.truncated,
            "max_edge_dev": fam.max_edge_deviation(),
            "diagonal_variation": fam.diagonal_variation(),
            "family": args.out_family,
        }
    fam = flex_mod.load_flex(args.family, edge_tol=args.edge_tol)
    if args.flex_cmd == "verify":
        rep = flex_mod.verify_bellows(fam, edge_tol=args.edge_tol, vol_tol=args.vol_tol)
        result = {
            "verdict": rep.verdict,
            "reason": rep.reason,
            "max_edge_dev": rep.max_edge_dev,
            "volume_spread": rep.volume_spread,
            "diagonal_variation": rep.diagonal_variation,
            "volume_start": rep.volume_start,
        }
        if rep.verdict != "PASS":
            raise VerdictFailure(result)
        return result
    if args.flex_cmd == "report":
        paths = render_flex_report(fam, args.out_dir)
        return {"samples": len(fam), "artifacts": paths}
    raise ValueError(f"unknown flex subcommand {args.flex_cmd}")


def _cmd_sabitov(args) -> dict:
    if args.suspension:
        if not args.coords:
            raise ValueError("--suspension requires --coords with a rational embedding")
        emb = Embedding.load(args.coords)
        rel = sabitov_mod.square_suspension_relation(emb)
        return {"type": "square_suspension_specialized", "relation": rel.to_json()}
    rel = sabitov_mod.bipyramid_relation()
    return {"type": "triangular_bipyramid_symbolic", "relation": rel.to_json()}


def _cmd_faceposet(args) -> dict:
    poset, signs = load_poset(args.poset)
    emb = Embedding.load(args.coords)
    rep = validate_incidence(poset, signs)
    result = {"incidence_ok": rep.ok, "faces": len(poset.faces)}
    if not rep.ok:
        result["violations"] = {
            "composition": rep.composition[:5],
            "missing": rep.missing[:5],
            "edge_orientation": rep.edge_orientation[:5],
        }
        raise VerdictFailure(result)
    t1 = build_generalized_triangulation(poset, signs, args.strategy)
    try:
        w = volume_ns(poset, signs, t1, emb)
    except FacePlanarityError as exc:
        result.update({"planarity_error": str(exc), "face": exc.face_id})
        raise VerdictFailure(result) from exc
    result["normalized_volume"] = _scalar_str(w)
    if args.check_invariance:
        t2 = build_generalized_triangulation(poset, signs, args.strategy2)
        residual = triangulation_invariance(poset, signs, t1, t2, emb)
        result["invariance_residual"] = _scalar_str(residual)
        zero = residual == 0 if emb.scalar_field.exact else abs(float(residual)) < 1e-9
        if not zero:
            raise VerdictFailure(result)
    return result


def _cmd_estimate(args) -> dict:
    cycle = load_cycle(args.cycle)
    emb = Embedding.load(args.coords)
    poly = Polyhedron(cycle, emb)
    vb = volume_upper_bound(poly, use_orthogonal=args.orthogonal)
    result = {
        "bound": vb.bound,
        "volume_abs": vb.volume_abs,
        "satisfied": vb.satisfied,
        "max_sq_length": vb.max_sq_length,
        "cycle_l1": vb.c_sigma,
        "metric": "orthogonal" if args.orthogonal else "auto",
    }
    if not vb.satisfied:
        raise VerdictFailure(result)
    return result


# -- parser ------------------------------------------------------------------------


FILE_SCHEMAS = """file schemas:
  cycle JSON      {"vertices": [...], "cycle": [{"simplex": ["u","v","w"], "coeff": 1}, ...]}
  embedding JSON  {"dim": 3, "field": "rational", "coords": {"a": ["0","0","1/2"], ...}}
                  rationals are "p/q" strings; complex coordinates are ["re","im"] pairs;
                  fields: rational | float64 | complex128 | laurent
  complex JSON    {"maximal": [["a","b","c"], ...]}
  profile JSON    {"v0": [0,-1,0], ...} - leading coordinate orders per vertex
  poset JSON      {"faces": [{"id","dim","vertices","covers"}, ...], "signs": {"F|G": 1, ...}}
  family JSON     {"n": 3, "cycle": [...] or "cycle_file": path, "targets": {"u|v": l},
                   "samples": [{"t": 0.0, "coords": {...}}, ...], "flags": {...}}
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellows",
        description="Exact-arithmetic polyhedral volume laboratory",
        epilog=FILE_SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"bellows {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", help="write the report here instead of stdout")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--edge-tol", dest="edge_tol", type=float, default=flex_mod.EDGE_TOL)
        p.add_argument("--vol-tol", dest="vol_tol", type=float, default=None)
        p.add_argument("--rank-gap", dest="rank_gap", type=float, default=flex_mod.RANK_GAP)

    p = sub.add_parser("validate", help="validate a cycle file as a closed pseudo-manifold")
    p.add_argument("--cycle", required=True)
    common(p)

    p = sub.add_parser("volume", help="oriented and normalized volume of a polyhedron")
    p.add_argument("--cycle", required=True)
    p.add_argument("--coords", required=True)
    common(p)

    p = sub.add_parser("cm", help="Cayley-Menger determinants, numeric or symbolic")
    p.add_argument("--coords")
    p.add_argument("--vertices", help="comma-separated vertex names")
    p.add_argument("--sq-dists", dest="sq_dists", help="JSON grid of squared distances")
    p.add_argument("--symbolic", type=int, help="emit the monic simplex relation for dimension n")
    common(p)

    p = sub.add_parser("fill", help="solve boundary(Y) = Z inside a complex")
    p.add_argument("--cycle", required=True)
    p.add_argument("--complex", required=True)
    common(p)

    p = sub.add_parser("collapse", help="simulate a place and run the collapse schedule")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--profile", help="JSON map vertex -> list of coordinate orders")
    p.add_argument("--target-dim", dest="target_dim", type=int, default=None)
    common(p)

    p = sub.add_parser("prop61", help="randomized union-property check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    common(p)

    p = sub.add_parser("flex", help="flexible polyhedron workflows")
    flex_sub = p.add_subparsers(dest="flex_cmd", required=True)
    pt = flex_sub.add_parser("trace", help="trace a flex and save the family")
    pt.add_argument("--square", action="store_true", help="planar quadrilateral instead")
    pt.add_argument("--steps", type=int, default=200)
    pt.add_argument("--step-size", dest="step_size", type=float, default=0.01)
    pt.add_argument("--out-family", dest="out_family", required=True)
    common(pt)
    pv = flex_sub.add_parser("verify", help="Bellows verdict for a family file")
    pv.add_argument("--family", required=True)
    common(pv)
    pr = flex_sub.add_parser("report", help="CSV and figures for a family file")
    pr.add_argument("--family", required=True)
    pr.add_argument("--out-dir", dest="out_dir", required=True)
    common(pr)

    p = sub.add_parser("sabitov", help="monic volume relations")
    p.add_argument("--suspension", action="store_true")
    p.add_argument("--coords", help="embedding for the specialized suspension")
    common(p)

    p = sub.add_parser("faceposet", help="face-poset volume machinery")
    p.add_argument("--poset", required=True)
    p.add_argument("--coords", required=True)
    p.add_argument("--strategy", default="cone_min")
    p.add_argument("--strategy2", default="cone_max")
    p.add_argument("--check-invariance", dest="check_invariance", action="store_true")
    common(p)

    p = sub.add_parser("estimate", help="edge-length volume bound")
    p.add_argument("--cycle", required=True)
    p.add_argument("--coords", required=True)
    p.add_argument("--orthogonal", action="store_true")
    common(p)
    return parser


HANDLERS = {
    "validate": _cmd_validate,
    "volume": _cmd_volume,
    "cm": _cmd_cm,
    "fill": _cmd_fill,
    "collapse": _cmd_collapse,
    "prop61": _cmd_prop61,
    "flex": _cmd_flex,
    "sabitov": _cmd_sabitov,
    "faceposet": _cmd_faceposet,
    "estimate": _cmd_estimate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    handler = HANDLERS[args.command]
    try:
        result = handler(args)
    except VerdictFailure as exc:
        _emit(args, args.command, exc.result)
        return EXIT_VERDICT
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INPUT
    _emit(args, args.command, result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
