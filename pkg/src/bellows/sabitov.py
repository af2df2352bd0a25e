"""Monic volume relations for small combinatorial types.

Simplex volume relations are combined algebraically (sums of simplex
volumes, squared to keep only even powers) and diagonals are removed by
iterated Sylvester resultants.  Symbolic output is restricted to small
cases; for anything larger the relations are specialized at rational edge
data first.  The eliminant may be a proper multiple of the minimal volume
polynomial; only monicity and vanishing at the true volume are promised.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from bellows.exact.poly import (
    DEFAULT_TERM_CAP,
    MultiPoly,
    ResourceLimitError,
    int_det,
    resultant,
)
from bellows.geometry import (
    Polyhedron,
    edge_variable,
    normalized_volume,
    sq_dist,
    symbolic_cm,
)

W_NAME = "W"


class PlanError(ValueError):
    pass


class DegenerateSpecializationError(ValueError):
    pass


@dataclass
class MonicRelation:
    """w^degree + sum(coefficients[e] * w^e); only even exponents occur."""

    w_name: str
    degree: int
    coefficients: dict[int, "MultiPoly | Fraction"]

    def __post_init__(self):
        for e in self.coefficients:
            if e >= self.degree or e < 0 or e % 2:
                raise ValueError(f"bad coefficient exponent {e} for degree {self.degree}")
        if self.degree % 2:
            raise ValueError("relation degree must be even")

    def edge_variables(self) -> list[str]:
        names: set[str] = set()
        for c in self.coefficients.values():
            if isinstance(c, MultiPoly):
                names.update(c.variables_used())
        return sorted(names)

    def evaluate(self, w_value: Any, edge_values: Mapping[str, Any] | None = None) -> Any:
        acc = w_value**self.degree
        for e, c in sorted(self.coefficients.items(), reverse=True):
            if isinstance(c, MultiPoly):
                if c.is_zero:
                    continue
                cval = c.evaluate(edge_values or {})
            else:
                cval = c
            acc = acc + cval * w_value**e if e else acc + cval
        return acc

    def as_poly(self) -> MultiPoly:
        w = MultiPoly.variable(self.w_name)
        acc = w**self.degree
        for e, c in self.coefficients.items():
            if not isinstance(c, MultiPoly):
                raise ValueError("as_poly needs symbolic coefficients")
            acc = acc + c * w**e
        return acc

    def univariate_floats(self) -> list[float]:
        """Dense coefficient list, leading first, for numeric root finding."""
        coeffs = [0.0] * (self.degree + 1)
        coeffs[0] = 1.0
        for e, c in self.coefficients.items():
            if isinstance(c, MultiPoly):
                raise ValueError("numeric coefficients required")
            coeffs[self.degree - e] = float(c)
        return coeffs

    def to_json(self) -> dict:
        coeffs = {}
        for e, c in sorted(self.coefficients.items()):
            coeffs[str(e)] = str(c) if isinstance(c, (MultiPoly, Fraction)) else c
        return {"w": self.w_name, "degree": self.degree, "coefficients": coeffs}


def _relation_from_poly(
    poly: MultiPoly, w_name: str, specialized: bool
) -> MonicRelation:
    """Normalize a polynomial into a monic even relation in the volume symbol."""
    if poly.is_zero:
        raise DegenerateSpecializationError("elimination produced the zero polynomial")
    by_deg = poly.coeffs_in(w_name)
    degree = max(by_deg)
    if degree <= 0:
        raise DegenerateSpecializationError("elimination removed the volume symbol")
    if any(d % 2 and not by_deg[d].is_zero for d in by_deg):
        w = MultiPoly.variable(w_name)
        flipped = MultiPoly.constant(0)
        for d, c in by_deg.items():
            flipped = flipped + (c if d % 2 == 0 else -c) * w**d
        poly = poly * flipped
        by_deg = poly.coeffs_in(w_name)
        degree = max(by_deg)
    lead = by_deg[degree]
    if not lead.is_constant():
        raise DegenerateSpecializationError(
            "leading volume coefficient is not constant; cannot normalize"
        )
    lc = lead.constant_value()
    if lc == 0:
        raise DegenerateSpecializationError("vanishing leading coefficient")
    coefficients: dict[int, MultiPoly | Fraction] = {}
    for d, c in by_deg.items():
        if d == degree:
            continue
        if specialized:
            coefficients[d] = Fraction(c.constant_value(), lc)
        else:
            try:
                coefficients[d] = c.divide_exact(lc)
            except ValueError as exc:
                raise DegenerateSpecializationError(
                    f"cannot make relation monic over the integers: {exc}"
                ) from exc
    return MonicRelation(w_name, degree, coefficients)


# -- bipyramid -------------------------------------------------------------------


def bipyramid_relation() -> MonicRelation:
    """Degree-4 monic relation for the triangular bipyramid (apexes p, q over
    equator a, b, c), from the two simplex volume halves W1 + W2 = W with
    W1^2 = CM(p,a,b,c)/2 and W2^2 = CM(q,a,b,c)/2."""
    A = symbolic_cm(["p", "a", "b", "c"]).divide_exact(2)
    B = symbolic_cm(["q", "a", "b", "c"]).divide_exact(2)
    return MonicRelation(
        W_NAME,
        4,
        {2: (A + B) * (-2), 0: (A - B) * (A - B)},
    )


def verify_relation(rel: MonicRelation, poly: Polyhedron) -> Any:
    """Evaluate the relation at the polyhedron's volume and edge data.

    Edge variables are parsed back to vertex pairs, so the polyhedron's
    vertex names must match the relation's combinatorial type.
    """
    values: dict[str, Any] = {}
    for name in rel.edge_variables():
        parts = name.split("_")
        if len(parts) != 3 or parts[0] != "l":
            raise ValueError(f"unrecognized edge variable {name}")
        _, u, v = parts
        values[name] = sq_dist(poly.embedding, u, v)
    w = normalized_volume(poly)
    return rel.evaluate(w, values)


# -- the elimination engine -------------------------------------------------------


@dataclass(frozen=True)
class ElimStep:
    variable: str
    left: str
    right: str
    result: str


@dataclass
class EliminationPlan:
    """Ordered resultant steps; each removes one unknown from a named pair."""

    steps: list[ElimStep]
    final: str
    w_name: str = W_NAME


def _specialize(poly: MultiPoly, values: Mapping[str, Fraction | int]) -> MultiPoly:
    """Bind variables to rationals and clear denominators.

    Relations are only meaningful up to nonzero scalar multiples, so the
    cleared-denominator integer polynomial is an equivalent relation.
    """
    bound = {v: Fraction(values[v]) for v in poly.vars if v in values}
    if not bound:
        return poly
    remaining = tuple(v for v in poly.vars if v not in bound)
    keep_idx = [poly.vars.index(v) for v in remaining]
    acc: dict[tuple[int, ...], Fraction] = {}
    for exp, c in poly.terms.items():
        f = Fraction(c)
        for var, e in zip(poly.vars, exp):
            if e and var in bound:
                f *= bound[var] ** e
        key = tuple(exp[i] for i in keep_idx)
        f += acc.get(key, Fraction(0))
        acc[key] = f
    den = 1
    for f in acc.values():
        den = math.lcm(den, f.denominator)
    terms = {k: int(f * den) for k, f in acc.items() if f}
    return MultiPoly(remaining, terms)


def _divide_content(poly: MultiPoly) -> MultiPoly:
    g = 0
    for c in poly.terms.values():
        g = math.gcd(g, abs(c))
        if g == 1:
            return poly
    if g <= 1:
        return poly
    return poly.divide_exact(g)


def _interp_resultant(f: MultiPoly, g: MultiPoly, var: str, w_name: str) -> MultiPoly:
    """Resultant in ``var`` of two polynomials whose only other variable is
    the volume symbol, by evaluation at integer points and interpolation.

    Correct regardless of degree drops at individual points: the padded
    Sylvester determinant is itself a polynomial in the volume symbol, and
    that polynomial is what gets interpolated.
    """
    df, dg = f.degree(var), g.degree(var)
    fc = {d: c for d, c in f.coeffs_in(var).items()}
    gc = {d: c for d, c in g.coeffs_in(var).items()}
    bound = df * max(g.degree(w_name), 0) + dg * max(f.degree(w_name), 0)
    points = range(-(bound // 2), bound - bound // 2 + 1)
    size = df + dg
    samples: list[tuple[int, int]] = []
    for k in points:
        fk = {d: _eval_int(c, w_name, k) for d, c in fc.items()}
        gk = {d: _eval_int(c, w_name, k) for d, c in gc.items()}
        rows = []
        for shift in range(dg):
            row = [0] * size
            for d, cv in fk.items():
                row[shift + (df - d)] = cv
            rows.append(row)
        for shift in range(df):
            row = [0] * size
            for d, cv in gk.items():
                row[shift + (dg - d)] = cv
            rows.append(row)
        samples.append((k, int_det(rows)))
    coeffs = _interpolate_integer(samples)
    terms = {(e,): c for e, c in enumerate(coeffs) if c}
    return MultiPoly((w_name,), terms)


def _eval_int(poly: MultiPoly, w_name: str, k: int) -> int:
    total = 0
    if not poly.terms:
        return 0
    wi = poly.vars.index(w_name) if w_name in poly.vars else None
    for exp, c in poly.terms.items():
        e = exp[wi] if wi is not None else 0
        total += c * (k**e)
    return total


def _interpolate_integer(samples: list[tuple[int, int]]) -> list[int]:
    """Newton divided differences over the rationals; result must be integral."""
    xs = [Fraction(x) for x, _ in samples]
    coeffs = [Fraction(y) for _, y in samples]
    n = len(samples)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - j])
    # expand Newton form to the monomial basis
    out = [Fraction(0)] * n
    acc = [Fraction(1)]
    for j in range(n):
        for e, a in enumerate(acc):
            out[e] += coeffs[j] * a
        nxt = [Fraction(0)] * (len(acc) + 1)
        for e, a in enumerate(acc):
            nxt[e] -= xs[j] * a
            nxt[e + 1] += a
        acc = nxt
    ints = []
    for fr in out:
        if fr.denominator != 1:
            raise AssertionError("interpolated resultant was not integral")
        ints.append(int(fr))
    while ints and ints[-1] == 0:
        ints.pop()
    return ints


def eliminate(
    plan: EliminationPlan,
    relations: Mapping[str, MultiPoly],
    values: Mapping[str, Fraction | int] | None = None,
    max_terms: int = DEFAULT_TERM_CAP,
) -> MonicRelation:
    """Run the plan's resultant chain and normalize the final relation.

    In specialized mode every edge variable is bound to a rational first.
    Each step consumes a pair of named relations that both genuinely
    involve the step's variable; the resultant joins the working set under
    the step's result name.  The final named relation is made monic in the
    volume symbol (its leading coefficient must be a nonzero constant) and
    symmetrized to even powers if needed.
    """
    working: dict[str, MultiPoly] = {}
    for name, rel in relations.items():
        working[name] = _specialize(rel, values) if values else rel
    for step in plan.steps:
        for side in (step.left, step.right):
            if side not in working:
                raise PlanError(f"step references unknown relation {side!r}")
        if step.result in working:
            raise PlanError(f"step result name {step.result!r} already in use")
        f, g = working[step.left], working[step.right]
        if f.degree(step.variable) <= 0 or g.degree(step.variable) <= 0:
            raise PlanError(
                f"relations {step.left!r} and {step.right!r} do not share "
                f"the unknown {step.variable!r}"
            )
        res = _step_resultant(f, g, step.variable, plan.w_name, max_terms)
        if res.is_zero:
            raise DegenerateSpecializationError(
                f"step eliminating {step.variable!r} produced the zero polynomial"
            )
        working[step.result] = _divide_content(res.compress())
    if plan.final not in working:
        raise PlanError(f"final relation {plan.final!r} was never produced")
    final = working[plan.final]
    if values is not None:
        extra = set(final.variables_used()) - {plan.w_name}
        if extra:
            raise PlanError(f"specialized elimination left unknowns {sorted(extra)}")
    return _relation_from_poly(final, plan.w_name, specialized=values is not None)


def _step_resultant(
    f: MultiPoly, g: MultiPoly, var: str, w_name: str, max_terms: int
) -> MultiPoly:
    other = (set(f.variables_used()) | set(g.variables_used())) - {var}
    size = f.degree(var) + g.degree(var)
    if size > 12 and other <= {w_name}:
        return _interp_resultant(f, g, var, w_name)
    return resultant(f, g, var, max_terms=max_terms)


# -- guided elimination for the square-equator suspension ---------------------------


def suspension_relations(
    edge_values: Mapping[str, Fraction],
    apexes: Sequence[str] = ("p", "q"),
    equator: Sequence[str] = ("a", "b", "c", "d"),
) -> tuple[EliminationPlan, dict[str, MultiPoly]]:
    """Relations and plan for the suspension over a quadrilateral.

    Cutting along one equator diagonal splits the suspension into two
    triangular bipyramids; their volumes enter through monic quadratics in
    the squared half-volumes joined by the even sign-product bridge.  Two
    five-point Cayley-Menger relations tie the cut diagonal to the apex
    diagonal, which gets eliminated first.
    """
    p, q = apexes
    a, b, c, d = equator
    s, t = MultiPoly.variable("s"), MultiPoly.variable("t")
    w = MultiPoly.variable(W_NAME)

    def half_quadratic(sq_var: MultiPoly, tri: Sequence[str]) -> MultiPoly:
        A = symbolic_cm([p, *tri]).divide_exact(2)
        B = symbolic_cm([q, *tri]).divide_exact(2)
        return sq_var * sq_var - 2 * (A + B) * sq_var + (A - B) * (A - B)

    w2 = w * w
    bridge = (w2 - s - t) * (w2 - s - t) - 4 * s * t
    relations = {
        "half_abc_sq": half_quadratic(s, (a, b, c)),
        "half_acd_sq": half_quadratic(t, (a, c, d)),
        "sum_bridge": bridge,
        "compat_abc": symbolic_cm([p, q, a, b, c]),
        "compat_acd": symbolic_cm([p, q, a, c, d]),
    }
    plan = EliminationPlan(
        steps=[
            ElimStep("s", "half_abc_sq", "sum_bridge", "volume_s"),
            ElimStep("t", "half_acd_sq", "volume_s", "volume_curve"),
            ElimStep(edge_variable(p, q), "compat_abc", "compat_acd", "diagonal_locus"),
            ElimStep(edge_variable(a, c), "volume_curve", "diagonal_locus", "final"),
        ],
        final="final",
    )
    return plan, relations


def suspension_edges(
    poly_embedding,
    apexes: Sequence[str] = ("p", "q"),
    equator: Sequence[str] = ("a", "b", "c", "d"),
) -> dict[str, Fraction]:
    """Squared lengths of the 12 suspension edges (diagonals stay free)."""
    p, q = apexes
    ring = list(equator)
    values: dict[str, Fraction] = {}
    for i, u in enumerate(ring):
        v = ring[(i + 1) % len(ring)]
        values[edge_variable(u, v)] = sq_dist(poly_embedding, u, v)
        values[edge_variable(p, u)] = sq_dist(poly_embedding, p, u)
        values[edge_variable(q, u)] = sq_dist(poly_embedding, q, u)
    return values


def square_suspension_relation(embedding) -> MonicRelation:
    """Specialized one-diagonal elimination for a rational suspension over a
    quadrilateral with vertices p, q (apexes) and a, b, c, d (equator)."""
    edges = suspension_edges(embedding)
    plan, relations = suspension_relations(edges)
    return eliminate(plan, relations, values=edges)


def relation_to_json_file(rel: MonicRelation, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rel.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
