import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_points
from bellows.exact import MultiPoly
from bellows.geometry import Embedding, Polyhedron, normalized_volume, sq_dist
from bellows.sabitov import (
    DegenerateSpecializationError,
    EliminationPlan,
    ElimStep,
    MonicRelation,
    PlanError,
    bipyramid_relation,
    eliminate,
    square_suspension_relation,
    suspension_edges,
    suspension_relations,
    verify_relation,
)
from bellows.simplicial import Chain, boundary

F = Fraction

BIPYRAMID_FACES = [
    ("p", "a", "b"),
    ("p", "b", "c"),
    ("p", "c", "a"),
    ("q", "b", "a"),
    ("q", "c", "b"),
    ("q", "a", "c"),
]

SUSPENSION_FACES = [
    ("p", "a", "b"),
    ("p", "b", "c"),
    ("p", "c", "d"),
    ("p", "d", "a"),
    ("q", "b", "a"),
    ("q", "c", "b"),
    ("q", "d", "c"),
    ("q", "a", "d"),
]


def bipyramid(coords) -> Polyhedron:
    cycle = Chain.from_simplices([(f, 1) for f in BIPYRAMID_FACES])
    assert boundary(cycle).is_zero
    return Polyhedron(cycle, Embedding(3, "rational", coords))


def suspension(coords) -> Polyhedron:
    cycle = Chain.from_simplices([(f, 1) for f in SUSPENSION_FACES])
    assert boundary(cycle).is_zero
    return Polyhedron(cycle, Embedding(3, "rational", coords))


def reference_suspension_coords():
    return {
        "p": (F(0), F(0), F(1)),
        "q": (F(1, 2), F(0), F(-1)),
        "a": (F(1), F(0), F(0)),
        "b": (F(0), F(3, 2), F(0)),
        "c": (F(-1), F(1, 2), F(0)),
        "d": (F(1, 3), F(-1), F(1, 4)),
    }


class TestBipyramidRelation:
    def test_shape(self):
        rel = bipyramid_relation()
        assert rel.degree == 4
        assert sorted(rel.coefficients) == [0, 2]
        for coeff in rel.coefficients.values():
            assert isinstance(coeff, MultiPoly)  # integer polynomial coefficients

    def test_even_powers_only(self):
        rel = bipyramid_relation()
        poly = rel.as_poly()
        for d in poly.coeffs_in("W"):
            assert d % 2 == 0

    def test_concrete_embedding(self):
        poly = bipyramid(
            {
                "p": (F(0), F(0), F(1)),
                "q": (F(0), F(0), F(-1)),
                "a": (F(0), F(0), F(0)),
                "b": (F(1), F(0), F(0)),
                "c": (F(0), F(1), F(0)),
            }
        )
        assert verify_relation(bipyramid_relation(), poly) == 0

    def test_degenerate_coincident_apexes(self):
        poly = bipyramid(
            {
                "p": (F(1, 3), F(1, 7), F(0)),
                "q": (F(1, 3), F(1, 7), F(0)),
                "a": (F(0), F(0), F(0)),
                "b": (F(1), F(0), F(0)),
                "c": (F(0), F(1), F(0)),
            }
        )
        assert normalized_volume(poly) == 0
        assert verify_relation(bipyramid_relation(), poly) == 0

    def test_flat_bipyramid(self):
        poly = bipyramid(
            {
                "p": (F(2), F(2), F(0)),
                "q": (F(-1), F(1, 2), F(0)),
                "a": (F(0), F(0), F(0)),
                "b": (F(1), F(0), F(0)),
                "c": (F(0), F(1), F(0)),
            }
        )
        assert normalized_volume(poly) == 0
        assert verify_relation(bipyramid_relation(), poly) == 0

    def test_hundred_random_rational_bipyramids(self, rng):
        rel = bipyramid_relation()
        for _ in range(100):
            pts = random_points(rng, 5, 3)
            poly = bipyramid(dict(zip("pqabc", map(tuple, pts))))
            assert verify_relation(rel, poly) == 0

    def test_shifted_volume_not_a_root(self, rng):
        rel = bipyramid_relation()
        pts = random_points(rng, 5, 3)
        poly = bipyramid(dict(zip("pqabc", map(tuple, pts))))
        w = normalized_volume(poly)
        values = {
            name: sq_dist(poly.embedding, name.split("_")[1], name.split("_")[2])
            for name in rel.edge_variables()
        }
        assert rel.evaluate(w + 1, values) != 0

    def test_evaluation_even_in_w(self, rng):
        rel = bipyramid_relation()
        pts = random_points(rng, 5, 3)
        poly = bipyramid(dict(zip("pqabc", map(tuple, pts))))
        w = normalized_volume(poly)
        values = {
            name: sq_dist(poly.embedding, name.split("_")[1], name.split("_")[2])
            for name in rel.edge_variables()
        }
        probe = w + F(5, 3)
        assert rel.evaluate(probe, values) == rel.evaluate(-probe, values)

    def test_numeric_roots_contain_w(self, rng):
        rel = bipyramid_relation()
        for _ in range(10):
            pts = random_points(rng, 5, 3)
            poly = bipyramid(dict(zip("pqabc", map(tuple, pts))))
            w = float(normalized_volume(poly))
            values = {
                name: float(sq_dist(poly.embedding, name.split("_")[1], name.split("_")[2]))
                for name in rel.edge_variables()
            }
            coeffs = [1.0, 0.0, values_at(rel, 2, values), 0.0, values_at(rel, 0, values)]
            roots = np.roots(coeffs)
            assert min(abs(r - w) for r in roots) <= 1e-9 * max(1.0, abs(w))


def values_at(rel: MonicRelation, exponent: int, values) -> float:
    coeff = rel.coefficients[exponent]
    return float(coeff.evaluate(values))


class TestEliminate:
    def test_plan_must_share_variable(self):
        x, y, w = (MultiPoly.variable(v) for v in ("x", "y", "W"))
        plan = EliminationPlan([ElimStep("x", "r1", "r2", "out")], final="out")
        relations = {"r1": w * w - x, "r2": w * w - y}
        with pytest.raises(PlanError):
            eliminate(plan, relations)

    def test_unknown_relation_name(self):
        plan = EliminationPlan([ElimStep("x", "nope", "r2", "out")], final="out")
        with pytest.raises(PlanError):
            eliminate(plan, {"r2": MultiPoly.variable("x")})

    def test_simple_symbolic_chain(self):
        # eliminating s from (s - a) and (W - s) leaves W - a
        s, a, w = (MultiPoly.variable(v) for v in ("s", "a", "W"))
        plan = EliminationPlan([ElimStep("s", "r1", "r2", "out")], final="out")
        rel = eliminate(plan, {"r1": s - a, "r2": w * w - s})
        assert rel.degree == 2
        assert rel.coefficients[0] == -a

    def test_specialized_leftover_unknowns_rejected(self):
        s, x, w = (MultiPoly.variable(v) for v in ("s", "x", "W"))
        plan = EliminationPlan([ElimStep("s", "r1", "r2", "out")], final="out")
        relations = {"r1": s - x, "r2": w * w - s}
        with pytest.raises(PlanError):
            eliminate(plan, relations, values={"unused": F(1)})


class TestSuspension:
    def test_exact_root(self):
        poly = suspension(reference_suspension_coords())
        w = normalized_volume(poly)
        rel = square_suspension_relation(poly.embedding)
        assert rel.degree % 2 == 0
        assert rel.evaluate(w) == 0

    def test_translation_gives_identical_polynomial(self):
        emb = Embedding(3, "rational", reference_suspension_coords())
        moved = emb.translate((F(7, 3), F(-2), F(5, 4)))
        r1 = square_suspension_relation(emb)
        r2 = square_suspension_relation(moved)
        assert r1.degree == r2.degree
        assert r1.coefficients == r2.coefficients

    def test_even_powers(self):
        emb = Embedding(3, "rational", reference_suspension_coords())
        rel = square_suspension_relation(emb)
        assert all(e % 2 == 0 for e in rel.coefficients)

    def test_compatibility_locus_contains_true_diagonals(self):
        emb = Embedding(3, "rational", reference_suspension_coords())
        edges = suspension_edges(emb)
        plan, relations = suspension_relations(edges)
        from bellows.sabitov import _specialize

        c1 = _specialize(relations["compat_abc"], edges)
        c2 = _specialize(relations["compat_acd"], edges)
        x = sq_dist(emb, "a", "c")
        y = sq_dist(emb, "p", "q")
        vals = {"l_a_c": x, "l_p_q": y}
        assert c1.evaluate(vals) == 0
        assert c2.evaluate(vals) == 0
