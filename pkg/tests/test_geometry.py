import math
import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from conftest import (
    corner_simplex,
    octahedron_cycle,
    octahedron_embedding,
    random_points,
    tetra_boundary,
)
from bellows.exact import MultiPoly
from bellows.geometry import (
    CmInput,
    Embedding,
    Polyhedron,
    cayley_menger,
    cm_volume_identity,
    edge_variable,
    hermitian_sq_dist,
    normalized_volume,
    oriented_volume,
    simplex_monic_relation,
    sq_dist,
    symbolic_cm,
    volume_upper_bound,
    volume_via_filling,
)
from bellows.simplicial import Chain, OrientedSimplex, SimplicialComplex, boundary, fundamental_cycle

F = Fraction


def quadrangle() -> Polyhedron:
    emb = Embedding(
        2,
        "complex128",
        {"A": (0j, 0j), "B": (1 + 0j, -1j), "C": (2 + 0j, 0j), "D": (1 + 0j, 1j)},
    )
    z = Chain.from_simplices([(("A", "B"), 1), (("B", "C"), 1), (("C", "D"), 1), (("D", "A"), 1)])
    return Polyhedron(z, emb)


def simplex_polyhedron(points, positive=True) -> Polyhedron:
    names = [f"s{i}" for i in range(len(points))]
    K = SimplicialComplex.from_simplices(combinations(names, len(points) - 1))
    cycle = fundamental_cycle(K)
    emb = Embedding(len(points) - 1, "rational", dict(zip(names, map(tuple, points))))
    poly = Polyhedron(cycle, emb)
    if positive and oriented_volume(poly) < 0:
        poly = Polyhedron(cycle.scale(-1), emb)
    return poly


class TestSqDist:
    def test_pythagorean(self):
        emb = Embedding(3, "rational", {"u": (F(0), F(0), F(0)), "v": (F(1), F(2), F(2))})
        assert sq_dist(emb, "u", "v") == 9

    def test_same_vertex(self):
        emb = Embedding(2, "rational", {"u": (F(1), F(2))})
        assert sq_dist(emb, "u", "u") == 0

    def test_complex_orthogonal_null_edge(self):
        emb = Embedding(2, "complex128", {"u": (0j, 0j), "v": (1 + 0j, -1j)})
        assert sq_dist(emb, "u", "v") == 0
        assert hermitian_sq_dist(emb, "u", "v") == pytest.approx(2.0)

    def test_unknown_vertex(self):
        emb = Embedding(1, "rational", {"u": (F(0),)})
        with pytest.raises(KeyError):
            sq_dist(emb, "u", "w")


class TestOrientedVolume:
    def test_corner_simplex(self):
        assert oriented_volume(corner_simplex()) == F(1, 6)

    def test_origin_independence(self):
        p = corner_simplex()
        assert oriented_volume(p, (F(3), F(-2), F(7))) == F(1, 6)

    def test_origin_independence_random(self, rng):
        for _ in range(50):
            pts = random_points(rng, 4, 3)
            poly = simplex_polyhedron(pts, positive=False)
            o1 = tuple(F(rng.randint(-5, 5)) for _ in range(3))
            o2 = tuple(F(rng.randint(-5, 5)) for _ in range(3))
            assert oriented_volume(poly, o1) == oriented_volume(poly, o2)

    def test_reversal_negates(self):
        p = corner_simplex()
        flipped = Polyhedron(p.cycle.scale(-1), p.embedding)
        assert oriented_volume(flipped) == -oriented_volume(p)

    def test_translation_invariance(self, rng):
        for _ in range(30):
            pts = random_points(rng, 4, 3)
            poly = simplex_polyhedron(pts, positive=False)
            offset = tuple(F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3))
            moved = Polyhedron(poly.cycle, poly.embedding.translate(offset))
            assert oriented_volume(moved) == oriented_volume(poly)

    def test_complex_quadrangle_area(self):
        assert oriented_volume(quadrangle()) == 2j


class TestNormalizedVolume:
    def test_corner_simplex_w(self):
        assert normalized_volume(corner_simplex()) == 2

    def test_regular_tetrahedron_w_squared(self):
        # edge 1: V = sqrt(2)/12, so W = 12V has W^2 = 2
        h = math.sqrt(3) / 2
        coords = {
            "a": (0.0, 0.0, 0.0),
            "b": (1.0, 0.0, 0.0),
            "c": (0.5, h, 0.0),
            "d": (0.5, h / 3, math.sqrt(2.0 / 3.0)),
        }
        emb = Embedding(3, "float64", coords)
        poly = Polyhedron(tetra_boundary(), emb)
        w = normalized_volume(poly)
        assert w * w == pytest.approx(2.0, abs=1e-12)

    def test_four_dimensional_corner(self):
        names = list("abcde")
        K = SimplicialComplex.from_simplices(combinations(names, 4))
        cycle = fundamental_cycle(K)
        coords = {"a": (F(0),) * 4}
        for i, v in enumerate(names[1:]):
            coords[v] = tuple(F(1) if j == i else F(0) for j in range(4))
        emb = Embedding(4, "rational", coords)
        poly = Polyhedron(cycle, emb)
        assert abs(normalized_volume(poly)) == 4
        assert abs(oriented_volume(poly)) == F(1, 24)


class TestCayleyMenger:
    def test_collinear_points_vanish(self):
        assert cayley_menger(CmInput.from_points([(F(0),), (F(1),), (F(2),)])) == 0

    def test_right_triangle_against_numpy(self):
        pts = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1))]
        ours = cayley_menger(CmInput.from_points(pts))
        grid = [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 2], [1, 1, 2, 0]]
        oracle = round(float(np.linalg.det(np.array(grid, dtype=float))))
        assert ours == oracle == -4

    def test_regular_tetrahedron_grid(self):
        grid = [[F(int(i != j)) for j in range(4)] for i in range(4)]
        cm = cayley_menger(CmInput.from_sq_dists(grid))
        m = np.ones((5, 5)) - np.eye(5)
        assert cm == round(float(np.linalg.det(m))) == 4
        # cross-check the volume formula: V^2 = (-1)^4/(2^3*36) * 4 = 1/72
        assert F(cm, 2**3 * 36) == F(1, 72)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            CmInput.from_sq_dists([[F(1), F(0)], [F(0), F(0)]])
        with pytest.raises(ValueError):
            CmInput.from_sq_dists([[F(0), F(1)], [F(2), F(0)]])

    def test_affinely_dependent_vanish_randomized(self, rng):
        # n + 2 points in dimension n
        for _ in range(100):
            n = rng.randint(2, 4)
            pts = random_points(rng, n + 2, n)
            assert cayley_menger(CmInput.from_points(pts)) == 0


class TestCmVolumeIdentity:
    def test_corner_exact(self):
        pts = [(F(0), F(0), F(0)), (F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(1))]
        assert cm_volume_identity(pts, 3) == 0

    def test_random_rational_simplices(self, rng):
        for _ in range(100):
            n = rng.randint(2, 4)
            pts = random_points(rng, n + 1, n)
            assert cm_volume_identity(pts, n) == 0

    def test_float_simplices_tiny_residual(self, rng):
        for _ in range(100):
            pts = [tuple(rng.uniform(-2, 2) for _ in range(4)) for _ in range(5)]
            res = cm_volume_identity(pts, 4)
            scale = max(1e-30, *(abs(x) for p in pts for x in p)) ** 8
            assert abs(res) <= 1e-12 * max(1.0, scale)


class TestMonicRelation:
    def test_heron_triangle_345(self):
        rel = simplex_monic_relation(2)
        # 3-4-5 right triangle: A = 6, W = 2 * 2! * 6 = 24, CM = -576
        vals = {"W": F(24), "l_v0_v1": F(25), "l_v0_v2": F(9), "l_v1_v2": F(16)}
        assert rel.evaluate(vals) == 0

    def test_regular_tetrahedron(self):
        rel = simplex_monic_relation(3)
        ones = {f"l_v{i}_v{j}": 1 for i in range(4) for j in range(i + 1, 4)}
        in_w = rel.substitute(ones)
        w = MultiPoly.variable("W")
        assert in_w == w * w - 2

    def test_odd_halving_integral(self):
        for n in (3, 5):
            cm = symbolic_cm([f"v{i}" for i in range(n + 1)])
            half = cm.divide_exact(2)  # raises if any coefficient were odd
            assert (half * 2) == cm

    def test_identity_specializes_to_universal_coordinates(self):
        # substituting universal squared distances and the universal volume
        # into the relation collapses it to the zero polynomial
        for n in (2, 3):
            rel = simplex_monic_relation(n)
            names = [f"v{i}" for i in range(n + 1)]
            coord = {
                v: [MultiPoly.variable(f"x_{v}_{d}") for d in range(n)] for v in names
            }
            values: dict[str, MultiPoly] = {}
            for i, u in enumerate(names):
                for v in names[i + 1 :]:
                    acc = MultiPoly.constant(0)
                    for d in range(n):
                        diff = coord[u][d] - coord[v][d]
                        acc = acc + diff * diff
                    values[edge_variable(u, v)] = acc
            matrix = [
                [coord[names[j + 1]][i] - coord[names[0]][i] for j in range(n)]
                for i in range(n)
            ]
            from bellows.exact import poly_det

            values["W"] = poly_det(matrix) * (2 ** (n // 2))
            assert rel.substitute(values).is_zero


class TestVolumeViaFilling:
    def test_tetra_direct(self):
        poly = corner_simplex()
        sign = 1 if poly.cycle.coefficient(("b", "c", "d")) > 0 else -1
        Y = Chain(3, {("a", "b", "c", "d"): sign})
        if boundary(Y) != poly.cycle:
            Y = Y.scale(-1)
        assert volume_via_filling(poly, Y) == 2

    def test_octahedron_cone_filling(self):
        Z = octahedron_cycle()
        poly = Polyhedron(Z, octahedron_embedding())
        from bellows.homology import fill_boundary
        from bellows.simplicial import clique_complex, support

        base = support(Z)
        edges = list(base.k_simplices(1)) + [("apex", v) for v in base.vertices()]
        K = clique_complex(base.vertices() + ["apex"], edges)
        emb = Embedding(3, "rational", {**poly.embedding.coords, "apex": (F(0), F(0), F(0))})
        Y = fill_boundary(Z, K)
        filled = volume_via_filling(Polyhedron(Z, emb), Y)
        assert filled == normalized_volume(poly)

    def test_invariant_under_added_boundaries(self, rng):
        poly = corner_simplex()
        Y = Chain(3, {("a", "b", "c", "d"): 1})
        if boundary(Y) != poly.cycle:
            Y = Y.scale(-1)
        emb = poly.embedding
        pool = list("abcd") + ["e"]
        coords = {**emb.coords, "e": (F(1), F(1), F(1))}
        poly_ext = Polyhedron(poly.cycle, Embedding(3, "rational", coords))
        w0 = volume_via_filling(poly_ext, Y)
        for _ in range(20):
            terms = {}
            for _ in range(rng.randint(1, 3)):
                simp = tuple(sorted(rng.sample(pool, 5)))
                terms[simp] = rng.randint(-2, 2)
            X = Chain(4, {s: c for s, c in terms.items() if c})
            Y2 = Y + boundary(X)
            assert volume_via_filling(poly_ext, Y2) == w0

    def test_rejects_non_filling(self):
        poly = corner_simplex()
        Y = Chain(3, {("a", "b", "c", "d"): 5})
        with pytest.raises(ValueError):
            volume_via_filling(poly, Y)


class TestVolumeBound:
    def test_corner_simplex_satisfied(self):
        vb = volume_upper_bound(corner_simplex())
        assert vb.satisfied
        assert vb.bound >= 1 / 6

    def test_random_real_octahedra(self, rng):
        Z = octahedron_cycle()
        for _ in range(200):
            coords = {
                v: tuple(rng.uniform(-3, 3) for _ in range(3))
                for v in ("px", "nx", "py", "ny", "pz", "nz")
            }
            poly = Polyhedron(Z, Embedding(3, "float64", coords))
            assert volume_upper_bound(poly).satisfied

    def test_complex_quadrangle_orthogonal_bound_fails(self):
        vb = volume_upper_bound(quadrangle(), use_orthogonal=True)
        assert vb.bound == 0.0
        assert vb.volume_abs == pytest.approx(2.0)
        assert not vb.satisfied

    def test_complex_quadrangle_hermitian_bound_holds(self):
        assert volume_upper_bound(quadrangle()).satisfied


class TestEmbeddingJson:
    def test_rational_round_trip(self, tmp_path):
        emb = octahedron_embedding()
        path = tmp_path / "emb.json"
        emb.save(str(path))
        back = Embedding.load(str(path))
        assert back == emb

    def test_complex_round_trip(self, tmp_path):
        emb = quadrangle().embedding
        path = tmp_path / "emb.json"
        emb.save(str(path))
        assert Embedding.load(str(path)) == emb

    def test_fraction_strings(self):
        emb = Embedding.from_json(
            {"dim": 2, "field": "rational", "coords": {"a": ["1/2", "-3"], "b": ["0", "7/5"]}}
        )
        assert emb.point("a") == (F(1, 2), F(-3))
