import random
from itertools import combinations

import pytest

from conftest import OCTA_FACES, octahedron_complex, octahedron_cycle, tetra_boundary
from bellows.simplicial import (
    Chain,
    InvalidComplexError,
    NonOrientableError,
    OrientedSimplex,
    SimplicialComplex,
    boundary,
    clique_complex,
    cycle_from_json,
    cycle_to_json,
    fundamental_cycle,
    sort_with_parity,
    support,
    validate_pseudomanifold,
)

# minimal 6-vertex triangulation of the real projective plane
RP2_FACES = [
    ("1", "2", "4"),
    ("1", "2", "5"),
    ("1", "3", "4"),
    ("1", "3", "6"),
    ("1", "5", "6"),
    ("2", "3", "5"),
    ("2", "3", "6"),
    ("2", "4", "6"),
    ("3", "4", "5"),
    ("4", "5", "6"),
]


def naive_boundary(chain: Chain) -> dict:
    """Independent sign-unfolded boundary used as an oracle."""
    acc: dict = {}
    for simp, coeff in chain.terms.items():
        for i, _ in enumerate(simp):
            face = simp[:i] + simp[i + 1 :]
            acc[face] = acc.get(face, 0) + coeff * (-1) ** i
    return {k: v for k, v in acc.items() if v}


def random_chain(rng: random.Random, dim: int, pool: str = "abcdefgh") -> Chain:
    terms = {}
    for _ in range(rng.randint(1, 6)):
        simp = tuple(sorted(rng.sample(pool, dim + 1)))
        terms[simp] = rng.randint(-3, 3)
    return Chain(dim, {s: c for s, c in terms.items() if c})


class TestOrientedSimplex:
    def test_parity(self):
        assert sort_with_parity(("b", "a", "c")) == (("a", "b", "c"), -1)
        assert sort_with_parity(("c", "a", "b")) == (("a", "b", "c"), 1)

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            OrientedSimplex.from_ordering(("a", "a", "b"))


class TestBoundary:
    def test_triangle_unfolds(self):
        ch = Chain.from_simplices([(("a", "b", "c"), 1)])
        assert boundary(ch) == Chain(
            1, {("b", "c"): 1, ("a", "c"): -1, ("a", "b"): 1}
        )

    def test_boundary_squared_zero_many_random_chains(self, rng):
        for _ in range(1000):
            dim = rng.randint(1, 5)
            ch = random_chain(rng, dim)
            assert boundary(boundary(ch)).is_zero

    def test_matches_naive_oracle(self, rng):
        for _ in range(200):
            ch = random_chain(rng, rng.randint(1, 4))
            assert boundary(ch).terms == naive_boundary(ch)

    def test_zero_dim_boundary_is_empty(self):
        assert boundary(Chain(0, {("a",): 2})).is_zero

    def test_octahedron_cycle_closes(self):
        assert boundary(octahedron_cycle()).is_zero


class TestSupport:
    def test_zero_chain(self):
        K = support(Chain(2, {}))
        assert K.dim == -1
        assert K.num_simplices() == 0

    def test_single_triangle_has_seven_faces(self):
        K = support(Chain.from_simplices([(("a", "b", "c"), 1)]))
        assert K.num_simplices() == 7

    def test_octahedron_counts(self):
        K = support(octahedron_cycle())
        assert len(K.k_simplices(0)) == 6
        assert len(K.k_simplices(1)) == 12
        assert len(K.k_simplices(2)) == 8

    def test_support_of_boundary_contained(self, rng):
        for _ in range(100):
            ch = random_chain(rng, rng.randint(1, 4))
            assert support(boundary(ch)) <= support(ch)


class TestPseudomanifold:
    def test_tetra_boundary(self):
        K = SimplicialComplex.from_simplices(combinations("abcd", 3))
        rep = validate_pseudomanifold(K, 2)
        assert rep.is_pseudomanifold and rep.is_strongly_connected

    def test_two_triangles_sharing_vertex(self):
        K = SimplicialComplex.from_simplices([("a", "b", "c"), ("a", "d", "e")])
        rep = validate_pseudomanifold(K, 2)
        assert not rep.is_pseudomanifold
        assert rep.facet_defects  # free edges listed

    def test_octahedron_incidence_oracle(self):
        K = octahedron_complex()
        counts: dict = {}
        for f in OCTA_FACES:
            t = tuple(sorted(f))
            for i in range(3):
                counts[t[:i] + t[i + 1 :]] = counts.get(t[:i] + t[i + 1 :], 0) + 1
        assert all(c == 2 for c in counts.values())
        rep = validate_pseudomanifold(K, 2)
        assert rep.is_pseudomanifold and rep.is_strongly_connected


class TestFundamentalCycle:
    def test_tetra_seeded(self):
        K = SimplicialComplex.from_simplices(combinations("abcd", 3))
        z = fundamental_cycle(K, OrientedSimplex.from_ordering(("a", "b", "c")))
        assert len(z.terms) == 4
        assert boundary(z).is_zero
        assert z.coefficient(("a", "b", "c")) == 1

    def test_octahedron(self):
        z = octahedron_cycle()
        assert len(z.terms) == 8
        assert all(c in (-1, 1) for c in z.terms.values())
        assert naive_boundary(z) == {}

    def test_nonorientable_rejected(self):
        K = SimplicialComplex.from_simplices(RP2_FACES)
        rep = validate_pseudomanifold(K, 2)
        assert rep.is_pseudomanifold and rep.is_strongly_connected
        with pytest.raises(NonOrientableError):
            fundamental_cycle(K)

    def test_non_pseudomanifold_rejected(self):
        K = SimplicialComplex.from_simplices([("a", "b", "c")])
        with pytest.raises(InvalidComplexError):
            fundamental_cycle(K)


class TestCliqueComplex:
    def test_complete_graph_gives_full_simplex(self):
        verts = list("abcd")
        edges = list(combinations(verts, 2))
        K = clique_complex(verts, edges)
        assert K.dim == 3
        assert tuple("abcd") in K

    def test_four_cycle_has_no_triangles(self):
        K = clique_complex("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")])
        assert K.dim == 1
        assert len(K.k_simplices(1)) == 4

    def test_octahedron_graph_bruteforce_oracle(self):
        verts = ["a1", "a2", "b1", "b2", "c1", "c2"]
        antipodal = [{"a1", "a2"}, {"b1", "b2"}, {"c1", "c2"}]
        edges = [
            (u, v)
            for i, u in enumerate(verts)
            for v in verts[i + 1 :]
            if {u, v} not in antipodal
        ]
        K = clique_complex(verts, edges)
        edge_set = {frozenset(e) for e in edges}
        expected = set()
        for size in range(1, 7):
            for sub in combinations(verts, size):
                if all(frozenset(p) in edge_set for p in combinations(sub, 2)):
                    expected.add(sub)
        actual = {s for s in K}
        assert actual == expected
        assert sorted(len(s) for s in K.maximal_simplices) == [3] * 8

    def test_monotone_in_the_graph(self, rng):
        verts = list("abcdef")
        all_edges = list(combinations(verts, 2))
        for _ in range(30):
            sub = [e for e in all_edges if rng.random() < 0.5]
            extra = [e for e in all_edges if e not in sub and rng.random() < 0.5]
            small = clique_complex(verts, sub)
            large = clique_complex(verts, sub + extra)
            assert small <= large

    def test_dimension_cap(self):
        verts = [f"v{i}" for i in range(6)]
        edges = list(combinations(verts, 2))
        K = clique_complex(verts, edges, max_dim=2)
        assert K.dim == 2
        assert len(K.k_simplices(2)) == 20


class TestJson:
    def test_round_trip(self):
        z = octahedron_cycle()
        assert cycle_from_json(cycle_to_json(z)) == z

    def test_rejects_empty(self):
        with pytest.raises(InvalidComplexError):
            cycle_from_json({"cycle": []})
