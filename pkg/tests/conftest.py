"""Shared combinatorial and geometric fixtures."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest

from bellows.geometry import Embedding, Polyhedron
from bellows.simplicial import (
    Chain,
    OrientedSimplex,
    SimplicialComplex,
    fundamental_cycle,
)

OCTA_FACES = [
    ("px", "py", "pz"),
    ("py", "pz", "nx"),
    ("nx", "pz", "ny"),
    ("ny", "pz", "px"),
    ("px", "ny", "nz"),
    ("ny", "nx", "nz"),
    ("nx", "py", "nz"),
    ("py", "px", "nz"),
]


def octahedron_complex() -> SimplicialComplex:
    return SimplicialComplex.from_simplices(OCTA_FACES)


def octahedron_cycle() -> Chain:
    return fundamental_cycle(
        octahedron_complex(), OrientedSimplex.from_ordering(("px", "py", "pz"))
    )


def octahedron_embedding() -> Embedding:
    F = Fraction
    return Embedding(
        3,
        "rational",
        {
            "px": (F(1), F(0), F(0)),
            "nx": (F(-1), F(0), F(0)),
            "py": (F(0), F(1), F(0)),
            "ny": (F(0), F(-1), F(0)),
            "pz": (F(0), F(0), F(1)),
            "nz": (F(0), F(0), F(-1)),
        },
    )


def tetra_boundary() -> Chain:
    K = SimplicialComplex.from_simplices(combinations("abcd", 3))
    cycle = fundamental_cycle(K, OrientedSimplex.from_ordering(("b", "c", "d")))
    return cycle


def corner_simplex() -> Polyhedron:
    """Unit corner simplex with positive orientation (volume 1/6)."""
    F = Fraction
    emb = Embedding(
        3,
        "rational",
        {
            "a": (F(0), F(0), F(0)),
            "b": (F(1), F(0), F(0)),
            "c": (F(0), F(1), F(0)),
            "d": (F(0), F(0), F(1)),
        },
    )
    from bellows.geometry import oriented_volume

    cycle = tetra_boundary()
    poly = Polyhedron(cycle, emb)
    if oriented_volume(poly) < 0:
        poly = Polyhedron(cycle.scale(-1), emb)
    return poly


def random_fraction(rng: random.Random, span: int = 8, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_points(rng: random.Random, count: int, dim: int) -> list[tuple[Fraction, ...]]:
    return [tuple(random_fraction(rng) for _ in range(dim)) for _ in range(count)]


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260810)
