"""Embedded polyhedra: squared distances, oriented volume, Cayley-Menger
determinants, and the monic relation tying normalized volume to edge data.

A polyhedron is a pair (Z, P): a combinatorial cycle of dimension n-1 plus a
coordinate assignment over one of the supported scalar fields.  The
normalized volume is W = 2^floor(n/2) * n! * V, which keeps all volume
algebra inside integer polynomials.  For a single simplex the relation reads
W^2 = -CM for even n and W^2 = CM/2 for odd n (degree counting forces the
squared form; CM/2 is an integer polynomial because an odd-order symmetric
zero-diagonal determinant has even coefficients).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from bellows import fields
from bellows.exact.poly import MultiPoly, poly_det, scalar_det
from bellows.simplicial import Chain, boundary, support


class FacePlanarityError(ValueError):
    pass


@dataclass(frozen=True)
class Embedding:
    """Vertex coordinates over a scalar field."""

    dim: int
    field: str
    coords: dict[str, tuple[Any, ...]]

    def __post_init__(self):
        fields.field(self.field)
        for v, xs in self.coords.items():
            if len(xs) != self.dim:
                raise ValueError(f"vertex {v} has {len(xs)} coordinates, expected {self.dim}")

    @property
    def scalar_field(self) -> fields.ScalarField:
        return fields.field(self.field)

    def point(self, v: str) -> tuple[Any, ...]:
        if v not in self.coords:
            raise KeyError(f"unknown vertex {v}")
        return self.coords[v]

    def vertices(self) -> list[str]:
        return sorted(self.coords)

    def translate(self, offset: Sequence[Any]) -> "Embedding":
        return Embedding(
            self.dim,
            self.field,
            {v: tuple(x + o for x, o in zip(xs, offset)) for v, xs in self.coords.items()},
        )

    @classmethod
    def from_json(cls, data: dict) -> "Embedding":
        f = fields.field(data["field"])
        dim = int(data["dim"])
        coords = {
            str(v): tuple(f.parse(x) for x in xs) for v, xs in data["coords"].items()
        }
        return cls(dim, f.name, coords)

    def to_json(self) -> dict:
        f = self.scalar_field
        return {
            "dim": self.dim,
            "field": f.name,
            "coords": {v: [f.dump(x) for x in xs] for v, xs in sorted(self.coords.items())},
        }

    @classmethod
    def load(cls, path: str) -> "Embedding":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")


@dataclass(frozen=True)
class Polyhedron:
    """A cycle of dimension n-1 together with an embedding into n-space."""

    cycle: Chain
    embedding: Embedding

    def __post_init__(self):
        if self.cycle.dim != self.embedding.dim - 1:
            raise ValueError(
                f"cycle dimension {self.cycle.dim} does not match ambient dimension "
                f"{self.embedding.dim}"
            )
        if not boundary(self.cycle).is_zero:
            raise ValueError("polyhedron cycle has nonzero boundary")
        missing = self.cycle.vertices() - set(self.embedding.coords)
        if missing:
            raise ValueError(f"cycle vertices missing coordinates: {sorted(missing)}")

    @property
    def dim(self) -> int:
        return self.embedding.dim


def sq_dist(embedding: Embedding, u: str, v: str) -> Any:
    """Squared distance sum((x_u - x_v)^2); for complex coordinates this is
    the orthogonal squared length (no conjugation)."""
    xs, ys = embedding.point(u), embedding.point(v)
    acc = None
    for a, b in zip(xs, ys):
        d = a - b
        term = d * d
        acc = term if acc is None else acc + term
    return embedding.scalar_field.zero if acc is None else acc


def hermitian_sq_dist(embedding: Embedding, u: str, v: str) -> float:
    """Hermitian squared length sum(|x_u - x_v|^2) for complex embeddings."""
    xs, ys = embedding.point(u), embedding.point(v)
    return float(sum(abs(a - b) ** 2 for a, b in zip(xs, ys)))


def edge_lengths(poly: Polyhedron) -> dict[tuple[str, str], Any]:
    """Squared lengths of all edges in the support of the cycle."""
    K = support(poly.cycle)
    return {e: sq_dist(poly.embedding, *e) for e in K.k_simplices(1)}


def _simplex_det(embedding: Embedding, verts: Sequence[str], origin: Sequence[Any]) -> Any:
    cols = [embedding.point(v) for v in verts]
    matrix = [[cols[j][i] - origin[i] for j in range(len(cols))] for i in range(embedding.dim)]
    return scalar_det(matrix)


def oriented_volume(poly: Polyhedron, origin: Sequence[Any] | None = None) -> Any:
    """Generalized oriented volume: the signed cone sum over top simplices.

    The value is independent of the cone origin because the chain is a
    cycle; the default origin is 0.
    """
    n = poly.dim
    emb = poly.embedding
    if origin is None:
        origin = tuple(emb.scalar_field.zero for _ in range(n))
    acc = None
    for simp, coeff in poly.cycle.terms.items():
        det = _simplex_det(emb, simp, origin)
        term = det * coeff
        acc = term if acc is None else acc + term
    if acc is None:
        acc = emb.scalar_field.zero
    return acc / math.factorial(n)


def normalized_volume(poly: Polyhedron, origin: Sequence[Any] | None = None) -> Any:
    """W = 2^floor(n/2) * n! * V, computed without leaving the base ring."""
    n = poly.dim
    emb = poly.embedding
    if origin is None:
        origin = tuple(emb.scalar_field.zero for _ in range(n))
    acc = None
    for simp, coeff in poly.cycle.terms.items():
        det = _simplex_det(emb, simp, origin)
        term = det * coeff
        acc = term if acc is None else acc + term
    if acc is None:
        acc = emb.scalar_field.zero
    return acc * (2 ** (n // 2))


# -- Cayley-Menger -------------------------------------------------------------


@dataclass(frozen=True)
class CmInput:
    """Bordered-determinant input: points, or a squared-distance grid."""

    sq_dists: tuple[tuple[Any, ...], ...]

    @classmethod
    def from_points(cls, points: Sequence[Sequence[Any]]) -> "CmInput":
        pts = [tuple(p) for p in points]
        grid = []
        for a in pts:
            row = []
            for b in pts:
                acc = None
                for x, y in zip(a, b):
                    d = x - y
                    term = d * d
                    acc = term if acc is None else acc + term
                row.append(acc if acc is not None else 0)
            grid.append(tuple(row))
        return cls(tuple(grid))

    @classmethod
    def from_sq_dists(cls, grid: Sequence[Sequence[Any]]) -> "CmInput":
        g = tuple(tuple(row) for row in grid)
        k = len(g)
        for row in g:
            if len(row) != k:
                raise ValueError("squared-distance grid must be square")
        for i in range(k):
            if not _is_zero_entry(g[i][i]):
                raise ValueError("squared-distance grid must have zero diagonal")
            for j in range(i + 1, k):
                if not _entries_equal(g[i][j], g[j][i]):
                    raise ValueError("squared-distance grid must be symmetric")
        return cls(g)

    @property
    def count(self) -> int:
        return len(self.sq_dists)


def _is_zero_entry(x: Any) -> bool:
    if isinstance(x, MultiPoly):
        return x.is_zero
    z = getattr(x, "is_zero", None)
    if z is not None:
        return bool(z)
    return x == 0


def _entries_equal(a: Any, b: Any) -> bool:
    return _is_zero_entry(a - b) if isinstance(a, MultiPoly) else a == b


def cayley_menger(inp: CmInput) -> Any:
    """The bordered determinant of pairwise squared distances.

    Returns a MultiPoly when the grid entries are symbolic, otherwise a
    scalar in the entries' field.
    """
    grid = inp.sq_dists
    k = len(grid)
    symbolic = any(isinstance(e, MultiPoly) for row in grid for e in row)
    if symbolic:
        one: Any = MultiPoly.constant(1)
        zero: Any = MultiPoly.constant(0)
        coerce = MultiPoly.coerce
    else:
        one, zero = 1, 0
        coerce = lambda x: x  # noqa: E731
    matrix = [[zero] + [one] * k]
    for i in range(k):
        matrix.append([one] + [coerce(grid[i][j]) for j in range(k)])
    return poly_det(matrix) if symbolic else scalar_det(matrix)


def cm_from_embedding(embedding: Embedding, verts: Sequence[str]) -> Any:
    return cayley_menger(CmInput.from_points([embedding.point(v) for v in verts]))


def cm_volume_identity(points: Sequence[Sequence[Any]], n: int) -> Any:
    """Residual of V^2 = (-1)^(n+1) CM / (2^n (n!)^2) for n+1 points in n-space.

    Exact zero for rational points; tiny for floats.
    """
    pts = [tuple(p) for p in points]
    if len(pts) != n + 1:
        raise ValueError(f"need {n + 1} points for an {n}-simplex")
    origin = pts[0]
    matrix = [[pts[j + 1][i] - origin[i] for j in range(n)] for i in range(n)]
    det = scalar_det(matrix)
    v = det / math.factorial(n)
    cm = cayley_menger(CmInput.from_points(pts))
    scale = (2**n) * math.factorial(n) ** 2
    sign = 1 if (n + 1) % 2 == 0 else -1
    if isinstance(v, Fraction) and isinstance(cm, Fraction):
        return v * v - Fraction(sign, scale) * cm
    return v * v - sign * cm / scale


def symbolic_cm(names: Sequence[str], var_name=None) -> MultiPoly:
    """Cayley-Menger determinant with one variable per vertex pair."""
    if var_name is None:
        var_name = edge_variable
    k = len(names)
    grid: list[list[Any]] = [[None] * k for _ in range(k)]
    for i in range(k):
        grid[i][i] = MultiPoly.constant(0)
        for j in range(i + 1, k):
            v = MultiPoly.variable(var_name(names[i], names[j]))
            grid[i][j] = v
            grid[j][i] = v
    return cayley_menger(CmInput.from_sq_dists(grid))


def edge_variable(u: str, v: str) -> str:
    a, b = sorted((u, v))
    return f"l_{a}_{b}"


def simplex_monic_relation(n: int, w_name: str = "W") -> MultiPoly:
    """Monic relation between W and the squared edge lengths of an n-simplex.

    Even n: W^2 + CM.  Odd n: W^2 - CM/2, where the halving is exact; a
    failed halving would falsify the implementation and raises.
    """
    if n < 1:
        raise ValueError("ambient dimension must be positive")
    names = [f"v{i}" for i in range(n + 1)]
    cm = symbolic_cm(names)
    w = MultiPoly.variable(w_name)
    if n % 2 == 0:
        return w * w + cm
    try:
        half = cm.divide_exact(2)
    except ValueError as exc:  # pragma: no cover - would falsify the theory
        raise AssertionError(f"odd-order CM determinant was not even: {exc}") from exc
    return w * w - half


def volume_via_filling(poly: Polyhedron, Y: Chain, tol: float = 1e-9) -> Any:
    """Evaluate W as the signed sum of simplex volumes of a filling chain.

    Requires boundary(Y) to equal the polyhedron's cycle; the result is
    checked against the direct normalized volume (exactly for exact fields,
    within ``tol`` otherwise) before being returned.
    """
    if boundary(Y) != poly.cycle:
        raise ValueError("chain does not fill the polyhedron cycle")
    n = poly.dim
    emb = poly.embedding
    acc = None
    for simp, coeff in Y.terms.items():
        origin = emb.point(simp[0])
        det = _simplex_det(emb, simp[1:], origin)
        term = det * coeff
        acc = term if acc is None else acc + term
    if acc is None:
        acc = emb.scalar_field.zero
    w_fill = acc * (2 ** (n // 2))
    w_direct = normalized_volume(poly)
    if emb.scalar_field.exact:
        if w_fill != w_direct:
            raise AssertionError("filling volume disagrees with direct volume")
    elif abs(w_fill - w_direct) > tol * max(1.0, abs(w_direct)):
        raise AssertionError("filling volume disagrees with direct volume beyond tolerance")
    return w_fill


@dataclass
class VolumeBound:
    bound: float
    volume_abs: float
    satisfied: bool
    max_sq_length: float
    c_sigma: int


def volume_upper_bound(poly: Polyhedron, use_orthogonal: bool = False) -> VolumeBound:
    """Crude volume estimate from edge data: |V| <= c_sigma m^n / n! * L^(n/2).

    L is the maximal squared edge length: for real embeddings the squared
    lengths themselves, for complex embeddings the Hermitian squares unless
    ``use_orthogonal`` asks for |orthogonal| squares (which fail to bound
    the volume in general: the flat complex quadrangle has zero orthogonal
    edge lengths and nonzero area).
    """
    emb = poly.embedding
    K = support(poly.cycle)
    edges = K.k_simplices(1)
    n = poly.dim
    m = len(K.k_simplices(0))
    c_sigma = sum(abs(c) for c in poly.cycle.terms.values())
    if emb.field == fields.COMPLEX and not use_orthogonal:
        max_sq = max((hermitian_sq_dist(emb, *e) for e in edges), default=0.0)
    else:
        max_sq = max((abs(_as_complex(sq_dist(emb, *e))) for e in edges), default=0.0)
    bound = c_sigma * (m**n) / math.factorial(n) * max_sq ** (n / 2)
    v = abs(_as_complex(oriented_volume(poly)))
    return VolumeBound(bound, v, v <= bound, max_sq, c_sigma)


def _as_complex(x: Any) -> complex:
    if isinstance(x, Fraction):
        return complex(float(x))
    return complex(x)
