"""Face posets, omni-orientations, and volume for non-simplicial polyhedra.

A graded poset with incidence signs stands in for the combinatorics of a
polyhedron with flat faces.  A generalized triangulation assigns every face
F a chain Y_F inside the full simplex on F's vertices so that the boundary
of Y_F matches the signed sum of the chains one dimension down; the top
chain then carries the normalized volume.  Posets are ingested as data
(JSON), never derived from point-set geometry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable

from bellows.exact.poly import scalar_det
from bellows.geometry import Embedding
from bellows.homology import fill_boundary
from bellows.simplicial import Chain, SimplicialComplex, boundary, sort_with_parity


class PosetError(ValueError):
    pass


class FacePlanarityError(ValueError):
    def __init__(self, message: str, face_id: str):
        super().__init__(message)
        self.face_id = face_id


@dataclass(frozen=True)
class Face:
    id: str
    dim: int
    vertices: tuple[str, ...]
    covers: tuple[str, ...]


class FacePoset:
    """Graded face poset with a unique maximal element."""

    def __init__(self, faces: Iterable[Face]):
        self.faces: dict[str, Face] = {}
        for f in faces:
            if f.id in self.faces:
                raise PosetError(f"duplicate face id {f.id}")
            if "|" in f.id:
                raise PosetError(f"face id {f.id} may not contain '|'")
            self.faces[f.id] = f
        self._by_dim: dict[int, list[Face]] = {}
        for f in self.faces.values():
            self._by_dim.setdefault(f.dim, []).append(f)
        for level in self._by_dim.values():
            level.sort(key=lambda f: f.id)
        dims = sorted(self._by_dim)
        if not dims or dims[0] != 0:
            raise PosetError("poset must contain vertices at dimension 0")
        if dims != list(range(dims[-1] + 1)):
            raise PosetError("poset is not graded: missing dimension level")
        tops = self._by_dim[dims[-1]]
        if len(tops) != 1:
            raise PosetError("poset must have a unique maximal face")
        for f in self.faces.values():
            if f.dim == 0:
                if len(f.vertices) != 1 or f.covers:
                    raise PosetError(f"vertex face {f.id} malformed")
                continue
            if len(f.vertices) < f.dim + 1:
                raise PosetError(f"face {f.id} has too few vertices for dimension {f.dim}")
            if not f.covers:
                raise PosetError(f"face {f.id} covers nothing")
            for g in f.covers:
                if g not in self.faces:
                    raise PosetError(f"face {f.id} covers unknown face {g}")
                gf = self.faces[g]
                if gf.dim != f.dim - 1:
                    raise PosetError(f"cover {f.id} -> {g} skips a dimension")
                if not set(gf.vertices) <= set(f.vertices):
                    raise PosetError(f"cover {f.id} -> {g} is not vertex-monotone")

    @property
    def dim(self) -> int:
        return max(self._by_dim)

    @property
    def top(self) -> Face:
        return self._by_dim[self.dim][0]

    def by_dim(self, k: int) -> list[Face]:
        return list(self._by_dim.get(k, []))

    def vertex_names(self) -> list[str]:
        return sorted(v.vertices[0] for v in self.by_dim(0))

    def has_triangular_two_faces(self) -> bool:
        return all(len(f.vertices) == 3 for f in self.by_dim(2))

    def covering_pairs(self) -> list[tuple[str, str]]:
        return [(f.id, g) for f in self.faces.values() for g in f.covers]


IncidenceSigns = dict[tuple[str, str], int]


def signs_from_json(data: dict) -> IncidenceSigns:
    out: IncidenceSigns = {}
    for key, value in data.items():
        f, g = key.split("|")
        out[(f, g)] = int(value)
    return out


def signs_to_json(signs: IncidenceSigns) -> dict:
    return {f"{f}|{g}": v for (f, g), v in sorted(signs.items())}


@dataclass
class IncidenceReport:
    missing: list[tuple[str, str]]
    spurious: list[tuple[str, str]]
    bad_values: list[tuple[str, str]]
    composition: list[tuple[str, str]]
    edge_orientation: list[str]

    @property
    def ok(self) -> bool:
        return not (
            self.missing
            or self.spurious
            or self.bad_values
            or self.composition
            or self.edge_orientation
        )


def validate_incidence(poset: FacePoset, signs: IncidenceSigns) -> IncidenceReport:
    """Check sign support, values, edge orientations, and the two-step rule:
    summing sign products over middle faces must give zero for every pair of
    faces two dimensions apart."""
    covering = set(poset.covering_pairs())
    missing = sorted(covering - set(signs))
    spurious = sorted(set(signs) - covering)
    bad_values = sorted(pair for pair, v in signs.items() if v not in (-1, 1))

    edge_orientation = []
    for e in poset.by_dim(1):
        vals = [signs.get((e.id, g)) for g in e.covers]
        if len(e.covers) != 2 or None in vals or sum(vals) != 0:
            edge_orientation.append(e.id)

    composition = []
    for k in range(2, poset.dim + 1):
        lower: dict[str, Face] = {f.id: f for f in poset.by_dim(k - 1)}
        for F in poset.by_dim(k):
            reachable: dict[str, int] = {}
            for g in F.covers:
                eps_fg = signs.get((F.id, g), 0)
                for h in lower[g].covers if g in lower else poset.faces[g].covers:
                    reachable[h] = reachable.get(h, 0) + eps_fg * signs.get((g, h), 0)
            for h, total in sorted(reachable.items()):
                if total != 0:
                    composition.append((F.id, h))
    return IncidenceReport(missing, spurious, bad_values, composition, edge_orientation)


def flip_face(signs: IncidenceSigns, poset: FacePoset, face_id: str) -> IncidenceSigns:
    """Equivalence move: reverse one face's orientation by negating its
    incidence row and column."""
    out = dict(signs)
    for (f, g), v in signs.items():
        if f == face_id or g == face_id:
            out[(f, g)] = -v
    return out


@dataclass
class GeneralizedTriangulation:
    chains: dict[str, Chain]
    strategy: str

    def top_chain(self, poset: FacePoset) -> Chain:
        return self.chains[poset.top.id]


def _cone(apex: str, chain: Chain) -> Chain:
    out: dict[tuple[str, ...], int] = {}
    for simp, coeff in chain.terms.items():
        if apex in simp:
            continue
        cone_simp, parity = sort_with_parity((apex,) + simp)
        v = out.get(cone_simp, 0) + parity * coeff
        if v:
            out[cone_simp] = v
        else:
            out.pop(cone_simp, None)
    return Chain(chain.dim + 1, out)


def build_generalized_triangulation(
    poset: FacePoset, signs: IncidenceSigns, strategy: str = "cone_min"
) -> GeneralizedTriangulation:
    """Inductively fill the defining boundary relations face by face.

    Strategies: cone from a face's smallest vertex ("cone_min"), from its
    largest ("cone_max"), or an integer solve in the full simplex on the
    face's vertices ("snf").  Filling lives in an acyclic simplex, so it
    always succeeds; every produced chain is re-verified against its
    defining relation.
    """
    report = validate_incidence(poset, signs)
    if not report.ok:
        raise PosetError(f"incidence signs invalid: {report}")
    if strategy not in ("cone_min", "cone_max", "snf"):
        raise ValueError(f"unknown strategy {strategy}")
    chains: dict[str, Chain] = {}
    for v in poset.by_dim(0):
        chains[v.id] = Chain(0, {(v.vertices[0],): 1})
    for k in range(1, poset.dim + 1):
        for F in poset.by_dim(k):
            rhs = Chain(k - 1, {})
            for g in F.covers:
                rhs = rhs + chains[g].scale(signs[(F.id, g)])
            if k >= 2 and not boundary(rhs).is_zero:
                raise PosetError(f"signed boundary of face {F.id} is not a cycle")
            if k == 1 and sum(rhs.terms.values()) != 0:
                raise PosetError(f"edge {F.id} has unbalanced endpoints")
            if strategy == "snf":
                full = SimplicialComplex([tuple(sorted(set(F.vertices)))])
                Y = fill_boundary(rhs, full)
            else:
                apex = min(F.vertices) if strategy == "cone_min" else max(F.vertices)
                Y = _cone(apex, rhs)
            if boundary(Y) != rhs:
                raise AssertionError(f"filling verification failed at face {F.id}")
            chains[F.id] = Y
    return GeneralizedTriangulation(chains, strategy)


def check_face_flatness(
    poset: FacePoset, embedding: Embedding, tol: float = 1e-9
) -> None:
    """Every proper k-face's vertices must affinely span at most k dims:
    all (k+1)-minors of the difference matrix vanish (exactly for exact
    fields, within ``tol`` relative for floats)."""
    n = embedding.dim
    exact = embedding.scalar_field.exact
    for k in range(2, min(poset.dim, n)):
        for F in poset.by_dim(k):
            verts = sorted(set(F.vertices))
            base = embedding.point(verts[0])
            cols = [
                [a - b for a, b in zip(embedding.point(v), base)] for v in verts[1:]
            ]
            if len(cols) <= k:
                continue
            scale = 1.0
            if not exact:
                scale = max(
                    1.0, max(abs(float(x)) for col in cols for x in col) ** (k + 1)
                )
            for col_pick in combinations(range(len(cols)), k + 1):
                for row_pick in combinations(range(n), k + 1):
                    minor = scalar_det(
                        [[cols[c][r] for c in col_pick] for r in row_pick]
                    )
                    bad = minor != 0 if exact else abs(float(minor)) > tol * scale
                    if bad:
                        raise FacePlanarityError(
                            f"face {F.id} is not flat: nonzero {k + 1}-minor", F.id
                        )


def volume_ns(
    poset: FacePoset,
    signs: IncidenceSigns,
    triangulation: GeneralizedTriangulation,
    embedding: Embedding,
    flat_tol: float = 1e-9,
) -> Any:
    """Normalized volume of a non-simplicial polyhedron via its top chain.

    Faces must be flat in the embedding; the value is independent of the
    chosen generalized triangulation.
    """
    check_face_flatness(poset, embedding, flat_tol)
    Y = triangulation.top_chain(poset)
    n = embedding.dim
    if Y.dim != n:
        raise ValueError(f"top chain has dimension {Y.dim}, ambient is {n}")
    acc = None
    for simp, coeff in Y.terms.items():
        base = embedding.point(simp[0])
        matrix = [
            [embedding.point(v)[i] - base[i] for v in simp[1:]] for i in range(n)
        ]
        term = scalar_det(matrix) * coeff
        acc = term if acc is None else acc + term
    if acc is None:
        acc = embedding.scalar_field.zero
    return acc * (2 ** (n // 2))


def triangulation_invariance(
    poset: FacePoset,
    signs: IncidenceSigns,
    t1: GeneralizedTriangulation,
    t2: GeneralizedTriangulation,
    embedding: Embedding,
    flat_tol: float = 1e-9,
) -> Any:
    """W(t1) - W(t2); exactly zero over exact fields."""
    w1 = volume_ns(poset, signs, t1, embedding, flat_tol)
    w2 = volume_ns(poset, signs, t2, embedding, flat_tol)
    return w1 - w2


# -- generators -------------------------------------------------------------------


def simplicial_solid_poset(cycle: Chain, top_id: str = "Q") -> tuple[FacePoset, IncidenceSigns]:
    """Poset of a solid bounded by a simplicial cycle.

    The top face covers the cycle's simplices with the cycle coefficients
    as incidence signs; simplicial faces below use the alternating boundary
    signs of their sorted vertex order.
    """
    n = cycle.dim + 1
    faces: list[Face] = []
    signs: IncidenceSigns = {}

    def fid(simp: tuple[str, ...]) -> str:
        return ".".join(simp)

    K = SimplicialComplex(cycle.terms.keys())
    all_verts = sorted(cycle.vertices())
    for k in range(0, cycle.dim + 1):
        for simp in K.k_simplices(k):
            covers = []
            if k > 0:
                for i in range(len(simp)):
                    face = simp[:i] + simp[i + 1 :]
                    covers.append(fid(face))
                    signs[(fid(simp), fid(face))] = 1 if i % 2 == 0 else -1
            faces.append(Face(fid(simp), k, simp, tuple(covers)))
    top_covers = []
    for simp, coeff in cycle.sorted_terms():
        top_covers.append(fid(simp))
        signs[(top_id, fid(simp))] = coeff
    faces.append(Face(top_id, n, tuple(all_verts), tuple(top_covers)))
    return FacePoset(faces), signs


def cube_poset() -> tuple[FacePoset, IncidenceSigns, Embedding]:
    """Unit cube: poset, product-orientation signs, rational embedding.

    Face ids use one character per axis: a fixed bit or '*' for a free
    axis; vertices are also exposed under their coordinate string id.
    """
    axes = 3
    faces: list[Face] = []
    signs: IncidenceSigns = {}

    def vertices_of(pattern: str) -> tuple[str, ...]:
        outs = [""]
        for ch in pattern:
            if ch == "*":
                outs = [o + b for o in outs for b in "01"]
            else:
                outs = [o + ch for o in outs]
        return tuple(sorted(outs))

    def face_dim(pattern: str) -> int:
        return pattern.count("*")

    patterns = [""]
    for _ in range(axes):
        patterns = [p + ch for p in patterns for ch in "01*"]
    for pattern in sorted(patterns):
        k = face_dim(pattern)
        covers = []
        free_positions = [i for i, ch in enumerate(pattern) if ch == "*"]
        for j, pos in enumerate(free_positions):
            for b in "01":
                sub = pattern[:pos] + b + pattern[pos + 1 :]
                covers.append(sub)
                sign = 1 if b == "1" else -1
                if j % 2 == 1:
                    sign = -sign
                signs[(pattern, sub)] = sign
        faces.append(Face(pattern, k, vertices_of(pattern), tuple(covers)))
    emb = Embedding(
        3,
        "rational",
        {
            v: tuple(Fraction(int(ch)) for ch in v)
            for v in vertices_of("***")
        },
    )
    return FacePoset(faces), signs, emb


# -- JSON ---------------------------------------------------------------------------


def poset_to_json(poset: FacePoset, signs: IncidenceSigns) -> dict:
    return {
        "faces": [
            {
                "id": f.id,
                "dim": f.dim,
                "vertices": list(f.vertices),
                "covers": list(f.covers),
            }
            for k in range(poset.dim + 1)
            for f in poset.by_dim(k)
        ],
        "signs": signs_to_json(signs),
    }


def poset_from_json(data: dict) -> tuple[FacePoset, IncidenceSigns]:
    faces = [
        Face(
            str(f["id"]),
            int(f["dim"]),
            tuple(str(v) for v in f["vertices"]),
            tuple(str(c) for c in f.get("covers", ())),
        )
        for f in data["faces"]
    ]
    return FacePoset(faces), signs_from_json(data.get("signs", {}))


def load_poset(path: str) -> tuple[FacePoset, IncidenceSigns]:
    with open(path, "r", encoding="utf-8") as fh:
        return poset_from_json(json.load(fh))


def save_poset(poset: FacePoset, signs: IncidenceSigns, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(poset_to_json(poset, signs), fh, indent=2, sort_keys=True)
        fh.write("\n")
