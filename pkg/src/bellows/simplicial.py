"""Abstract simplicial complexes, integer chains, and the boundary operator.

Vertices are opaque strings ordered lexicographically.  A simplex is stored
as a sorted tuple of distinct vertex names; orientation data lives in a
parity flag relative to that canonical ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping

Simplex = tuple[str, ...]


class InvalidComplexError(ValueError):
    pass


class NonOrientableError(InvalidComplexError):
    pass


def sort_with_parity(vertices: Iterable[str]) -> tuple[Simplex, int]:
    """Sort a vertex sequence, returning the permutation parity (+1/-1)."""
    names = list(vertices)
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate vertices in simplex {names}")
    sign = 1
    for i in range(1, len(names)):
        j = i
        while j > 0 and names[j - 1] > names[j]:
            names[j - 1], names[j] = names[j], names[j - 1]
            sign = -sign
            j -= 1
    return tuple(names), sign


@dataclass(frozen=True)
class OrientedSimplex:
    """A simplex with orientation: sorted vertices plus a parity flag."""

    vertices: Simplex
    sign: int = 1

    def __post_init__(self):
        verts, parity = sort_with_parity(self.vertices)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "sign", parity * (1 if self.sign >= 0 else -1))

    @classmethod
    def from_ordering(cls, vertices: Iterable[str]) -> "OrientedSimplex":
        return cls(tuple(vertices), 1)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


class Chain:
    """Integer-coefficient formal sum of same-dimension sorted simplices."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Simplex, int] | None = None):
        self.dim = dim
        clean: dict[Simplex, int] = {}
        if terms:
            for simp, coeff in terms.items():
                if len(simp) != dim + 1:
                    raise ValueError(f"simplex {simp} has wrong dimension for a {dim}-chain")
                if list(simp) != sorted(simp):
                    raise ValueError(f"simplex {simp} is not in canonical sorted order")
                c = int(coeff)
                if c:
                    clean[tuple(simp)] = c
        self.terms = clean

    @classmethod
    def from_simplices(cls, items: Iterable[tuple[Iterable[str], int]]) -> "Chain":
        """Build from (vertex ordering, coefficient) pairs, folding in parity."""
        acc: dict[Simplex, int] = {}
        dim = None
        for verts, coeff in items:
            simp, parity = sort_with_parity(verts)
            if dim is None:
                dim = len(simp) - 1
            elif len(simp) - 1 != dim:
                raise ValueError("mixed dimensions in chain input")
            acc[simp] = acc.get(simp, 0) + parity * int(coeff)
        if dim is None:
            raise ValueError("empty chain input needs an explicit dimension")
        return cls(dim, acc)

    @classmethod
    def zero(cls, dim: int) -> "Chain":
        return cls(dim, {})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, verts: Iterable[str]) -> int:
        simp, parity = sort_with_parity(verts)
        return parity * self.terms.get(simp, 0)

    def __add__(self, other: "Chain") -> "Chain":
        if self.dim != other.dim:
            raise ValueError("cannot add chains of different dimensions")
        terms = dict(self.terms)
        for s, c in other.terms.items():
            v = terms.get(s, 0) + c
            if v:
                terms[s] = v
            else:
                terms.pop(s, None)
        return Chain(self.dim, terms)

    def __neg__(self) -> "Chain":
        return Chain(self.dim, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scale(self, k: int) -> "Chain":
        if k == 0:
            return Chain(self.dim, {})
        return Chain(self.dim, {s: c * k for s, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[Simplex, int]]:
        return sorted(self.terms.items())

    def vertices(self) -> set[str]:
        out: set[str] = set()
        for s in self.terms:
            out.update(s)
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return f"Chain({self.dim}, 0)"
        bits = [f"{c:+d}*{'|'.join(s)}" for s, c in self.sorted_terms()]
        return f"Chain({self.dim}, {' '.join(bits)})"


def boundary(chain: Chain) -> Chain:
    """Alternating-sign simplicial boundary; linear, with boundary(boundary) = 0.

    The boundary of any 0-chain is the zero chain in dimension -1 (the
    complex is not augmented).
    """
    if chain.dim == 0:
        return Chain(-1, {})
    out: dict[Simplex, int] = {}
    for simp, coeff in chain.terms.items():
        for i in range(len(simp)):
            face = simp[:i] + simp[i + 1 :]
            sign = coeff if i % 2 == 0 else -coeff
            v = out.get(face, 0) + sign
            if v:
                out[face] = v
            else:
                out.pop(face, None)
    return Chain(chain.dim - 1, out)


class SimplicialComplex:
    """Face-closed simplex set stored as maximal simplices plus a face index.

    The empty simplex is a member of every complex and is kept implicit.
    """

    def __init__(self, maximal: Iterable[Simplex]):
        maxes = {tuple(m) for m in maximal}
        for m in maxes:
            if list(m) != sorted(m) or len(set(m)) != len(m):
                raise InvalidComplexError(f"simplex {m} is not a sorted duplicate-free tuple")
        pruned = {m for m in maxes if not any(set(m) < set(o) for o in maxes)}
        faces: dict[int, set[Simplex]] = {}
        for m in pruned:
            for k in range(1, len(m) + 1):
                bucket = faces.setdefault(k - 1, set())
                for f in combinations(m, k):
                    bucket.add(f)
        self._maximal = frozenset(pruned)
        self._faces = {k: frozenset(v) for k, v in faces.items()}

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[str]]) -> "SimplicialComplex":
        return cls(tuple(sorted(set(s))) for s in simplices)

    @property
    def maximal_simplices(self) -> frozenset[Simplex]:
        return self._maximal

    @property
    def dim(self) -> int:
        return max(self._faces) if self._faces else -1

    def k_simplices(self, k: int) -> list[Simplex]:
        return sorted(self._faces.get(k, ()))

    def vertices(self) -> list[str]:
        return [s[0] for s in self.k_simplices(0)]

    def __contains__(self, simplex: Iterable[str]) -> bool:
        s = tuple(sorted(simplex))
        if not s:
            return True
        return s in self._faces.get(len(s) - 1, frozenset())

    def __iter__(self) -> Iterator[Simplex]:
        for k in sorted(self._faces):
            yield from sorted(self._faces[k])

    def num_simplices(self) -> int:
        return sum(len(v) for v in self._faces.values())

    def __le__(self, other: "SimplicialComplex") -> bool:
        return all(s in other for s in self._maximal)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._maximal == other._maximal

    def __hash__(self) -> int:
        return hash(self._maximal)

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, maximal={len(self._maximal)})"


def support(chain: Chain) -> SimplicialComplex:
    """Subcomplex spanned by the simplices carrying nonzero coefficients."""
    return SimplicialComplex(chain.terms.keys())


@dataclass
class PseudomanifoldReport:
    is_pseudomanifold: bool
    is_strongly_connected: bool
    stray_simplices: list[Simplex] = field(default_factory=list)
    facet_defects: list[tuple[Simplex, int]] = field(default_factory=list)


def validate_pseudomanifold(K: SimplicialComplex, k: int) -> PseudomanifoldReport:
    """Check purity in dimension k, the two-cofaces rule, and strong connectivity."""
    top = K.k_simplices(k)
    top_set = set(top)
    stray: list[Simplex] = []
    for simp in K:
        if len(simp) - 1 > k:
            stray.append(simp)
        elif not any(set(simp) <= set(t) for t in top_set):
            stray.append(simp)
    incidence: dict[Simplex, list[Simplex]] = {}
    for t in top:
        for i in range(len(t)):
            incidence.setdefault(t[:i] + t[i + 1 :], []).append(t)
    defects = [
        (facet, len(cofaces)) for facet, cofaces in sorted(incidence.items()) if len(cofaces) != 2
    ]
    is_pm = not stray and not defects and bool(top)

    connected = bool(top)
    if top:
        seen = {top[0]}
        queue = [top[0]]
        while queue:
            cur = queue.pop()
            for i in range(len(cur)):
                for nb in incidence.get(cur[:i] + cur[i + 1 :], ()):
                    if nb not in seen:
                        seen.add(nb)
                        queue.append(nb)
        connected = len(seen) == len(top)
    return PseudomanifoldReport(is_pm, connected, stray, defects)


def fundamental_cycle(K: SimplicialComplex, seed: OrientedSimplex | None = None) -> Chain:
    """Propagate a consistent orientation over all top simplices.

    The orientation spreads breadth-first through the dual graph from the
    seed (default: the lexicographically first top simplex, positively
    oriented).  Raises NonOrientableError when sign propagation conflicts.
    """
    k = K.dim
    report = validate_pseudomanifold(K, k)
    if not report.is_pseudomanifold or not report.is_strongly_connected:
        raise InvalidComplexError(
            f"not a strongly connected pseudo-manifold: {report}"
        )
    top = K.k_simplices(k)
    if seed is None:
        seed = OrientedSimplex(top[0], 1)
    if seed.vertices not in set(top):
        raise InvalidComplexError(f"seed simplex {seed.vertices} is not a top simplex")

    incidence: dict[Simplex, list[Simplex]] = {}
    for t in top:
        for i in range(len(t)):
            incidence.setdefault(t[:i] + t[i + 1 :], []).append(t)

    def facet_sign(simplex: Simplex, facet: Simplex) -> int:
        i = simplex.index(next(v for v in simplex if v not in facet))
        return 1 if i % 2 == 0 else -1

    signs: dict[Simplex, int] = {seed.vertices: seed.sign}
    queue = [seed.vertices]
    while queue:
        cur = queue.pop(0)
        for i in range(len(cur)):
            facet = cur[:i] + cur[i + 1 :]
            for nb in incidence[facet]:
                if nb == cur:
                    continue
                needed = -signs[cur] * facet_sign(cur, facet) * facet_sign(nb, facet)
                if nb in signs:
                    if signs[nb] != needed:
                        raise NonOrientableError(
                            f"orientation conflict at facet {facet} between {cur} and {nb}"
                        )
                else:
                    signs[nb] = needed
                    queue.append(nb)
    cycle = Chain(k, signs)
    if not boundary(cycle).is_zero:
        raise NonOrientableError("sign propagation did not produce a cycle")
    return cycle


def clique_complex(
    vertices: Iterable[str],
    edges: Iterable[tuple[str, str]],
    max_dim: int = 8,
) -> SimplicialComplex:
    """Complex of all cliques of a simple graph, capped at ``max_dim``.

    Maximal cliques come from Bron-Kerbosch with pivoting; cliques larger
    than the cap are represented by all of their (max_dim+1)-subsets.
    """
    verts = sorted(set(vertices))
    adj: dict[str, set[str]] = {v: set() for v in verts}
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop edge {u}")
        adj[u].add(v)
        adj[v].add(u)

    cliques: list[set[str]] = []

    def bron_kerbosch(r: set[str], p: set[str], x: set[str]) -> None:
        if not p and not x:
            cliques.append(set(r))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            bron_kerbosch(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    bron_kerbosch(set(), set(verts), set())

    maximal: set[Simplex] = set()
    cap = max_dim + 1
    for c in cliques:
        if len(c) <= cap:
            maximal.add(tuple(sorted(c)))
        else:
            maximal.update(combinations(sorted(c), cap))
    return SimplicialComplex(maximal)


# -- JSON interchange ---------------------------------------------------------


def cycle_to_json(chain: Chain) -> dict:
    return {
        "vertices": sorted(chain.vertices()),
        "cycle": [
            {"simplex": list(simp), "coeff": coeff} for simp, coeff in chain.sorted_terms()
        ],
    }


def cycle_from_json(data: dict) -> Chain:
    items = data.get("cycle")
    if not isinstance(items, list) or not items:
        raise InvalidComplexError("cycle file must contain a non-empty 'cycle' list")
    return Chain.from_simplices(
        ((tuple(entry["simplex"]), int(entry["coeff"])) for entry in items)
    )


def load_cycle(path: str) -> Chain:
    with open(path, "r", encoding="utf-8") as fh:
        return cycle_from_json(json.load(fh))


def save_cycle(chain: Chain, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cycle_to_json(chain), fh, indent=2, sort_keys=True)
        fh.write("\n")
