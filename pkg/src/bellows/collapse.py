"""Valuation-driven collapse laboratory.

A "place" of the coordinate field is simulated concretely by t-adic
valuations on truncated Laurent series: vertex coordinates are seeded
Laurent polynomials with prescribed leading orders, an edge is present when
the squared distance has nonnegative order, and the clique complex of that
graph is the object that collapses.

The ordering construction is the greedy one driven by the valuation: facet
maxima propagate dimension by dimension, and within a fixed maximal facet
the next simplex is chosen by the largest squared-distance valuation.  For
even ambient dimension the edge level is ordered by the first-coordinate
difference valuation instead (the first coordinate is the canonical
choice).  The collapse schedule sweeps dimensions from the top downward,
re-validating freeness of every scheduled pair.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from bellows.exact.laurent import DEFAULT_PRECISION, LaurentScalar, PrecisionError
from bellows.fields import LAURENT
from bellows.geometry import Embedding
from bellows.homology import homology_all
from bellows.simplicial import Simplex, SimplicialComplex

INF = math.inf


class ScheduleFailureError(RuntimeError):
    """A scheduled pair was not free when its turn came."""

    def __init__(self, message: str, simplex: Simplex, facet: Simplex, blockers: list[Simplex]):
        super().__init__(message)
        self.simplex = simplex
        self.facet = facet
        self.blockers = blockers


@dataclass
class PlaceSimulation:
    """A seeded Laurent-coordinate configuration and its derived complex.

    The invariant tying everything together: an edge {u, v} is present
    exactly when the squared distance between u and v has nonnegative
    t-order (the simulated place is finite on it).
    """

    n: int
    vertices: tuple[str, ...]
    coords: dict[str, tuple[LaurentScalar, ...]]
    seed: int
    profile: dict[str, tuple[int, ...]]
    precision: int
    edge_order: list[list[float]]  # int orders; math.inf marks exact zero
    coord1_order: list[list[float]]
    adjacency: list[int]  # bitmask neighbours per vertex index

    @property
    def m(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    def names(self, mask: int) -> Simplex:
        return tuple(self.vertices[i] for i in _bits(mask))

    @property
    def embedding(self) -> Embedding:
        return Embedding(self.n, LAURENT, dict(self.coords))

    def edges(self) -> list[tuple[str, str]]:
        out = []
        for i in range(self.m):
            for j in range(i + 1, self.m):
                if self.adjacency[i] >> j & 1:
                    out.append((self.vertices[i], self.vertices[j]))
        return out

    def is_clique(self, mask: int) -> bool:
        for i in _bits(mask):
            if (self.adjacency[i] | (1 << i)) & mask != mask:
                return False
        return True

    def simplices_by_dim(self) -> list[list[int]]:
        """All cliques of the finiteness graph, grouped by dimension.

        Cliques are extended by vertices above their top bit only, so each
        is produced exactly once.
        """
        by_dim: list[list[int]] = [[1 << i for i in range(self.m)]]
        frontier = by_dim[0]
        while frontier:
            nxt = []
            for mask in frontier:
                top = _top_bit(mask)
                common = -1
                for i in _bits(mask):
                    common &= self.adjacency[i]
                cand = common & ~((1 << (top + 1)) - 1)
                for j in _bits(cand):
                    nxt.append(mask | (1 << j))
            if nxt:
                by_dim.append(nxt)
            frontier = nxt
        return by_dim

    def complex(self) -> SimplicialComplex:
        masks = [m for level in self.simplices_by_dim() for m in level]
        return SimplicialComplex.from_simplices(self.names(m) for m in masks)


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _top_bit(mask: int) -> int:
    return mask.bit_length() - 1


def _draw_coefficient(rng: random.Random) -> Fraction:
    num = rng.randint(1, 2**31)
    if rng.random() < 0.5:
        num = -num
    return Fraction(num, rng.randint(1, 16))


def simulate_place(
    n: int,
    m: int,
    order_profile: Mapping[str, Sequence[int]] | None = None,
    seed: int = 0,
    precision: int = DEFAULT_PRECISION,
    terms_per_coord: int = 3,
    coords_override: Mapping[str, Sequence[LaurentScalar]] | None = None,
) -> PlaceSimulation:
    """Build a seeded Laurent configuration and derive its finiteness graph.

    ``order_profile`` maps a vertex name to the leading t-orders of its
    coordinates (default all zero: a generically finite configuration).
    Coordinates are Laurent polynomials with large random rational
    coefficients, which makes spurious cancellation improbable; a precision
    failure while deriving the graph triggers a doubled window and a
    reseed before giving up.
    """
    if n < 2:
        raise ValueError("ambient dimension must be at least 2")
    if m < n + 1:
        raise ValueError("need at least n + 1 vertices")
    width = len(str(m - 1))
    vertices = tuple(f"v{str(i).zfill(width)}" for i in range(m))
    profile: dict[str, tuple[int, ...]] = {}
    for v in vertices:
        row = (order_profile or {}).get(v, (0,) * n)
        if len(row) != n:
            raise ValueError(f"profile for {v} must list {n} orders")
        profile[v] = tuple(int(o) for o in row)

    attempt = 0
    prec = precision
    while True:
        rng = random.Random(1_000_003 * seed + attempt)
        coords: dict[str, tuple[LaurentScalar, ...]] = {}
        for v in vertices:
            xs = []
            for i in range(n):
                base = profile[v][i]
                terms = {base + k: _draw_coefficient(rng) for k in range(terms_per_coord)}
                xs.append(LaurentScalar.from_terms(terms))
            coords[v] = tuple(xs)
        if coords_override:
            for v, xs in coords_override.items():
                if v not in coords:
                    raise ValueError(f"override names unknown vertex {v}")
                xs = tuple(LaurentScalar.coerce(x) for x in xs)
                if len(xs) != n:
                    raise ValueError(f"override for {v} must have {n} coordinates")
                coords[v] = xs
        try:
            edge_order = [[0.0] * m for _ in range(m)]
            coord1_order = [[0.0] * m for _ in range(m)]
            adjacency = [0] * m
            for i in range(m):
                for j in range(i + 1, m):
                    xi, xj = coords[vertices[i]], coords[vertices[j]]
                    acc = None
                    for a, b in zip(xi, xj):
                        d = a - b
                        sq = d * d
                        acc = sq if acc is None else acc + sq
                    o = acc.order()
                    edge_order[i][j] = edge_order[j][i] = o
                    c1 = (xi[0] - xj[0]).order()
                    coord1_order[i][j] = coord1_order[j][i] = c1
                    if o >= 0:
                        adjacency[i] |= 1 << j
                        adjacency[j] |= 1 << i
            return PlaceSimulation(
                n=n,
                vertices=vertices,
                coords=coords,
                seed=seed,
                profile=profile,
                precision=prec,
                edge_order=edge_order,
                coord1_order=coord1_order,
                adjacency=adjacency,
            )
        except PrecisionError:
            attempt += 1
            prec *= 2
            if attempt > 3:
                raise


# -- orderings ------------------------------------------------------------------


@dataclass
class DimOrdering:
    """Per-dimension strict total orders on the simplices of the complex.

    ``per_dim[k]`` lists the k-simplices greatest-first; ``mu`` maps every
    positive-dimension simplex to its greatest facet.  The defining
    monotonicity: a greater maximal facet forces a greater simplex.
    """

    n: int
    per_dim: dict[int, list[int]]
    rank: dict[int, dict[int, int]]
    mu: dict[int, int]

    def dim(self) -> int:
        return max(self.per_dim)

    def precedes(self, k: int, a: int, b: int) -> bool:
        """True when a comes strictly earlier (is greater) than b."""
        return self.rank[k][a] < self.rank[k][b]


def build_ordering(sim: PlaceSimulation) -> DimOrdering:
    by_dim = sim.simplices_by_dim()
    per_dim: dict[int, list[int]] = {}
    rank: dict[int, dict[int, int]] = {}
    mu: dict[int, int] = {}

    # vertices: later names are greater
    per_dim[0] = sorted(by_dim[0], reverse=True)
    rank[0] = {mask: r for r, mask in enumerate(per_dim[0])}

    edge_special = sim.n % 2 == 0
    ord_l = sim.edge_order
    for k in range(1, len(by_dim)):
        groups: dict[int, list[int]] = {}
        prev_rank = rank[k - 1]
        for mask in by_dim[k]:
            best = None
            best_facet = mask
            for i in _bits(mask):
                facet = mask ^ (1 << i)
                r = prev_rank[facet]
                if best is None or r < best:
                    best = r
                    best_facet = facet
            mu[mask] = best_facet
            groups.setdefault(best_facet, []).append(mask)

        ordered: list[int] = []
        for facet in sorted(groups, key=lambda f: prev_rank[f]):
            members = groups[facet]
            if k == 1 and edge_special:
                u = _top_bit(facet)
                ord_x1 = sim.coord1_order
                members.sort(key=lambda mask: (ord_x1[u][_low_other(mask, u)], -_low_other(mask, u)))
                ordered.extend(members)
            else:
                free = sorted(_top_bit(mask ^ facet) for mask in members)
                ordered.extend(facet | (1 << v) for v in _greedy_valuation_order(free, ord_l))
        per_dim[k] = ordered
        rank[k] = {mask: r for r, mask in enumerate(ordered)}
    return DimOrdering(sim.n, per_dim, rank, mu)


def _low_other(mask: int, top: int) -> int:
    return _top_bit(mask ^ (1 << top))


def _greedy_valuation_order(vertices: list[int], ord_l: list[list[float]]) -> list[int]:
    """Order vertices by repeatedly taking an endpoint of the largest
    remaining squared-distance valuation (minimal t-order)."""
    remaining = list(vertices)
    out: list[int] = []
    while len(remaining) > 1:
        best = None
        best_v = remaining[0]
        for a in remaining:
            row = ord_l[a]
            for b in remaining:
                if b == a:
                    continue
                o = row[b]
                if best is None or o < best:
                    best = o
                    best_v = a
        out.append(best_v)
        remaining.remove(best_v)
    out.extend(remaining)
    return out


@dataclass
class OrderingReport:
    condition_i: list[tuple[Simplex, Simplex]] = field(default_factory=list)
    condition_ii: list[tuple[Simplex, str]] = field(default_factory=list)
    condition_iii: list[tuple[Simplex, Simplex]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.condition_i or self.condition_ii or self.condition_iii)

    def total(self) -> int:
        return len(self.condition_i) + len(self.condition_ii) + len(self.condition_iii)


def validate_ordering(sim: PlaceSimulation, ordering: DimOrdering) -> OrderingReport:
    """Exhaustive check of the ordering conditions.

    Facet monotonicity and the edge-level valuation monotonicity are
    verified along consecutive pairs of the descending lists, which by
    transitivity of a total order covers every pair.  The witness condition
    is checked for every simplex and every admissible vertex.
    """
    report = OrderingReport()
    ord_l = sim.edge_order
    names = sim.names

    # (i): along each descending list the facet ranks never decrease
    for k in range(1, ordering.dim() + 1):
        lst = ordering.per_dim[k]
        prev_rank = ordering.rank[k - 1]
        for a, b in zip(lst, lst[1:]):
            if prev_rank[ordering.mu[a]] > prev_rank[ordering.mu[b]]:
                report.condition_i.append((names(a), names(b)))

    # witness condition on every facet group
    min_group_dim = 1 if sim.n % 2 else 2
    for k in range(min_group_dim, ordering.dim() + 1):
        groups: dict[int, list[int]] = {}
        for mask in ordering.per_dim[k]:
            groups.setdefault(ordering.mu[mask], []).append(mask)
        for facet, members in groups.items():
            vs = [_top_bit(mask ^ facet) for mask in members]
            r = len(vs)
            if r < 2:
                continue
            # pair_min[i] = min order among pairs within the suffix vs[i:]
            pair_min = [INF] * r
            row_min = [INF] * r
            for i in range(r - 2, -1, -1):
                vi = vs[i]
                row = ord_l[vi]
                rm = min(row[u] for u in vs[i + 1 :])
                row_min[i] = rm
                pair_min[i] = min(pair_min[i + 1], rm)
            for i in range(r - 1):
                if row_min[i] > pair_min[i]:
                    report.condition_ii.append(
                        (names(members[i]), f"no witness among later vertices of facet {names(facet)}")
                    )

    # even ambient dimension: edge level obeys first-coordinate valuations
    if sim.n % 2 == 0 and 1 in ordering.per_dim:
        groups = {}
        for mask in ordering.per_dim[1]:
            groups.setdefault(ordering.mu[mask], []).append(mask)
        for facet, members in groups.items():
            u = _top_bit(facet)
            ord_x1 = sim.coord1_order
            for a, b in zip(members, members[1:]):
                if ord_x1[u][_low_other(a, u)] > ord_x1[u][_low_other(b, u)]:
                    report.condition_iii.append((names(a), names(b)))
    return report


# -- the collapse schedule ---------------------------------------------------------


@dataclass
class CollapseTrace:
    steps: list[tuple[Simplex, Simplex]]
    residual: SimplicialComplex
    residual_dim: int
    target_dim: int

    @property
    def reached_target(self) -> bool:
        return self.residual_dim <= self.target_dim


@dataclass
class ComplexLevels:
    """Plain bitmask complex for driving the scheduler directly."""

    n: int
    vertex_names: tuple[str, ...]
    levels: list[list[int]]

    @property
    def m(self) -> int:
        return len(self.vertex_names)

    def names(self, mask: int) -> Simplex:
        return tuple(self.vertex_names[i] for i in _bits(mask))

    def simplices_by_dim(self) -> list[list[int]]:
        return [list(level) for level in self.levels]


def collapse_schedule(
    sim: "PlaceSimulation | ComplexLevels",
    ordering: DimOrdering,
    target_dim: int | None = None,
) -> CollapseTrace:
    """Sweep dimensions from the top down, collapsing (simplex, greatest
    facet) pairs in descending order until only the target dimension is
    left.  Every scheduled pair is re-validated as a free pair at its
    removal time; a blocked pair raises ScheduleFailureError carrying the
    blocking cofaces.
    """
    if target_dim is None:
        target_dim = sim.n // 2
    by_dim = sim.simplices_by_dim()
    top = len(by_dim) - 1
    live: list[set[int]] = [set(level) for level in by_dim]
    steps: list[tuple[Simplex, Simplex]] = []
    names = sim.names

    for k in range(top, target_dim, -1):
        snapshot = [s for s in ordering.per_dim.get(k, []) if s in live[k]]
        for sigma in snapshot:
            tau = ordering.mu[sigma]
            if sigma not in live[k]:
                raise ScheduleFailureError(
                    "scheduled simplex already removed", names(sigma), names(tau), []
                )
            blockers: list[Simplex] = []
            if k + 1 < len(live):
                for w in range(sim.m):
                    cand = sigma | (1 << w)
                    if cand != sigma and cand in live[k + 1]:
                        blockers.append(names(cand))
            if blockers:
                raise ScheduleFailureError(
                    f"simplex {names(sigma)} is not maximal", names(sigma), names(tau), blockers
                )
            if tau not in live[k - 1]:
                raise ScheduleFailureError(
                    f"facet {names(tau)} already removed", names(sigma), names(tau), []
                )
            for w in range(sim.m):
                cand = tau | (1 << w)
                if cand != tau and cand != sigma and cand in live[k]:
                    blockers.append(names(cand))
            if blockers:
                raise ScheduleFailureError(
                    f"facet {names(tau)} is not free", names(sigma), names(tau), blockers
                )
            live[k].discard(sigma)
            live[k - 1].discard(tau)
            steps.append((names(sigma), names(tau)))
        if live[k]:
            leftover = sorted(names(s) for s in live[k])
            raise ScheduleFailureError(
                f"dimension {k} not cleared", leftover[0], (), []
            )

    residual_masks = [mask for level in live for mask in level]
    residual = SimplicialComplex.from_simplices(names(m) for m in residual_masks)
    residual_dim = max((lvl for lvl, level in enumerate(live) if level), default=-1)
    return CollapseTrace(steps, residual, residual_dim, target_dim)


def check_proposition_union(sim: PlaceSimulation, ordering: DimOrdering) -> list[tuple[Simplex, Simplex]]:
    """Same-dimension simplices above n/2 sharing their greatest facet must
    span a clique; returns the offending pairs (contract: none)."""
    violations: list[tuple[Simplex, Simplex]] = []
    for k in range(ordering.dim() + 1):
        if 2 * k <= sim.n:
            continue
        groups: dict[int, list[int]] = {}
        for mask in ordering.per_dim[k]:
            groups.setdefault(ordering.mu[mask], []).append(mask)
        for members in groups.values():
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    union = members[i] | members[j]
                    if not sim.is_clique(union):
                        violations.append((sim.names(members[i]), sim.names(members[j])))
    return violations


# -- randomized trials -------------------------------------------------------------


@dataclass
class TrialResult:
    n: int
    m: int
    seed: int
    ordering_ok: bool
    schedule_ok: bool
    residual_dim: int
    proposition_violations: int
    homology_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.ordering_ok
            and self.schedule_ok
            and self.residual_dim <= self.n // 2
            and self.proposition_violations == 0
            and self.homology_ok
        )


def random_profile(n: int, m: int, rng: random.Random) -> dict[str, list[int]]:
    """Leading-order profile mixing finite, large, and infinitesimal scales."""
    width = len(str(m - 1))
    profile = {}
    for i in range(m):
        orders = []
        for _ in range(n):
            r = rng.random()
            if r < 0.55:
                orders.append(0)
            elif r < 0.75:
                orders.append(-1)
            elif r < 0.85:
                orders.append(-2)
            else:
                orders.append(1)
        profile[f"v{str(i).zfill(width)}"] = orders
    return profile


def main_lemma_trial(n: int, m: int, seed: int, check_homology: bool = True) -> TrialResult:
    """One randomized place simulation pushed through the whole pipeline."""
    rng = random.Random(2_654_435_761 * seed + 97)
    profile = random_profile(n, m, rng)
    sim = simulate_place(n, m, profile, seed=seed)
    ordering = build_ordering(sim)
    report = validate_ordering(sim, ordering)
    prop = check_proposition_union(sim, ordering)
    try:
        trace = collapse_schedule(sim, ordering)
        schedule_ok = True
        residual_dim = trace.residual_dim
    except ScheduleFailureError:
        schedule_ok = False
        residual_dim = 10**9
    hom_ok = True
    if check_homology:
        K = sim.complex()
        groups = homology_all(K)
        for k, grp in groups.items():
            if 2 * k > n and not grp.is_trivial:
                hom_ok = False
    return TrialResult(
        n=n,
        m=m,
        seed=seed,
        ordering_ok=report.ok,
        schedule_ok=schedule_ok,
        residual_dim=residual_dim,
        proposition_violations=len(prop),
        homology_ok=hom_ok,
    )
