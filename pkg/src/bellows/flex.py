"""Numeric laboratory for flexible polyhedra.

Float arithmetic throughout; correctness lives in explicit tolerance gates.
The rigidity matrix is the Jacobian of the squared-edge-length map, flexes
are traced by predictor-corrector continuation along its kernel (orthogonal
to the ambient isometries), and volume constancy along an accepted family is
what the Bellows verdict reports.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from bellows.geometry import Embedding, Polyhedron, oriented_volume
from bellows.simplicial import (
    Chain,
    OrientedSimplex,
    SimplicialComplex,
    cycle_from_json,
    cycle_to_json,
    fundamental_cycle,
    support,
)

RANK_GAP = 1e-8
EDGE_TOL = 1e-10
FLEX_TOL = 1e-6


class ConstructionError(RuntimeError):
    pass


class LoadError(ValueError):
    pass


def edge_key(u: str, v: str) -> str:
    a, b = sorted((u, v))
    return f"{a}|{b}"


@dataclass
class RigidityReport:
    rank: int
    kernel_dim: int
    trivial_dim: int
    internal_dof: int
    singular_values: np.ndarray


@dataclass
class FlexFamily:
    """A traced one-parameter family with frozen squared-edge targets."""

    cycle: Chain
    ts: list[float]
    samples: list[dict[str, tuple[float, ...]]]
    targets: dict[str, float]
    n: int
    truncated: bool = False
    notes: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.samples)

    def embedding(self, index: int) -> Embedding:
        return Embedding(self.n, "float64", dict(self.samples[index]))

    def polyhedron(self, index: int) -> Polyhedron:
        return Polyhedron(self.cycle, self.embedding(index))

    def edges(self) -> list[tuple[str, str]]:
        return support(self.cycle).k_simplices(1)

    def diagonals(self) -> list[tuple[str, str]]:
        K = support(self.cycle)
        verts = K.vertices()
        edges = set(K.k_simplices(1))
        out = []
        for i, u in enumerate(verts):
            for v in verts[i + 1 :]:
                if (u, v) not in edges:
                    out.append((u, v))
        return out

    def max_edge_deviation(self) -> float:
        worst = 0.0
        for coords in self.samples:
            for (u, v) in self.edges():
                target = self.targets[edge_key(u, v)]
                actual = _sq_dist(coords[u], coords[v])
                worst = max(worst, abs(actual - target) / max(abs(target), 1e-30))
        return worst

    def diagonal_variation(self) -> float:
        best = 0.0
        for (u, v) in self.diagonals():
            lengths = [_sq_dist(c[u], c[v]) ** 0.5 for c in self.samples]
            best = max(best, max(lengths) - min(lengths))
        return best


def _sq_dist(a: Sequence[float], b: Sequence[float]) -> float:
    return float(sum((x - y) ** 2 for x, y in zip(a, b)))


# -- rigidity -------------------------------------------------------------------


def _vertex_order(cycle: Chain) -> list[str]:
    return sorted(cycle.vertices())

def _coords_array(embedding: Embedding, order: list[str]) -> np.ndarray:
    return np.array([embedding.point(v) for v in order], dtype=float)


def _edge_index_pairs(cycle: Chain, order: list[str]) -> list[tuple[int, int]]:
    pos = {v: i for i, v in enumerate(order)}
    return [(pos[u], pos[v]) for (u, v) in support(cycle).k_simplices(1)]


def _jacobian(X: np.ndarray, edges: list[tuple[int, int]]) -> np.ndarray:
    m, n = X.shape
    R = np.zeros((len(edges), m * n))
    for r, (i, j) in enumerate(edges):
        d = 2.0 * (X[i] - X[j])
        R[r, i * n : (i + 1) * n] = d
        R[r, j * n : (j + 1) * n] = -d
    return R


def trivial_motion_basis(X: np.ndarray) -> np.ndarray:
    """Orthonormal basis of infinitesimal ambient isometries at X.

    Translations plus rotations about the centroid; rows live in R^(m*n).
    """
    m, n = X.shape
    center = X.mean(axis=0)
    Y = X - center
    motions = []
    for i in range(n):
        t = np.zeros((m, n))
        t[:, i] = 1.0
        motions.append(t.ravel())
    for i in range(n):
        for j in range(i + 1, n):
            r = np.zeros((m, n))
            r[:, i] = -Y[:, j]
            r[:, j] = Y[:, i]
            motions.append(r.ravel())
    M = np.array(motions).T
    q, rdiag = np.linalg.qr(M)
    keep = np.abs(np.diag(rdiag)) > 1e-12 * max(1.0, np.abs(rdiag).max())
    return q[:, keep].T


def _numeric_rank(s: np.ndarray, gap: float) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > gap * s[0]))


def rigidity_matrix(poly: Polyhedron, rank_gap: float = RANK_GAP) -> tuple[np.ndarray, RigidityReport]:
    """Jacobian of the squared-edge-length map plus rank bookkeeping.

    The trivial-motion count n(n+1)/2 assumes the vertices affinely span
    the ambient space (generic position).
    """
    order = _vertex_order(poly.cycle)
    X = _coords_array(poly.embedding, order)
    edges = _edge_index_pairs(poly.cycle, order)
    R = _jacobian(X, edges)
    m, n = X.shape
    s = np.linalg.svd(R, compute_uv=False) if R.size else np.zeros(0)
    rank = _numeric_rank(s, rank_gap)
    kernel = m * n - rank
    trivial = n * (n + 1) // 2
    return R, RigidityReport(rank, kernel, trivial, kernel - trivial, s)


def _internal_direction(
    X: np.ndarray, edges: list[tuple[int, int]], rank_gap: float
) -> np.ndarray | None:
    """Unit kernel direction orthogonal to the ambient isometries, or None."""
    R = _jacobian(X, edges)
    u, s, vt = np.linalg.svd(R)
    rank = _numeric_rank(s, rank_gap)
    kernel = vt[rank:]
    if kernel.shape[0] == 0:
        return None
    T = trivial_motion_basis(X)
    proj = kernel - (kernel @ T.T) @ T
    pu, ps, pvt = np.linalg.svd(proj)
    if ps.size == 0 or ps[0] < 1e-8:
        return None
    d = pvt[0]
    return d / np.linalg.norm(d)


# -- Bricard type 1 --------------------------------------------------------------


OCTAHEDRON_FACES = [
    ("a1", "b1", "c1"),
    ("a1", "c1", "b2"),
    ("a1", "b2", "c2"),
    ("a1", "c2", "b1"),
    ("a2", "c1", "b1"),
    ("a2", "b2", "c1"),
    ("a2", "c2", "b2"),
    ("a2", "b1", "c2"),
]


def octahedron_cycle() -> Chain:
    K = SimplicialComplex.from_simplices(OCTAHEDRON_FACES)
    return fundamental_cycle(K, OrientedSimplex.from_ordering(("a1", "b1", "c1")))


def _half_turn(p: np.ndarray) -> np.ndarray:
    return np.array([-p[0], -p[1], p[2]])


def bricard_type1(
    base_points: Sequence[Sequence[float]] | None = None,
    target_lengths: Sequence[float] | None = None,
    seed: int = 0,
    newton_tol: float = 1e-12,
    max_iter: int = 80,
) -> Polyhedron:
    """Construct a line-symmetric flexible octahedron.

    Three base vertices are reflected through a half-turn about the z axis;
    the twelve edges then satisfy the symmetric pairing automatically.  When
    six target squared lengths are given (one per symmetry orbit, order
    ab, ab', bc, bc', ca, ca'), the base points are driven onto them by
    Gauss-Newton; divergence or axis-degenerate data raises
    ConstructionError.
    """
    rng = np.random.default_rng(seed)
    if base_points is None:
        pts = rng.uniform(-1.5, 1.5, size=(3, 3))
        pts[:, 2] = rng.uniform(0.3, 1.2, size=3) * np.array([1.0, -1.0, 0.4])
    else:
        pts = np.array(base_points, dtype=float)
        if pts.shape != (3, 3):
            raise ConstructionError("expected three base points in R^3")
    if np.min(np.hypot(pts[:, 0], pts[:, 1])) < 1e-9:
        raise ConstructionError("base point on the symmetry axis: degenerate orbit")

    if target_lengths is not None:
        targets = np.array(target_lengths, dtype=float)
        if targets.shape != (6,) or np.any(targets <= 0):
            raise ConstructionError("need six positive squared target lengths")

        def residual(flat: np.ndarray) -> np.ndarray:
            a, b, c = flat.reshape(3, 3)
            pairs = [
                (a, b),
                (a, _half_turn(b)),
                (b, c),
                (b, _half_turn(c)),
                (c, a),
                (c, _half_turn(a)),
            ]
            return np.array([np.sum((p - q) ** 2) for p, q in pairs]) - targets

        x = pts.ravel().copy()
        history = []
        for _ in range(max_iter):
            r = residual(x)
            history.append(float(np.max(np.abs(r))))
            if history[-1] <= newton_tol * max(1.0, float(np.max(targets))):
                break
            eps = 1e-7
            J = np.zeros((6, 9))
            for k in range(9):
                dx = np.zeros(9)
                dx[k] = eps
                J[:, k] = (residual(x + dx) - residual(x - dx)) / (2 * eps)
            step, *_ = np.linalg.lstsq(J, -r, rcond=None)
            x = x + step
        else:
            raise ConstructionError(
                f"closure iteration did not converge: residuals {history[-3:]}"
            )
        pts = x.reshape(3, 3)
        if np.min(np.hypot(pts[:, 0], pts[:, 1])) < 1e-9:
            raise ConstructionError("converged onto the symmetry axis: degenerate orbit")

    a1, b1, c1 = pts
    coords = {
        "a1": tuple(map(float, a1)),
        "a2": tuple(map(float, _half_turn(a1))),
        "b1": tuple(map(float, b1)),
        "b2": tuple(map(float, _half_turn(b1))),
        "c1": tuple(map(float, c1)),
        "c2": tuple(map(float, _half_turn(c1))),
    }
    emb = Embedding(3, "float64", coords)
    for (u, v), (u2, v2) in [
        (("a1", "b1"), ("a2", "b2")),
        (("a1", "b2"), ("a2", "b1")),
        (("b1", "c1"), ("b2", "c2")),
        (("b1", "c2"), ("b2", "c1")),
        (("c1", "a1"), ("c2", "a2")),
        (("c1", "a2"), ("c2", "a1")),
    ]:
        lhs = _sq_dist(coords[u], coords[v])
        rhs = _sq_dist(coords[u2], coords[v2])
        if abs(lhs - rhs) > 1e-9 * max(1.0, lhs):
            raise ConstructionError(f"symmetric edge pairing violated at {u}{v}")
    return Polyhedron(octahedron_cycle(), emb)


# -- continuation ----------------------------------------------------------------


def trace_flex(
    poly: Polyhedron,
    steps: int = 200,
    step_size: float = 0.01,
    edge_tol: float = EDGE_TOL,
    rank_gap: float = RANK_GAP,
) -> FlexFamily:
    """Predictor-corrector continuation along the internal flex direction.

    Each predictor step moves along the rigidity kernel (projected away from
    ambient isometries) and is corrected back onto the edge-length manifold
    by Gauss-Newton.  Stops early, flagging the family as truncated, when
    the internal degree of freedom disappears or correction fails.
    """
    order = _vertex_order(poly.cycle)
    X = _coords_array(poly.embedding, order)
    edges = _edge_index_pairs(poly.cycle, order)
    edge_names = support(poly.cycle).k_simplices(1)
    targets = {
        edge_key(u, v): _sq_dist(poly.embedding.point(u), poly.embedding.point(v))
        for (u, v) in edge_names
    }
    target_vec = np.array([targets[edge_key(u, v)] for (u, v) in edge_names])
    scale = max(1.0, float(np.max(np.abs(target_vec))))

    d0 = _internal_direction(X, edges, rank_gap)
    if d0 is None:
        raise ValueError("polyhedron has no internal flex degree of freedom")

    def lengths(Xa: np.ndarray) -> np.ndarray:
        return np.array([np.sum((Xa[i] - Xa[j]) ** 2) for (i, j) in edges])

    def record(Xa: np.ndarray) -> dict[str, tuple[float, ...]]:
        return {v: tuple(map(float, Xa[k])) for k, v in enumerate(order)}

    samples = [record(X)]
    ts = [0.0]
    truncated = False
    prev = d0
    cur = X.copy()
    for step in range(1, steps + 1):
        d = _internal_direction(cur, edges, rank_gap)
        if d is None:
            truncated = True
            break
        if float(d @ prev) < 0:
            d = -d
        prev = d
        cand = cur + step_size * d.reshape(cur.shape)
        ok = False
        for _ in range(30):
            g = lengths(cand) - target_vec
            if float(np.max(np.abs(g))) <= 1e-13 * scale:
                ok = True
                break
            J = _jacobian(cand, edges)
            delta, *_ = np.linalg.lstsq(J, -g, rcond=None)
            cand = cand + delta.reshape(cand.shape)
        if not ok:
            truncated = True
            break
        cur = cand
        samples.append(record(cur))
        ts.append(step / steps)

    fam = FlexFamily(
        cycle=poly.cycle,
        ts=ts,
        samples=samples,
        targets=targets,
        n=poly.dim,
        truncated=truncated,
    )
    dev = fam.max_edge_deviation()
    if dev > edge_tol:
        raise AssertionError(f"continuation left the edge manifold: deviation {dev}")
    return fam


# -- the Bellows verdict -----------------------------------------------------------


@dataclass
class BellowsReport:
    max_edge_dev: float
    volume_spread: float
    diagonal_variation: float
    volume_start: float
    verdict: str
    reason: str
    vol_tol: float
    edge_tol: float

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def verify_bellows(
    fam: FlexFamily,
    edge_tol: float = EDGE_TOL,
    vol_tol: float | None = None,
    flex_tol: float = FLEX_TOL,
) -> BellowsReport:
    """Check volume constancy along a family whose edges are certified.

    The edge gate runs first: a family that drifted off its targets gets a
    WITHHELD verdict, as does one without a genuinely varying diagonal.
    Otherwise PASS means the volume spread stays inside the tolerance.
    """
    if not fam.samples:
        raise ValueError("empty family")
    max_dev = fam.max_edge_deviation()
    diag_var = fam.diagonal_variation()
    length_scale = max(1.0, max(fam.targets.values(), default=1.0)) ** 0.5
    if vol_tol is None:
        vol_tol = 1e-9 * length_scale**fam.n
    volumes = [float(oriented_volume(fam.polyhedron(i))) for i in range(len(fam))]
    spread = max(abs(v - volumes[0]) for v in volumes)

    if max_dev > edge_tol:
        verdict, reason = "WITHHELD", f"edge gate failed: deviation {max_dev:.3e}"
    elif diag_var < flex_tol:
        verdict, reason = "WITHHELD", f"no certified flex: diagonal variation {diag_var:.3e}"
    elif spread <= vol_tol:
        verdict, reason = "PASS", "volume constant within tolerance along a certified flex"
    else:
        verdict, reason = "FAIL", f"volume varies by {spread:.3e} along the flex"
    return BellowsReport(
        max_edge_dev=max_dev,
        volume_spread=spread,
        diagonal_variation=diag_var,
        volume_start=volumes[0],
        verdict=verdict,
        reason=reason,
        vol_tol=vol_tol,
        edge_tol=edge_tol,
    )


# -- persistence -----------------------------------------------------------------


def family_to_json(fam: FlexFamily) -> dict:
    return {
        "n": fam.n,
        "cycle": cycle_to_json(fam.cycle)["cycle"],
        "targets": {k: v for k, v in sorted(fam.targets.items())},
        "samples": [
            {"t": t, "coords": {v: list(xs) for v, xs in sorted(coords.items())}}
            for t, coords in zip(fam.ts, fam.samples)
        ],
        "flags": {"truncated": fam.truncated},
    }


def save_flex(fam: FlexFamily, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(family_to_json(fam), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_flex(path: str, edge_tol: float = EDGE_TOL) -> FlexFamily:
    """Parse and re-validate a family file.

    The edge gate is applied against the file's own targets; the first
    offending edges are named in the rejection.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        n = int(data["n"])
        if "cycle" in data:
            cycle = cycle_from_json({"cycle": data["cycle"]})
        elif "cycle_file" in data:
            cycle_path = os.path.join(os.path.dirname(os.path.abspath(path)), data["cycle_file"])
            with open(cycle_path, "r", encoding="utf-8") as fh:
                cycle = cycle_from_json(json.load(fh))
        else:
            raise KeyError("cycle")
        targets = {str(k): float(v) for k, v in data["targets"].items()}
        ts = [float(s["t"]) for s in data["samples"]]
        samples = [
            {str(v): tuple(map(float, xs)) for v, xs in s["coords"].items()}
            for s in data["samples"]
        ]
        flags = data.get("flags", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise LoadError(f"malformed flex family file: {exc}") from exc
    if not samples:
        raise LoadError("family file contains no samples")
    fam = FlexFamily(
        cycle=cycle,
        ts=ts,
        samples=samples,
        targets=targets,
        n=n,
        truncated=bool(flags.get("truncated", False)),
    )
    offenders = []
    for idx, coords in enumerate(fam.samples):
        for (u, v) in fam.edges():
            key = edge_key(u, v)
            if key not in targets:
                raise LoadError(f"edge {key} missing from targets")
            dev = abs(_sq_dist(coords[u], coords[v]) - targets[key]) / max(targets[key], 1e-30)
            if dev > edge_tol:
                offenders.append((idx, key, dev))
    if offenders:
        head = ", ".join(f"sample {i} edge {k} dev {d:.3e}" for i, k, d in offenders[:4])
        raise LoadError(f"edge gate rejected family: {head}")
    return fam


def export_mesh(fam: FlexFamily, directory: str) -> list[str]:
    """Write one OBJ-style text file per sample (faces only for n = 3)."""
    os.makedirs(directory, exist_ok=True)
    order = _vertex_order(fam.cycle)
    pos = {v: i + 1 for i, v in enumerate(order)}
    faces = fam.cycle.sorted_terms() if fam.n == 3 else []
    paths = []
    for idx, coords in enumerate(fam.samples):
        path = os.path.join(directory, f"sample_{idx:04d}.obj")
        with open(path, "w", encoding="utf-8") as fh:
            for v in order:
                xs = coords[v]
                fh.write("v " + " ".join(f"{x:.17g}" for x in xs) + "\n")
            for simp, coeff in faces:
                tri = simp if coeff > 0 else (simp[0], simp[2], simp[1])
                fh.write("f " + " ".join(str(pos[v]) for v in tri) + "\n")
        paths.append(path)
    return paths
