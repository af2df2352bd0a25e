"""Integer linear algebra for chain complexes.

Smith normal form with unimodular transforms, homology groups over the
integers, and constructive filling of cycles: given a cycle Z supported in a
complex K, solve the integer system boundary(Y) = Z or report the
obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from bellows.simplicial import Chain, Simplex, SimplicialComplex, boundary, support

Matrix = list[list[int]]


class UnfillableError(ValueError):
    """No integer solution of boundary(Y) = Z exists in the given complex."""

    def __init__(self, message: str, obstruction: list[tuple[int, int]]):
        super().__init__(message)
        # (invariant factor, incompatible right-hand side) pairs; factor 0
        # marks a row outside the column space.
        self.obstruction = obstruction


@dataclass
class SnfDecomposition:
    """U @ A @ V = D with U, V unimodular and D diagonal, d_i | d_{i+1} >= 0."""

    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(A: Sequence[Sequence[int]]) -> SnfDecomposition:
    """Exact Smith normal form over arbitrary-precision integers.

    Pivots on the minimal absolute value to keep intermediate entries small.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    for row in D:
        if len(row) != n:
            raise ValueError("ragged matrix")
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst -= q * row_src
        Ds, Dd = D[src], D[dst]
        for k in range(n):
            Dd[k] -= q * Ds[k]
        Us, Ud = U[src], U[dst]
        for k in range(m):
            Ud[k] -= q * Us[k]

    def add_col(src, dst, q):
        for row in D:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        # locate minimal nonzero pivot in the trailing block
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(D[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
                    if v == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            # clear column t below the pivot
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, q)
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, q)
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # force divisibility of the trailing block by the pivot
            offender = None
            p = D[t][t]
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, -1)
        if D[t][t] < 0:
            for k in range(n):
                D[t][k] = -D[t][k]
            for k in range(m):
                U[t][k] = -U[t][k]
        t += 1
    return SnfDecomposition(U, D, V)


def invariant_factors(
    entries: dict[tuple[int, int], int], nrows: int, ncols: int
) -> list[int]:
    """Nonzero Smith invariant factors of a sparse integer matrix.

    Elimination over dict-of-dict rows with preference for unit pivots of
    low fill; boundary matrices reduce almost entirely with +-1 pivots.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (r, c), v in entries.items():
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)

    factors: list[int] = []

    def remove_entry(r, c):
        rows[r].pop(c, None)
        if not rows[r]:
            del rows[r]
        s = cols.get(c)
        if s is not None:
            s.discard(r)
            if not s:
                del cols[c]

    def set_entry(r, c, v):
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)
        else:
            remove_entry(r, c)

    while rows:
        # pivot choice: unit value first, then small fill, then small value
        pr = pc = None
        best = None
        for r, row in rows.items():
            rl = len(row)
            for c, v in row.items():
                key = (0 if abs(v) == 1 else 1, abs(v), (rl - 1) * (len(cols[c]) - 1))
                if best is None or key < best:
                    best, pr, pc = key, r, c
        v = rows[pr][pc]
        if abs(v) != 1:
            # euclidean shrink: reduce other entries in the pivot column/row
            progressed = False
            for r in list(cols.get(pc, ())):
                if r == pr:
                    continue
                w = rows[r][pc]
                q = w // v
                if q:
                    src = rows[pr]
                    for c2, val in list(src.items()):
                        set_entry(r, c2, rows.get(r, {}).get(c2, 0) - q * val)
                    progressed = True
            for c in list(rows.get(pr, {})):
                if c == pc:
                    continue
                w = rows[pr][c]
                q = w // v
                if q:
                    for r2 in list(cols.get(pc, ())):
                        set_entry(r2, c, rows.get(r2, {}).get(c, 0) - q * rows[r2][pc])
                    progressed = True
            if progressed:
                continue
        # eliminate the pivot column then the pivot row
        for r in list(cols.get(pc, ())):
            if r == pr:
                continue
            w = rows[r][pc]
            if w % v:
                raise AssertionError("pivot does not divide its column")
            q = w // v
            for c2, val in list(rows[pr].items()):
                set_entry(r, c2, rows.get(r, {}).get(c2, 0) - q * val)
        for c in list(rows.get(pr, {})):
            if c == pc:
                continue
            w = rows[pr][c]
            if w % v:
                raise AssertionError("pivot does not divide its row")
            # column operation: only the pivot row holds column pc now
            remove_entry(pr, c)
        factors.append(abs(v))
        remove_entry(pr, pc)

    # repair the divisibility chain: diag(a, b) ~ diag(gcd, lcm)
    changed = True
    while changed:
        changed = False
        factors.sort()
        for i in range(len(factors) - 1):
            a, b = factors[i], factors[i + 1]
            if b % a:
                g = gcd(a, b)
                factors[i], factors[i + 1] = g, a * b // g
                changed = True
    return factors


# -- chain-complex plumbing -----------------------------------------------------


def boundary_entries(
    K: SimplicialComplex, k: int
) -> tuple[list[Simplex], list[Simplex], dict[tuple[int, int], int]]:
    """Sparse boundary matrix from k-simplices (columns) to (k-1)-simplices (rows)."""
    rows = K.k_simplices(k - 1)
    cols = K.k_simplices(k)
    row_index = {s: i for i, s in enumerate(rows)}
    entries: dict[tuple[int, int], int] = {}
    for j, simp in enumerate(cols):
        for i in range(len(simp)):
            face = simp[:i] + simp[i + 1 :]
            entries[(row_index[face], j)] = 1 if i % 2 == 0 else -1
    return rows, cols, entries


def boundary_matrix(K: SimplicialComplex, k: int) -> Matrix:
    rows, cols, entries = boundary_entries(K, k)
    M = [[0] * len(cols) for _ in rows]
    for (i, j), v in entries.items():
        M[i][j] = v
    return M


@dataclass
class HomologyGroup:
    betti: int
    torsion: list[int]

    @property
    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion


def homology(K: SimplicialComplex, k: int) -> HomologyGroup:
    """Rank and torsion of H_k(K; Z) computed from Smith invariant factors."""
    if k < 0:
        raise ValueError("homology degree must be nonnegative")
    n_k = len(K.k_simplices(k))
    if n_k == 0:
        return HomologyGroup(0, [])
    if k == 0:
        rank_k = 0
    else:
        rows, cols, entries = boundary_entries(K, k)
        rank_k = len(invariant_factors(entries, len(rows), len(cols)))
    rows, cols, entries = boundary_entries(K, k + 1)
    up = invariant_factors(entries, len(rows), len(cols))
    betti = n_k - rank_k - len(up)
    return HomologyGroup(betti, [d for d in up if d > 1])


def homology_all(K: SimplicialComplex) -> dict[int, HomologyGroup]:
    """Homology in every degree, computing each boundary reduction once."""
    dim = K.dim
    ranks: dict[int, list[int]] = {}
    sizes: dict[int, int] = {}
    for k in range(dim + 2):
        sizes[k] = len(K.k_simplices(k))
        if k == 0 or sizes[k] == 0:
            ranks[k] = []
            continue
        rows, cols, entries = boundary_entries(K, k)
        ranks[k] = invariant_factors(entries, len(rows), len(cols))
    out = {}
    for k in range(dim + 1):
        betti = sizes[k] - len(ranks[k]) - len(ranks.get(k + 1, []))
        out[k] = HomologyGroup(betti, [d for d in ranks.get(k + 1, []) if d > 1])
    return out


def fill_boundary(Z: Chain, K: SimplicialComplex) -> Chain:
    """Solve boundary(Y) = Z with Y supported in K, via Smith normal form.

    The cycle condition and support containment are enforced up front; the
    result is re-verified by applying the boundary operator before return.
    Raises UnfillableError with the obstruction when no integer solution
    exists (a nonzero homology class).
    """
    if not boundary(Z).is_zero:
        raise ValueError("input chain is not a cycle")
    if not (support(Z) <= K):
        raise ValueError("cycle support is not contained in the complex")
    n = Z.dim + 1
    if Z.is_zero:
        return Chain(n, {})
    rows, cols, entries = boundary_entries(K, n)
    row_index = {s: i for i, s in enumerate(rows)}
    b = [0] * len(rows)
    for simp, coeff in Z.terms.items():
        b[row_index[simp]] = coeff
    if not cols:
        raise UnfillableError(
            f"complex has no {n}-simplices to fill a {Z.dim}-cycle",
            [(0, c) for c in b if c],
        )
    A = [[0] * len(cols) for _ in rows]
    for (i, j), v in entries.items():
        A[i][j] = v
    snf = smith_normal_form(A)
    diag = snf.diagonal
    c = [sum(snf.U[i][j] * b[j] for j in range(len(rows))) for i in range(len(rows))]
    y = [0] * len(cols)
    bad: list[tuple[int, int]] = []
    for i in range(len(rows)):
        d = diag[i] if i < len(diag) else 0
        if d:
            q, r = divmod(c[i], d)
            if r:
                bad.append((d, c[i]))
            else:
                y[i] = q
        elif c[i]:
            bad.append((0, c[i]))
    if bad:
        raise UnfillableError("cycle is not an integer boundary in the complex", bad)
    x = [sum(snf.V[i][j] * y[j] for j in range(len(cols))) for i in range(len(cols))]
    Y = Chain(n, {cols[j]: x[j] for j in range(len(cols)) if x[j]})
    if boundary(Y) != Z:
        raise AssertionError("filling verification failed")
    return Y
