"""Sparse multivariate polynomials over the integers, with exact determinants
and Sylvester resultants.

A polynomial is a mapping from exponent vectors to nonzero integer
coefficients over an ordered tuple of variable names.  Variable tuples are
kept sorted, so two polynomials representing the same element compare equal
regardless of how they were built.  Terms are printed in graded
lexicographic order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Mapping

DEFAULT_TERM_CAP = 10**6


class DegenerateInputError(ValueError):
    """Raised when an operation receives structurally unusable input."""


class ResourceLimitError(RuntimeError):
    """Raised when a symbolic computation exceeds its configured size cap."""


class MultiPoly:
    """Sparse integer polynomial in named variables.

    Arithmetic between polynomials with different variable tuples is
    supported; operands are aligned to the sorted union of their variables.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple[int, ...], int]):
        vs = tuple(variables)
        if list(vs) != sorted(vs) or len(set(vs)) != len(vs):
            raise ValueError("variable names must be sorted and distinct")
        clean: dict[tuple[int, ...], int] = {}
        for exp, coeff in terms.items():
            if len(exp) != len(vs):
                raise ValueError("exponent vector length does not match variables")
            c = int(coeff)
            if c != 0:
                clean[tuple(int(e) for e in exp)] = c
        self.vars = vs
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value: int, variables: Iterable[str] = ()) -> "MultiPoly":
        vs = tuple(sorted(set(variables)))
        if int(value) == 0:
            return cls(vs, {})
        return cls(vs, {(0,) * len(vs): int(value)})

    @classmethod
    def variable(cls, name: str) -> "MultiPoly":
        return cls((name,), {(1,): 1})

    @classmethod
    def coerce(cls, value: "MultiPoly | int") -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        return cls.constant(int(value))

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self) -> int:
        if not self.terms:
            return 0
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(exp) for exp in self.terms)

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial, 0 if absent."""
        if not self.terms:
            return -1
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(exp[i] for exp in self.terms)

    def num_terms(self) -> int:
        return len(self.terms)

    def variables_used(self) -> tuple[str, ...]:
        used = [False] * len(self.vars)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def compress(self) -> "MultiPoly":
        """Drop variables that appear in no term."""
        keep = self.variables_used()
        if keep == self.vars:
            return self
        idx = [self.vars.index(v) for v in keep]
        return MultiPoly(keep, {tuple(exp[i] for i in idx): c for exp, c in self.terms.items()})

    def _aligned(self, other: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        if self.vars == other.vars:
            return self, other
        union = tuple(sorted(set(self.vars) | set(other.vars)))
        return self._embed(union), other._embed(union)

    def _embed(self, union: tuple[str, ...]) -> "MultiPoly":
        if union == self.vars:
            return self
        pos = {v: i for i, v in enumerate(union)}
        src = [pos[v] for v in self.vars]
        n = len(union)
        terms = {}
        for exp, c in self.terms.items():
            new = [0] * n
            for s, e in zip(src, exp):
                new[s] = e
            terms[tuple(new)] = c
        return MultiPoly(union, terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "MultiPoly | int") -> "MultiPoly":
        other = MultiPoly.coerce(other)
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for exp, c in b.terms.items():
            s = terms.get(exp, 0) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return MultiPoly(a.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vars, {exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly | int") -> "MultiPoly":
        return self + (-MultiPoly.coerce(other))

    def __rsub__(self, other: int) -> "MultiPoly":
        return MultiPoly.coerce(other) - self

    def __mul__(self, other: "MultiPoly | int") -> "MultiPoly":
        if isinstance(other, int):
            if other == 0:
                return MultiPoly(self.vars, {})
            return MultiPoly(self.vars, {exp: c * other for exp, c in self.terms.items()})
        a, b = self._aligned(other)
        if len(a.terms) > len(b.terms):
            a, b = b, a
        terms: dict[tuple[int, ...], int] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                s = terms.get(exp, 0) + ca * cb
                if s:
                    terms[exp] = s
                else:
                    terms.pop(exp, None)
        return MultiPoly(a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def divide_exact(self, divisor: int) -> "MultiPoly":
        """Divide every coefficient by an integer, requiring exactness."""
        if divisor == 0:
            raise ZeroDivisionError("division of polynomial by zero")
        terms = {}
        for exp, c in self.terms.items():
            q, r = divmod(c, divisor)
            if r:
                raise ValueError(f"coefficient {c} not divisible by {divisor}")
            terms[exp] = q
        return MultiPoly(self.vars, terms)

    # -- univariate views and evaluation ------------------------------------

    def coeffs_in(self, var: str) -> dict[int, "MultiPoly"]:
        """View as a polynomial in ``var``: degree -> coefficient polynomial."""
        if var not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(var)
        buckets: dict[int, dict[tuple[int, ...], int]] = {}
        for exp, c in self.terms.items():
            d = exp[i]
            rest = exp[:i] + (0,) + exp[i + 1 :]
            buckets.setdefault(d, {})[rest] = c
        return {d: MultiPoly(self.vars, t) for d, t in buckets.items()}

    def substitute(self, values: Mapping[str, "MultiPoly | int | Fraction"]) -> Any:
        """Substitute values (scalars or polynomials) for variables.

        Unmentioned variables stay symbolic.  Returns a MultiPoly when every
        substituted value is an integer or polynomial, otherwise whatever
        scalar arithmetic produces.
        """
        relevant = {v: values[v] for v in self.vars if v in values}
        if not relevant:
            return self
        symbolic = all(isinstance(v, (int, MultiPoly)) for v in relevant.values())
        keep = [v for v in self.vars if v not in relevant]
        zero: Any = MultiPoly.constant(0, keep) if symbolic else 0
        acc = zero
        powers: dict[tuple[str, int], Any] = {}

        def power(name: str, e: int) -> Any:
            key = (name, e)
            if key not in powers:
                base = relevant[name]
                powers[key] = base**e if not isinstance(base, MultiPoly) else base**e
            return powers[key]

        keep_idx = [self.vars.index(v) for v in keep]
        for exp, c in self.terms.items():
            term: Any = c
            if symbolic:
                kexp = tuple(exp[i] for i in keep_idx)
                term = MultiPoly(tuple(keep), {kexp: c}) if keep else MultiPoly.constant(c)
            else:
                for i, v in enumerate(self.vars):
                    if v in keep and exp[i]:
                        raise ValueError(f"scalar substitution leaves variable {v} unbound")
            for i, v in enumerate(self.vars):
                if v in relevant and exp[i]:
                    term = term * power(v, exp[i])
            acc = acc + term
        return acc

    def evaluate(self, values: Mapping[str, Any]) -> Any:
        """Evaluate fully at scalar values (every used variable must be bound)."""
        acc: Any = None
        powers: dict[tuple[str, int], Any] = {}
        for exp, c in self.terms.items():
            term: Any = c
            for i, v in enumerate(self.vars):
                e = exp[i]
                if not e:
                    continue
                key = (v, e)
                if key not in powers:
                    powers[key] = values[v] ** e
                term = term * powers[key]
            acc = term if acc is None else acc + term
        return 0 if acc is None else acc

    # -- canonical form ----------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self) -> int:
        c = self.compress()
        return hash((c.vars, frozenset(c.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.vars, exp):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(f"{c:+d}")
            elif c == 1:
                parts.append(f"+{body}")
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c:+d}*{body}")
        text = " ".join(parts)
        return text[1:] if text.startswith("+") else text

    def to_string(self) -> str:
        return str(self)


# -- determinants ------------------------------------------------------------


def poly_det(matrix: list[list["MultiPoly | int"]], max_terms: int = DEFAULT_TERM_CAP) -> MultiPoly:
    """Exact determinant of a square grid of polynomials.

    Uses minor expansion memoized over column subsets, which keeps every
    intermediate value a polynomial over the integers.  Raises
    ResourceLimitError when an intermediate exceeds ``max_terms`` terms.
    """
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise DegenerateInputError("determinant of a non-square matrix")
    if n == 0:
        return MultiPoly.constant(1)
    grid = [[MultiPoly.coerce(e) for e in row] for row in matrix]
    union = tuple(sorted({v for row in grid for e in row for v in e.vars}))
    grid = [[e._embed(union) for e in row] for row in grid]

    minors: dict[int, MultiPoly] = {0: MultiPoly.constant(1, union)}
    masks_by_size: list[list[int]] = [[] for _ in range(n + 1)]
    for mask in range(1, 1 << n):
        masks_by_size[mask.bit_count()].append(mask)
    for k in range(1, n + 1):
        row = grid[k - 1]
        next_minors: dict[int, MultiPoly] = {}
        for mask in masks_by_size[k]:
            acc = MultiPoly.constant(0, union)
            sign = 1 if (k - 1) % 2 == 0 else -1
            rest = mask
            while rest:
                low = rest & -rest
                col = low.bit_length() - 1
                entry = row[col]
                if entry.terms:
                    sub = minors[mask ^ low]
                    if sub.terms:
                        piece = entry * sub
                        acc = acc + (piece if sign > 0 else -piece)
                        if len(acc.terms) > max_terms:
                            raise ResourceLimitError(
                                f"determinant expansion exceeded {max_terms} terms"
                            )
                sign = -sign
                rest ^= low
            next_minors[mask] = acc
        minors = next_minors
    return minors[(1 << n) - 1]


def int_det(matrix: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant over the integers."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in matrix]
    for row in m:
        if len(row) != n:
            raise DegenerateInputError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def scalar_det(matrix: list[list[Any]]) -> Any:
    """Fraction-free Bareiss determinant for numeric-like scalars.

    Works for Fraction, float, complex and truncated Laurent entries; the
    Bareiss update divides exactly in any integral domain.  Floats pivot on
    the largest magnitude for stability.
    """
    n = len(matrix)
    if n == 0:
        return 1
    for row in matrix:
        if len(row) != n:
            raise DegenerateInputError("determinant of a non-square matrix")
    if all(isinstance(e, int) for row in matrix for e in row):
        return int_det(matrix)
    m = [list(row) for row in matrix]
    sample = m[0][0]
    use_abs = all(isinstance(e, (int, float, complex, Fraction)) for row in m for e in row)
    sign = 1
    prev: Any = 1
    for k in range(n - 1):
        pivot_row = None
        if use_abs:
            best = None
            for i in range(k, n):
                a = abs(m[i][k])
                if a != 0 and (best is None or a > best):
                    best = a
                    pivot_row = i
        else:
            for i in range(k, n):
                if not _scalar_is_zero(m[i][k]):
                    pivot_row = i
                    break
        if pivot_row is None:
            return sample * 0
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                m[i][j] = (pivot * m[i][j] - mik * m[k][j]) / prev
            m[i][k] = 0 * pivot
        prev = pivot
    result = m[n - 1][n - 1]
    return result if sign > 0 else -result


def _scalar_is_zero(x: Any) -> bool:
    probe = getattr(x, "is_zero", None)
    if probe is not None:
        return bool(probe) if isinstance(probe, bool) else bool(probe)
    return x == 0


# -- resultants ---------------------------------------------------------------


def sylvester_matrix(p: MultiPoly, q: MultiPoly, var: str) -> list[list[MultiPoly]]:
    """Sylvester matrix with the rows of ``p`` first."""
    dp, dq = p.degree(var), q.degree(var)
    if dp <= 0 and dq <= 0:
        raise DegenerateInputError(f"variable {var} absent from both inputs")
    pc = p.coeffs_in(var)
    qc = q.coeffs_in(var)
    size = dp + dq
    zero = MultiPoly.constant(0)
    rows: list[list[MultiPoly]] = []
    for shift in range(dq):
        row = [zero] * size
        for d, coeff in pc.items():
            row[shift + (dp - d)] = coeff
        rows.append(row)
    for shift in range(dp):
        row = [zero] * size
        for d, coeff in qc.items():
            row[shift + (dq - d)] = coeff
        rows.append(row)
    return rows


def resultant(
    p: "MultiPoly | int",
    q: "MultiPoly | int",
    var: str,
    max_terms: int = DEFAULT_TERM_CAP,
) -> MultiPoly:
    """Sylvester resultant eliminating ``var``; rows of ``p`` come first.

    With this convention res_x(x - a, x - b) = a - b.  If one operand has
    degree zero in ``var`` the standard power convention applies; if the
    variable is absent from both, the input is degenerate.
    """
    p = MultiPoly.coerce(p)
    q = MultiPoly.coerce(q)
    dp, dq = p.degree(var), q.degree(var)
    if dp <= 0 and dq <= 0:
        raise DegenerateInputError(f"variable {var} absent from both inputs")
    if dp <= 0:
        return p**dq
    if dq <= 0:
        return q**dp
    det = poly_det(sylvester_matrix(p, q, var), max_terms=max_terms)
    return det.compress()
