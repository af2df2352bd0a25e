"""Truncated Laurent series over the rationals with t-adic valuation.

A value is ``sum(coeffs[i] * t**(base + i)) + O(t**prec)``; ``prec = None``
means the value is known exactly (all omitted coefficients are zero).  The
order of vanishing acts as a concrete valuation: a series is "finite" at the
evaluation t -> 0 precisely when its order is nonnegative, which is what the
place helper below reports.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

DEFAULT_PRECISION = 16

Coefficient = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    """The stored window cannot distinguish the value from zero."""


class _Infinity:
    """Marker for the infinite value of a place."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()


class LaurentScalar:
    """Immutable truncated Laurent series over Fraction coefficients."""

    __slots__ = ("base", "coeffs", "prec")

    def __init__(
        self,
        base: int,
        coeffs: "tuple[Fraction, ...] | list[Coefficient]",
        prec: int | None = None,
    ):
        cs = [Fraction(c) for c in coeffs]
        if prec is not None:
            # Coefficients at orders >= prec are unknown and must not be stored.
            cut = prec - base
            cs = cs[: max(cut, 0)]
        while cs and cs[0] == 0:
            cs.pop(0)
            base += 1
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            base = 0
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *args):
        raise AttributeError("LaurentScalar is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_rational(cls, value: Coefficient) -> "LaurentScalar":
        return cls(0, [Fraction(value)])

    @classmethod
    def t_power(cls, order: int, coeff: Coefficient = 1) -> "LaurentScalar":
        return cls(order, [Fraction(coeff)])

    @classmethod
    def from_terms(cls, terms: dict[int, Coefficient], prec: int | None = None) -> "LaurentScalar":
        if not terms:
            return cls(0, [], prec)
        lo = min(terms)
        hi = max(terms)
        coeffs = [Fraction(terms.get(k, 0)) for k in range(lo, hi + 1)]
        return cls(lo, coeffs, prec)

    @classmethod
    def coerce(cls, value: "LaurentScalar | Coefficient") -> "LaurentScalar":
        if isinstance(value, LaurentScalar):
            return value
        return cls.from_rational(value)

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return not self.coeffs and self.prec is None

    @property
    def is_indeterminate(self) -> bool:
        """No known nonzero coefficient, but unknown tail remains."""
        return not self.coeffs and self.prec is not None

    def order(self) -> int | float:
        """Order of vanishing; math.inf for exact zero.

        Raises PrecisionError when the window holds no nonzero coefficient
        but the value is not provably zero.
        """
        if self.coeffs:
            return self.base
        if self.prec is None:
            return math.inf
        raise PrecisionError(
            f"value known only as O(t^{self.prec}); order is indeterminate"
        )

    def order_lower_bound(self) -> int | float:
        if self.coeffs:
            return self.base
        return math.inf if self.prec is None else self.prec

    def leading_coefficient(self) -> Fraction:
        if not self.coeffs:
            raise PrecisionError("no known nonzero coefficient")
        return self.coeffs[0]

    def coefficient(self, order: int) -> Fraction:
        if self.prec is not None and order >= self.prec:
            raise PrecisionError(f"coefficient of t^{order} beyond precision window")
        i = order - self.base
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "LaurentScalar | Coefficient") -> "LaurentScalar":
        other = LaurentScalar.coerce(other)
        prec = _min_prec(self.prec, other.prec)
        terms: dict[int, Fraction] = {}
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.base + i
                terms[k] = terms.get(k, Fraction(0)) + c
        return LaurentScalar.from_terms(terms, prec)

    __radd__ = __add__

    def __neg__(self) -> "LaurentScalar":
        return LaurentScalar(self.base, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other: "LaurentScalar | Coefficient") -> "LaurentScalar":
        return self + (-LaurentScalar.coerce(other))

    def __rsub__(self, other: Coefficient) -> "LaurentScalar":
        return LaurentScalar.coerce(other) - self

    def __mul__(self, other: "LaurentScalar | Coefficient") -> "LaurentScalar":
        other = LaurentScalar.coerce(other)
        if self.is_zero or other.is_zero:
            return LaurentScalar(0, [])
        prec = None
        cands = []
        if self.prec is not None:
            cands.append(self.prec + other.order_lower_bound())
        if other.prec is not None:
            cands.append(other.prec + self.order_lower_bound())
        if cands:
            p = min(cands)
            prec = None if p == math.inf else int(p)
        terms: dict[int, Fraction] = {}
        for i, a in enumerate(self.coeffs):
            ka = self.base + i
            for j, b in enumerate(other.coeffs):
                k = ka + other.base + j
                if prec is not None and k >= prec:
                    continue
                terms[k] = terms.get(k, Fraction(0)) + a * b
        return LaurentScalar.from_terms(terms, prec)

    __rmul__ = __mul__

    def reciprocal(self, window: int = DEFAULT_PRECISION) -> "LaurentScalar":
        if self.is_zero:
            raise ZeroDivisionError("reciprocal of exact zero")
        if self.is_indeterminate:
            raise PrecisionError("reciprocal of a value not distinguishable from zero")
        if self.prec is None and len(self.coeffs) == 1:
            return LaurentScalar(-self.base, [1 / self.coeffs[0]])
        known = len(self.coeffs) if self.prec is None else self.prec - self.base
        length = min(window, known) if self.prec is not None else window
        a0 = self.coeffs[0]
        inv = [Fraction(0)] * length
        inv[0] = 1 / a0
        for k in range(1, length):
            s = Fraction(0)
            for i in range(1, min(k, len(self.coeffs) - 1) + 1):
                s += self.coeffs[i] * inv[k - i]
            inv[k] = -s / a0
        return LaurentScalar(-self.base, inv, -self.base + length)

    def __truediv__(self, other: "LaurentScalar | Coefficient") -> "LaurentScalar":
        return self * LaurentScalar.coerce(other).reciprocal()

    def __rtruediv__(self, other: Coefficient) -> "LaurentScalar":
        return LaurentScalar.coerce(other) / self

    def __pow__(self, k: int) -> "LaurentScalar":
        if k < 0:
            return self.reciprocal() ** (-k)
        result = LaurentScalar.from_rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            if k > 1:
                base = base * base
            k >>= 1
        return result

    # -- comparison ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentScalar.from_rational(other)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        return (
            self.base == other.base
            and self.coeffs == other.coeffs
            and self.prec == other.prec
        )

    def __hash__(self) -> int:
        return hash((self.base, self.coeffs, self.prec))

    def __repr__(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for i, c in enumerate(self.coeffs):
                if c == 0:
                    continue
                k = self.base + i
                if k == 0:
                    parts.append(f"{c}")
                elif k == 1:
                    parts.append(f"{c}*t")
                else:
                    parts.append(f"{c}*t^{k}")
            body = " + ".join(parts)
        if self.prec is not None:
            body += f" + O(t^{self.prec})"
        return f"<{body}>"


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def laurent_place(a: LaurentScalar) -> "Fraction | _Infinity":
    """Evaluate the place simulated by the t-adic valuation.

    Negative order maps to INFINITY, positive order (and exact zero) to 0,
    order zero to the constant coefficient.
    """
    if a.is_indeterminate:
        if a.prec is not None and a.prec > 0:
            return Fraction(0)
        raise PrecisionError(
            "stored coefficients are all zero but the value is not provably zero"
        )
    if a.is_zero:
        return Fraction(0)
    if a.base < 0:
        return INFINITY
    if a.base > 0:
        return Fraction(0)
    return a.coeffs[0]


def valuation_leq(a: LaurentScalar, b: LaurentScalar) -> bool:
    """|a| <= |b| for the valuation attached to the place: ord(a) >= ord(b)."""
    return a.order() >= b.order()
