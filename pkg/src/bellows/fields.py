"""Scalar field registry shared by embeddings and volume routines.

Four coordinate fields are supported: exact rationals, IEEE doubles, complex
doubles, and truncated Laurent series.  Each field knows how to parse and
serialize JSON coordinate entries (rationals travel as "p/q" strings,
complex numbers as ["re", "im"] pairs of decimal strings).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from bellows.exact.laurent import LaurentScalar

RATIONAL = "rational"
FLOAT = "float64"
COMPLEX = "complex128"
LAURENT = "laurent"

_ALIASES = {
    "rational": RATIONAL,
    "float": FLOAT,
    "float64": FLOAT,
    "complex": COMPLEX,
    "complex128": COMPLEX,
    "laurent": LAURENT,
}


def _parse_rational(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ValueError(f"cannot parse rational coordinate from {value!r}")


def _parse_float(value: Any) -> float:
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        return float(Fraction(value))
    raise ValueError(f"cannot parse float coordinate from {value!r}")


def _parse_complex(value: Any) -> complex:
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(_parse_float(value[0]), _parse_float(value[1]))
    raise ValueError(f"cannot parse complex coordinate from {value!r}")


def _parse_laurent(value: Any) -> LaurentScalar:
    if isinstance(value, LaurentScalar):
        return value
    if isinstance(value, dict):
        prec = value.get("prec")
        return LaurentScalar(
            int(value["base"]),
            [Fraction(c) for c in value["coeffs"]],
            None if prec is None else int(prec),
        )
    if isinstance(value, (int, str)):
        return LaurentScalar.from_rational(Fraction(value))
    raise ValueError(f"cannot parse laurent coordinate from {value!r}")


def _dump_rational(value: Fraction) -> str:
    return str(value)


def _dump_float(value: float) -> float:
    return float(value)


def _dump_complex(value: complex) -> list[str]:
    return [repr(value.real), repr(value.imag)]


def _dump_laurent(value: LaurentScalar) -> dict:
    return {
        "base": value.base,
        "coeffs": [str(c) for c in value.coeffs],
        "prec": value.prec,
    }


@dataclass(frozen=True)
class ScalarField:
    name: str
    exact: bool
    zero: Any
    one: Any
    parse: Callable[[Any], Any]
    dump: Callable[[Any], Any]


FIELDS: dict[str, ScalarField] = {
    RATIONAL: ScalarField(RATIONAL, True, Fraction(0), Fraction(1), _parse_rational, _dump_rational),
    FLOAT: ScalarField(FLOAT, False, 0.0, 1.0, _parse_float, _dump_float),
    COMPLEX: ScalarField(COMPLEX, False, complex(0), complex(1), _parse_complex, _dump_complex),
    LAURENT: ScalarField(
        LAURENT,
        True,
        LaurentScalar(0, []),
        LaurentScalar.from_rational(1),
        _parse_laurent,
        _dump_laurent,
    ),
}


def field(name: str) -> ScalarField:
    key = _ALIASES.get(name)
    if key is None:
        raise ValueError(f"unknown scalar field {name!r}")
    return FIELDS[key]
