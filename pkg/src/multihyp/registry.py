"""Named equational bases and small model algebras for the binary type."""

from __future__ import annotations

from .algebra import (
    cyclic_group,
    left_zero,
    normal_band,
    one_element,
    rectangular_band,
    right_zero,
    semilattice,
    zero_semigroup,
)
from .engine import AlgebraCatalog, EquationSet
from .errors import FormatError
from .terms import Equation, Signature, parse_equation, word

__all__ = ["BASES", "variety_base", "MODELS", "model", "standard_catalog"]

_ASSOC = "f(x1,f(x2,x3)) = f(f(x1,x2),x3)"
_IDEM = "f(x1,x1) = x1"


def _words(*pairs):
    return [f"{word(a)} = {word(b)}" for a, b in pairs]


BASES = {
    "RB": [_ASSOC, "f(f(x1,x2),x3) = f(x1,x3)", _IDEM],
    "band": [_ASSOC, _IDEM],
    "SL": [_ASSOC, "f(x1,x2) = f(x2,x1)", _IDEM],
    "NB": [_ASSOC, _IDEM] + _words(("x1 x2 x3 x1", "x1 x3 x2 x1")),
    "RegB": [_ASSOC, _IDEM] + _words(("x1 x2 x3 x1", "x1 x2 x1 x3 x1")),
    "V_HS": [_ASSOC]
    + _words(
        ("x1 x1", "x1 x1 x1 x1"),
        ("x1 x2 x1 x3 x1 x2 x1", "x1 x2 x3 x2 x1"),
        ("x1 x1 x2 x2 x3", "x1 x1 x2 x1 x1 x2 x3"),
        ("x1 x2 x2 x3 x3", "x1 x2 x3 x3 x2 x3 x3"),
    ),
}


def variety_base(name: str, sig: Signature = None) -> EquationSet:
    sig = sig or Signature.binary()
    try:
        lines = BASES[name]
    except KeyError:
        raise FormatError(f"unknown variety {name!r}; known: {', '.join(BASES)}") from None
    return EquationSet(parse_equation(line, sig) for line in lines)


MODELS = {
    "trivial": one_element,
    "left-zero": left_zero,
    "right-zero": right_zero,
    "semilattice": semilattice,
    "zero-semigroup": zero_semigroup,
    "rect-band": rectangular_band,
    "normal-band": normal_band,
    "Z3": cyclic_group,
}


def model(name: str):
    try:
        return MODELS[name]()
    except KeyError:
        raise FormatError(f"unknown model {name!r}; known: {', '.join(MODELS)}") from None


def standard_catalog() -> AlgebraCatalog:
    """Rectangular band, semilattice, zero semigroup, left-zero band, Z3."""
    names = ["rect-band", "semilattice", "zero-semigroup", "left-zero", "Z3"]
    return AlgebraCatalog([model(n) for n in names], names)
