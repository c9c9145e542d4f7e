"""Colorations of terms and multi-hypersubstitutions.

A coloration rule assigns to every non-variable term ``t`` a map
``addresses(t) -> colour``. Rules here are small computable objects rather
than tables, since every coloration of interest is defined by a rule.

A multi-hypersubstitution is a finitely supported map colour ->
hypersubstitution with a default. It acts on a term node by node: the
node at address ``a`` of the *original* term is rewritten with the
hypersubstitution indexed by that node's colour.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional

from .errors import FormatError, InvalidAddressError
from .hyp import Hypersubstitution, apply_hyp, identity_hyp, load_hyp
from .terms import (
    App,
    Signature,
    Term,
    Var,
    addresses,
    first_variable,
    format_term,
    last_variable,
    parse_term,
    substitute,
    variables,
)

__all__ = [
    "ColorationRule",
    "Uniform",
    "RBFirstLast",
    "Singleton",
    "LeftmostSpecial",
    "Enumeration",
    "OneVariableSplit",
    "TermEquals",
    "SquarePair",
    "TableRule",
    "AddressDepth",
    "MultiHypersubstitution",
    "color_of",
    "uniform_color",
    "apply_mhyp",
    "parse_coloration",
    "term_rank",
    "term_unrank",
    "term_weight",
    "load_mhyp",
]


class ColorationRule:
    """Base class. Subclasses override :meth:`term_color` when the colour
    is constant on each term, or :meth:`colors` otherwise."""

    spec = "?"

    def term_color(self, t: App) -> Optional[int]:
        """Colour shared by every address of ``t``, or None if not constant."""
        cs = set(self.colors(t).values())
        return cs.pop() if len(cs) == 1 else None

    def colors(self, t: Term) -> dict:
        if isinstance(t, Var):
            return {}
        c = self.term_color(t)
        return {a: c for a in addresses(t)}

    def color(self, t: Term, a) -> int:
        a = tuple(a)
        cs = self.colors(t)
        if a not in cs:
            raise InvalidAddressError(f"{a} is not an address of {format_term(t)}")
        return cs[a]

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class Uniform(ColorationRule):
    c: int

    @property
    def spec(self):
        return f"uniform:{self.c}"

    def term_color(self, t):
        return self.c


@dataclass(frozen=True)
class RBFirstLast(ColorationRule):
    """Colour 1 when a term starts and ends with the same variable, else 2."""

    spec = "rb-firstlast"

    def term_color(self, t):
        return 1 if first_variable(t) == last_variable(t) else 2


@dataclass(frozen=True)
class Singleton(ColorationRule):
    """``c_in`` on every address of ``s0``; ``c_out`` on every other term."""

    s0: Term
    c_in: int = 1
    c_out: int = 0

    @property
    def spec(self):
        return f"singleton:{format_term(self.s0)}:{self.c_in}:{self.c_out}"

    def term_color(self, t):
        return self.c_in if t == self.s0 else self.c_out


@dataclass(frozen=True)
class LeftmostSpecial(ColorationRule):
    """On ``s0`` the leftmost operation symbol gets ``c_root`` and the other
    occurrences ``c_rest``; any other term is ``c_other`` throughout."""

    s0: Term
    c_root: int = 0
    c_rest: int = 1
    c_other: int = 0

    @property
    def spec(self):
        return f"leftmost-special:{format_term(self.s0)}:{self.c_root}:{self.c_rest}:{self.c_other}"

    def term_color(self, t):
        if t != self.s0:
            return self.c_other
        if self.c_root == self.c_rest or len(addresses(t)) == 1:
            return self.c_root
        return None

    def colors(self, t):
        if isinstance(t, Var):
            return {}
        addrs = addresses(t)
        if t != self.s0:
            return {a: self.c_other for a in addrs}
        first = min(addrs)
        return {a: (self.c_root if a == first else self.c_rest) for a in addrs}


@dataclass(frozen=True)
class TermEquals(ColorationRule):
    t0: Term
    c_eq: int = 1
    c_ne: int = 2

    @property
    def spec(self):
        return f"term-equals:{format_term(self.t0)}:{self.c_eq}:{self.c_ne}"

    def term_color(self, t):
        return self.c_eq if t == self.t0 else self.c_ne


@dataclass(frozen=True)
class Enumeration(ColorationRule):
    """Every address of ``t`` gets colour ``term_rank(t)``, an injective
    (indeed bijective) numbering of all terms."""

    sig: Signature

    spec = "enumeration"

    def term_color(self, t):
        return term_rank(t, self.sig)


@dataclass(frozen=True)
class OneVariableSplit(ColorationRule):
    """Terms built from a single variable take ``inner``'s colours; all
    other terms are coloured 1."""

    inner: ColorationRule

    @property
    def spec(self):
        return f"one-var-split:{self.inner.spec}"

    def term_color(self, t):
        if len(variables(t)) == 1:
            return self.inner.term_color(t)
        return 1

    def colors(self, t):
        if isinstance(t, Var):
            return {}
        if len(variables(t)) == 1:
            return self.inner.colors(t)
        return {a: 1 for a in addresses(t)}


@dataclass(frozen=True)
class SquarePair(ColorationRule):
    """For a symbol f of arity n >= 2: colour 0 on f(f(x1..x1),x2..x2) and
    on f(f(x1..x1),x1..x1), colour 1 on f(x1..xn) and everywhere else."""

    symbol: str
    arity: int

    @property
    def spec(self):
        return f"prop63:{self.symbol}"

    @property
    def s(self) -> App:
        inner = App(self.symbol, [Var(1)] * self.arity)
        return App(self.symbol, [inner] + [Var(2)] * (self.arity - 1))

    @property
    def t(self) -> App:
        inner = App(self.symbol, [Var(1)] * self.arity)
        return App(self.symbol, [inner] + [Var(1)] * (self.arity - 1))

    def term_color(self, t):
        if t == self.s or t == self.t:
            return 0
        return 1


@dataclass(frozen=True)
class AddressDepth(ColorationRule):
    """Colour = length of the address (root 0, its children 1, ...).

    Not a per-term constant, so it exercises the general code path.
    """

    spec = "address-depth"

    def term_color(self, t):
        return 0 if all(isinstance(a, Var) for a in t.args) else None

    def colors(self, t):
        return {a: len(a) for a in addresses(t)}


@dataclass(frozen=True)
class TableRule(ColorationRule):
    """Explicit colours for finitely many terms, ``default`` for the rest."""

    table: Mapping = field(default_factory=dict)
    default: ColorationRule = Uniform(0)

    spec = "table"

    def __hash__(self):
        return hash((tuple(self.table), self.default))

    def term_color(self, t):
        if t in self.table:
            cs = set(self.table[t].values())
            return cs.pop() if len(cs) == 1 else None
        return self.default.term_color(t)

    def colors(self, t):
        if isinstance(t, Var):
            return {}
        if t in self.table:
            given = {tuple(a): c for a, c in self.table[t].items()}
            if set(given) != set(addresses(t)):
                raise InvalidAddressError(f"table entry for {format_term(t)} does not cover exactly its addresses")
            return given
        return self.default.colors(t)


# --------------------------------------------------------------------------
# multi-hypersubstitutions


@dataclass(frozen=True)
class MultiHypersubstitution:
    """A total map colour -> hypersubstitution: ``table`` where given,
    ``default`` elsewhere."""

    table: tuple
    default: Hypersubstitution

    def __init__(self, table: Mapping[int, Hypersubstitution] = None, default: Hypersubstitution = None):
        table = dict(table or {})
        if default is None:
            if not table:
                raise ValueError("a multi-hypersubstitution needs a default or at least one entry")
            default = identity_hyp(next(iter(table.values())).sig)
        object.__setattr__(self, "table", tuple(sorted(table.items())))
        object.__setattr__(self, "default", default)
        object.__setattr__(self, "_lookup", dict(table))

    @classmethod
    def constant(cls, sigma: Hypersubstitution) -> "MultiHypersubstitution":
        return cls({}, sigma)

    def __call__(self, color: int) -> Hypersubstitution:
        return self._lookup.get(color, self.default)

    @property
    def sig(self):
        return self.default.sig

    def describe(self) -> str:
        parts = [f"{c}: {h.label()}" for c, h in self.table]
        parts.append(f"default: {self.default.label()}")
        return "{" + ", ".join(parts) + "}"

    def to_text(self) -> str:
        lines = [f"default {self.default.label()}"]
        lines += [f"color {c} {h.label()}" for c, h in self.table]
        return "\n".join(lines) + "\n"


def color_of(rule: ColorationRule, t: Term, a) -> int:
    return rule.color(t, a)


def uniform_color(rule: ColorationRule, t: Term) -> Optional[int]:
    """The common colour of all addresses of ``t``; None for variables or
    when the colours differ."""
    if isinstance(t, Var):
        return None
    return rule.term_color(t)


def apply_mhyp(rho: MultiHypersubstitution, rule: ColorationRule, t: Term) -> Term:
    """Apply ``rho`` to ``t`` coloured by ``rule``.

    Each node is rewritten by ``rho(colour)`` where the colour is read at
    the node's address in ``t`` itself, never in an intermediate result.
    """
    if isinstance(t, Var):
        return t
    n = rule.term_color(t)
    if n is not None:
        return apply_hyp(rho(n), t)
    colors = rule.colors(t)

    def rec(s, addr):
        if isinstance(s, Var):
            return s
        kids = {i: rec(a, addr + (i,)) for i, a in enumerate(s.args, 1)}
        return substitute(rho(colors[addr])[s.symbol], kids)

    return rec(t, ())


def occurring_colors(rule: ColorationRule, t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset()
    n = rule.term_color(t)
    if n is not None:
        return frozenset((n,))
    return frozenset(rule.colors(t).values())


# --------------------------------------------------------------------------
# a bijection between terms and natural numbers
#
# Weight: w(x_i) = i, w(f(t1..tn)) = 1 + sum w(tj). Each weight class is
# finite even though there are infinitely many variables. Terms are listed
# by weight; within a weight the single variable comes first, then
# applications by symbol order, then by the tuple of argument weights
# (lexicographic), then by the argument ranks within their weights
# (first argument most significant).


def term_weight(t: Term) -> int:
    if isinstance(t, Var):
        return t.index
    return 1 + sum(term_weight(a) for a in t.args)


@lru_cache(maxsize=None)
def _count(sig: Signature, w: int) -> int:
    """Number of terms of weight exactly ``w``."""
    if w < 1:
        return 0
    return 1 + sum(_tuples(sig, w - 1, a) for _, a in sig.symbols)


@lru_cache(maxsize=None)
def _tuples(sig: Signature, s: int, n: int) -> int:
    """Number of n-tuples of terms with total weight ``s``."""
    if n == 0:
        return 1 if s == 0 else 0
    return sum(_count(sig, w1) * _tuples(sig, s - w1, n - 1) for w1 in range(1, s - n + 2))


@lru_cache(maxsize=None)
def _below(sig: Signature, w: int) -> int:
    return sum(_count(sig, v) for v in range(1, w))


def _rank_tuple(sig, args, s) -> int:
    if not args:
        return 0
    n = len(args)
    w1 = term_weight(args[0])
    skip = sum(_count(sig, v) * _tuples(sig, s - v, n - 1) for v in range(1, w1))
    rest = _tuples(sig, s - w1, n - 1)
    return skip + _rank_within(sig, args[0]) * rest + _rank_tuple(sig, args[1:], s - w1)


def _rank_within(sig, t) -> int:
    if isinstance(t, Var):
        return 0
    w = term_weight(t)
    offset = 1
    for name, arity in sig.symbols:
        if name == t.symbol:
            break
        offset += _tuples(sig, w - 1, arity)
    return offset + _rank_tuple(sig, t.args, w - 1)


def term_rank(t: Term, sig: Signature) -> int:
    """Position of ``t`` in the canonical enumeration of all terms (0-based)."""
    return _below(sig, term_weight(t)) + _rank_within(sig, t)


def _unrank_tuple(sig, n, s, r):
    if n == 0:
        return []
    for w1 in range(1, s - n + 2):
        block = _count(sig, w1) * _tuples(sig, s - w1, n - 1)
        if r < block:
            rest = _tuples(sig, s - w1, n - 1)
            head = _unrank_within(sig, w1, r // rest)
            return [head] + _unrank_tuple(sig, n - 1, s - w1, r % rest)
        r -= block
    raise ValueError("rank out of range")


def _unrank_within(sig, w, r):
    if r == 0:
        return Var(w)
    r -= 1
    for name, arity in sig.symbols:
        block = _tuples(sig, w - 1, arity)
        if r < block:
            return App(name, _unrank_tuple(sig, arity, w - 1, r))
        r -= block
    raise ValueError("rank out of range")


def term_unrank(r: int, sig: Signature) -> Term:
    if r < 0:
        raise ValueError("rank must be >= 0")
    w = 1
    while r >= _count(sig, w):
        r -= _count(sig, w)
        w += 1
    return _unrank_within(sig, w, r)


# --------------------------------------------------------------------------
# spec strings and files


def _split_spec(text):
    # term arguments contain commas and parentheses but never ':'
    return text.split(":")


def parse_coloration(text: str, sig: Signature) -> ColorationRule:
    """Parse a coloration spec string such as ``uniform:0`` or
    ``singleton:f(x,x):1:0``. ``one-var-split:<inner>`` nests a spec."""
    text = text.strip()
    head, _, rest = text.partition(":")
    try:
        if head == "uniform":
            return Uniform(int(rest))
        if head == "rb-firstlast" and not rest:
            return RBFirstLast()
        if head == "enumeration" and not rest:
            return Enumeration(sig)
        if head == "address-depth" and not rest:
            return AddressDepth()
        if head == "one-var-split":
            return OneVariableSplit(parse_coloration(rest, sig))
        if head == "prop63":
            if rest not in sig:
                raise FormatError(f"prop63 needs a symbol of the signature, got {rest!r}")
            arity = sig.arity(rest)
            if arity < 2:
                raise FormatError(f"prop63 needs a symbol of arity >= 2; {rest!r} has arity {arity}")
            return SquarePair(rest, arity)
        parts = _split_spec(rest)
        if head == "singleton" and len(parts) == 3:
            return Singleton(parse_term(parts[0], sig), int(parts[1]), int(parts[2]))
        if head == "term-equals" and len(parts) == 3:
            return TermEquals(parse_term(parts[0], sig), int(parts[1]), int(parts[2]))
        if head == "leftmost-special" and len(parts) == 4:
            return LeftmostSpecial(parse_term(parts[0], sig), *map(int, parts[1:]))
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad coloration spec {text!r}: {exc}") from exc
    raise FormatError(f"unrecognised coloration spec {text!r}")


def mhyp_from_text(text: str, sig: Signature, base_dir: str = ".") -> MultiHypersubstitution:
    """``default <hyp>`` then ``color <n> <hyp>`` lines; ``<hyp>`` is a
    name such as ``swap`` or a path (relative to ``base_dir``)."""
    default = None
    table = {}

    def resolve(ref):
        path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
        return load_hyp(path if os.path.isfile(path) else ref, sig)

    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "default" and len(parts) == 2:
            if default is not None:
                raise FormatError(f"line {lineno}: second 'default' line")
            default = resolve(parts[1])
        elif parts[0] == "color" and len(parts) == 3 and parts[1].isdigit():
            c = int(parts[1])
            if c in table:
                raise FormatError(f"line {lineno}: colour {c} given twice")
            table[c] = resolve(parts[2])
        else:
            raise FormatError(f"line {lineno}: expected 'default <hyp>' or 'color <n> <hyp>', got {line!r}")
    if default is None:
        raise FormatError("multi-hypersubstitution file has no 'default' line")
    return MultiHypersubstitution(table, default)


def load_mhyp(path: str, sig: Signature) -> MultiHypersubstitution:
    with open(path, encoding="utf-8") as fh:
        return mhyp_from_text(fh.read(), sig, os.path.dirname(os.path.abspath(path)))


def builtin_rules(sig: Signature) -> list:
    """One instance of every rule kind for ``sig`` (used by property tests)."""
    name, arity = sig.symbols[0]
    fx = App(name, [Var(1)] * arity)
    s0 = App(name, [Var(2)] * (arity - 1) + [App(name, [Var(2)] * (arity - 1) + [Var(1)])])
    rules = [
        Uniform(0),
        Uniform(3),
        RBFirstLast(),
        Singleton(App(name, [fx] * arity), 1, 0),
        LeftmostSpecial(s0, 0, 1, 0),
        Enumeration(sig),
        OneVariableSplit(AddressDepth()),
        TermEquals(fx, 1, 2),
        AddressDepth(),
    ]
    if arity >= 2:
        rules.append(SquarePair(name, arity))
    return rules


__all__ += ["occurring_colors", "builtin_rules", "mhyp_from_text"]
