"""Signatures, terms, Dewey addresses, parsing and printing.

Terms are immutable trees. A variable is ``Var(i)`` standing for ``x_i``
(``i >= 1``); an application is ``App(symbol, args)``. Both hash in O(1)
because the hash is computed once at construction, which matters when
millions of terms go into sets.

Addresses are Dewey paths: tuples of 1-based child indices, ``()`` being
the root. Only operation-symbol occurrences have addresses. Lexicographic
order on addresses is preorder, so ``min(addresses(t))`` is the leftmost
operation symbol as printed.
"""

from __future__ import annotations

import itertools
import re
import weakref
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

from .errors import (
    ArityError,
    InvalidAddressError,
    SignatureError,
    TermSyntaxError,
    UnknownSymbolError,
)

__all__ = [
    "Signature",
    "Var",
    "App",
    "Term",
    "Address",
    "Equation",
    "parse_term",
    "parse_equation",
    "format_term",
    "addresses",
    "subterm_at",
    "first_variable",
    "last_variable",
    "substitute",
    "variables",
    "depth",
    "size",
    "subterms",
    "fundamental_term",
    "random_term",
    "word",
]

Address = tuple  # tuple[int, ...]

VARIABLE_ALIASES = {"x": 1, "y": 2, "z": 3}
_ALIAS_NAMES = {v: k for k, v in VARIABLE_ALIASES.items()}
_VAR_RE = re.compile(r"x([0-9]+)\Z")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _is_variable_name(name: str) -> bool:
    return name in VARIABLE_ALIASES or _VAR_RE.match(name) is not None


@dataclass(frozen=True)
class Signature:
    """Ordered operation symbols with their arities, e.g. type (2) is ``Signature((("f", 2),))``."""

    symbols: tuple

    def __post_init__(self):
        symbols = tuple((str(n), int(a)) for n, a in self.symbols)
        object.__setattr__(self, "symbols", symbols)
        seen = set()
        for name, arity in symbols:
            if not name or not _IDENT_RE.fullmatch(name):
                raise SignatureError(f"invalid symbol name {name!r}")
            if _is_variable_name(name):
                raise SignatureError(f"symbol name {name!r} clashes with variable syntax")
            if name in seen:
                raise SignatureError(f"duplicate symbol {name!r}")
            if arity < 1:
                raise SignatureError(f"symbol {name!r} must have arity >= 1, got {arity}")
            seen.add(name)
        object.__setattr__(self, "_arity", dict(symbols))

    @classmethod
    def binary(cls, name: str = "f") -> "Signature":
        return cls(((name, 2),))

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse the compact form ``"f:2,g:3"``."""
        pairs = []
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            name, sep, arity = item.partition(":")
            if not sep or not arity.strip().isdigit():
                raise SignatureError(f"bad signature item {item!r}; expected name:arity")
            pairs.append((name.strip(), int(arity)))
        if not pairs:
            raise SignatureError("empty signature")
        return cls(tuple(pairs))

    @classmethod
    def from_text(cls, text: str) -> "Signature":
        """Read the file format: one ``op <name> <arity>`` line per symbol."""
        pairs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] != "op" or not parts[2].isdigit():
                raise SignatureError(f"line {lineno}: expected 'op <name> <arity>', got {line!r}")
            pairs.append((parts[1], int(parts[2])))
        if not pairs:
            raise SignatureError("signature file declares no symbols")
        return cls(tuple(pairs))

    def to_text(self) -> str:
        return "".join(f"op {n} {a}\n" for n, a in self.symbols)

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown operation symbol {name!r}") from None

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.symbols)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __contains__(self, name) -> bool:
        return name in self._arity

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return ",".join(f"{n}:{a}" for n, a in self.symbols)


class Var:
    __slots__ = ("index", "_hash")

    def __init__(self, index: int):
        if index < 1:
            raise ValueError(f"variable index must be positive, got {index}")
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "_hash", hash(("var", index)))

    def __setattr__(self, key, value):
        raise AttributeError("terms are immutable")

    def __eq__(self, other):
        return isinstance(other, Var) and other.index == self.index

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.index})"

    def __str__(self):
        return f"x{self.index}"

    def __reduce__(self):
        return (Var, (self.index,))


class App:
    """An application node. Instances are hash-consed: building a term equal
    to a live one returns that same object, so structurally equal subterms
    are shared and deep equality is usually an identity check."""

    __slots__ = ("symbol", "args", "_hash", "__weakref__")
    _pool = weakref.WeakValueDictionary()

    def __new__(cls, symbol: str, args: Sequence["Term"]):
        args = tuple(args)
        key = (symbol, args)
        obj = cls._pool.get(key)
        if obj is not None:
            return obj
        obj = object.__new__(cls)
        object.__setattr__(obj, "symbol", symbol)
        object.__setattr__(obj, "args", args)
        object.__setattr__(obj, "_hash", hash(key))
        return cls._pool.setdefault(key, obj)

    def __init__(self, symbol, args):
        pass

    def __setattr__(self, key, value):
        raise AttributeError("terms are immutable")

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, App)
            and self._hash == other._hash
            and self.symbol == other.symbol
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"App({self.symbol!r}, {list(self.args)!r})"

    def __str__(self):
        return format_term(self)

    def __reduce__(self):
        return (App, (self.symbol, self.args))


Term = Union[Var, App]


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{format_term(self.lhs)} = {format_term(self.rhs)}"

    def format(self, named: bool = False) -> str:
        return f"{format_term(self.lhs, named)} = {format_term(self.rhs, named)}"

    def flipped(self) -> "Equation":
        return Equation(self.rhs, self.lhs)

    def sort_key(self):
        return (term_key(self.lhs), term_key(self.rhs))


# --------------------------------------------------------------------------
# parsing / printing


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise TermSyntaxError(f"expected {ch!r}, found {found!r}", self.pos, self.text)
        self.pos += 1

    def term(self) -> Term:
        self.skip()
        start = self.pos
        m = _IDENT_RE.match(self.text, self.pos)
        if not m:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise TermSyntaxError(f"expected a term, found {found!r}", self.pos, self.text)
        name = m.group()
        self.pos = m.end()
        if self.peek() == "(":
            if name not in self.sig:
                raise UnknownSymbolError(f"unknown operation symbol {name!r}", start, self.text)
            self.pos += 1
            args = [self.term()]
            while self.peek() == ",":
                self.pos += 1
                args.append(self.term())
            self.expect(")")
            arity = self.sig.arity(name)
            if len(args) != arity:
                raise ArityError(
                    f"symbol {name!r} has arity {arity} but got {len(args)} argument(s)",
                    start,
                    self.text,
                )
            return App(name, args)
        if name in VARIABLE_ALIASES:
            return Var(VARIABLE_ALIASES[name])
        vm = _VAR_RE.match(name)
        if vm:
            idx = int(vm.group(1))
            if idx < 1:
                raise TermSyntaxError("variable indices start at 1", start, self.text)
            return Var(idx)
        if name in self.sig:
            raise ArityError(
                f"symbol {name!r} has arity {self.sig.arity(name)} but is used without arguments",
                start,
                self.text,
            )
        raise UnknownSymbolError(f"unknown variable or symbol {name!r}", start, self.text)


def parse_term(text: str, sig: Signature) -> Term:
    """Parse ``f(x1,f(y,x))``-style text; ``x``, ``y``, ``z`` alias ``x1``, ``x2``, ``x3``."""
    p = _Parser(text, sig)
    t = p.term()
    p.skip()
    if p.pos != len(text):
        raise TermSyntaxError(f"unexpected trailing input {text[p.pos:]!r}", p.pos, text)
    return t


def parse_equation(text: str, sig: Signature) -> Equation:
    """Parse ``<term> = <term>`` (``~`` and ``≈`` are accepted as separators too)."""
    for sep in ("≈", "~", "="):
        if sep in text:
            lhs, _, rhs = text.partition(sep)
            return Equation(parse_term(lhs, sig), parse_term(rhs, sig))
    raise TermSyntaxError(f"equation {text!r} has no '=' separator")


def format_term(t: Term, named: bool = False) -> str:
    """Inverse of :func:`parse_term`. With ``named=True`` print x1..x3 as x, y, z."""
    parts = []

    def emit(s):
        if isinstance(s, Var):
            if named and s.index in _ALIAS_NAMES:
                parts.append(_ALIAS_NAMES[s.index])
            else:
                parts.append(f"x{s.index}")
            return
        parts.append(s.symbol)
        parts.append("(")
        for i, a in enumerate(s.args):
            if i:
                parts.append(",")
            emit(a)
        parts.append(")")

    emit(t)
    return "".join(parts)


# --------------------------------------------------------------------------
# structural queries


def addresses(t: Term) -> tuple:
    """Dewey addresses of all operation-symbol occurrences, in preorder."""
    out = []

    def walk(s, path):
        if isinstance(s, App):
            out.append(path)
            for i, a in enumerate(s.args, 1):
                walk(a, path + (i,))

    walk(t, ())
    return tuple(out)


def subterm_at(t: Term, a: Sequence[int]) -> Term:
    s = t
    for step, i in enumerate(a):
        if not isinstance(s, App) or not 1 <= i <= len(s.args):
            raise InvalidAddressError(f"address {tuple(a)} is not valid for {format_term(t)} (fails at step {step})")
        s = s.args[i - 1]
    return s


def subterms(t: Term) -> Iterator[tuple]:
    """Yield ``(path, subterm)`` for every node (variables included), preorder."""
    stack = [((), t)]
    while stack:
        path, s = stack.pop()
        yield path, s
        if isinstance(s, App):
            for i in range(len(s.args), 0, -1):
                stack.append((path + (i,), s.args[i - 1]))


def first_variable(t: Term) -> int:
    while isinstance(t, App):
        t = t.args[0]
    return t.index


def last_variable(t: Term) -> int:
    while isinstance(t, App):
        t = t.args[-1]
    return t.index


def variables(t: Term) -> tuple:
    """Sorted indices of the variables occurring in ``t``."""
    found = set()
    seen = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            found.add(s.index)
        elif s not in seen:
            seen.add(s)
            stack.extend(s.args)
    return tuple(sorted(found))


def _fold(t: Term, leaf, node):
    # bottom-up evaluation visiting each distinct subterm once
    memo = {}

    def go(s):
        if isinstance(s, Var):
            return leaf
        r = memo.get(s)
        if r is None:
            r = memo[s] = node(go(a) for a in s.args)
        return r

    return go(t)


def depth(t: Term) -> int:
    """Variables have depth 0; ``f(x1,x2)`` has depth 1."""
    return _fold(t, 0, lambda ds: 1 + max(ds))


def size(t: Term) -> int:
    """Number of nodes."""
    return _fold(t, 1, lambda ns: 1 + sum(ns))


def substitute(t: Term, binding: Mapping[int, Term]) -> Term:
    """Simultaneous substitution; unbound variables stay put."""
    memo = {}

    def go(s):
        if isinstance(s, Var):
            return binding.get(s.index, s)
        r = memo.get(s)
        if r is None:
            r = memo[s] = App(s.symbol, [go(a) for a in s.args])
        return r

    return go(t)


def fundamental_term(symbol: str, arity: int) -> App:
    return App(symbol, [Var(i) for i in range(1, arity + 1)])


def word(letters: str, symbol: str = "f") -> Term:
    """Left-associated product of variables: ``word("x1 x2 x1")`` is f(f(x1,x2),x1)."""
    names = letters.split()
    if not names:
        raise ValueError("empty word")
    sig = Signature.binary(symbol)
    t = parse_term(names[0], sig)
    for n in names[1:]:
        t = App(symbol, [t, parse_term(n, sig)])
    return t


def term_key(t: Term):
    """A total order key: variables first, then by symbol and children."""
    if isinstance(t, Var):
        return (0, t.index)
    return (1, t.symbol, tuple(term_key(a) for a in t.args))


# --------------------------------------------------------------------------
# random generation


def random_term(rng, sig: Signature, max_depth: int, nvars: int, leaf_prob: float = 0.3) -> Term:
    """Random term of depth <= max_depth over x1..x_nvars.

    ``rng`` is a :class:`random.Random`. The root is an application when
    ``max_depth > 0``; below it each node becomes a variable with
    probability ``leaf_prob``.
    """

    def gen(d, root):
        if d == 0 or (not root and rng.random() < leaf_prob):
            return Var(rng.randint(1, nvars))
        name, arity = sig.symbols[rng.randrange(len(sig))]
        return App(name, [gen(d - 1, False) for _ in range(arity)])

    return gen(max_depth, True)


def terms_up_to_depth(sig: Signature, max_depth: int, nvars: int) -> list:
    """All terms of depth <= max_depth over x1..x_nvars.

    Order: variables, then for each symbol in signature order the
    applications to all argument tuples from the previous level, in
    ``itertools.product`` order. Every term appears exactly once.
    """
    level = [Var(i) for i in range(1, nvars + 1)]
    for _ in range(max_depth):
        nxt = [Var(i) for i in range(1, nvars + 1)]
        for name, arity in sig.symbols:
            nxt.extend(App(name, combo) for combo in itertools.product(level, repeat=arity))
        level = nxt
    return level


def count_terms_up_to_depth(sig: Signature, max_depth: int, nvars: int) -> int:
    n = nvars
    for _ in range(max_depth):
        n = nvars + sum(n**arity for _, arity in sig.symbols)
    return n
