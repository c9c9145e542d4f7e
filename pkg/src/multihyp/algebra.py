"""Finite algebras on {0..k-1}, term evaluation and clones.

Operation tables are numpy arrays of shape ``(k,)*n``; ``table[a1,...,an]``
is the value of the operation. Term evaluation is vectorised: a term with
m variables is evaluated at all k**m assignments at once, the assignments
being listed lexicographically with the last variable varying fastest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .coloring import ColorationRule, MultiHypersubstitution, apply_mhyp
from .errors import BoundsExceeded, FormatError, SignatureError
from .hyp import Hypersubstitution, HypPool
from .terms import App, Equation, Signature, Term, Var, fundamental_term, variables

__all__ = [
    "FiniteAlgebra",
    "TermOperation",
    "CloneResult",
    "Satisfaction",
    "HyperCheck",
    "CloneComplete",
    "eval_term",
    "term_table",
    "satisfies",
    "derived_algebra",
    "derived_algebra_mhyp",
    "clone_upto",
    "hypersatisfies",
    "one_element",
    "left_zero",
    "right_zero",
    "semilattice",
    "zero_semigroup",
    "rectangular_band",
    "cyclic_group",
    "direct_product",
    "normal_band",
]


class FiniteAlgebra:
    """An algebra with carrier {0, ..., size-1} and one table per symbol."""

    __slots__ = ("sig", "size", "tables", "name", "_key")

    def __init__(self, sig: Signature, size: int, tables, name: str = None):
        if size < 1:
            raise ValueError("carrier must be non-empty")
        if isinstance(tables, Mapping):
            missing = [s for s in sig.names if s not in tables]
            if missing:
                raise SignatureError(f"no table for {missing}")
            tables = [tables[s] for s in sig.names]
        tabs = []
        for (sym, arity), tab in zip(sig.symbols, tables, strict=True):
            arr = np.asarray(tab, dtype=np.int64)
            if arr.size != size**arity:
                raise ValueError(f"table of {sym}/{arity} needs {size**arity} entries, got {arr.size}")
            arr = arr.reshape((size,) * arity)
            if arr.min() < 0 or arr.max() >= size:
                raise ValueError(f"table of {sym} has entries outside 0..{size - 1}")
            arr.flags.writeable = False
            tabs.append(arr)
        self.sig = sig
        self.size = size
        self.tables = tuple(tabs)
        self.name = name
        self._key = (sig, size, tuple(t.tobytes() for t in tabs))

    @classmethod
    def from_function(cls, sig: Signature, size: int, ops: Mapping, name: str = None):
        """Tabulate Python callables, e.g. ``{"f": lambda x, y: min(x, y)}``."""
        tables = {}
        for sym, arity in sig.symbols:
            fn = ops[sym]
            tab = np.empty((size,) * arity, dtype=np.int64)
            for args in itertools.product(range(size), repeat=arity):
                tab[args] = fn(*args)
            tables[sym] = tab
        return cls(sig, size, tables, name)

    def table(self, symbol: str) -> np.ndarray:
        return self.tables[self.sig.index(symbol)]

    def renamed(self, name):
        return FiniteAlgebra(self.sig, self.size, self.tables, name)

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"<FiniteAlgebra {self.name or '?'} size={self.size} sig={self.sig}>"

    # file format -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"carrier {self.size}"]
        for (sym, _), tab in zip(self.sig.symbols, self.tables):
            lines.append(f"table {sym}")
            flat = tab.reshape(-1)
            row = self.size
            for i in range(0, flat.size, row):
                lines.append(" ".join(str(int(v)) for v in flat[i : i + row]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, sig: Signature, name: str = None) -> "FiniteAlgebra":
        tokens = []
        for line in text.splitlines():
            tokens.extend(line.split("#", 1)[0].split())
        if len(tokens) < 2 or tokens[0] != "carrier" or not tokens[1].isdigit():
            raise FormatError("algebra file must start with 'carrier <k>'")
        k = int(tokens[1])
        pos = 2
        tables = {}
        while pos < len(tokens):
            if tokens[pos] != "table" or pos + 1 >= len(tokens):
                raise FormatError(f"expected 'table <name>', found {tokens[pos]!r}")
            sym = tokens[pos + 1]
            if sym not in sig:
                raise FormatError(f"table for unknown symbol {sym!r}")
            if sym in tables:
                raise FormatError(f"symbol {sym!r} tabulated twice")
            n = k ** sig.arity(sym)
            vals = tokens[pos + 2 : pos + 2 + n]
            if len(vals) != n or not all(v.isdigit() for v in vals):
                raise FormatError(f"table {sym!r} needs {n} non-negative integers")
            tables[sym] = [int(v) for v in vals]
            pos += 2 + n
        try:
            return cls(sig, k, tables, name)
        except (ValueError, SignatureError) as exc:
            raise FormatError(str(exc)) from exc


@dataclass(frozen=True)
class TermOperation:
    """An m-ary term operation: flat table over all k**m assignments plus a
    term inducing it."""

    arity: int
    table: np.ndarray = field(compare=False)
    witness: Term

    def key(self) -> bytes:
        return self.table.tobytes()


@dataclass
class CloneResult:
    ops: list
    complete: bool

    def __iter__(self):
        return iter(self.ops)

    def __len__(self):
        return len(self.ops)

    def __getitem__(self, i):
        return self.ops[i]


@dataclass
class Satisfaction:
    holds: bool
    witness: Optional[dict] = None

    def __bool__(self):
        return self.holds


@dataclass
class HyperCheck:
    """Outcome of a hyperidentity check. ``complete`` is False when the
    search space was only a pool or a truncated clone."""

    holds: bool
    sigma: Optional[Hypersubstitution] = None
    assignment: Optional[dict] = None
    complete: bool = False

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class CloneComplete:
    bound: int = 10_000


# --------------------------------------------------------------------------
# evaluation


def eval_term(A: FiniteAlgebra, t: Term, assignment: Mapping[int, int]) -> int:
    if isinstance(t, Var):
        try:
            v = assignment[t.index]
        except KeyError:
            raise KeyError(f"variable x{t.index} is not assigned") from None
        if not 0 <= v < A.size:
            raise ValueError(f"x{t.index}={v} is outside the carrier 0..{A.size - 1}")
        return int(v)
    tab = A.table(t.symbol)
    return int(tab[tuple(eval_term(A, a, assignment) for a in t.args)])


def assignment_grid(k: int, m: int) -> np.ndarray:
    """Shape (m, k**m): row i holds the value of the i-th variable."""
    if m == 0:
        return np.zeros((0, 1), dtype=np.int64)
    return np.indices((k,) * m, dtype=np.int64).reshape(m, -1)


def term_table(A: FiniteAlgebra, t: Term, var_order: Sequence[int], grid=None) -> np.ndarray:
    """Values of ``t`` at every assignment of the variables in ``var_order``."""
    pos = {v: i for i, v in enumerate(var_order)}
    if grid is None:
        grid = assignment_grid(A.size, len(var_order))
    tables = dict(zip(A.sig.names, A.tables))
    memo = {}

    def ev(s):
        r = memo.get(s)
        if r is not None:
            return r
        if isinstance(s, Var):
            if s.index not in pos:
                raise KeyError(f"variable x{s.index} is not in the evaluation order")
            r = grid[pos[s.index]]
        else:
            r = tables[s.symbol][tuple(ev(a) for a in s.args)]
        memo[s] = r
        return r

    return ev(t)


def satisfies(A: FiniteAlgebra, e: Equation) -> Satisfaction:
    """Check ``A |= lhs = rhs`` at every assignment; on failure return the
    lexicographically first failing assignment."""
    vs = sorted(set(variables(e.lhs)) | set(variables(e.rhs)))
    grid = assignment_grid(A.size, len(vs))
    left = np.broadcast_to(term_table(A, e.lhs, vs, grid), grid.shape[1:])
    right = np.broadcast_to(term_table(A, e.rhs, vs, grid), grid.shape[1:])
    bad = np.flatnonzero(left != right)
    if bad.size == 0:
        return Satisfaction(True)
    i = bad[0]
    return Satisfaction(False, {v: int(grid[j, i]) for j, v in enumerate(vs)})


def _tabulate(A: FiniteAlgebra, t: Term, arity: int) -> np.ndarray:
    vs = list(range(1, arity + 1))
    grid = assignment_grid(A.size, arity)
    flat = np.broadcast_to(term_table(A, t, vs, grid), grid.shape[1:])
    return np.array(flat).reshape((A.size,) * arity)


def derived_algebra(A: FiniteAlgebra, sigma: Hypersubstitution, name: str = None) -> FiniteAlgebra:
    """Same carrier, each f reinterpreted as the term operation of sigma(f)."""
    tables = [_tabulate(A, img, arity) for (_, arity), img in zip(A.sig.symbols, sigma.images)]
    return FiniteAlgebra(A.sig, A.size, tables, name)


def derived_algebra_mhyp(
    A: FiniteAlgebra, rho: MultiHypersubstitution, rule: ColorationRule, name: str = None
) -> FiniteAlgebra:
    """Each f reinterpreted as the term operation of rho applied to the
    coloured fundamental term f(x1..xn)."""
    tables = []
    for sym, arity in A.sig.symbols:
        img = apply_mhyp(rho, rule, fundamental_term(sym, arity))
        tables.append(_tabulate(A, img, arity))
    return FiniteAlgebra(A.sig, A.size, tables, name)


# --------------------------------------------------------------------------
# clones


def clone_upto(A: FiniteAlgebra, m: int, max_ops: int = 10_000) -> CloneResult:
    """m-ary part of the clone of ``A``, generated breadth first.

    Starts from the m projections and closes under composition with the
    basic operations. Each member keeps the first (hence shallowest) term
    found for it. Stops early, flagged incomplete, once more than
    ``max_ops`` members are known.
    """
    if m < 1:
        raise ValueError("arity must be >= 1")
    grid = assignment_grid(A.size, m)
    ops, seen = [], {}
    for i in range(m):
        op = TermOperation(m, grid[i].copy(), Var(i + 1))
        # projections coincide on a one-element carrier
        if seen.setdefault(op.key(), len(ops)) == len(ops):
            ops.append(op)
    start = 0
    while True:
        end = len(ops)
        added = False
        for (sym, arity), tab in zip(A.sig.symbols, A.tables):
            for idxs in itertools.product(range(end), repeat=arity):
                if max(idxs) < start:
                    continue
                vals = tab[tuple(ops[j].table for j in idxs)]
                key = vals.tobytes()
                if key in seen:
                    continue
                seen[key] = len(ops)
                ops.append(TermOperation(m, vals, App(sym, [ops[j].witness for j in idxs])))
                added = True
                if len(ops) > max_ops:
                    return CloneResult(ops, False)
        if not added:
            return CloneResult(ops, True)
        start = end


def hypersatisfies(A: FiniteAlgebra, e: Equation, mode) -> HyperCheck:
    """Does ``e`` hold in ``A`` under every hypersubstitution?

    ``mode`` is a :class:`HypPool` (check each member) or
    :class:`CloneComplete` (choose, per symbol, every clone member of the
    right arity; exact when the clones are complete, since
    sigma^[u]^A = u^{sigma(A)}).
    """
    if isinstance(mode, HypPool):
        from .hyp import apply_hyp

        for sigma in mode:
            img = Equation(apply_hyp(sigma, e.lhs), apply_hyp(sigma, e.rhs))
            res = satisfies(A, img)
            if not res:
                return HyperCheck(False, sigma, res.witness, complete=True)
        return HyperCheck(True, complete=False)
    if isinstance(mode, CloneComplete):
        clones = {}
        for _, arity in A.sig.symbols:
            if arity not in clones:
                clones[arity] = clone_upto(A, arity, mode.bound)
        complete = all(c.complete for c in clones.values())
        choices = [clones[arity].ops for _, arity in A.sig.symbols]
        for combo in itertools.product(*choices):
            sigma = Hypersubstitution(A.sig, tuple(op.witness for op in combo))
            tables = [op.table.reshape((A.size,) * op.arity) for op in combo]
            D = FiniteAlgebra(A.sig, A.size, tables)
            res = satisfies(D, e)
            if not res:
                return HyperCheck(False, sigma, res.witness, complete=True)
        return HyperCheck(True, complete=complete)
    raise TypeError(f"unknown hypersatisfaction mode {mode!r}")


# --------------------------------------------------------------------------
# small standard algebras (binary signature unless stated)


def _bin(sig):
    sig = sig or Signature.binary()
    if len(sig) != 1 or sig.symbols[0][1] != 2:
        raise SignatureError("this constructor needs a single binary symbol")
    return sig, sig.names[0]


def one_element(sig: Signature = None) -> FiniteAlgebra:
    sig = sig or Signature.binary()
    return FiniteAlgebra(sig, 1, [np.zeros((1,) * a, dtype=np.int64) for _, a in sig.symbols], "trivial")


def left_zero(k: int = 2, sig: Signature = None) -> FiniteAlgebra:
    sig, f = _bin(sig)
    return FiniteAlgebra.from_function(sig, k, {f: lambda x, y: x}, "left-zero")


def right_zero(k: int = 2, sig: Signature = None) -> FiniteAlgebra:
    sig, f = _bin(sig)
    return FiniteAlgebra.from_function(sig, k, {f: lambda x, y: y}, "right-zero")


def semilattice(k: int = 2, sig: Signature = None) -> FiniteAlgebra:
    """The chain 0 < 1 < ... under min."""
    sig, f = _bin(sig)
    return FiniteAlgebra.from_function(sig, k, {f: min}, "semilattice")


def zero_semigroup(k: int = 2, sig: Signature = None) -> FiniteAlgebra:
    sig, f = _bin(sig)
    return FiniteAlgebra.from_function(sig, k, {f: lambda x, y: 0}, "zero-semigroup")


def cyclic_group(n: int = 3, sig: Signature = None) -> FiniteAlgebra:
    sig, f = _bin(sig)
    return FiniteAlgebra.from_function(sig, n, {f: lambda x, y: (x + y) % n}, f"Z{n}")


def direct_product(A: FiniteAlgebra, B: FiniteAlgebra, name: str = None) -> FiniteAlgebra:
    """Carrier pairs (a, b) encoded as a*|B| + b."""
    if A.sig != B.sig:
        raise SignatureError("factors have different signatures")
    k = A.size * B.size
    tables = []
    for (_, arity), ta, tb in zip(A.sig.symbols, A.tables, B.tables):
        tab = np.empty((k,) * arity, dtype=np.int64)
        for args in itertools.product(range(k), repeat=arity):
            a = tuple(x // B.size for x in args)
            b = tuple(x % B.size for x in args)
            tab[args] = ta[a] * B.size + tb[b]
        tables.append(tab)
    return FiniteAlgebra(A.sig, k, tables, name or f"{A.name}x{B.name}")


def rectangular_band(sig: Signature = None) -> FiniteAlgebra:
    """Left-zero x right-zero on two elements each: (a,b)(c,d) = (a,d)."""
    return direct_product(left_zero(2, sig), right_zero(2, sig), "rect-band")


def normal_band(sig: Signature = None) -> FiniteAlgebra:
    """Rectangular band x 2-element semilattice; generates the normal bands."""
    return direct_product(rectangular_band(sig), semilattice(2, sig), "normal-band")
