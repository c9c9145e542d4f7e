"""Bounded equational operators: Id, Mod and the hypersubstitution closures.

Everything infinite in the theory is replaced by something finite here: a
universe of terms of bounded depth over finitely many variables, a
catalogue of finite algebras, a pool of hypersubstitutions, a bounded
number of closure rounds. Results are exact relative to those bounds.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .algebra import FiniteAlgebra, assignment_grid, derived_algebra, derived_algebra_mhyp, satisfies
from .coloring import ColorationRule, MultiHypersubstitution, apply_mhyp, occurring_colors
from .errors import BoundsExceeded, FormatError
from .hyp import Hypersubstitution, HypPool, apply_hyp
from .terms import (
    Equation,
    Signature,
    Term,
    Var,
    count_terms_up_to_depth,
    fundamental_term,
    parse_equation,
    terms_up_to_depth,
)

__all__ = [
    "TermUniverse",
    "EquationSet",
    "AlgebraCatalog",
    "ClosureResult",
    "universe_tables",
    "identity_classes",
    "row_labels",
    "id_bounded",
    "mod_catalog",
    "chi_E_M",
    "chi_e_C",
    "chi_E_C_iterate",
    "chi_A_M",
    "chi_A_C",
    "c_mod",
    "c_id",
    "load_equations",
    "colour_maps",
]

DEFAULT_CAP = 2_000_000


@dataclass(frozen=True)
class TermUniverse:
    """All terms of depth <= max_depth over x1..x_{variable_count}."""

    sig: Signature
    max_depth: int
    variable_count: int
    cap: int = field(default=5_000_000, compare=False)

    def __post_init__(self):
        if self.max_depth < 0 or self.variable_count < 1:
            raise ValueError("need max_depth >= 0 and at least one variable")

    def __len__(self):
        return count_terms_up_to_depth(self.sig, self.max_depth, self.variable_count)

    def terms(self) -> list:
        n = len(self)
        if n > self.cap:
            raise BoundsExceeded(f"universe has {n} terms, cap is {self.cap}")
        return _cached_terms(self.sig, self.max_depth, self.variable_count)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms())

    def describe(self) -> str:
        return f"depth<={self.max_depth} over x1..x{self.variable_count} ({len(self)} terms)"


_TERM_CACHE: dict = {}


def _cached_terms(sig, d, n):
    key = (sig, d, n)
    if key not in _TERM_CACHE:
        if len(_TERM_CACHE) > 4:
            _TERM_CACHE.clear()
        _TERM_CACHE[key] = terms_up_to_depth(sig, d, n)
    return _TERM_CACHE[key]


class EquationSet:
    """A duplicate-free set of ordered equations.

    ``s = t`` and ``t = s`` are different members. Iteration follows
    insertion order; :meth:`canonical` gives the sorted order.
    """

    __slots__ = ("_items",)

    def __init__(self, equations: Iterable[Equation] = ()):
        self._items = dict.fromkeys(equations)

    def add(self, e: Equation) -> bool:
        if e in self._items:
            return False
        self._items[e] = None
        return True

    def update(self, eqs: Iterable[Equation]) -> int:
        before = len(self._items)
        for e in eqs:
            self._items[e] = None
        return len(self._items) - before

    def __contains__(self, e):
        return e in self._items

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        if isinstance(other, EquationSet):
            return self._items.keys() == other._items.keys()
        return NotImplemented

    def __le__(self, other):
        return all(e in other for e in self._items)

    def __or__(self, other):
        out = EquationSet(self)
        out.update(other)
        return out

    def __sub__(self, other):
        return EquationSet(e for e in self if e not in other)

    def canonical(self) -> list:
        return sorted(self._items, key=Equation.sort_key)

    def to_text(self, named: bool = False) -> str:
        return "".join(e.format(named) + "\n" for e in self.canonical())

    def __repr__(self):
        return f"EquationSet({len(self)} equations)"


class AlgebraCatalog:
    """A finite, named list of algebras over one signature."""

    def __init__(self, algebras: Iterable[FiniteAlgebra] = (), names: Sequence[str] = None):
        algebras = list(algebras)
        if names is None:
            names = [A.name or f"A{i}" for i, A in enumerate(algebras)]
        names = list(names)
        if len(names) != len(algebras):
            raise ValueError("one name per algebra")
        if len(set(names)) != len(names):
            raise ValueError(f"catalogue names must be unique: {names}")
        sigs = {A.sig for A in algebras}
        if len(sigs) > 1:
            raise ValueError("catalogue mixes signatures")
        self.algebras = algebras
        self.names = names

    def __iter__(self):
        return iter(self.algebras)

    def __len__(self):
        return len(self.algebras)

    def __getitem__(self, i):
        return self.algebras[i]

    def items(self):
        return zip(self.names, self.algebras)

    def table_set(self) -> frozenset:
        return frozenset(self.algebras)

    def __eq__(self, other):
        return isinstance(other, AlgebraCatalog) and self.algebras == other.algebras

    def __repr__(self):
        return f"AlgebraCatalog({self.names})"


def _dedup_catalog(pairs) -> AlgebraCatalog:
    seen = {}
    for name, A in pairs:
        if A not in seen:
            seen[A] = name
    return AlgebraCatalog(list(seen), list(seen.values()))


# --------------------------------------------------------------------------
# term tables over a whole universe


def universe_tables(A: FiniteAlgebra, U: TermUniverse, dtype=None) -> np.ndarray:
    """Shape (len(U), k**n): row i is the term operation of ``U.terms()[i]``
    over x1..xn. Built level by level in the universe's own order."""
    k, n = A.size, U.variable_count
    if dtype is None:
        dtype = np.uint8 if k <= 256 else np.int64
    grid = assignment_grid(k, n).astype(dtype)
    level = grid
    for _ in range(U.max_depth):
        parts = [grid]
        N = level.shape[0]
        for tab, (_, arity) in zip(A.tables, A.sig.symbols):
            idx = np.indices((N,) * arity).reshape(arity, -1)
            parts.append(tab[tuple(level[i].astype(np.intp) for i in idx)].astype(dtype))
        level = np.concatenate(parts)
    if level.shape[0] != len(U):
        raise AssertionError("universe order mismatch")
    return level


def row_labels(rows: np.ndarray):
    """Label equal rows alike, numbering labels by first occurrence.

    Returns ``(labels, first)`` where ``first[c]`` is the index of the
    first row carrying label ``c``.
    """
    rows = np.ascontiguousarray(rows)
    keys = rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).reshape(-1)
    _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    inv = inv.reshape(-1)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(order.size)
    return relabel[inv], first[order]


def identity_classes(K: Iterable[FiniteAlgebra], U: TermUniverse) -> np.ndarray:
    """Class label per universe term: equal labels iff the two terms induce
    the same operation in every member of K. Labels are numbered in order
    of first occurrence."""
    K = list(K)
    if not K:
        return np.zeros(len(U), dtype=np.int64)
    rows = np.concatenate([universe_tables(A, U) for A in K], axis=1)
    return row_labels(rows)[0]


def _classes(labels: np.ndarray) -> list:
    order = np.argsort(labels, kind="stable")
    splits = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, splits)


def id_bounded(K, U: TermUniverse, cap: int = DEFAULT_CAP) -> EquationSet:
    """All ordered pairs of universe terms holding in every member of K
    (both orientations, reflexive pairs included)."""
    labels = identity_classes(K, U)
    groups = _classes(labels)
    total = sum(len(g) ** 2 for g in groups)
    if total > cap:
        raise BoundsExceeded(f"Id over the universe has {total} pairs, cap is {cap}")
    terms = U.terms()
    out = EquationSet()
    for g in groups:
        members = [terms[i] for i in g]
        out.update(Equation(s, t) for s in members for t in members)
    return out


def mod_catalog(sigma: Iterable[Equation], K: AlgebraCatalog) -> AlgebraCatalog:
    eqs = list(sigma)
    keep = [(n, A) for n, A in K.items() if all(satisfies(A, e) for e in eqs)]
    return AlgebraCatalog([A for _, A in keep], [n for n, _ in keep])


# --------------------------------------------------------------------------
# closures


def chi_E_M(sigma: Iterable[Equation], M: HypPool) -> EquationSet:
    """Images of every equation under every pool member."""
    out = EquationSet()
    for e in sigma:
        for h in M:
            out.add(Equation(apply_hyp(h, e.lhs), apply_hyp(h, e.rhs)))
    return out


def colour_maps(colours: Sequence[int], pool: HypPool) -> Iterator[MultiHypersubstitution]:
    """Every map from ``colours`` into ``pool``, as multi-hypersubstitutions
    (default = first pool member), in lexicographic pool order."""
    colours = sorted(colours)
    default = pool[0]
    for combo in itertools.product(pool.hyps, repeat=len(colours)):
        yield MultiHypersubstitution(dict(zip(colours, combo)), default)


def _equation_images(e: Equation, pool: HypPool, rule: ColorationRule, cap: int):
    """Yield (rho, image) for every colour map rho of e's occurring colours.

    Per-term-constant colourings are handled without building rho for
    every combination of pool members twice.
    """
    cl = rule.term_color(e.lhs) if not isinstance(e.lhs, Var) else None
    cr = rule.term_color(e.rhs) if not isinstance(e.rhs, Var) else None
    colours = sorted(occurring_colors(rule, e.lhs) | occurring_colors(rule, e.rhs))
    count = len(pool) ** len(colours)
    if count > cap:
        raise BoundsExceeded(f"{count} colour maps for {e}, cap is {cap}")
    lhs_uniform = isinstance(e.lhs, Var) or cl is not None
    rhs_uniform = isinstance(e.rhs, Var) or cr is not None
    if lhs_uniform and rhs_uniform:
        L = [apply_hyp(h, e.lhs) for h in pool]
        R = L if e.lhs == e.rhs else [apply_hyp(h, e.rhs) for h in pool]
        pos = {c: i for i, c in enumerate(colours)}
        for combo in itertools.product(range(len(pool)), repeat=len(colours)):
            i = combo[pos[cl]] if cl is not None else 0
            j = combo[pos[cr]] if cr is not None else 0
            yield (lambda combo=combo: MultiHypersubstitution(
                {c: pool[combo[pos[c]]] for c in colours}, pool[0]
            )), Equation(L[i], R[j])
        return
    for rho in colour_maps(colours, pool):
        yield (lambda rho=rho: rho), Equation(apply_mhyp(rho, rule, e.lhs), apply_mhyp(rho, rule, e.rhs))


def chi_e_C(sigma: Iterable[Equation], pool: HypPool, rule: ColorationRule, cap: int = DEFAULT_CAP) -> EquationSet:
    """One round of the coloured closure, relative to ``pool``.

    rho ranges over all maps from the colours occurring in an equation into
    the pool; colours that do not occur are never read, so this is
    exhaustive for the pool.
    """
    sigma = list(sigma)
    # refuse up front rather than after building most of the images
    work = 0
    for e in sigma:
        work += len(pool) ** len(occurring_colors(rule, e.lhs) | occurring_colors(rule, e.rhs))
        if work > cap:
            raise BoundsExceeded(f"closure round needs more than {cap} images")
    out = EquationSet()
    for e in sigma:
        for _, img in _equation_images(e, pool, rule, cap):
            out.add(img)
    return out


@dataclass
class ClosureResult:
    equations: EquationSet
    fixpoint_reached: bool
    rounds: int

    def __iter__(self):
        # allows ``eqs, fixed = chi_E_C_iterate(...)``
        return iter((self.equations, self.fixpoint_reached))


def chi_E_C_iterate(
    sigma: Iterable[Equation], pool: HypPool, rule: ColorationRule, max_rounds: int = 5, cap: int = DEFAULT_CAP
) -> ClosureResult:
    """Sigma together with its first ``max_rounds`` coloured-closure rounds.

    The closure distributes over unions, so each round only needs to
    process the equations that are new since the previous round.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    acc = EquationSet(sigma)
    frontier = list(acc)
    for r in range(1, max_rounds + 1):
        new = [e for e in chi_e_C(frontier, pool, rule, cap) if e not in acc]
        if not new:
            return ClosureResult(acc, True, r)
        acc.update(new)
        if len(acc) > cap:
            raise BoundsExceeded(f"closure exceeded {cap} equations")
        frontier = new
    return ClosureResult(acc, False, max_rounds)


def chi_A_M(K: AlgebraCatalog, M: HypPool) -> AlgebraCatalog:
    return _dedup_catalog(
        (f"{name}/{h.label()}", derived_algebra(A, h)) for name, A in K.items() for h in M
    )


def chi_A_C(K: AlgebraCatalog, pool: HypPool, rule: ColorationRule) -> AlgebraCatalog:
    """Derived algebras rho[A]; rho over all maps from the colours of the
    fundamental terms into the pool."""
    sig = pool.sig
    colours = set()
    for name, arity in sig.symbols:
        colours |= occurring_colors(rule, fundamental_term(name, arity))
    return _dedup_catalog(
        (f"{name}/{rho.describe()}", derived_algebra_mhyp(A, rho, rule))
        for name, A in K.items()
        for rho in colour_maps(sorted(colours), pool)
    )


def c_mod(
    sigma: Iterable[Equation],
    K: AlgebraCatalog,
    pool: HypPool,
    rule: ColorationRule,
    rounds: int = 5,
    cap: int = DEFAULT_CAP,
) -> AlgebraCatalog:
    """Members A of K with chi_C^E[e] inside Id A for each e in sigma,
    computed equation by equation."""
    closures = [chi_E_C_iterate([e], pool, rule, rounds, cap).equations for e in sigma]
    keep = []
    for name, A in K.items():
        if all(satisfies(A, img) for cl in closures for img in cl):
            keep.append((name, A))
    return AlgebraCatalog([A for _, A in keep], [n for n, _ in keep])


def c_id(
    K: AlgebraCatalog,
    U: TermUniverse,
    pool: HypPool,
    rule: ColorationRule,
    rounds: int = 5,
    cap: int = 200_000,
) -> EquationSet:
    """Pairs of U whose coloured closure (closure terms may leave U) holds
    throughout K. ``cap`` bounds the number of candidate pairs."""
    cands = id_bounded(K, U, cap)
    verdict = {}
    out = EquationSet()
    for e in cands:
        if e.lhs == e.rhs:
            out.add(e)
            continue
        key = frozenset((e.lhs, e.rhs))
        if key not in verdict:
            # images of the flipped equation are the flipped images
            cl = chi_E_C_iterate([e], pool, rule, rounds).equations
            verdict[key] = all(satisfies(A, img) for A in K for img in cl)
        if verdict[key]:
            out.add(e)
    return out


def load_equations(path_or_text: str, sig: Signature) -> EquationSet:
    """Read ``<term> = <term>`` lines from a file (or from the text itself
    when no such file exists)."""
    if os.path.isfile(path_or_text):
        with open(path_or_text, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = path_or_text
    out = EquationSet()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.add(parse_equation(line, sig))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    return out
