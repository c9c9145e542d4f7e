"""Bounded M-solidity and coloured-solidity checks.

A check looks for an identity e of the model algebra A and a colour map
rho with rho(e) failing in A. Any violation found is replayed
symbolically before it is reported, so violations are genuine. "No
violation" only speaks for the pool, universe and rounds that were used.

The search over a term universe is semantic. For each distinct derived
algebra D = sigma(A), sigma in the pool, every universe term is tabulated
in D. Whenever the colour of u is a single colour c, the term operation of
rho(u) in A is u evaluated in the derived algebra of rho(c). Identities of
A over the universe are the pairs inside one class of equal A-tables, and
because rho is shared by both sides, a class is fine iff each member
agrees with the class's first member under every rho.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .algebra import FiniteAlgebra, assignment_grid, derived_algebra, satisfies
from .coloring import ColorationRule, MultiHypersubstitution, Uniform, apply_mhyp
from .engine import (
    EquationSet,
    TermUniverse,
    _equation_images,
    id_bounded,
    row_labels,
    universe_tables,
)
from .errors import BoundsExceeded, PreconditionFailed
from .hyp import HypPool
from .terms import Equation, Term, Var

__all__ = ["SolidityReport", "is_M_solid_bounded", "is_C_colored_solid_bounded"]

VIOLATED = "violated"
NO_VIOLATION = "no-violation-within-bounds"


@dataclass
class SolidityReport:
    verdict: str
    algebra: FiniteAlgebra = field(repr=False)
    rule: ColorationRule
    pool_size: int
    universe: Optional[str]
    rounds_requested: int
    rounds_completed: int
    equation: Optional[Equation] = None
    rho: Optional[MultiHypersubstitution] = None
    image: Optional[Equation] = None
    assignment: Optional[dict] = None
    stage: Optional[str] = None
    notes: list = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return self.verdict == VIOLATED

    @property
    def sigma(self):
        """For uniform colourings the single hypersubstitution used."""
        if self.rho is None:
            return None
        return self.rho(self.rule.c) if isinstance(self.rule, Uniform) else None

    def bounds(self) -> str:
        u = self.universe or "base equations only"
        return (
            f"relative to pool of {self.pool_size} hypersubstitutions, universe {u}, "
            f"rounds {self.rounds_completed}/{self.rounds_requested}"
        )

    def replay(self) -> bool:
        """True iff the cited counterexample still fails in the algebra."""
        if not self.violated:
            return False
        img = Equation(
            apply_mhyp(self.rho, self.rule, self.equation.lhs),
            apply_mhyp(self.rho, self.rule, self.equation.rhs),
        )
        return img == self.image and not satisfies(self.algebra, img)

    def to_kv(self) -> list:
        out = [("verdict", self.verdict)]
        if self.violated:
            out += [
                ("equation", str(self.equation)),
                ("rho", self.rho.describe()),
                ("image", str(self.image)),
                ("assignment", ",".join(f"x{k}={v}" for k, v in sorted(self.assignment.items()))),
                ("stage", self.stage),
            ]
        out += [
            ("pool_size", str(self.pool_size)),
            ("universe", self.universe or "none"),
            ("rounds_requested", str(self.rounds_requested)),
            ("rounds_completed", str(self.rounds_completed)),
            ("soundness", "violations are genuine; absence of violations holds only " + self.bounds()),
        ]
        return out

    def __str__(self):
        if self.violated:
            head = (
                f"violated: {self.equation} holds in {self.algebra.name or 'A'} but under "
                f"rho = {self.rho.describe()} becomes {self.image}, failing at "
                + ", ".join(f"x{k}={v}" for k, v in sorted(self.assignment.items()))
            )
        else:
            head = "no violation within bounds"
        return f"{head}\n({self.bounds()})"


# --------------------------------------------------------------------------


class _Failure(Exception):
    def __init__(self, equation, rho, stage):
        self.equation = equation
        self.rho = rho
        self.stage = stage


def _check_base(A, base, pool, rule, cap):
    for e in base:
        for make_rho, img in _equation_images(e, pool, rule, cap):
            if not satisfies(A, img):
                raise _Failure(e, make_rho(), "base")


def _node_eval(t: Term, colours: dict, tables: list, grid, assign):
    """Evaluate t with the node at address a interpreted in the derived
    algebra ``tables[assign[colours[a]]]``."""

    def ev(s, addr):
        if isinstance(s, Var):
            return grid[s.index - 1]
        tab = tables[assign[colours[addr]]][s.symbol]
        return tab[tuple(ev(a, addr + (i,)) for i, a in enumerate(s.args, 1))]

    return ev(t, ())


def _pair_search(u, v, rule, derived, grid, cap):
    """Find a colour assignment (colour -> derived index) separating u and v,
    or None."""
    cu = rule.colors(u) if not isinstance(u, Var) else {}
    cv = rule.colors(v) if not isinstance(v, Var) else {}
    colours = sorted(set(cu.values()) | set(cv.values()))
    J = len(derived)
    if J ** len(colours) > cap:
        raise BoundsExceeded(f"{J}^{len(colours)} colour assignments for one pair, cap is {cap}")
    tables = [dict(zip(D.sig.names, D.tables)) for D, _ in derived]
    for combo in itertools.product(range(J), repeat=len(colours)):
        assign = dict(zip(colours, combo))
        a = _node_eval(u, cu, tables, grid, assign)
        b = _node_eval(v, cv, tables, grid, assign)
        if not np.array_equal(np.broadcast_to(a, grid.shape[1:]), np.broadcast_to(b, grid.shape[1:])):
            return assign
    return None


def _semantic_round(A, pool, rule, U, cap, nonuniform_cap):
    derived = []  # (algebra, first pool index), one per distinct derived algebra
    seen = {}
    for i, h in enumerate(pool):
        D = derived_algebra(A, h)
        if D not in seen:
            seen[D] = len(derived)
            derived.append((D, i))
    terms = U.terms()
    N = len(terms)

    # colour code per term: -1 variable, -2 not a single colour
    codes = np.empty(N, dtype=np.int64)
    colour_of_code = {}
    code_of_colour = {}
    for i, t in enumerate(terms):
        if isinstance(t, Var):
            codes[i] = -1
            continue
        c = rule.term_color(t)
        if c is None:
            codes[i] = -2
            continue
        k = code_of_colour.get(c)
        if k is None:
            k = code_of_colour[c] = len(code_of_colour)
            colour_of_code[k] = c
        codes[i] = k

    labels, first = row_labels(universe_tables(A, U))
    rep = first[labels]

    T0 = universe_tables(derived[0][0], U)
    const = np.ones(N, dtype=bool)
    same_bad = np.zeros(N, dtype=bool)
    same_colour = (codes == codes[rep]) & (codes >= 0)
    for D, _ in derived:
        Tj = T0 if D is derived[0][0] else universe_tables(D, U)
        if Tj is not T0:
            const &= (Tj == T0).all(axis=1)
        same_bad |= same_colour & (Tj != Tj[rep]).any(axis=1)
    diff_colour = (codes != codes[rep]) & (codes != -2) & (codes[rep] != -2)
    diff_bad = diff_colour & ~(const & const[rep] & (T0 == T0[rep]).all(axis=1))
    bad = same_bad | diff_bad

    nonuni = np.flatnonzero(((codes == -2) | (codes[rep] == -2)) & (np.arange(N) != rep))
    if nonuni.size > nonuniform_cap:
        raise BoundsExceeded(
            f"{nonuni.size} universe terms without a single colour, cap is {nonuniform_cap}"
        )
    grid = assignment_grid(A.size, U.variable_count)
    first_bad = int(np.flatnonzero(bad)[0]) if bad.any() else N
    first_nonuni = None
    for i in nonuni:
        if i > first_bad:
            break
        assign = _pair_search(terms[rep[i]], terms[i], rule, derived, grid, cap)
        if assign is not None:
            first_nonuni = (i, assign)
            break

    cands = []
    if first_bad < N:
        cands.append((first_bad, None))
    if first_nonuni is not None:
        cands.append(first_nonuni)
    if not cands:
        return
    i, assign = min(cands, key=lambda p: p[0])
    u, r = terms[i], terms[rep[i]]
    if assign is None:
        # recover the separating pair of derived algebras
        tabs = [universe_tables(D, U)[[rep[i], i]] for D, _ in derived]
        ci, cr = codes[i], codes[rep[i]]
        assign = None
        for j, l in itertools.product(range(len(derived)), repeat=2):
            if ci == cr and j != l:
                continue
            if not np.array_equal(tabs[l][0], tabs[j][1]):
                assign = {}
                if cr >= 0:
                    assign[colour_of_code[cr]] = l
                if ci >= 0:
                    assign[colour_of_code[ci]] = j
                break
        if assign is None:
            raise AssertionError("semantic violation without a separating assignment")
    rho = MultiHypersubstitution({c: pool[derived[j][1]] for c, j in assign.items()}, pool[0])
    raise _Failure(Equation(r, u), rho, "universe")


def _symbolic_rounds(A, seeds, pool, rule, rounds, cap, report, per_equation_cap=100_000):
    acc = EquationSet(seeds)
    frontier = list(acc)
    for r in range(1, rounds + 1):
        new = []
        work = 0
        try:
            for e in frontier:
                for make_rho, img in _equation_images(e, pool, rule, per_equation_cap):
                    work += 1
                    if work > cap:
                        raise BoundsExceeded(f"more than {cap} images")
                    if img in acc:
                        continue
                    if not satisfies(A, img):
                        raise _Failure(e, make_rho(), f"round {r}")
                    acc.add(img)
                    new.append(img)
        except BoundsExceeded as exc:
            report.notes.append(f"round {r} abandoned: {exc}")
            return
        report.rounds_completed = r
        if not new:
            report.notes.append(f"closure of the seed identities reached a fixpoint in round {r}")
            return
        frontier = new


def _run(base, A, pool, rule, U, rounds, seed_depth, cap, nonuniform_cap, base_only=False):
    base = EquationSet(base)
    for e in base:
        if not satisfies(A, e):
            raise PreconditionFailed(f"the model does not satisfy the base equation {e}")
    report = SolidityReport(
        NO_VIOLATION, A, rule, len(pool), None if base_only else U.describe(), rounds, 0
    )
    try:
        _check_base(A, base, pool, rule, cap)
        if not base_only:
            _semantic_round(A, pool, rule, U, cap, nonuniform_cap)
            report.rounds_completed = 1
            if rounds > 1:
                small = TermUniverse(U.sig, min(seed_depth, U.max_depth), U.variable_count)
                seeds = list(base) + list(id_bounded([A], small))
                _symbolic_rounds(A, seeds, pool, rule, rounds, cap, report)
                report.notes.append(
                    f"rounds beyond the first start from the base and Id over {small.describe()}"
                )
        else:
            report.rounds_completed = 1
    except _Failure as f:
        img = Equation(apply_mhyp(f.rho, rule, f.equation.lhs), apply_mhyp(f.rho, rule, f.equation.rhs))
        res = satisfies(A, img)
        if res:
            raise AssertionError(f"counterexample for {f.equation} did not replay") from None
        report.verdict = VIOLATED
        report.equation = f.equation
        report.rho = f.rho
        report.image = img
        report.assignment = res.witness
        report.stage = f.stage
    return report


def is_M_solid_bounded(
    base: Iterable[Equation],
    A: FiniteAlgebra,
    M: HypPool,
    U: Optional[TermUniverse] = None,
    basis_only: bool = False,
    cap: int = 2_000_000,
) -> SolidityReport:
    """Do the identities of A (base, plus those over U) survive every sigma
    in M? With ``basis_only`` only the images of the base are checked.

    Base equations are searched pool member by pool member.
    """
    base = list(base)
    rule = Uniform(0)
    for e in base:
        if not satisfies(A, e):
            raise PreconditionFailed(f"the model does not satisfy the base equation {e}")
    report = SolidityReport(
        NO_VIOLATION, A, rule, len(M), None if (basis_only or U is None) else U.describe(), 1, 0
    )
    try:
        for h in M:
            rho = MultiHypersubstitution.constant(h)
            for e in base:
                img = Equation(apply_mhyp(rho, rule, e.lhs), apply_mhyp(rho, rule, e.rhs))
                if not satisfies(A, img):
                    raise _Failure(e, rho, "base")
        if not basis_only and U is not None:
            _semantic_round(A, M, rule, U, cap, 0)
        report.rounds_completed = 1
    except _Failure as f:
        img = Equation(apply_mhyp(f.rho, rule, f.equation.lhs), apply_mhyp(f.rho, rule, f.equation.rhs))
        res = satisfies(A, img)
        report.verdict = VIOLATED
        report.equation = f.equation
        report.rho = MultiHypersubstitution.constant(f.rho(0))
        report.image = img
        report.assignment = res.witness
        report.stage = f.stage
    return report


def is_C_colored_solid_bounded(
    base: Iterable[Equation],
    A: FiniteAlgebra,
    rule: ColorationRule,
    pool: HypPool,
    U: TermUniverse,
    rounds: int = 2,
    seed_depth: int = 1,
    cap: int = 2_000_000,
    nonuniform_cap: int = 50_000,
) -> SolidityReport:
    """Is Id A (bounded) closed under the coloured closure for ``rule``?

    Round one is exhaustive over U and the base. Later rounds close the
    base plus Id A over a depth-``seed_depth`` sub-universe symbolically.
    """
    return _run(base, A, pool, rule, U, rounds, seed_depth, cap, nonuniform_cap)
