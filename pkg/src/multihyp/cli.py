"""Command-line front end.

Exit codes: 0 success or "holds", 1 violated / false (counterexample
printed), 2 usage or format error, 3 a resource bound was exceeded.
Output is ``key=value`` lines.
"""

from __future__ import annotations

import argparse
import os
import sys

from .algebra import CloneComplete, FiniteAlgebra, derived_algebra, derived_algebra_mhyp, hypersatisfies, satisfies
from .coloring import apply_mhyp, load_mhyp, parse_coloration
from .engine import TermUniverse, chi_e_C, chi_E_C_iterate, load_equations
from .errors import BoundsExceeded, MultihypError
from .hyp import HypPool, apply_hyp, compose_hyp, enumerate_hyps, load_hyp, load_pool_dir
from .registry import BASES, MODELS, model, variety_base
from .solidity import is_C_colored_solid_bounded, is_M_solid_bounded
from .terms import Signature, addresses, format_term, parse_equation, parse_term
from .verify import DEFAULT_SEED, SCENARIOS, run_scenario

OK, FALSE, USAGE, BOUNDS = 0, 1, 2, 3


def _emit(out, key, value):
    print(f"{key}={value}", file=out)


def _sig(args) -> Signature:
    if args.sig:
        with open(args.sig, encoding="utf-8") as fh:
            return Signature.from_text(fh.read())
    return Signature.parse(args.type)


def _algebra(ref: str, sig: Signature) -> FiniteAlgebra:
    if os.path.isfile(ref):
        with open(ref, encoding="utf-8") as fh:
            return FiniteAlgebra.from_text(fh.read(), sig, os.path.basename(ref))
    A = model(ref)
    if A.sig != sig:
        raise MultihypError(f"model {ref!r} is for signature {A.sig}, not {sig}")
    return A


def _pool(args, sig) -> HypPool:
    if args.pool:
        return load_pool_dir(args.pool, sig)
    return enumerate_hyps(sig, args.pool_depth)


def _equations(ref: str, sig):
    """A variety name from the registry, an equation file, or inline text."""
    if ref in BASES:
        return variety_base(ref, sig)
    return load_equations(ref, sig)


# --------------------------------------------------------------------------


def cmd_term(args, out):
    sig = _sig(args)
    t = parse_term(args.term, sig)
    if args.action == "addresses":
        for a in addresses(t):
            _emit(out, "address", ".".join(map(str, a)) or "root")
    else:
        _emit(out, "term", format_term(t, args.named))
    return OK


def cmd_hyp(args, out):
    sig = _sig(args)
    if args.action == "apply":
        h = load_hyp(args.hyp, sig)
        _emit(out, "result", format_term(apply_hyp(h, parse_term(args.term, sig)), args.named))
    else:
        h = compose_hyp(load_hyp(args.hyp, sig), load_hyp(args.second, sig))
        for sym, img in h.items():
            _emit(out, sym, format_term(img, args.named))
    return OK


def cmd_mhyp(args, out):
    sig = _sig(args)
    rule = parse_coloration(args.coloration, sig)
    rho = load_mhyp(args.mhyp, sig)
    t = parse_term(args.term, sig)
    _emit(out, "rho", rho.describe())
    _emit(out, "result", format_term(apply_mhyp(rho, rule, t), args.named))
    return OK


def cmd_algebra(args, out):
    sig = _sig(args)
    A = _algebra(args.algebra, sig)
    if args.action == "derive":
        if args.mhyp:
            if not args.coloration:
                raise MultihypError("--mhyp needs --coloration")
            D = derived_algebra_mhyp(A, load_mhyp(args.mhyp, sig), parse_coloration(args.coloration, sig))
        elif args.hyp:
            D = derived_algebra(A, load_hyp(args.hyp, sig))
        else:
            raise MultihypError("algebra derive needs --hyp or --mhyp")
        out.write(D.to_text())
        return OK
    if not args.eq:
        raise MultihypError("algebra check needs --eq")
    e = parse_equation(args.eq, sig)
    _emit(out, "equation", e)
    if args.hyper:
        mode = load_pool_dir(args.pool, sig) if args.pool else CloneComplete(args.clone_bound)
        r = hypersatisfies(A, e, mode)
        _emit(out, "mode", "pool" if args.pool else "clone-complete")
        _emit(out, "holds", str(r.holds).lower())
        if not r.holds:
            _emit(out, "counterexample", r.sigma.describe())
            _emit(out, "assignment", _asg(r.assignment))
        else:
            _emit(out, "complete", str(r.complete).lower())
            if not r.complete:
                _emit(out, "note", "holds relative to the searched hypersubstitutions only")
        return OK if r.holds else FALSE
    r = satisfies(A, e)
    _emit(out, "holds", str(r.holds).lower())
    if not r.holds:
        _emit(out, "assignment", _asg(r.witness))
    return OK if r.holds else FALSE


def _asg(a):
    return ",".join(f"x{k}={v}" for k, v in sorted(a.items()))


def cmd_closure(args, out):
    sig = _sig(args)
    eqs = _equations(args.equations, sig)
    pool = _pool(args, sig)
    rule = parse_coloration(args.coloration, sig)
    if args.action == "chi-e":
        res = chi_e_C(eqs, pool, rule)
        _emit(out, "count", len(res))
    else:
        result = chi_E_C_iterate(eqs, pool, rule, args.rounds)
        res = result.equations
        _emit(out, "count", len(res))
        _emit(out, "rounds", result.rounds)
        _emit(out, "fixpoint_reached", str(result.fixpoint_reached).lower())
    for e in res.canonical():
        _emit(out, "equation", e.format(args.named))
    return OK


def cmd_solid(args, out):
    sig = _sig(args)
    base = _equations(args.base, sig)
    A = _algebra(args.algebra, sig)
    pool = _pool(args, sig)
    U = TermUniverse(sig, args.universe_depth, args.vars)
    if args.action == "check":
        rep = is_M_solid_bounded(base, A, pool, None if args.basis_only else U, basis_only=args.basis_only)
    else:
        if not args.coloration:
            raise MultihypError("colored-check needs --coloration")
        rule = parse_coloration(args.coloration, sig)
        rep = is_C_colored_solid_bounded(base, A, rule, pool, U, rounds=args.rounds)
    for k, v in rep.to_kv():
        _emit(out, k, v)
    for note in rep.notes:
        _emit(out, "note", note)
    return FALSE if rep.violated else OK


def cmd_verify(args, out):
    if args.list or not args.scenario:
        for s in SCENARIOS.values():
            _emit(out, s.name, s.description)
        return OK
    names = list(SCENARIOS) if args.scenario == "all" else [args.scenario]
    for n in names:
        if n not in SCENARIOS:
            raise MultihypError(f"unknown scenario {n!r}; try --list")
    failed = 0
    for n in names:
        res = run_scenario(n, args.seed)
        _emit(out, "scenario", n)
        _emit(out, "seed", args.seed)
        for k, v in res.lines:
            _emit(out, k, v)
        for f in res.failures:
            _emit(out, "failure", f)
        _emit(out, "status", "pass" if res.passed else "fail")
        failed += not res.passed
    if len(names) > 1:
        _emit(out, "summary", f"{len(names) - failed}/{len(names)} passed")
    return FALSE if failed else OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_mutually_exclusive_group()
    g.add_argument("--sig", help="signature file ('op <name> <arity>' lines)")
    g.add_argument("--type", default="f:2", help="inline signature such as 'f:2,g:3' (default f:2)")
    common.add_argument("--named", action="store_true", help="print x1,x2,x3 as x,y,z")

    pool = argparse.ArgumentParser(add_help=False)
    pool.add_argument("--pool", help="directory of hypersubstitution files")
    pool.add_argument("--pool-depth", type=int, default=2, help="without --pool: all images up to this depth")

    p = argparse.ArgumentParser(prog="multihyp", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("term", parents=[common], help="addresses or normalised printing of a term")
    t.add_argument("action", choices=["addresses", "format"])
    t.add_argument("term")
    t.set_defaults(func=cmd_term)

    h = sub.add_parser("hyp", help="apply or compose hypersubstitutions")
    hsub = h.add_subparsers(dest="action", required=True)
    ha = hsub.add_parser("apply", parents=[common])
    ha.add_argument("--hyp", required=True, help="name (id, swap, proj-first, proj-last) or file")
    ha.add_argument("term")
    hc = hsub.add_parser("compose", parents=[common])
    hc.add_argument("--hyp", required=True, help="left factor (applied last)")
    hc.add_argument("--with", dest="second", required=True, help="right factor (applied first)")
    h.set_defaults(func=cmd_hyp)

    m = sub.add_parser("mhyp", parents=[common], help="apply a multi-hypersubstitution")
    m.add_argument("action", choices=["apply"])
    m.add_argument("--coloration", required=True)
    m.add_argument("--mhyp", required=True, help="multi-hypersubstitution file")
    m.add_argument("term")
    m.set_defaults(func=cmd_mhyp)

    a = sub.add_parser("algebra", parents=[common], help="check identities or derive algebras")
    a.add_argument("action", choices=["check", "derive"])
    a.add_argument("--algebra", required=True, help=f"algebra file or model name ({', '.join(MODELS)})")
    a.add_argument("--eq")
    a.add_argument("--hyper", action="store_true", help="check as a hyperidentity")
    a.add_argument("--pool", help="with --hyper: only these hypersubstitutions")
    a.add_argument("--clone-bound", type=int, default=10_000)
    a.add_argument("--hyp")
    a.add_argument("--mhyp")
    a.add_argument("--coloration")
    a.set_defaults(func=cmd_algebra)

    c = sub.add_parser("closure", parents=[common, pool], help="coloured closure of an equation set")
    c.add_argument("action", choices=["chi-e", "chi-E"])
    c.add_argument("--equations", required=True, help="equation file, inline equation, or variety name")
    c.add_argument("--coloration", required=True)
    c.add_argument("--rounds", type=int, default=5)
    c.set_defaults(func=cmd_closure)

    s = sub.add_parser("solid", parents=[common, pool], help="bounded (coloured) solidity check")
    s.add_argument("action", choices=["check", "colored-check"])
    s.add_argument("--base", required=True, help=f"equation file or variety ({', '.join(BASES)})")
    s.add_argument("--algebra", required=True)
    s.add_argument("--coloration")
    s.add_argument("--universe-depth", type=int, default=3)
    s.add_argument("--vars", type=int, default=2)
    s.add_argument("--rounds", type=int, default=2)
    s.add_argument("--basis-only", action="store_true")
    s.set_defaults(func=cmd_solid)

    v = sub.add_parser("verify", help="replay the built-in scenarios")
    v.add_argument("scenario", nargs="?", help="scenario name or 'all'")
    v.add_argument("--list", action="store_true")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.set_defaults(func=cmd_verify)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args, out)
    except BoundsExceeded as exc:
        _emit(err, "error", f"bounds exceeded: {exc}")
        return BOUNDS
    except (MultihypError, ValueError, OSError) as exc:
        _emit(err, "error", exc)
        return USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
