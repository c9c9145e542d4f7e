"""
Bounded solidity checks
=======================

Search for an identity of a model whose image under some colour map
fails. Violations come with a replayable witness; a clean run only speaks
for the pool, universe and rounds that were searched.
"""

from multihyp import (
    Signature, TermUniverse, enumerate_hyps, is_C_colored_solid_bounded,
    is_M_solid_bounded, parse_coloration, rectangular_band, semilattice, variety_base,
)

sig = Signature.parse("f:2")
P1, P2 = enumerate_hyps(sig, 1), enumerate_hyps(sig, 2)
U = TermUniverse(sig, 2, 2)

r = is_M_solid_bounded(variety_base("RB"), rectangular_band(), P2, U)
print(r, "\n")

r = is_M_solid_bounded(variety_base("SL"), semilattice(), P1)
print(r)
print("replays:", r.replay(), "\n")

for spec in ("rb-firstlast", "term-equals:f(x1,x1):1:0", "address-depth"):
    rule = parse_coloration(spec, sig)
    r = is_C_colored_solid_bounded(variety_base("RB"), rectangular_band(), rule, P1, U, rounds=2)
    print(f"{spec:>26}: {r.verdict}", f"({r.equation} -> {r.image})" if r.violated else "")
    for note in r.notes:
        print(" " * 28, note)
