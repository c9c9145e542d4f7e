"""
Closing equation sets
=====================

Images of an equation set under a pool of hypersubstitutions, then under
colour maps, iterated until nothing new appears.
"""

from multihyp import (
    AlgebraCatalog, HypPool, Signature, TermUniverse, c_id, chi_A_C,
    chi_E_C_iterate, chi_E_M, enumerate_hyps, id_bounded, identity_hyp,
    mod_catalog, named_hyp, parse_coloration, rectangular_band, standard_catalog, variety_base,
)

sig = Signature.parse("f:2")
RB = variety_base("RB")
print(RB.to_text(named=True))

pool = HypPool((identity_hyp(sig), named_hyp("proj-first", sig), named_hyp("proj-last", sig)))
print("images under {id, first, last}:", len(chi_E_M(RB, pool)))

rule = parse_coloration("rb-firstlast", sig)
res = chi_E_C_iterate(RB, pool, rule, max_rounds=5)
print(f"coloured closure: {len(res.equations)} equations, fixpoint={res.fixpoint_reached} after {res.rounds} rounds")

# which models in the catalogue satisfy the closed set
K = standard_catalog()
print("models:", [n for n, _ in mod_catalog(res.equations, K).items()])

# bounded Id: pairs of terms with equal operations in every model
U = TermUniverse(sig, 2, 2)
KRB = AlgebraCatalog([rectangular_band()], ["rect-band"])
ids = id_bounded(KRB, U)
print(U.describe(), "->", len(ids), "ordered identities")

# coloured derived algebras of RB stay inside RB for the depth-1 pool
P1 = enumerate_hyps(sig, 1)
print("coloured derived algebras of RB:", len(chi_A_C(KRB, P1, rule)))
print("identities whose closure survives:", len(c_id(KRB, U, P1, rule, rounds=2)))
