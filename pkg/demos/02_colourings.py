"""
Coloured terms
==============

A colouring assigns a colour to every operation node of every term. A
multi-hypersubstitution picks a hypersubstitution per colour, so
different nodes of one term can be rewritten differently.
"""

from multihyp import (
    MultiHypersubstitution, Signature, addresses, apply_mhyp, color_of,
    enumerate_hyps, format_term, identity_hyp, named_hyp, parse_coloration, parse_term,
)

sig = Signature.parse("f:2")
s = parse_term("f(y,f(y,x))", sig)
t = parse_term("f(f(x,y),y)", sig)

# s gets colour 0 at the root and 1 below; every other term is colour 0
rule = parse_coloration("leftmost-special:f(y,f(y,x)):0:1:0", sig)
for term in (s, t):
    print(format_term(term, named=True), {a or "root": color_of(rule, term, a) for a in addresses(term)})

rho = MultiHypersubstitution({0: named_hyp("swap", sig)}, identity_hyp(sig))
print("rho(t) =", format_term(apply_mhyp(rho, rule, t), named=True))
print("rho(s) =", format_term(apply_mhyp(rho, rule, s), named=True))

# f(f(y,x),y) is out of reach for any single pair drawn from the depth-1 pool
target = parse_term("f(f(y,x),y)", sig)
pool = enumerate_hyps(sig, 1)
hits = [
    (a.label(), b.label())
    for a in pool for b in pool
    if apply_mhyp(MultiHypersubstitution({0: a}, b), rule, t) == target
]
print("pairs sending t to f(f(y,x),y):", hits)

# the first/last colouring: colour 1 when first and last variable agree
rb = parse_coloration("rb-firstlast", sig)
for text in ("f(x,f(y,x))", "f(x,y)"):
    u = parse_term(text, sig)
    print(text, "->", rb.colors(u))
