"""
Terms and hypersubstitutions
============================

Parse a few terms over one binary symbol, walk their addresses, and push
them through the named hypersubstitutions.
"""

from multihyp import (
    Signature, addresses, apply_hyp, compose_hyp, enumerate_hyps,
    format_term, named_hyp, parse_term, subterm_at,
)

sig = Signature.parse("f:2")
t = parse_term("f(f(x,y),y)", sig)
print("t =", format_term(t, named=True))

# addresses are Dewey paths to the operation nodes, root first
for a in addresses(t):
    print("  ", a or "root", "->", format_term(subterm_at(t, a), named=True))

for name in ("id", "swap", "proj-first", "proj-last"):
    h = named_hyp(name, sig)
    print(f"{name:>10}: {format_term(apply_hyp(h, t), named=True)}")

# composition acts like applying the right factor first
swap = named_hyp("swap", sig)
print("swap o swap is id:", compose_hyp(swap, swap) == named_hyp("id", sig))

# every image of f up to depth 1: 2 projections and 4 applications
pool = enumerate_hyps(sig, 1)
print("depth-1 pool:", [format_term(h["f"]) for h in pool])
print("depth-2 pool size:", len(enumerate_hyps(sig, 2)))
