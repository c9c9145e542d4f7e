"""
Finite algebras
===============

Operation tables are numpy arrays. Identities are checked by tabulating
both sides over every assignment at once.
"""

import numpy as np

from multihyp import (
    CloneComplete, Signature, clone_upto, derived_algebra, hypersatisfies,
    left_zero, named_hyp, parse_equation, rectangular_band, satisfies, semilattice,
)
from multihyp.algebra import term_table

sig = Signature.parse("f:2")
SL = semilattice()
print(SL.to_text())

comm = parse_equation("f(x,y) = f(y,x)", sig)
idem = parse_equation("f(x,x) = x", sig)
print("semilattice: comm", bool(satisfies(SL, comm)), "idem", bool(satisfies(SL, idem)))

# term operations are arrays of shape (k,)*n
tab = term_table(rectangular_band(), parse_equation("f(x,f(y,z)) = x", sig).lhs, [1, 2, 3])
print("f(x,f(y,z)) on the rectangular band:", tab.shape, "distinct values", np.unique(tab).size)

# swapping the arguments of a left-zero band gives a right-zero band
print(derived_algebra(left_zero(), named_hyp("swap", sig)).to_text())

# the binary clone of the semilattice: x, y and f(x,y)
for op in clone_upto(SL, 2):
    print("  ", op.witness, op.table.ravel())

# hyperidentities range over every clone member per symbol
r = hypersatisfies(SL, comm, CloneComplete())
print("commutativity as a hyperidentity:", r.holds, "fails for f ->", r.sigma["f"], "at", r.assignment)
assoc = parse_equation("f(f(x,y),z) = f(x,f(y,z))", sig)
print("associativity as a hyperidentity of RB:", hypersatisfies(rectangular_band(), assoc, CloneComplete()).holds)
