"""
Almost self-dual lattices
=========================

For a nondegenerate form B, a lattice L is almost self-dual when
p L' ⊆ L ⊆ L'.  The lower middle of L and its dual is one; Thompson's
iteration L -> L ∩ p^-t L' reaches another from the same start.
"""

from gmpy2 import mpq

from latmid import qmat
from latmid.forms import GramForm, asd_thompson, asd_via_middle, dual_lattice, is_almost_self_dual, residual_forms
from latmid.lattices import Lattice

p = 5
B = GramForm(qmat.diag([mpq(1), mpq(1)]))

L = Lattice(qmat.diag([mpq(25), mpq(1)]), p)
print("L  =", L)
print("L' =", dual_lattice(L, B))
print("almost self-dual?", is_almost_self_dual(L, B))

A = asd_via_middle(L, B)
print("middle of L and L':", A, is_almost_self_dual(A, B))

history = []
T = asd_thompson(L, B, history)
print("Thompson:", T, "index exponents along the way", history)

# a form with odd valuation on one axis: the standard lattice is already
# almost self-dual and both residue forms are one dimensional
B5 = GramForm(qmat.diag([mpq(5), mpq(1)]))
rf = residual_forms(Lattice.standard(2, p), B5)
print()
print("B = diag(5, 1)")
print("b1 on L/pL' :", rf.b1.matrix.tolist())
print("b2 on L'/L  :", rf.b2.matrix.tolist())

# an alternating form
J = GramForm([[0, 25], [-25, 0]], -1)
A = asd_via_middle(Lattice.standard(2, p), J)
rf = residual_forms(A, J)
print()
print("alternating, scaled by 25:", A)
print("residue ranks", rf.b1.dim, rf.b2.dim)
