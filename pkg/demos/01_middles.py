"""
Middle lattices
===============

Two lattices L and M in Q^n, over the p-adic integers at p.  The lower and
upper middles sit between L ∩ M and L + M, and p·m_+ ⊆ m_-.
"""

from gmpy2 import mpq

from latmid import qmat
from latmid.lattices import Lattice, lattice_intersection, lattice_sum, middles, quotient_type, scale_by_pi

p = 5

# the standard lattice and a diagonal one, far apart in both directions
L = Lattice.standard(2, p)
M = Lattice(qmat.diag([mpq(125), mpq(1, 25)]), p)
lo, up = middles(L, M)
print("L ∩ M =", lattice_intersection(L, M))
print("L + M =", lattice_sum(L, M))
print("m_-   =", lo)
print("m_+   =", up)

# coordinate by coordinate the exponents get averaged: (0 + 3)/2 and (0 - 2)/2
# rounded one way for m_- and the other way for m_+

# an odd total exponent is what makes the two middles differ
print("m_- == m_+ ?", lo == up)
print("p m_+ inside m_- ?", lo.contains(scale_by_pi(up)))
print("(L+M)/m_+ has type", quotient_type(lattice_sum(L, M), up).exponents)
print("m_-/(L∩M) has type", quotient_type(lo, lattice_intersection(L, M)).exponents)

# a non-diagonal pair: the answer does not depend on the bases chosen
g = [[1, 2], [3, 7]]
L2 = Lattice(g, p)
M2 = Lattice(qmat.matmul(g, qmat.diag([mpq(5), mpq(1, 5)])), p)
lo2, up2 = middles(L2, M2)
print()
print("rotated pair:")
print("m_-   =", lo2)
print("m_+   =", up2)
# in the basis g the exponents are (0, 0) against (1, -1), so the middles are
# g diag(5, 1) and g diag(1, 1/5)
print("matches g diag(5, 1):", lo2 == Lattice(qmat.matmul(g, qmat.diag([5, 1])), p))
print("matches g diag(1, 1/5):", up2 == Lattice(qmat.matmul(g, qmat.diag([1, mpq(1, 5)])), p))
