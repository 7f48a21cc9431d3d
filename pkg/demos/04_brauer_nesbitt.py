"""
Reduction mod p depends on the lattice, its semisimplification does not
=======================================================================

S3 acting on the A2 root lattice, reduced at p = 3 where the group order is
divisible by p.  Different stable lattices give non-isomorphic reductions
with the same composition factors.
"""

from latmid import groups
from latmid.forms import GramForm, dual_lattice
from latmid.lattices import Lattice
from latmid.modrep import GroupRepK, brauer_nesbitt_check, reduce_mod_pi, semisimplify, stable_lattice

fx = groups.by_name("S3std")
rep = GroupRepK(fx.generators, fx.order)
p = 3

L = Lattice.standard(2, p)
# the weight lattice, dual to L under the invariant form, is also stable
M = stable_lattice(rep, dual_lattice(L, GramForm(*fx.forms["a2"])))
print("L =", L)
print("M =", M)

for name, lat in (("L", L), ("M", M)):
    E = reduce_mod_pi(rep, lat)
    print(f"{name}/3{name}: generators", [g.tolist() for g in E.generators])
    ss = semisimplify(E)
    print("   factors", [(S.dim, [g.tolist() for g in S.generators], m) for S, m in ss.factors])

print("same semisimplification:", brauer_nesbitt_check(rep, L, M))

# different seeds of the randomized splitting agree
E = reduce_mod_pi(rep, L)
print("seed independence:", len({semisimplify(E, s).fingerprint for s in range(5)}) == 1)

# Q8 at 3 has a single two-dimensional simple module, appearing twice
q8 = groups.by_name("Q8")
rep8 = GroupRepK(q8.generators, q8.order)
ss = semisimplify(reduce_mod_pi(rep8, Lattice.standard(4, p)))
print("Q8 mod 3:", [(S.dim, m) for S, m in ss.factors])
