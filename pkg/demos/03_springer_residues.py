"""
Witt classes and the two residue maps
=====================================

A diagonal form over Q splits by the parity of the p-adic valuation of its
entries.  The even part reduces to a form over F_p, the odd part does after
dividing by p.  Over F_p (p odd) a Witt class is a rank parity and a signed
discriminant.
"""

import numpy as np
from gmpy2 import mpq

from latmid import qmat
from latmid.forms import GramForm, asd_via_middle, residual_forms
from latmid.lattices import Lattice
from latmid.oracles import predicted_signature, witt_signature_bruteforce
from latmid.witt import DiagForm, diagonalize_compatible, springer_residues, witt_class_form, witt_class_k

p = 5
for entries in [(1,), (2,), (1, 1), (1, 2), (1, -1), (1, 1, 1)]:
    w = witt_class_k(DiagForm(entries, p))
    print(f"<{', '.join(map(str, entries))}> over F_{p}: {w}")

# brute force agrees: split off hyperbolic planes and look at what is left
G = np.diag([1, 2, 3]).astype(np.int64)
print("anisotropic kernel signature", witt_signature_bruteforce(G, p))
print("predicted from the class   ", predicted_signature(witt_class_k(DiagForm((1, 2, 3), p))))

q = DiagForm((mpq(3), mpq(10), mpq(1, 5), mpq(50)), p)
d1, d2 = springer_residues(q)
print()
print("q =", [str(x) for x in q.entries])
print("first residue :", d1)
print("second residue:", d2)

# the same classes come out of any almost self-dual lattice
B = GramForm(qmat.diag(list(q.entries)))
A = asd_via_middle(Lattice.standard(4, p), B)
rf = residual_forms(A, B)
print("classes of b1, b2:", witt_class_form(rf.b1), witt_class_form(rf.b2))

# a non-diagonal form is first diagonalized over Z_(p)
B = GramForm([[2, 5], [5, 15]])
diag, X = diagonalize_compatible(B, Lattice.standard(2, p))
print()
print("[[2, 5], [5, 15]] ~", [str(x) for x in diag.entries])
print("residues", *springer_residues(diag))
