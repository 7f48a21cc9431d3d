"""
An orthogonal representation reduced mod p, with its form
==========================================================

The pipeline picks a stable almost self-dual lattice, reads off the two
residue modules with their forms, and puts a compatible nondegenerate form
on each semisimplification.  The Witt classes of the results are those
predicted by the residue maps of the original form.
"""

from pathlib import Path

from latmid import groups
from latmid.forms import GramForm
from latmid.modrep import GroupRepK
from latmid.pipeline import reduce_with_form
from latmid.problem import parse_problem


def show(title, report):
    print(title)
    print("  almost self-dual lattice:", report.asd_lattice)
    for name, F in (("E1", report.E1), ("E2", report.E2)):
        print(f"  {name}: dim {F.dim}, form {F.form.matrix.tolist()}")
    if report.springer:
        d1, d2 = report.springer
        print(f"  residues of B: {d1}, {d2}")
        print(f"  classes of E1, E2: {report.witt_q1}, {report.witt_q2}")
    print("  all checks hold:", report.ok)
    print()


# S3 on A2 at p = 3: the form has determinant 3, so both pieces are nonzero
fx = groups.by_name("S3std")
rep = GroupRepK(fx.generators, fx.order)
show("S3, A2 form, p = 3", reduce_with_form(rep, GramForm(*fx.forms["a2"]), 3))

# D4 on the square lattice at p = 5 and p = 3
fx = groups.by_name("D4")
rep = GroupRepK(fx.generators, fx.order)
for p in (3, 5):
    show(f"D4, identity form, p = {p}", reduce_with_form(rep, GramForm(*fx.forms["identity"]), p))

# Q8 with an invariant alternating form; only the rank survives as an invariant
fx = groups.by_name("Q8")
rep = GroupRepK(fx.generators, fx.order)
show("Q8, alternating form, p = 3", reduce_with_form(rep, GramForm(*fx.forms["symplectic"]), 3))

# the same problems can be written as files for the command line
here = Path(__file__).resolve().parent
prob = parse_problem((here / "problems" / "c2_scaled_p5.lm").read_text())
rep, B, cfg, M0 = prob.validate()
for strategy in ("middle", "thompson"):
    show(f"c2_scaled_p5.lm via {strategy}", reduce_with_form(rep, B, cfg, prob.seed, M0, strategy))
