"""Reduction mod p of a representation carrying an invariant form.

``reduce_with_form`` walks the whole construction: a stable lattice, an
almost self-dual stable lattice, the residue modules F1 = L/pL' and F2 = L'/L
with their forms, a compatible form on each semisimplification, and their
orthogonal sum on V_k = E1 ⊕ E2.  Every step that the theory guarantees is
re-checked and recorded in ``ReductionReport.checks``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qmat
from .dvr import ValConfig, residue
from .forms import (
    FpForm,
    GramForm,
    asd_thompson,
    asd_via_middle,
    is_almost_self_dual,
    residual_forms,
)
from .isoforms import FormedKGModule, is_compatible, ss_with_form
from .lattices import Lattice
from .modrep import (
    GroupRepK,
    KGModule,
    UnboundedAction,
    is_stable,
    reduce_mod_pi,
    semisimplify,
    ss_isomorphic,
    stable_lattice,
)
from .witt import WittClass, diagonalize_compatible, springer_residues, witt_class_form

__all__ = [
    "NotInvariant",
    "ReductionReport",
    "is_invariant",
    "group_elements",
    "symmetrize",
    "residue_modules",
    "reduce_with_form",
    "STRATEGIES",
]

STRATEGIES = ("middle", "thompson")


class NotInvariant(ValueError):
    pass


def is_invariant(rep: GroupRepK, B: GramForm) -> bool:
    for g in rep.generators:
        if qmat.matmul(qmat.matmul(qmat.transpose(g), B.matrix), g) != B.matrix:
            return False
    return True


def group_elements(rep: GroupRepK, bound: int | None = None) -> list:
    """All elements of the generated group, by closure; at most ``bound`` of them."""
    bound = rep.group_order_bound if bound is None else bound
    n = rep.dim
    ident = qmat.identity(n)
    key = lambda M: tuple(tuple(r) for r in M)  # noqa: E731
    seen = {key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for M in frontier:
            for g in rep.generators:
                P = qmat.matmul(g, M)
                k = key(P)
                if k not in seen:
                    seen[k] = P
                    nxt.append(P)
                    if len(seen) > bound:
                        raise UnboundedAction(f"group has more than {bound} elements")
        frontier = nxt
    return list(seen.values())


def symmetrize(rep: GroupRepK, B0, epsilon: int = 1) -> GramForm:
    """Σ_g g^T B0 g over the group; a test-fixture helper."""
    B0 = qmat.as_matrix(B0)
    total = qmat.zeros(rep.dim, rep.dim)
    for g in group_elements(rep):
        total = qmat.add(total, qmat.matmul(qmat.matmul(qmat.transpose(g), B0), g))
    return GramForm(total, epsilon)  # raises DegenerateForm when the average collapses


def residue_modules(rep: GroupRepK, L: Lattice, rf) -> tuple[KGModule, KGModule]:
    """Actions on F1 = L/pL' and F2 = L'/L in the bases used by ``rf``."""
    p = L.p
    f = rf.dual_basis()
    fi = qmat.inverse(f)
    g1, g2 = [], []
    for g in rep.generators:
        A = qmat.matmul(fi, qmat.matmul(g, f))
        for idx, out in ((rf.idx1, g1), (rf.idx2, g2)):
            out.append(np.array([[residue(A[i][j], p) for j in idx] for i in idx], dtype=np.int64).reshape(len(idx), len(idx)))
    return KGModule(g1, p, len(rf.idx1)), KGModule(g2, p, len(rf.idx2))


@dataclass(eq=False)
class ReductionReport:
    p: int
    epsilon: int
    dim: int
    strategy: str
    seed: int
    stable: Lattice
    asd_lattice: Lattice
    F1: FormedKGModule | None = None
    F2: FormedKGModule | None = None
    E1: FormedKGModule | None = None
    E2: FormedKGModule | None = None
    Vk: FormedKGModule | None = None
    springer: tuple | None = None
    witt_q1: WittClass | None = None
    witt_q2: WittClass | None = None
    witt_total: WittClass | None = None
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]


def _formed_sum(a: FormedKGModule, b: FormedKGModule, ngens: int) -> FormedKGModule:
    p, eps = a.p, a.form.epsilon
    mod = KGModule.direct_sum([a.module, b.module], ngens, p)
    n1 = a.dim
    form = np.zeros((mod.dim, mod.dim), dtype=np.int64)
    form[:n1, :n1] = a.form.matrix
    form[n1:, n1:] = b.form.matrix
    return FormedKGModule(mod, FpForm(form, eps, p))


def reduce_with_form(
    rep: GroupRepK,
    B: GramForm,
    cfg: ValConfig | int,
    seed: int = 0,
    M0: Lattice | None = None,
    strategy: str = "middle",
) -> ReductionReport:
    cfg = cfg if isinstance(cfg, ValConfig) else ValConfig(cfg)
    p = cfg.p
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}")
    if B.epsilon == 1:
        cfg.require_odd("symmetric invariant forms")
    if B.dim != rep.dim:
        raise ValueError("form and representation dimensions differ")
    if not is_invariant(rep, B):
        raise NotInvariant("g^T B g != B for some generator")

    L0 = stable_lattice(rep, M0, p=p)
    via_middle = asd_via_middle(L0, B)
    via_thompson = asd_thompson(L0, B)
    L = via_middle if strategy == "middle" else via_thompson
    report = ReductionReport(p, B.epsilon, rep.dim, strategy, seed, L0, L)
    checks = report.checks
    checks["asd_strategies_agree"] = via_middle == via_thompson
    checks["asd_almost_self_dual"] = is_almost_self_dual(L, B)
    checks["asd_stable"] = is_stable(rep, L)

    rf = residual_forms(L, B)
    F1m, F2m = residue_modules(rep, L, rf)
    checks["b1_compatible"] = is_compatible(F1m, rf.b1.matrix)
    checks["b2_compatible"] = is_compatible(F2m, rf.b2.matrix)
    if not (checks["b1_compatible"] and checks["b2_compatible"]):
        return report
    ngens = len(rep.generators)
    report.F1 = FormedKGModule(F1m, rf.b1)
    report.F2 = FormedKGModule(F2m, rf.b2)
    report.E1 = ss_with_form(report.F1, seed)
    report.E2 = ss_with_form(report.F2, seed + 1)
    report.Vk = Vk = _formed_sum(report.E1, report.E2, ngens)

    b = Vk.form
    checks["vk_nondegenerate"] = b.is_nondegenerate()
    checks["vk_eps_symmetric"] = b.is_eps_symmetric()
    checks["vk_compatible"] = is_compatible(Vk.module, b.matrix)
    reduction = semisimplify(reduce_mod_pi(rep, L), seed)
    checks["exact_sequence"] = ss_isomorphic(
        reduction, semisimplify(KGModule.direct_sum([F1m, F2m], ngens, p), seed + 2)
    )
    checks["brauer_nesbitt"] = ss_isomorphic(
        semisimplify(Vk.module, seed + 3), semisimplify(reduce_mod_pi(rep, L0), seed + 4)
    )
    if B.epsilon == -1:
        checks["vk_alternating_rank"] = Vk.dim == rep.dim and Vk.dim % 2 == 0
        return report

    diag, _ = diagonalize_compatible(B, Lattice.standard(rep.dim, p))
    d1, d2 = springer_residues(diag)
    report.springer = (d1, d2)
    report.witt_q1 = witt_class_form(report.E1.form)
    report.witt_q2 = witt_class_form(report.E2.form)
    report.witt_total = witt_class_form(b)
    checks["residual_b1_is_d1"] = witt_class_form(rf.b1) == d1
    checks["residual_b2_is_d2"] = witt_class_form(rf.b2) == d2
    checks["witt_E1_is_d1"] = report.witt_q1 == d1
    checks["witt_E2_is_d2"] = report.witt_q2 == d2
    checks["witt_total_is_sum"] = report.witt_total == d1 + d2
    return report


def report_to_dict(rep_in: GroupRepK, report: ReductionReport) -> dict:
    """Stable JSON-ready document: keys input, asd_basis, e1, e2, witt, checks."""

    def mat(M):
        return [[str(x) for x in row] for row in M]

    def formed(F):
        if F is None:
            return None
        return {
            "dim": F.dim,
            "generators": [g.tolist() for g in F.module.generators],
            "form": F.form.matrix.tolist(),
        }

    witt = None
    if report.springer is not None:
        witt = {
            "d1": report.springer[0].as_dict(),
            "d2": report.springer[1].as_dict(),
            "q1": report.witt_q1.as_dict(),
            "q2": report.witt_q2.as_dict(),
            "total": report.witt_total.as_dict(),
        }
    return {
        "input": {
            "p": report.p,
            "epsilon": report.epsilon,
            "dim": report.dim,
            "generators": [mat(g) for g in rep_in.generators],
            "word_bound": rep_in.group_order_bound,
            "seed": report.seed,
            "strategy": report.strategy,
        },
        "asd_basis": mat(report.asd_lattice.basis),
        "e1": formed(report.E1),
        "e2": formed(report.E2),
        "witt": witt,
        "checks": dict(report.checks),
    }


__all__.append("report_to_dict")
