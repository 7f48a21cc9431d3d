"""Property suites behind ``latmid selftest`` and the acceptance tests.

Each ``criterion_N`` runs one family of checks over seeded random or
exhaustive cases and returns a ``CriterionResult``.  Cases are independent
and processed in a fixed order; a failing case is recorded with a problem
file that reproduces it, and the smallest one is reported.
"""

from __future__ import annotations

import itertools
import time
import traceback
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from . import gfp, groups, oracles, qmat
from .dvr import int_middles
from .forms import (
    FpForm,
    GramForm,
    asd_thompson,
    asd_via_middle,
    dual_lattice,
    inject_fault,
    is_almost_self_dual,
    residual_forms,
    thompson_rescale,
)
from .isoforms import (
    FormedKGModule,
    find_isotropic_simple,
    hyperbolic,
    max_isotropic_tower,
    ss_with_form,
)
from .lattices import (
    Lattice,
    TorsionModule,
    compatible_splitting,
    intersection_via_duality,
    lattice_intersection,
    lattice_sum,
    middles,
    quotient_type,
    scale_by_pi,
    torsion_middles,
    truncation_bound,
    twist,
)
from .modrep import (
    GroupRepK,
    KGModule,
    brauer_nesbitt_check,
    reduce_mod_pi,
    semisimplify,
    ss_isomorphic,
    stable_lattice,
)
from .pipeline import reduce_with_form, residue_modules, symmetrize
from .problem import format_middles, format_problem
from .witt import DiagForm, verify_springer_vs_residuals, witt_class_form, witt_class_k

__all__ = [
    "Scale",
    "CriterionResult",
    "random_lattice",
    "random_gram",
    "random_formed_module",
    "CRITERIA",
    "run_all",
]

DEFAULT_PRIMES = (3, 5, 7)
BN_GROUPS = ("C2", "C3rot", "S3std", "D4", "Q8")


@dataclass(frozen=True)
class Scale:
    seed: int = 0
    cases: int | None = None  # None means the full default scale
    max_dim: int | None = None
    primes: tuple = DEFAULT_PRIMES

    def count(self, default: int) -> int:
        return default if self.cases is None else self.cases

    def lattice_dim(self) -> int:
        return 6 if self.max_dim is None else self.max_dim

    def module_dim(self) -> int:
        return 8 if self.max_dim is None else self.max_dim

    def rng(self, tag: int):
        return np.random.default_rng([self.seed, tag])


@dataclass
class Failure:
    case: int
    what: str
    problem: str
    size: tuple = (0,)


@dataclass
class CriterionResult:
    number: int
    title: str
    cases: int = 0
    checks: int = 0
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def smallest(self) -> Failure | None:
        return min(self.failures, key=lambda f: (f.size, f.case)) if self.failures else None

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"criterion {self.number} [{verdict}] {self.title}: {self.cases} cases, "
            f"{self.checks} checks, {len(self.failures)} failures, {self.seconds:.2f}s"
        )


class _Run:
    """Bookkeeping for one criterion: counts checks, records failures."""

    def __init__(self, number, title):
        self.res = CriterionResult(number, title)
        self.t0 = time.perf_counter()

    def case(self, idx, checks: dict, problem: str, size=(0,)):
        self.res.cases += 1
        self.res.checks += len(checks)
        bad = [k for k, v in checks.items() if not v]
        if bad:
            self.res.failures.append(Failure(idx, ", ".join(bad), problem, size))

    def crash(self, idx, exc, problem: str, size=(0,)):
        self.res.cases += 1
        what = f"{type(exc).__name__}: {exc}"
        self.res.failures.append(Failure(idx, what, problem + "# " + traceback.format_exc(limit=1).splitlines()[-1] + "\n", size))

    def done(self) -> CriterionResult:
        self.res.seconds = time.perf_counter() - self.t0
        return self.res


# -- random inputs --------------------------------------------------------


def _rand_entry(rng, p, vmin, vmax, zero_prob=0.25):
    if rng.random() < zero_prob:
        return mpq(0)
    u = int(rng.integers(1, 10)) * (1 if rng.random() < 0.5 else -1)
    return mpq(u) * mpq(p) ** int(rng.integers(vmin, vmax + 1))


def random_basis(rng, n, p, vmin=-3, vmax=3):
    while True:
        B = [[_rand_entry(rng, p, vmin, vmax) for _ in range(n)] for _ in range(n)]
        if n == 0 or qmat.det(B) != 0:
            return B


def random_lattice(rng, n, p, vmin=-3, vmax=3) -> Lattice:
    return Lattice(random_basis(rng, n, p, vmin, vmax), p)


def random_gram(rng, n, p, eps=1, vmin=-3, vmax=3) -> GramForm:
    if eps == -1 and n % 2:
        raise ValueError("alternating forms need even dimension")
    while True:
        G = [[mpq(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                if i == j:
                    if eps == 1:
                        G[i][i] = _rand_entry(rng, p, vmin, vmax, 0.1)
                else:
                    x = _rand_entry(rng, p, vmin, vmax)
                    G[i][j], G[j][i] = x, eps * x
        if n == 0 or qmat.det(G) != 0:
            return GramForm(G, eps)


def _dim(rng, lo, hi, even=False):
    if even:
        return 2 * int(rng.integers(max(1, (lo + 1) // 2), hi // 2 + 1))
    return int(rng.integers(lo, hi + 1))


def _lattice_problem(L, M, note):
    return format_middles(L.p, L.basis, M.basis, note)


def _form_problem(L, B, note, generators=None, word_bound=1):
    gens = generators or [qmat.identity(B.dim)]
    return format_problem(L.p, B.epsilon, gens, B.matrix, word_bound, lattice=L.basis, comment=note)


# -- criterion 1 ---------------------------------------------------------


def _twist_family(L, xs=range(-2, 3)):
    ok = True
    for x in xs:
        for y in xs:
            lo, up = middles(twist(L, x), twist(L, y))
            mm, mp = int_middles(x, y)
            ok &= lo == twist(L, mm) and up == twist(L, mp)
    return ok


def criterion_1(scale: Scale) -> CriterionResult:
    run = _Run(1, "middle-lattice laws")
    rng = scale.rng(1)
    for idx in range(scale.count(1000)):
        p = int(rng.choice(scale.primes))
        n = _dim(rng, 1, scale.lattice_dim())
        L, M = random_lattice(rng, n, p), random_lattice(rng, n, p)
        # a split pair g·diag(p^a), g·diag(p^b) for the coordinate oracle
        a = [int(x) for x in rng.integers(-3, 4, n)]
        b = [int(x) for x in rng.integers(-3, 4, n)]
        g = random_basis(rng, n, p, -1, 1)
        prob = _lattice_problem(L, M, f"criterion 1 case {idx}")
        try:
            lo, up = middles(L, M)
            I, S = lattice_intersection(L, M), lattice_sum(L, M)
            pL = scale_by_pi(L)
            lo6, up6 = middles(pL, M)
            Ls = Lattice(qmat.matmul(g, qmat.diag([mpq(p) ** e for e in a])), p)
            Ms = Lattice(qmat.matmul(g, qmat.diag([mpq(p) ** e for e in b])), p)
            olo, oup = oracles.middles_by_coordinates(a, b, g, p)
            checks = {
                "sandwich": L.contains(I) and M.contains(I) and lo.contains(I) and up.contains(lo) and S.contains(up),
                "pi_upper_in_lower": lo.contains(scale_by_pi(up)),
                "symmetry": middles(M, L) == (lo, up),
                "lower_of_piL": lo6 == scale_by_pi(up),
                "upper_of_piL": up6 == lo,
                "sum_intersection": middles(S, I) == (lo, up),
                "intersection_by_duality": I == intersection_via_duality(L, M),
                "quotients_plus": quotient_type(S, up) == quotient_type(lo, I),
                "quotients_minus": quotient_type(S, lo) == quotient_type(up, I),
                "split_pair_oracle": middles(Ls, Ms) == (olo, oup),
                "twist_family": _twist_family(L) if idx % 10 == 0 else _twist_family(L, (int(rng.integers(-2, 3)), int(rng.integers(-2, 3)))),
                "splitting_roundtrip": compatible_splitting(L, M).rebuild() == (L, M),
            }
            run.case(idx, checks, prob, (n,))
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, prob, (n,))
    return run.done()


# -- criterion 2 ---------------------------------------------------------


def criterion_2(scale: Scale) -> CriterionResult:
    run = _Run(2, "truncation bound")
    rng = scale.rng(2)
    for idx in range(scale.count(200)):
        p = int(rng.choice(scale.primes))
        n = _dim(rng, 1, scale.lattice_dim())
        L, M = random_lattice(rng, n, p), random_lattice(rng, n, p)
        prob = _lattice_problem(L, M, f"criterion 2 case {idx}")
        try:
            a = truncation_bound(compatible_splitting(L, M))
            short = middles(L, M)
            wide = middles(L, M, n_max=2 * a + 2, adapted=False)
            wide_adapted = middles(L, M, n_max=2 * a + 2)
            checks = {
                "wide_range_direct": short == wide,
                "wide_range_adapted": short == wide_adapted,
                "canonical_keys": [x.canonical_key() for x in short] == [x.canonical_key() for x in wide],
            }
            run.case(idx, checks, prob, (n,))
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, prob, (n,))
    return run.done()


# -- criterion 3 ---------------------------------------------------------


def partitions(total: int, largest: int | None = None):
    if total == 0:
        yield ()
        return
    largest = total if largest is None else largest
    for k in range(min(total, largest), 0, -1):
        for rest in partitions(total - k, k):
            yield (k,) + rest


def criterion_3(scale: Scale) -> CriterionResult:
    run = _Run(3, "torsion middles")
    p = 3 if 3 in scale.primes else min(scale.primes)
    cases = [e for s in range(7) for e in partitions(s)]
    for idx, exps in enumerate(cases[: scale.count(len(cases))]):
        T = TorsionModule(exps)
        prob = f"# criterion 3: T = sum of Z/{p}^e for e in {list(exps)}\n"
        try:
            lo, up = torsion_middles(T)
            blo, bup, G, Ls, Us = oracles.torsion_middles_bruteforce(T, p)
            pU = frozenset(G.mul(p, u) for u in Us)
            checks = {
                "lower_matches_bruteforce": lo == blo,
                "upper_matches_bruteforce": up == bup,
                "pi_upper_in_lower": pU <= Ls,
                "lower_in_upper": Ls <= Us,
                "upper_is_T_mod_lower": G.quotient_type(Ls) == up,
                "lower_is_T_mod_upper": G.quotient_type(Us) == lo,
            }
            run.case(idx, checks, prob, (sum(exps),))
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, prob, (sum(exps),))
    return run.done()


# -- criterion 4 ---------------------------------------------------------


def _random_form_pair(rng, scale, eps=None):
    p = int(rng.choice(scale.primes))
    top = scale.lattice_dim()
    if eps is None:
        eps = 1 if top < 2 or rng.random() < 0.5 else -1
    n = _dim(rng, 1, top, even=eps == -1)
    return random_lattice(rng, n, p), random_gram(rng, n, p, eps), n


def criterion_4(scale: Scale) -> CriterionResult:
    run = _Run(4, "duality and almost self-dual lattices")
    rng = scale.rng(4)
    for idx in range(scale.count(500)):
        L, B, n = _random_form_pair(rng, scale)
        prob = _form_problem(L, B, f"criterion 4 case {idx}")
        try:
            Ld = dual_lattice(L, B)
            A = asd_via_middle(L, B)
            checks = {
                "double_dual": dual_lattice(Ld, B) == L,
                "asd_is_almost_self_dual": is_almost_self_dual(A, B),
                "dual_of_lower_middle_is_upper": dual_lattice(A, B) == middles(L, Ld)[1],
            }
            run.case(idx, checks, prob, (n,))
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, prob, (n,))
    return run.done()


# -- criterion 5 ---------------------------------------------------------


def criterion_5(scale: Scale) -> CriterionResult:
    run = _Run(5, "Thompson iteration agrees with the lower middle")
    rng = scale.rng(5)
    for idx in range(scale.count(200)):
        L, B, n = _random_form_pair(rng, scale)
        prob = _form_problem(L, B, f"criterion 5 case {idx}")
        try:
            hist: list = []
            T = asd_thompson(L, B, hist)
            L1 = thompson_rescale(L, B)
            checks = {
                "equals_lower_middle": T == asd_via_middle(L1, B),
                "equals_middle_of_input": T == asd_via_middle(L, B),
                "almost_self_dual": is_almost_self_dual(T, B),
                "gap_decreases": all(a > b for a, b in zip(hist, hist[1:])),
            }
            run.case(idx, checks, prob, (n,))
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, prob, (n,))
    return run.done()


# -- criterion 6 ---------------------------------------------------------


def criterion_6(scale: Scale) -> CriterionResult:
    run = _Run(6, "Witt classes and Springer residues")
    primes = [p for p in scale.primes if p in (3, 5, 7)] or [p for p in scale.primes if p != 2]
    exhaustive = [
        (p, ent) for p in primes for r in range(5) for ent in itertools.combinations_with_replacement(range(1, p), r)
    ]
    n_exh = scale.count(len(exhaustive))
    n_rand = 100 if scale.cases is None else max(0, scale.cases - len(exhaustive))
    for idx, (p, ent) in enumerate(exhaustive[:n_exh]):
        prob = f"# criterion 6: diagonal form {list(ent)} over F_{p}\n"
        try:
            w = witt_class_k(DiagForm(ent, p))
            G = np.diag(ent).astype(np.int64) if ent else np.zeros((0, 0), np.int64)
            checks = {
                "matches_anisotropic_kernel": oracles.witt_signature_bruteforce(G, p) == oracles.predicted_signature(w),
                "matrix_route_agrees": witt_class_form(FpForm(G, 1, p)) == w,
            }
            run.case(idx, checks, prob, (len(ent), p))
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, prob, (len(ent), p))
    rng = scale.rng(6)
    offset = len(exhaustive)
    for k in range(n_rand):
        L0, B, n = _random_form_pair(rng, Scale(scale.seed, None, scale.max_dim, tuple(primes)), eps=1)
        L = asd_via_middle(L0, B)
        prob = _form_problem(L, B, f"criterion 6 random case {k}")
        try:
            run.case(offset + k, {"springer_matches_residual_forms": verify_springer_vs_residuals(L, B)}, prob, (n,))
        except Exception as e:  # noqa: BLE001
            run.crash(offset + k, e, prob, (n,))
    return run.done()


# -- criterion 7 ---------------------------------------------------------


def _fixture_rep(name):
    fx = groups.by_name(name)
    return fx, GroupRepK(fx.generators, fx.order)


def _first_form(fx):
    gram, eps = next(iter(fx.forms.values()))
    return gram, eps


def criterion_7(scale: Scale) -> CriterionResult:
    run = _Run(7, "Brauer-Nesbitt")
    rng = scale.rng(7)
    combos = [(g, p) for g in BN_GROUPS for p in scale.primes]
    descs = [("pair", g, p, k) for k in range(20) for g, p in combos]
    descs += [("seeds", g, p, 0) for g, p in combos]
    for idx, (kind, name, p, k) in enumerate(descs[: scale.count(len(descs))]):
        fx, rep = _fixture_rep(name)
        M0 = random_lattice(rng, rep.dim, p, -2, 2)
        M1 = random_lattice(rng, rep.dim, p, -2, 2)
        gram, eps = _first_form(fx)
        prob = format_problem(p, eps, fx.generators, gram, fx.order, scale.seed, M0.basis, f"criterion 7 {kind} {name} p={p}")
        try:
            L = stable_lattice(rep, M0)
            if kind == "pair":
                M = stable_lattice(rep, M1)
                checks = {"brauer_nesbitt": brauer_nesbitt_check(rep, L, M, scale.seed + idx)}
                if k == 0:
                    checks["rescaled"] = brauer_nesbitt_check(rep, L, scale_by_pi(L), scale.seed)
            else:
                E = reduce_mod_pi(rep, L)
                ss = [semisimplify(E, scale.seed + s) for s in range(3)]
                checks = {
                    "seed_independent": all(ss_isomorphic(ss[0], x) for x in ss[1:]),
                    "dimension_conserved": all(x.dim == E.dim for x in ss),
                }
            run.case(idx, checks, prob, (rep.dim, p))
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, prob, (rep.dim, p))
    return run.done()


# -- criterion 8 ---------------------------------------------------------


def _random_invariant_form(rep, rng, eps, p):
    n = rep.dim
    for _ in range(50):
        B0 = random_gram(rng, n, p, eps, 0, 1) if (eps == 1 or n % 2 == 0) else None
        if B0 is None:
            return None
        try:
            return symmetrize(rep, B0.matrix, eps)
        except ValueError:
            continue
    return None


def fixture_corpus(rng, primes):
    """(fixture, label, GramForm, p) for every fixture form and a random invariant form."""
    out = []
    for fx in groups.all_fixtures():
        rep = GroupRepK(fx.generators, fx.order)
        forms = [(label, GramForm(g, e)) for label, (g, e) in fx.forms.items()]
        R = _random_invariant_form(rep, rng, 1, primes[0])
        if R is not None:
            forms.append(("random+", R))
        if rep.dim % 2 == 0:
            A = _random_invariant_form(rep, rng, -1, primes[0])
            if A is not None:
                forms.append(("random-", A))
        for label, B in forms:
            for p in primes:
                if B.epsilon == 1 and p == 2:
                    continue
                out.append((fx, rep, label, B, p))
    return out


def criterion_8(scale: Scale) -> CriterionResult:
    run = _Run(8, "end-to-end reduction of forms")
    rng = scale.rng(8)
    corpus = fixture_corpus(rng, list(scale.primes))
    for idx, (fx, rep, label, B, p) in enumerate(corpus[: scale.count(len(corpus))]):
        starts = [Lattice.standard(rep.dim, p)] + [random_lattice(rng, rep.dim, p, -2, 2) for _ in range(4)]
        prob = format_problem(p, B.epsilon, fx.generators, B.matrix, fx.order, scale.seed, None, f"criterion 8 {fx.name}/{label} p={p}")
        try:
            reports = [reduce_with_form(rep, B, p, scale.seed, M0) for M0 in starts]
            thompson = reduce_with_form(rep, B, p, scale.seed, starts[0], strategy="thompson")
            checks = {f"lattice{i}_all_checks": r.ok for i, r in enumerate(reports)}
            checks["thompson_all_checks"] = thompson.ok
            vk = [semisimplify(r.Vk.module, scale.seed) for r in reports + [thompson]]
            checks["vk_independent_of_lattice"] = all(ss_isomorphic(vk[0], x) for x in vk[1:])
            if B.epsilon == 1:
                w = [(r.witt_q1, r.witt_q2) for r in reports + [thompson]]
                checks["witt_independent_of_lattice"] = all(x == w[0] for x in w)
                checks["witt_total_is_sum"] = all(r.witt_total == r.springer[0] + r.springer[1] for r in reports)
            else:
                checks["alternating_rank"] = all(r.Vk.dim == rep.dim for r in reports)
            failing = [i for i, r in enumerate(reports) if not r.ok]
            if failing:
                i = failing[0]
                prob = format_problem(
                    p, B.epsilon, fx.generators, B.matrix, fx.order, scale.seed, starts[i].basis,
                    f"criterion 8 {fx.name}/{label} p={p}\nfailed: {', '.join(reports[i].failed())}",
                )
            run.case(idx, checks, prob, (rep.dim, p))
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, prob, (rep.dim, p))
    return run.done()


# -- criterion 9 ---------------------------------------------------------


def _random_fp_form(rng, n, eps, p):
    while True:
        A = rng.integers(0, p, (n, n))
        G = (A + eps * A.T) % p
        if eps == -1:
            np.fill_diagonal(G, 0)
        if n == 0 or gfp.rank(G, p) == n:
            return G


def _random_gl(rng, n, p):
    while True:
        T = rng.integers(0, p, (n, n))
        if gfp.rank(T, p) == n:
            return T


def _conjugated(F: FormedKGModule, T) -> FormedKGModule:
    p = F.p
    return FormedKGModule(F.module.conjugate(T), FpForm(T.T @ F.form.matrix @ T % p, F.form.epsilon, p))


def _hyperbolic_double(W: KGModule, eps: int, ngens: int) -> FormedKGModule:
    E = KGModule.direct_sum([W, W.dual()], ngens, W.p)
    return FormedKGModule(E, FpForm(hyperbolic(W.dim, eps, W.p), eps, W.p))


def _residue_instance(rng, p, cap):
    """A residue module of a fixture reduced at a random lattice."""
    for _ in range(20):
        fx = groups.all_fixtures()[int(rng.integers(len(groups.all_fixtures())))]
        rep = GroupRepK(fx.generators, fx.order)
        eps = -1 if (rep.dim % 2 == 0 and rng.random() < 0.3) else 1
        B = _random_invariant_form(rep, rng, eps, p)
        if B is None or rep.dim > cap:
            continue
        L = asd_via_middle(stable_lattice(rep, random_lattice(rng, rep.dim, p, -2, 2)), B)
        rf = residual_forms(L, B)
        F1, F2 = residue_modules(rep, L, rf)
        pick = (F1, rf.b1) if F1.dim >= F2.dim else (F2, rf.b2)
        return fx, rep, FormedKGModule(*pick)
    raise RuntimeError("could not build a residue instance")


def random_formed_module(rng, p: int, cap: int = 8, kind: int | None = None) -> FormedKGModule:
    """Seeded FormedKGModule of dimension <= cap, from one of four recipes."""
    kind = int(rng.integers(4)) if kind is None else kind
    if kind == 0:
        eps = 1 if cap < 2 or rng.random() < 0.6 else -1
        n = _dim(rng, 1, min(cap, 6), even=eps == -1)
        ngens = int(rng.integers(1, 3))
        gens = [np.eye(n, dtype=np.int64)] * ngens
        return FormedKGModule(KGModule(gens, p), FpForm(_random_fp_form(rng, n, eps, p), eps, p))
    if kind == 1:
        names = [g for g in BN_GROUPS if 2 * len(groups.by_name(g).generators[0]) <= cap] or ["C2"]
        fx, rep = _fixture_rep(names[int(rng.integers(len(names)))])
        W = reduce_mod_pi(rep, stable_lattice(rep, random_lattice(rng, rep.dim, p, -2, 2)))
        eps = 1 if rng.random() < 0.5 else -1
        F = _hyperbolic_double(W, eps, len(rep.generators))
        return _conjugated(F, _random_gl(rng, F.dim, p))
    if kind == 2:
        _, _, F = _residue_instance(rng, p, cap)
        return _conjugated(F, _random_gl(rng, F.dim, p)) if F.dim else F
    # orthogonal sum of a residue module and a hyperbolic double of the same group
    for _ in range(20):
        fx, rep, F = _residue_instance(rng, p, cap)
        if F.dim + 2 * rep.dim <= cap:
            break
    else:
        return random_formed_module(rng, p, cap, 2)
    W = reduce_mod_pi(rep, stable_lattice(rep, random_lattice(rng, rep.dim, p, -2, 2)))
    H = _hyperbolic_double(W, F.form.epsilon, len(rep.generators))
    E = KGModule.direct_sum([F.module, H.module], len(rep.generators), p)
    b = np.zeros((E.dim, E.dim), dtype=np.int64)
    b[: F.dim, : F.dim] = F.form.matrix
    b[F.dim :, F.dim :] = H.form.matrix
    return _conjugated(FormedKGModule(E, FpForm(b, F.form.epsilon, p)), _random_gl(rng, E.dim, p))


def _lift_problem(F: FormedKGModule, note: str) -> str:
    p, eps = F.p, F.form.epsilon
    b = F.form.matrix.astype(object)
    n = F.dim
    G = [[int(b[i][j]) if (eps == 1 or i < j) else (0 if i == j else -int(b[j][i])) for j in range(n)] for i in range(n)]
    gens = [[[int(x) for x in row] for row in g] for g in F.module.generators]
    return format_problem(p, eps, gens, G, 1, comment=note + "\nthe instance is the F_p-module given by these matrices mod p")


def check_formed_module(F: FormedKGModule, seed: int = 0) -> dict:
    out = ss_with_form(F, seed)
    tower = max_isotropic_tower(F, seed)
    b, p = F.form.matrix, F.p
    S = tower.S
    checks = {
        "nondegenerate": out.form.is_nondegenerate(),
        "eps_symmetric": out.form.is_eps_symmetric() and out.form.epsilon == F.form.epsilon,
        "compatible": all(np.array_equal(g.T @ out.form.matrix @ g % p, out.form.matrix) for g in out.module.generators),
        "module_is_semisimplification": ss_isomorphic(semisimplify(out.module, seed + 1), semisimplify(F.module, seed + 2)),
        "S_totally_isotropic": not (S.T @ b @ S % p).any(),
        "X_form_nondegenerate": tower.X_form.is_nondegenerate(),
    }
    if F.form.epsilon == 1:
        checks["witt_class_preserved"] = witt_class_form(out.form) == witt_class_form(F.form)
    else:
        checks["rank_preserved"] = out.dim == F.dim
    brute = oracles.has_isotropic_spin(tower.X.generators, tower.X_form.matrix, p)
    if brute is None:
        checks["maximal"] = find_isotropic_simple(tower.X, tower.X_form.matrix, seed + 3) is None
    else:
        checks["maximal"] = brute is False
    if tower.S_module.dim:
        Sss = semisimplify(tower.S_module, seed)
        checks["top_is_dual_of_S"] = ss_isomorphic(semisimplify(tower.top, seed + 4), semisimplify(tower.S_module.dual(), seed + 5))
        checks["dual_of_Sss"] = ss_isomorphic(semisimplify(Sss.module().dual(), seed + 6), semisimplify(tower.S_module.dual(), seed + 7))
    return checks


def criterion_9(scale: Scale) -> CriterionResult:
    run = _Run(9, "forms on semisimplifications")
    rng = scale.rng(9)
    for idx in range(scale.count(100)):
        p = int(rng.choice(scale.primes))
        try:
            F = random_formed_module(rng, p, scale.module_dim(), idx % 4)
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, f"# criterion 9 case {idx}: construction failed\n")
            continue
        prob = _lift_problem(F, f"criterion 9 case {idx}")
        try:
            run.case(idx, check_formed_module(F, scale.seed + idx), prob, (F.dim, p))
        except Exception as e:  # noqa: BLE001
            run.crash(idx, e, prob, (F.dim, p))
    return run.done()


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_all(scale: Scale, only=None, fault: str | None = None, on_result=None) -> list[CriterionResult]:
    results = []
    numbers = sorted(CRITERIA) if only is None else sorted(only)
    for k in numbers:
        if fault:
            with inject_fault(fault):
                r = CRITERIA[k](scale)
        else:
            r = CRITERIA[k](scale)
        results.append(r)
        if on_result:
            on_result(r)
    return results
