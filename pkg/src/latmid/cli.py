"""Command line: ``latmid reduce|middles|selftest``.

Exit codes: 0 success, 1 a theorem check failed (an implementation bug),
2 unreadable or malformed input, 3 input that parses but violates a
precondition.  ``LM_COLOR=0`` turns off ANSI colour.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .dvr import WrongCharacteristic
from .forms import DegenerateForm
from .lattices import (
    DimensionMismatch,
    Lattice,
    intersection_via_duality,
    lattice_intersection,
    lattice_sum,
    middles,
    quotient_type,
    scale_by_pi,
)
from .modrep import NotStable, UnboundedAction
from .pipeline import NotInvariant, reduce_with_form, report_to_dict
from .problem import ParseError, PreconditionError, format_matrix, format_middles, parse_middles, parse_problem

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3


class _Style:
    def __init__(self, stream):
        env = os.environ.get("LM_COLOR")
        if env is not None:
            self.on = env != "0"
        else:
            self.on = hasattr(stream, "isatty") and stream.isatty()

    def __call__(self, text, code):
        return f"\x1b[{code}m{text}\x1b[0m" if self.on else text

    def ok(self, flag: bool) -> str:
        return self("ok", "32") if flag else self("FAIL", "31;1")


def _err(msg: str) -> None:
    print(f"latmid: {msg}", file=sys.stderr)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def dumps(doc) -> str:
    """The canonical JSON text used by ``reduce --json``."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- reduce ---------------------------------------------------------------


def _fmt_fp(M) -> str:
    M = np.asarray(M)
    if M.size == 0:
        return "[]"
    return "[" + ", ".join("[" + ", ".join(str(int(x)) for x in row) + "]" for row in M) + "]"


def cmd_reduce(args, out=None) -> int:
    out = sys.stdout if out is None else out
    style = _Style(out)
    try:
        prob = parse_problem(_read(args.file))
        rep, B, cfg, M0 = prob.validate()
        seed = prob.seed if args.seed is None else args.seed
        report = reduce_with_form(rep, B, cfg, seed, M0, strategy=args.strategy)
    except ParseError as e:
        _err(f"parse error: {e}")
        return EXIT_PARSE
    except PreconditionError as e:
        _err(f"precondition violated: {e}")
        return EXIT_PRECONDITION
    except NotInvariant as e:
        _err(f"precondition violated: invariance (g^T B g = B): {e}")
        return EXIT_PRECONDITION
    except WrongCharacteristic as e:
        _err(f"precondition violated: WrongCharacteristic: {e}")
        return EXIT_PRECONDITION
    except (DegenerateForm, UnboundedAction, NotStable, DimensionMismatch) as e:
        _err(f"precondition violated: {type(e).__name__}: {e}")
        return EXIT_PRECONDITION

    if args.json:
        out.write(dumps(report_to_dict(rep, report)))
    else:
        eps = "+1" if report.epsilon == 1 else "-1"
        print(
            f"representation: {len(rep.generators)} generator(s), dim {report.dim}, "
            f"epsilon {eps}, p = {report.p}, strategy {report.strategy}, seed {report.seed}",
            file=out,
        )
        print(f"almost self-dual lattice: {format_matrix(report.asd_lattice.basis)}", file=out)
        for name, F in (("E1", report.E1), ("E2", report.E2)):
            if F is not None:
                print(f"{name}: dim {F.dim}, form {_fmt_fp(F.form.matrix)}", file=out)
        if report.springer is not None:
            d1, d2 = report.springer
            print(f"Springer residues: d1 = {d1}, d2 = {d2}", file=out)
            print(f"Witt classes: E1 {report.witt_q1}, E2 {report.witt_q2}, V_k {report.witt_total}", file=out)
        print("checks:", file=out)
        for k, v in report.checks.items():
            print(f"  [{style.ok(v)}] {k}", file=out)
    if not report.ok:
        _err(
            "theorem check(s) failed: " + ", ".join(report.failed())
            + ". The input satisfies the hypotheses, so this is an implementation bug."
        )
        return EXIT_CHECK
    return EXIT_OK


# -- middles --------------------------------------------------------------


def verify_middles(L: Lattice, M: Lattice) -> dict:
    lo, up = middles(L, M)
    I, S = lattice_intersection(L, M), lattice_sum(L, M)
    lo_p, up_p = middles(scale_by_pi(L), M)
    return {
        "sandwich": lo.contains(I) and up.contains(lo) and S.contains(up),
        "pi_upper_in_lower": lo.contains(scale_by_pi(up)),
        "symmetric": middles(M, L) == (lo, up),
        "lower_of_piL": lo_p == scale_by_pi(up),
        "upper_of_piL": up_p == lo,
        "middles_of_sum_and_intersection": middles(S, I) == (lo, up),
        "intersection_by_duality": I == intersection_via_duality(L, M),
        "quotient_types": quotient_type(S, up) == quotient_type(lo, I)
        and quotient_type(S, lo) == quotient_type(up, I),
    }


def _print_middles(L, M, out, style, verify):
    lo, up = middles(L, M)
    print(f"m_-   = {format_matrix(lo.basis)}", file=out)
    print(f"m_+   = {format_matrix(up.basis)}", file=out)
    print(f"L ∩ M = {format_matrix(lattice_intersection(L, M).basis)}", file=out)
    print(f"L + M = {format_matrix(lattice_sum(L, M).basis)}", file=out)
    if not verify:
        return True
    checks = verify_middles(L, M)
    for k, v in checks.items():
        print(f"  [{style.ok(v)}] {k}", file=out)
    return all(checks.values())


def cmd_middles(args, out=None) -> int:
    out = sys.stdout if out is None else out
    style = _Style(out)
    pairs = []
    try:
        if args.file:
            mf = parse_middles(_read(args.file))
            pairs.append(mf.validate())
        if args.random:
            from .selftest import random_lattice

            rng = np.random.default_rng(args.seed)
            primes = _primes(args.primes)
            for _ in range(args.random):
                p = int(rng.choice(primes))
                n = int(rng.integers(1, args.max_dim + 1))
                pairs.append((random_lattice(rng, n, p), random_lattice(rng, n, p)))
        if not pairs and not args.random:
            raise ParseError("give a file or --random N")
    except ParseError as e:
        _err(f"parse error: {e}")
        return EXIT_PARSE
    except PreconditionError as e:
        _err(f"precondition violated: {e}")
        return EXIT_PRECONDITION
    except DimensionMismatch as e:
        _err(f"precondition violated: dimension: {e}")
        return EXIT_PRECONDITION

    failed = []
    for k, (L, M) in enumerate(pairs):
        if len(pairs) > 1:
            print(f"pair {k} (p = {L.p}, dim {L.dim})", file=out)
        try:
            ok = _print_middles(L, M, out, style, args.verify)
        except DimensionMismatch as e:
            _err(f"precondition violated: dimension: {e}")
            return EXIT_PRECONDITION
        if not ok:
            failed.append((L, M))
    if args.verify:
        print(f"{len(pairs) - len(failed)}/{len(pairs)} pairs verified", file=out)
    if failed:
        L, M = failed[0]
        _err("a middle-lattice identity failed; this is an implementation bug. Counterexample:")
        sys.stderr.write(format_middles(L.p, L.basis, M.basis))
        return EXIT_CHECK
    return EXIT_OK


# -- selftest -------------------------------------------------------------


def _primes(text):
    if isinstance(text, (tuple, list)):
        return tuple(text)
    try:
        ps = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ParseError(f"--primes expects a comma separated list, got {text!r}") from None
    if not ps:
        raise ParseError("--primes is empty")
    return ps


def cmd_selftest(args, out=None) -> int:
    out = sys.stdout if out is None else out
    from .dvr import is_prime
    from .selftest import Scale, run_all

    style = _Style(out)
    try:
        primes = _primes(args.primes)
    except ParseError as e:
        _err(f"parse error: {e}")
        return EXIT_PARSE
    bad = [p for p in primes if not is_prime(p) or p == 2]
    if bad:
        _err(f"precondition violated: selftest primes must be odd primes, got {bad}")
        return EXIT_PRECONDITION
    cases = args.cases if args.sizes is None else args.sizes
    only = None
    if args.only:
        only = [int(x) for x in args.only.split(",")]
    scale = Scale(seed=args.seed, cases=cases, max_dim=args.max_dim, primes=primes)

    def show(r):
        line = r.line().replace("[PASS]", f"[{style('PASS', '32')}]").replace("[FAIL]", f"[{style('FAIL', '31;1')}]")
        print(line, file=out, flush=True)

    t0 = time.perf_counter()
    results = run_all(scale, only=only, fault=args.inject_fault, on_result=show)
    total = sum(r.cases for r in results)
    checks = sum(r.checks for r in results)
    nfail = sum(len(r.failures) for r in results)
    print(f"{total} cases, {checks} checks, {nfail} failures, {time.perf_counter() - t0:.1f}s", file=out)
    if nfail:
        for r in results:
            f = r.smallest()
            if f is None:
                continue
            print(f"\ncounterexample for criterion {r.number} (case {f.case}): {f.what}", file=out)
            out.write(f.problem)
        return EXIT_CHECK
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latmid", description="Lattice middles and reduction of invariant forms mod p.")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reduce", help="reduce a representation with an invariant form mod p")
    r.add_argument("file")
    r.add_argument("--json", action="store_true", help="machine readable output")
    r.add_argument("--seed", type=int, default=None, help="overrides the file's seed")
    r.add_argument("--strategy", choices=("middle", "thompson"), default="middle")
    r.set_defaults(func=cmd_reduce)

    m = sub.add_parser("middles", help="m_-, m_+, L∩M and L+M of two lattices")
    m.add_argument("file", nargs="?")
    m.add_argument("--verify", action="store_true", help="re-check the middle-lattice identities")
    m.add_argument("--random", type=int, default=0, metavar="N", help="also run N seeded random pairs")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--max-dim", type=int, default=4)
    m.add_argument("--primes", default="3,5,7")
    m.set_defaults(func=cmd_middles)

    s = sub.add_parser("selftest", help="run the property suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=None, help="cases per criterion (default: full scale)")
    s.add_argument("--sizes", type=int, default=None, help=argparse.SUPPRESS)
    s.add_argument("--max-dim", type=int, default=None)
    s.add_argument("--primes", default="3,5,7")
    s.add_argument("--only", default=None, help="comma separated criterion numbers")
    s.add_argument("--inject-fault", default=None, choices=("dual_sign",), help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
