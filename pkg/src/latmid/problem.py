"""Line-oriented problem files.

::

    # S3 on the A2 root lattice
    p = 3
    epsilon = +1
    dim = 2
    generator = [[0, -1], [1, -1]]
    generator = [[0, 1], [1, 0]]
    gram = [[2, -1], [-1, 2]]
    word_bound = 6
    seed = 0

Matrices are bracketed rows and may continue over several lines until the
brackets balance.  Entries are integers or ``num/den``.  ``generator`` may be
repeated; every other key appears at most once.  A middles file has keys
``p``, ``L`` and ``M`` (and optionally ``dim``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import qmat
from .dvr import ValConfig
from .forms import DegenerateForm, GramForm
from .lattices import Lattice
from .modrep import GroupRepK

__all__ = [
    "ParseError",
    "PreconditionError",
    "ProblemFile",
    "MiddlesFile",
    "parse_entries",
    "parse_problem",
    "parse_middles",
    "format_matrix",
    "format_problem",
    "format_middles",
]

_ENTRY = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")
_ROW = re.compile(r"\[([^\[\]]*)\]")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field '{key}'")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)
        self.line = line
        self.key = key


class PreconditionError(ValueError):
    """Input parses but violates an invariant; ``invariant`` names it."""

    def __init__(self, invariant: str, msg: str, line: int | None = None):
        loc = f" (line {line})" if line is not None else ""
        super().__init__(f"{invariant}{loc}: {msg}")
        self.invariant = invariant


def _entry(tok: str, line: int, key: str) -> mpq:
    tok = tok.strip()
    if not _ENTRY.match(tok):
        raise ParseError(f"bad rational entry {tok!r}", line, key)
    num, _, den = tok.partition("/")
    if den and int(den) == 0:
        raise ParseError("zero denominator", line, key)
    return mpq(int(num), int(den)) if den else mpq(int(num))


def parse_entries(text: str, line: int = 0, key: str = "matrix"):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError("matrix must be written as [[...], [...]]", line, key)
    inner = text[1:-1].strip()
    if not inner:
        return []
    rows = _ROW.findall(inner)
    if _ROW.sub("", inner).replace(",", "").strip():
        raise ParseError("stray characters between rows", line, key)
    out = []
    for r in rows:
        toks = [t for t in r.split(",")] if r.strip() else []
        out.append([_entry(t, line, key) for t in toks])
    if any(len(r) != len(out[0]) for r in out):
        raise ParseError("rows have different lengths", line, key)
    return out


def _records(text: str):
    """Yield (line_no, key, raw value), joining bracketed values over lines."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i].split("#", 1)[0].strip()
        start = i + 1
        i += 1
        if not raw:
            continue
        if "=" not in raw:
            raise ParseError("expected 'key = value'", start)
        key, _, val = raw.partition("=")
        key, val = key.strip(), val.strip()
        if not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", key):
            raise ParseError(f"bad key {key!r}", start)
        while val.count("[") > val.count("]"):
            if i >= len(lines):
                raise ParseError("unterminated matrix", start, key)
            val += " " + lines[i].split("#", 1)[0].strip()
            i += 1
        yield start, key, val


def _int(val: str, line: int, key: str) -> int:
    try:
        return int(val)
    except ValueError:
        raise ParseError(f"expected an integer, got {val!r}", line, key) from None


def _square(M, n, line, key):
    if len(M) != n or any(len(r) != n for r in M):
        raise PreconditionError("dimension", f"{key} must be {n}x{n}", line)


@dataclass
class ProblemFile:
    p: int
    epsilon: int
    dim: int
    generators: list
    gram: list
    word_bound: int
    seed: int = 0
    lattice: list | None = None
    lines: dict = field(default_factory=dict, compare=False, repr=False)

    def validate(self):
        """Objects for the pipeline; raises PreconditionError naming the invariant."""
        ln = self.lines
        try:
            cfg = ValConfig(self.p)
        except ValueError as e:
            raise PreconditionError("prime", str(e), ln.get("p")) from None
        if self.epsilon not in (1, -1):
            raise PreconditionError("epsilon", "epsilon must be +1 or -1", ln.get("epsilon"))
        if self.epsilon == 1 and self.p == 2:
            raise PreconditionError(
                "WrongCharacteristic", "symmetric forms need p odd", ln.get("p")
            )
        if not self.generators:
            raise PreconditionError("generators", "at least one generator is required")
        for k, g in enumerate(self.generators):
            _square(g, self.dim, ln.get(f"generator{k}"), "generator")
        _square(self.gram, self.dim, ln.get("gram"), "gram")
        if self.word_bound < 1:
            raise PreconditionError("word_bound", "must be positive", ln.get("word_bound"))
        try:
            rep = GroupRepK(self.generators, self.word_bound)
        except ValueError as e:
            raise PreconditionError("generator invertibility", str(e)) from None
        try:
            B = GramForm(self.gram, self.epsilon)
        except DegenerateForm as e:
            raise PreconditionError("nondegeneracy", str(e), ln.get("gram")) from None
        except ValueError as e:
            raise PreconditionError("epsilon-symmetry", str(e), ln.get("gram")) from None
        M0 = None
        if self.lattice is not None:
            _square(self.lattice, self.dim, ln.get("lattice"), "lattice")
            try:
                M0 = Lattice(self.lattice, self.p)
            except (ValueError, ZeroDivisionError) as e:
                raise PreconditionError("lattice basis", str(e), ln.get("lattice")) from None
        return rep, B, cfg, M0


def parse_problem(text: str) -> ProblemFile:
    vals: dict = {}
    lines: dict = {}
    gens = []
    known = {"p", "epsilon", "dim", "generator", "gram", "word_bound", "seed", "lattice"}
    for ln, key, val in _records(text):
        if key not in known:
            raise ParseError("unknown key", ln, key)
        if key == "generator":
            lines[f"generator{len(gens)}"] = ln
            gens.append(parse_entries(val, ln, key))
            continue
        if key in vals:
            raise ParseError("duplicate key", ln, key)
        lines[key] = ln
        if key in ("gram", "lattice"):
            vals[key] = parse_entries(val, ln, key)
        elif key == "epsilon":
            if val not in ("+1", "1", "-1"):
                raise ParseError("epsilon must be +1 or -1", ln, key)
            vals[key] = int(val)
        else:
            vals[key] = _int(val, ln, key)
    for key in ("p", "epsilon", "gram"):
        if key not in vals:
            raise ParseError(f"missing required key '{key}'")
    if not gens:
        raise ParseError("missing required key 'generator'")
    dim = vals.get("dim", len(vals["gram"]))
    return ProblemFile(
        p=vals["p"],
        epsilon=vals["epsilon"],
        dim=dim,
        generators=gens,
        gram=vals["gram"],
        word_bound=vals.get("word_bound", 64),
        seed=vals.get("seed", 0),
        lattice=vals.get("lattice"),
        lines=lines,
    )


@dataclass
class MiddlesFile:
    p: int
    L: list
    M: list
    lines: dict = field(default_factory=dict, compare=False, repr=False)

    def validate(self):
        ln = self.lines
        try:
            ValConfig(self.p)
        except ValueError as e:
            raise PreconditionError("prime", str(e), ln.get("p")) from None
        n = len(self.L)
        _square(self.L, n, ln.get("L"), "L")
        _square(self.M, n, ln.get("M"), "M")
        out = []
        for key in ("L", "M"):
            try:
                out.append(Lattice(getattr(self, key), self.p))
            except (ValueError, ZeroDivisionError) as e:
                raise PreconditionError("invertible basis", str(e), ln.get(key)) from None
        return tuple(out)


def parse_middles(text: str) -> MiddlesFile:
    vals: dict = {}
    lines: dict = {}
    for ln, key, val in _records(text):
        if key not in ("p", "L", "M", "dim"):
            raise ParseError("unknown key", ln, key)
        if key in vals:
            raise ParseError("duplicate key", ln, key)
        lines[key] = ln
        vals[key] = _int(val, ln, key) if key in ("p", "dim") else parse_entries(val, ln, key)
    for key in ("p", "L", "M"):
        if key not in vals:
            raise ParseError(f"missing required key '{key}'")
    if "dim" in vals and vals["dim"] != len(vals["L"]):
        raise PreconditionError("dimension", "dim does not match L", lines.get("dim"))
    return MiddlesFile(vals["p"], vals["L"], vals["M"], lines)


def format_matrix(M) -> str:
    return "[" + ", ".join("[" + ", ".join(str(mpq(x)) for x in row) + "]" for row in M) + "]"


def format_problem(
    p: int,
    epsilon: int,
    generators,
    gram,
    word_bound: int,
    seed: int = 0,
    lattice=None,
    comment: str | None = None,
) -> str:
    out = []
    if comment:
        out += [f"# {c}" for c in comment.splitlines()]
    out += [f"p = {p}", f"epsilon = {'+1' if epsilon == 1 else '-1'}", f"dim = {len(gram)}"]
    out += [f"generator = {format_matrix(g)}" for g in generators]
    out.append(f"gram = {format_matrix(gram)}")
    if lattice is not None:
        out.append(f"lattice = {format_matrix(lattice)}")
    out += [f"word_bound = {word_bound}", f"seed = {seed}"]
    return "\n".join(out) + "\n"


def format_middles(p: int, L, M, comment: str | None = None) -> str:
    out = [f"# {c}" for c in comment.splitlines()] if comment else []
    out += [f"p = {p}", f"L = {format_matrix(L)}", f"M = {format_matrix(M)}"]
    return "\n".join(out) + "\n"


def identity_generator(n: int):
    return qmat.identity(n)
