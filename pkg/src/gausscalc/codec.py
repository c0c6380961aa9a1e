"""Text formats for diagrams, formulas and certificates.

Diagram document::

    strands 2
    arrow 1 +
    arrow 2 -
    strand 1: 1T 2H
    strand 2: 1H 2T

``#`` starts a comment, blank lines are ignored, identifiers are nonempty
alphanumeric strings, and an end token is an identifier followed by ``H``
or ``T``.  Purely numeric identifiers are read as integers.

Formula document: a ``strands <n>`` header, optional ``name <id>`` and
``claims <kind>...`` lines, then blocks of ``term <coeff>`` followed by the
``n`` strand lines of an unsigned diagram.

Certificate document: ``certificate``, ``source`` + a diagram document,
any number of ``step`` lines, ``target`` + a diagram document.  A step is
``step <KIND> [arrows=<id>,...] [inserts=<s>:<gap>:<new>:<H|T>,...] [signs=<+|->...]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formulae import Formula
from .gauss import HEAD, TAIL, ArrowDiagram, DiagramError, GaussDiagram, canonicalize
from .moves import Certificate, MoveInstance, MoveKind

_IDENT = re.compile(r"[A-Za-z0-9]+$")


class ParseError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col, self.msg = line, col, msg


def _ident(tok: str):
    return int(tok) if tok.isdigit() else tok


@dataclass
class _Line:
    no: int
    text: str  # comment stripped, right-stripped
    indent: int

    def col_of(self, tok: str, start: int = 0) -> int:
        return self.text.find(tok, start) + 1


def _lines(text: str) -> list[_Line]:
    if "\r" in text:
        i = text.index("\r")
        line = text.count("\n", 0, i) + 1
        raise ParseError(line, i - (text.rfind("\n", 0, i) + 1) + 1, "CR characters are not allowed (use LF line endings)")
    out = []
    for no, raw in enumerate(text.split("\n"), 1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            out.append(_Line(no, body, len(body) - len(body.lstrip())))
    return out


def _parse_ends(line: _Line, rest: str, offset: int) -> list[tuple]:
    ends = []
    pos = offset
    for tok in rest.split():
        col = line.text.find(tok, pos) + 1
        pos = col - 1 + len(tok)
        if len(tok) < 2 or tok[-1] not in (HEAD, TAIL) or not _IDENT.match(tok[:-1]):
            raise ParseError(line.no, col, f"malformed end token {tok!r} (expected <id>H or <id>T)")
        ends.append((_ident(tok[:-1]), tok[-1], col))
    return ends


def _header(lines: list[_Line], i: int) -> tuple[int, int]:
    if i >= len(lines):
        raise ParseError(lines[-1].no if lines else 1, 1, "missing 'strands <n>' header")
    ln = lines[i]
    parts = ln.text.split()
    if len(parts) != 2 or parts[0] != "strands" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError(ln.no, ln.indent + 1, "expected 'strands <n>' with n >= 1")
    return int(parts[1]), i + 1


def _strand_lines(lines: list[_Line], i: int, n: int) -> tuple[list[list[tuple]], int]:
    words = []
    if i >= len(lines) or not re.match(r"\s*strand\s", lines[i].text):
        # a diagram without any strand lines has all strands empty
        return [[] for _ in range(n)], i
    for s in range(1, n + 1):
        if i >= len(lines):
            raise ParseError(lines[-1].no, 1, f"missing line 'strand {s}:'")
        ln = lines[i]
        m = re.match(r"\s*strand\s+(\d+)\s*:", ln.text)
        if not m:
            raise ParseError(ln.no, ln.indent + 1, f"expected 'strand {s}:'")
        if int(m.group(1)) != s:
            raise ParseError(ln.no, ln.text.find(m.group(1)) + 1, f"expected strand {s}, found strand {m.group(1)}")
        words.append(_parse_ends(ln, ln.text[m.end():], m.end()))
        i += 1
    return words, i


def _check_ends(words: list[list[tuple]], line_of: list[int], declared: dict | None) -> None:
    seen: dict = {}
    for s, w in enumerate(words):
        for a, k, col in w:
            if declared is not None and a not in declared:
                raise ParseError(line_of[s], col, f"end of undeclared arrow {a}")
            if (a, k) in seen:
                what = "heads" if k == HEAD else "tails"
                raise ParseError(line_of[s], col, f"arrow {a} has two {what}")
            seen[(a, k)] = (line_of[s], col)
    arrows = set(declared) if declared is not None else {a for a, _ in seen}
    for a in sorted(arrows, key=str):
        for k, name in ((HEAD, "head"), (TAIL, "tail")):
            if (a, k) not in seen:
                ln, col = declared[a] if declared is not None else seen[(a, HEAD if k == TAIL else TAIL)]
                raise ParseError(ln, col, f"arrow {a} has no {name}")


def _diagram_from(lines: list[_Line], i: int) -> tuple[GaussDiagram, int]:
    n, i = _header(lines, i)
    declared: dict = {}
    signs = {}
    while i < len(lines) and lines[i].text.split()[0] == "arrow":
        ln = lines[i]
        parts = ln.text.split()
        if len(parts) != 3 or not _IDENT.match(parts[1]) or parts[2] not in ("+", "-"):
            raise ParseError(ln.no, ln.indent + 1, "expected 'arrow <id> <+|->'")
        a = _ident(parts[1])
        if a in declared:
            raise ParseError(ln.no, ln.col_of(parts[1], ln.indent + 6), f"duplicate arrow identifier {a}")
        declared[a] = (ln.no, ln.col_of(parts[1], ln.indent + 6))
        signs[a] = 1 if parts[2] == "+" else -1
        i += 1
    line_of = [lines[j].no for j in range(i, min(i + n, len(lines)))]
    words, i = _strand_lines(lines, i, n)
    _check_ends(words, line_of, declared)
    strands = tuple(tuple((a, k) for a, k, _ in w) for w in words)
    try:
        return GaussDiagram(strands, tuple(signs.items())), i
    except DiagramError as exc:  # pragma: no cover - caught above with positions
        raise ParseError(lines[0].no, 1, str(exc)) from None


def parse_diagram(text: str) -> GaussDiagram:
    lines = _lines(text)
    d, i = _diagram_from(lines, 0)
    if i < len(lines):
        ln = lines[i]
        raise ParseError(ln.no, ln.indent + 1, f"unexpected content {ln.text.strip()!r}")
    return d


def _sign(s: int) -> str:
    return "+" if s > 0 else "-"


def _strand_text(words) -> list[str]:
    return [
        (f"strand {s}: " + " ".join(f"{a}{k}" for a, k in w)).rstrip()
        for s, w in enumerate(words, 1)
    ]


def serialize_diagram(d: GaussDiagram) -> str:
    c = canonicalize(d)
    sm = c.sign_map
    lines = [f"strands {c.n}"]
    lines += [f"arrow {a} {_sign(sm[a])}" for a in c.arrow_ids]
    lines += _strand_text(c.strands)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class FormulaDocument:
    formula: Formula
    name: str | None = None
    claims: tuple[str, ...] = ()


CLAIM_KINDS = ("R", "OC", "SC", "SV")


def parse_formula_document(text: str) -> FormulaDocument:
    lines = _lines(text)
    n, i = _header(lines, 0)
    name, claims = None, ()
    while i < len(lines) and lines[i].text.split()[0] in ("name", "claims"):
        ln = lines[i]
        parts = ln.text.split()
        if parts[0] == "name":
            if len(parts) != 2:
                raise ParseError(ln.no, ln.indent + 1, "expected 'name <id>'")
            name = parts[1]
        else:
            bad = [p for p in parts[1:] if p not in CLAIM_KINDS]
            if bad:
                raise ParseError(ln.no, ln.col_of(bad[0], ln.indent + 6), f"unknown claim {bad[0]!r}")
            claims = tuple(parts[1:])
        i += 1
    terms = []
    while i < len(lines):
        ln = lines[i]
        parts = ln.text.split()
        if parts[0] != "term" or len(parts) != 2 or not re.match(r"[+-]?\d+$", parts[1]):
            raise ParseError(ln.no, ln.indent + 1, "expected 'term <coeff>'")
        coeff = int(parts[1])
        line_of = [lines[j].no for j in range(i + 1, min(i + 1 + n, len(lines)))]
        words, i = _strand_lines(lines, i + 1, n)
        _check_ends(words, line_of, None)
        terms.append((ArrowDiagram(tuple(tuple((a, k) for a, k, _ in w) for w in words)), coeff))
    return FormulaDocument(Formula(n, terms), name, claims)


def parse_formula(text: str) -> Formula:
    return parse_formula_document(text).formula


def serialize_formula(f: Formula, name: str | None = None, claims=()) -> str:
    lines = [f"strands {f.n}"]
    if name:
        lines.append(f"name {name}")
    if claims:
        lines.append("claims " + " ".join(claims))
    for a, c in f.items():
        lines.append(f"term {c:+d}")
        lines += ["  " + s for s in _strand_text(a.strands)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# certificates


def serialize_step(m: MoveInstance) -> str:
    parts = [f"step {m.kind.value}"]
    if m.arrows:
        parts.append("arrows=" + ",".join(map(str, m.arrows)))
    if m.inserts:
        parts.append("inserts=" + ",".join(f"{s}:{g}:{i}:{k}" for s, g, i, k in m.inserts))
    if m.signs:
        parts.append("signs=" + "".join(_sign(s) for s in m.signs))
    return " ".join(parts)


def parse_step(ln: _Line) -> MoveInstance:
    parts = ln.text.split()
    if parts[0] != "step" or len(parts) < 2:
        raise ParseError(ln.no, ln.indent + 1, "expected 'step <KIND> ...'")
    try:
        kind = MoveKind(parts[1])
    except ValueError:
        raise ParseError(ln.no, ln.col_of(parts[1]), f"unknown move kind {parts[1]!r}") from None
    fields = {}
    for tok in parts[2:]:
        key, eq, val = tok.partition("=")
        if not eq or key not in ("arrows", "inserts", "signs") or key in fields:
            raise ParseError(ln.no, ln.col_of(tok), f"bad step field {tok!r}")
        fields[key] = val
    try:
        arrows = tuple(_ident(x) for x in fields.get("arrows", "").split(",") if x)
        inserts = []
        for x in filter(None, fields.get("inserts", "").split(",")):
            s, g, i, k = x.split(":")
            if k not in (HEAD, TAIL):
                raise ValueError(x)
            inserts.append((int(s), int(g), int(i), k))
        signs = tuple(1 if c == "+" else -1 for c in fields.get("signs", "") if c in "+-")
        if len(signs) != len(fields.get("signs", "")):
            raise ValueError(fields["signs"])
    except ValueError as exc:
        raise ParseError(ln.no, ln.indent + 1, f"malformed step ({exc})") from None
    return MoveInstance(kind, arrows, tuple(inserts), signs)


def serialize_certificate(c: Certificate) -> str:
    out = ["certificate", "source"]
    out += serialize_diagram(c.source).splitlines()
    out += [serialize_step(m) for m in c.steps]
    out.append("target")
    out += serialize_diagram(c.target).splitlines()
    return "\n".join(out) + "\n"


def parse_certificate(text: str) -> Certificate:
    lines = _lines(text)
    if not lines or lines[0].text.strip() != "certificate":
        raise ParseError(lines[0].no if lines else 1, 1, "expected 'certificate'")
    if len(lines) < 2 or lines[1].text.strip() != "source":
        raise ParseError(lines[1].no if len(lines) > 1 else 1, 1, "expected 'source'")
    source, i = _diagram_from(lines, 2)
    steps = []
    while i < len(lines) and lines[i].text.split()[0] == "step":
        steps.append(parse_step(lines[i]))
        i += 1
    if i >= len(lines) or lines[i].text.strip() != "target":
        raise ParseError(lines[i].no if i < len(lines) else lines[-1].no, 1, "expected 'step' or 'target'")
    target, i = _diagram_from(lines, i + 1)
    if i < len(lines):
        raise ParseError(lines[i].no, 1, f"unexpected content {lines[i].text.strip()!r}")
    return Certificate(source, tuple(steps), target)
