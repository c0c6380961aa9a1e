"""The transcribed example corpus and its reproduction table."""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path

from .algebra import action, compile_braid, parse_word
from .catalog import load_catalog
from .codec import parse_diagram
from .formulae import pair
from .gauss import GaussDiagram, canonicalize, is_self_arrow, restrict_strands
from .mortier import boundary_terms, certify, is_zero
from .moves import MoveKind, MoveSet, SearchExhausted, apply, neighbors, search_equivalent, unknot_welded_long

DIAGRAMS = ("K0", "K", "G", "Gp", "L", "B", "T", "Tp", "Lp", "Bp", "C", "Cp")
WORDS = ("T", "Tp", "C", "Cp", "G", "Gp", "B", "Bp")


class FixtureError(ValueError):
    pass


def data_dir() -> Path:
    return Path(str(resources.files("gausscalc").joinpath("data")))


def fixture_text(filename: str) -> str:
    return (data_dir() / "fixtures" / filename).read_text()


def load_diagram(name: str) -> GaussDiagram:
    """A fixture diagram by name; ``empty:<n>`` is the empty diagram on n strands."""
    if name.startswith("empty:"):
        return GaussDiagram.empty(int(name.split(":", 1)[1]))
    if name not in DIAGRAMS:
        raise FixtureError(f"unknown fixture diagram {name!r}")
    return canonicalize(parse_diagram(fixture_text(f"{name}.gd")))


def load_word(name: str):
    if name not in WORDS:
        raise FixtureError(f"no braid word for fixture {name!r}")
    return parse_word(fixture_text(f"{name}.bw"))


def parse_moveset(spec: str) -> MoveSet:
    mode, *flags = spec.split("+")
    bad = set(flags) - {"sv", "sc"}
    if bad:
        raise FixtureError(f"unknown move set flag(s) {sorted(bad)} in {spec!r}")
    if mode not in ("virtual", "welded"):
        raise FixtureError(f"unknown move set mode {mode!r} in {spec!r}")
    return MoveSet.of(mode, sv="sv" in flags, sc="sc" in flags)


@dataclass(frozen=True)
class Row:
    index: int
    line: int
    check: str
    args: tuple[str, ...]
    provenance: str

    def label(self) -> str:
        return " ".join((self.check,) + self.args)


@dataclass
class RowResult:
    row: Row
    passed: bool
    detail: str
    data: dict = field(default_factory=dict)


def load_rows(text: str | None = None) -> list[Row]:
    if text is None:
        text = fixture_text("expected.tbl")
    rows = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        spec, bar, prov = body.partition("|")
        if not bar or not prov.strip():
            raise FixtureError(f"expected.tbl line {no}: every row needs a '| provenance' tag")
        check, *args = shlex.split(spec)
        rows.append(Row(len(rows) + 1, no, check, tuple(args), prov.strip()))
    return rows


def _kw(args, key: str) -> int:
    for a in args:
        if a.startswith(key + "="):
            return int(a.split("=", 1)[1])
    raise FixtureError(f"missing {key}=")


def _certificate_check(c, formulas) -> tuple[bool, str]:
    """Replay a certificate and check that certified formulas stay constant along it."""
    if not c.verify():
        return False, "certificate does not replay"
    cur = c.source
    for m in c.steps:
        nxt = apply(cur, m)
        for name, f, granted in formulas:
            if f.n == cur.n and _move_certified(m.kind, granted) and pair(f, cur) != pair(f, nxt):
                return False, f"{name} changed along certified step {m.kind}"
        cur = nxt
    return True, f"{len(c)} steps"


def _move_certified(kind: MoveKind, granted: set[str]) -> bool:
    return granted >= set(MOVE_CONDITIONS[kind])


# conditions of the criterion that make a formula invariant under each move kind
MOVE_CONDITIONS = {
    MoveKind.R1_add: ("R1",),
    MoveKind.R1_del: ("R1",),
    MoveKind.R2_add: ("R2",),
    MoveKind.R2_del: ("R2",),
    MoveKind.R3: ("R3",),
    MoveKind.TC: ("OC",),
    MoveKind.SC: ("SC",),
    MoveKind.SV_del: ("SV",),
    MoveKind.SV_add: ("SV",),
}


def certified_formulas():
    return [(k, e.formula, certify(e.formula).certified()) for k, e in load_catalog().items()]


def run_row(row: Row) -> RowResult:
    a = row.args
    cat = load_catalog()
    try:
        if row.check == "value":
            got = pair(cat[a[0]].formula, load_diagram(a[1]))
            return RowResult(row, got == int(a[2]), f"{a[0]}({a[1]}) = {got}", {"value": got})
        if row.check == "restricted":
            f = cat[a[0]].formula
            g = load_diagram(a[1])
            vals = {
                ",".join(map(str, s)): pair(f, restrict_strands(g, s))
                for s in combinations(range(1, g.n + 1), f.n)
            }
            ok = all(v == int(a[2]) for v in vals.values())
            return RowResult(row, ok, f"{a[0]} on sub-links of {a[1]}: {vals}", {"values": vals})
        if row.check == "differ":
            f = cat[a[0]].formula
            v1, v2 = pair(f, load_diagram(a[1])), pair(f, load_diagram(a[2]))
            return RowResult(row, v1 != v2, f"{a[0]}: {v1} vs {v2}", {"values": [v1, v2]})
        if row.check == "certify":
            got = certify(cat[a[0]].formula).as_dict()
            ok = True
            for tok in a[1:]:
                want = not tok.startswith("!")
                ok &= got[tok.lstrip("!")] == want
            return RowResult(row, ok, " ".join(f"{k}={int(v)}" for k, v in got.items()), {"conditions": got})
        if row.check == "boundary":
            (term,) = cat[a[0]].formula.terms
            terms = boundary_terms(term)
            signs = "".join("+" if c > 0 else "-" for c, _ in terms)
            zero = is_zero(_collect(terms))
            return RowResult(row, signs == a[1] and zero, f"terms {signs}, zero in D_n: {zero}", {"signs": signs, "zero": zero})
        if row.check == "selfarrows":
            g = load_diagram(a[0])
            k = sum(is_self_arrow(g, x) for x in g.arrow_ids)
            return RowResult(row, k == int(a[1]), f"{k} self-arrow(s)", {"count": k})
        if row.check in ("search", "nosearch"):
            d1, d2 = load_diagram(a[0]), load_diagram(a[1])
            ms = parse_moveset(a[2])
            c = search_equivalent(d1, d2, ms, _kw(a, "depth"), _kw(a, "max_arrows"))
            if row.check == "nosearch":
                return RowResult(row, c is None, "no certificate within bounds" if c is None else f"found {len(c)} steps")
            if c is None:
                return RowResult(row, False, "not found within bounds")
            ok, why = _certificate_check(c, certified_formulas())
            return RowResult(row, ok, why, {"steps": [m.kind.value for m in c.steps]})
        if row.check == "move":
            d1, d2 = load_diagram(a[0]), load_diagram(a[1])
            kind = MoveKind(a[2])
            hits = [m for m, r in neighbors(d1, MoveSet.of("welded")) if m.kind == kind and r == d2]
            return RowResult(row, bool(hits), f"{len(hits)} {kind} move(s) reach {a[1]}")
        if row.check == "unknot":
            c = unknot_welded_long(load_diagram(a[0]), allow_sc=True)
            ok = c.verify() and len(c.target) == 0
            return RowResult(row, ok, f"{len(c)} steps to the empty diagram", {"steps": len(c)})
        if row.check == "compile":
            ok = compile_braid(load_word(a[0])) == load_diagram(a[0])
            return RowResult(row, ok, "braid word and diagram agree" if ok else "braid word and diagram differ")
        if row.check in ("sv-equal", "sv-differ"):
            same = action(load_word(a[0])) == action(load_word(a[1]))
            return RowResult(row, same == (row.check == "sv-equal"), "equal actions" if same else "different actions")
    except (FixtureError, SearchExhausted, KeyError, ValueError) as exc:
        return RowResult(row, False, f"error: {exc}")
    return RowResult(row, False, f"unknown check {row.check!r}")


def _collect(terms) -> dict:
    out: dict = {}
    for c, d in terms:
        out[d] = out.get(d, 0) + c
    return {d: c for d, c in out.items() if c}


def verify_all(rows: list[Row] | None = None) -> list[RowResult]:
    return [run_row(r) for r in (rows if rows is not None else load_rows())]


__all__ = [
    "DIAGRAMS",
    "WORDS",
    "FixtureError",
    "Row",
    "RowResult",
    "load_diagram",
    "load_rows",
    "load_word",
    "parse_moveset",
    "run_row",
    "verify_all",
]
