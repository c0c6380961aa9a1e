"""Invariance criterion for arrow-diagram formulas.

Conditions checked by :func:`certify`:

1. R1  -- no term has an arrow with adjacent ends;
2. R2  -- no term has two arrows with adjacent heads and adjacent tails;
3. R3  -- condition 2 and the boundary of the formula vanishes in the group of
   degenerate diagrams;
4. OC  -- no term has two adjacent tails;
5. SC  -- every term with a self-arrow is matched by the term with that arrow
   reversed, with opposite coefficient;
6. SV  -- no term has a self-arrow.

Degenerate diagrams have exactly one slot where the ends of two distinct
arrows coincide.  The quotient relations (loaded from ``data/relations.tbl``)
rewrite a slot holding two tails or two heads as a sum of diagrams whose
merged slot holds one head and one tail; those mixed diagrams form a basis, so
a combination is zero iff its rewritten form is.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import permutations
from typing import Iterable

from .formulae import Formula
from .gauss import HEAD, TAIL, ArrowDiagram, internal_edges, is_self_arrow

Slot = tuple  # tuple of 1 or 2 ends


class RelationError(ValueError):
    pass


def _canon_slots(strands: tuple[tuple[Slot, ...], ...]) -> tuple[tuple[Slot, ...], ...]:
    merged = [s for w in strands for s in w if len(s) == 2]
    if len(merged) != 1:
        raise RelationError(f"expected exactly one merged slot, found {len(merged)}")
    (a1, _), (a2, _) = merged[0]
    if a1 == a2:
        raise RelationError(f"both ends of arrow {a1!r} merged")
    best = None
    for first in permutations(merged[0]):
        order: dict = {}
        for w in strands:
            for slot in w:
                ends = first if len(slot) == 2 else slot
                for a, _ in ends:
                    order.setdefault(a, len(order) + 1)
        cand = tuple(
            tuple(tuple(sorted((order[a], k) for a, k in slot)) for slot in w) for w in strands
        )
        if best is None or cand < best:
            best = cand
    return best


@dataclass(frozen=True)
class DegenerateDiagram:
    strands: tuple[tuple[Slot, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "strands", _canon_slots(tuple(tuple(tuple(s) for s in w) for w in self.strands)))

    @property
    def n(self) -> int:
        return len(self.strands)

    def merged(self) -> tuple[int, int, Slot]:
        for s, w in enumerate(self.strands):
            for i, slot in enumerate(w):
                if len(slot) == 2:
                    return s, i, slot
        raise RelationError("no merged slot")

    def kinds(self) -> str:
        return "".join(sorted(k for _, k in self.merged()[2]))

    def __lt__(self, other):
        return self.strands < other.strands

    def render(self) -> str:
        def tok(slot):
            return "[" + " ".join(f"{a}{k}" for a, k in slot) + "]" if len(slot) == 2 else f"{slot[0][0]}{slot[0][1]}"
        return " | ".join(" ".join(tok(s) for s in w) or "-" for w in self.strands)


class DFormula(dict):
    """Integer combination of degenerate diagrams (zero coefficients removed)."""

    def add(self, d: DegenerateDiagram, c: int) -> None:
        v = self.get(d, 0) + c
        if v:
            self[d] = v
        else:
            self.pop(d, None)

    def items_sorted(self):
        return sorted(self.items())

    def render(self) -> str:
        return " ".join(f"{c:+d}<{d.render()}>" for d, c in self.items_sorted()) or "0"


def shrink(a: ArrowDiagram, strand: int, index: int) -> DegenerateDiagram:
    """Merge the ends at ``index`` and ``index + 1`` of a strand."""
    words = []
    for s, w in enumerate(a.strands):
        if s != strand:
            words.append(tuple((e,) for e in w))
        else:
            words.append(tuple((e,) for e in w[:index]) + ((w[index], w[index + 1]),) + tuple((e,) for e in w[index + 2:]))
    return DegenerateDiagram(tuple(words))


def boundary(a: ArrowDiagram | Formula) -> DFormula:
    """The boundary map: sum over internal edges of (-1)^heads * eta * shrink."""
    out = DFormula()
    if isinstance(a, Formula):
        for term, c in a.items():
            for d, k in boundary(term).items():
                out.add(d, c * k)
        return out
    for e in internal_edges(a):
        out.add(shrink(a, e.strand, e.index), (-1) ** e.heads * e.eta)
    return out


# ---------------------------------------------------------------------------
# quotient relations


@dataclass(frozen=True)
class Resolution:
    coeff: int
    moved_kind: str  # kind of the merged end that leaves the slot
    moved_idx: int  # which merged end (1 or 2) leaves
    target_kind: str  # kind of the other end of the staying arrow
    target_idx: int


def load_relations(text: str | None = None) -> dict[str, list[Resolution]]:
    """Parse the relation table.

    Each line ``<KK> <coeff> <kind>:<i> -> <kind>:<j>`` says: a degenerate
    diagram whose merged slot holds ends of kinds ``KK`` contributes
    ``coeff`` times the diagram where merged end ``i`` is detached and
    re-merged onto the other end of merged arrow ``j``.
    """
    if text is None:
        text = resources.files("gausscalc").joinpath("data/relations.tbl").read_text()
    table: dict[str, list[Resolution]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            kinds, coeff, src, arrow, dst = line.split()
            if arrow != "->":
                raise ValueError
            sk, si = src.split(":")
            dk, di = dst.split(":")
            res = Resolution(int(coeff), sk[0].upper(), int(si), dk[0].upper(), int(di))
        except ValueError:
            raise RelationError(f"relations line {lineno}: cannot parse {raw!r}") from None
        if kinds not in ("TT", "HH", "HT"):
            raise RelationError(f"relations line {lineno}: unknown slot kinds {kinds!r}")
        table.setdefault(kinds, []).append(res)
    return table


_RELATIONS: dict[str, list[Resolution]] | None = None


def relations() -> dict[str, list[Resolution]]:
    global _RELATIONS
    if _RELATIONS is None:
        _RELATIONS = load_relations()
    return _RELATIONS


def _resolve(d: DegenerateDiagram, r: Resolution) -> DegenerateDiagram:
    s, i, slot = d.merged()
    moved, staying = slot[r.moved_idx - 1], slot[2 - r.moved_idx]
    if moved[1] != r.moved_kind or slot[r.target_idx - 1] != staying:
        raise RelationError(f"relation does not match slot {slot}")
    other = (staying[0], TAIL if staying[1] == HEAD else HEAD)
    if other[1] != r.target_kind:
        raise RelationError(f"relation target kind mismatch on {d.render()}")
    words = []
    for s2, w in enumerate(d.strands):
        row = []
        for i2, sl in enumerate(w):
            if (s2, i2) == (s, i):
                row.append((staying,))
            elif sl == (other,):
                row.append(tuple(sorted((other, moved))))
            else:
                row.append(sl)
        words.append(tuple(row))
    return DegenerateDiagram(tuple(words))


def reduce_in_Dn(df: DFormula) -> DFormula:
    """Rewrite two-tail and two-head slots into the mixed-slot basis."""
    table = relations()
    out = DFormula()
    for d, c in df.items():
        kinds = d.kinds()
        if kinds == "HT":
            out.add(d, c)
            continue
        rules = table.get(kinds)
        if not rules:
            raise RelationError(f"no relation applies to degenerate diagram {d.render()}")
        for r in rules:
            res = _resolve(d, r)
            if res.kinds() != "HT":
                raise RelationError(f"relation left a {res.kinds()} slot in {res.render()}")
            out.add(res, c * r.coeff)
    return out


# ---------------------------------------------------------------------------
# the criterion


def _has_adjacent_ends(a: ArrowDiagram) -> bool:
    return any(w[i][0] == w[i + 1][0] for w in a.strands for i in range(len(w) - 1))


def _adjacent_set(a: ArrowDiagram, kind: str) -> set[frozenset]:
    return {
        frozenset((w[i][0], w[i + 1][0]))
        for w in a.strands
        for i in range(len(w) - 1)
        if w[i][1] == kind == w[i + 1][1]
    }


def _has_r2_pair(a: ArrowDiagram) -> bool:
    return bool(_adjacent_set(a, HEAD) & _adjacent_set(a, TAIL))


def _has_adjacent_tails(a: ArrowDiagram) -> bool:
    return bool(_adjacent_set(a, TAIL))


def _sc_closed(f: Formula) -> bool:
    for a, c in f.items():
        for x in a.arrow_ids:
            if is_self_arrow(a, x) and f.coefficient(a.reversed_arrow(x)) != -c:
                return False
    return True


@dataclass(frozen=True)
class Certification:
    r1: bool
    r2: bool
    r3: bool
    oc: bool
    sc: bool
    sv: bool

    FIELDS = ("R1", "R2", "R3", "OC", "SC", "SV")

    def as_dict(self) -> dict[str, bool]:
        return dict(zip(self.FIELDS, (self.r1, self.r2, self.r3, self.oc, self.sc, self.sv)))

    def certified(self) -> set[str]:
        return {k for k, v in self.as_dict().items() if v}


def certify(f: Formula) -> Certification:
    terms = [a for a, _ in f.items()]
    r1 = not any(_has_adjacent_ends(a) for a in terms)
    r2 = not any(_has_r2_pair(a) for a in terms)
    r3 = r2 and not reduce_in_Dn(boundary(f))
    oc = not any(_has_adjacent_tails(a) for a in terms)
    sc = _sc_closed(f)
    sv = not any(is_self_arrow(a, x) for a in terms for x in a.arrow_ids)
    return Certification(r1, r2, r3, oc, sc, sv)


def boundary_terms(a: ArrowDiagram) -> list[tuple[int, DegenerateDiagram]]:
    """Signed boundary terms in edge order (not collected), for display."""
    return [((-1) ** e.heads * e.eta, shrink(a, e.strand, e.index)) for e in internal_edges(a)]


def is_zero(df: DFormula | Iterable) -> bool:
    return not reduce_in_Dn(DFormula(df))
