"""Gauss diagrams and arrow diagrams of string links.

A diagram is stored as ``n`` strand words.  Each word lists the arrow ends met
when running along the strand from its bottom endpoint to its top endpoint;
an end is a pair ``(arrow, kind)`` with ``kind`` either ``"H"`` (head) or
``"T"`` (tail).  Signed diagrams additionally carry a sign per arrow.

Strand endpoints are boundary points: nothing is ever adjacent across them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Iterator, NamedTuple, Sequence

HEAD = "H"
TAIL = "T"

End = tuple  # (arrow id, "H" | "T")


class DiagramError(ValueError):
    """Raised when a diagram violates the end-occurrence invariants."""


class EndPos(NamedTuple):
    strand: int  # 0-based
    index: int


def _check_words(strands: Sequence[Sequence[End]], arrows: Iterable[Hashable] | None = None) -> None:
    if len(strands) < 1:
        raise DiagramError("a diagram needs at least one strand")
    seen: dict[Hashable, set[str]] = {}
    for word in strands:
        for arrow, kind in word:
            if kind not in (HEAD, TAIL):
                raise DiagramError(f"bad end kind {kind!r} for arrow {arrow!r}")
            kinds = seen.setdefault(arrow, set())
            if kind in kinds:
                what = "heads" if kind == HEAD else "tails"
                raise DiagramError(f"arrow {arrow!r} has two {what}")
            kinds.add(kind)
    for arrow, kinds in seen.items():
        if len(kinds) != 2:
            raise DiagramError(f"arrow {arrow!r} is missing its {'tail' if HEAD in kinds else 'head'}")
    if arrows is not None:
        declared = set(arrows)
        if declared != set(seen):
            extra = sorted(map(str, declared - set(seen)))
            dangling = sorted(map(str, set(seen) - declared))
            if dangling:
                raise DiagramError(f"undeclared arrow(s) {', '.join(dangling)}")
            raise DiagramError(f"declared arrow(s) without ends {', '.join(extra)}")


def _relabel_order(strands: Sequence[Sequence[End]]) -> dict:
    order: dict = {}
    for word in strands:
        for arrow, _ in word:
            if arrow not in order:
                order[arrow] = len(order) + 1
    return order


def _relabel_words(strands, mapping) -> tuple[tuple[End, ...], ...]:
    return tuple(tuple((mapping[a], k) for a, k in word) for word in strands)


@dataclass(frozen=True)
class _Base:
    strands: tuple[tuple[End, ...], ...]

    @property
    def n(self) -> int:
        return len(self.strands)

    strand_count = n

    def _cached(self, name, build):
        # values are immutable, so derived data is computed once per instance
        cache = self.__dict__.setdefault("_cache", {})
        if name not in cache:
            cache[name] = build()
        return cache[name]

    @property
    def arrow_ids(self) -> tuple:
        return self._cached("ids", lambda: tuple(_relabel_order(self.strands)))

    def __len__(self) -> int:
        return self._cached("len", lambda: sum(len(w) for w in self.strands) // 2)

    def positions(self) -> dict[End, EndPos]:
        """End -> position; the returned dict is shared and must not be mutated."""
        return self._cached(
            "pos", lambda: {end: EndPos(s, i) for s, word in enumerate(self.strands) for i, end in enumerate(word)}
        )

    def head(self, arrow) -> EndPos:
        return self.positions()[(arrow, HEAD)]

    def tail(self, arrow) -> EndPos:
        return self.positions()[(arrow, TAIL)]

    def ends_of(self, arrow) -> tuple[EndPos, EndPos]:
        """(tail position, head position)."""
        pos = self.positions()
        if (arrow, HEAD) not in pos:
            raise KeyError(f"unknown arrow {arrow!r}")
        return pos[(arrow, TAIL)], pos[(arrow, HEAD)]

    def global_order(self) -> list[End]:
        return [end for word in self.strands for end in word]


@dataclass(frozen=True)
class ArrowDiagram(_Base):
    """Unsigned diagram, always in canonical labeling (arrows ``1..k``)."""

    def __post_init__(self):
        strands = tuple(tuple((a, k) for a, k in w) for w in self.strands)
        _check_words(strands)
        object.__setattr__(self, "strands", _relabel_words(strands, _relabel_order(strands)))

    @classmethod
    def empty(cls, n: int) -> "ArrowDiagram":
        return cls(tuple(() for _ in range(n)))

    def key(self):
        return self.strands

    def __lt__(self, other: "ArrowDiagram") -> bool:
        return sort_key(self) < sort_key(other)

    def reversed_arrow(self, arrow) -> "ArrowDiagram":
        """Same diagram with the orientation of one arrow reversed."""
        flip = {HEAD: TAIL, TAIL: HEAD}
        return ArrowDiagram(
            tuple(tuple((a, flip[k] if a == arrow else k) for a, k in w) for w in self.strands)
        )


@dataclass(frozen=True)
class GaussDiagram(_Base):
    """Signed Gauss diagram.  ``signs`` is a sorted tuple of ``(arrow, ±1)``."""

    signs: tuple[tuple[Hashable, int], ...] = ()

    def __post_init__(self):
        strands = tuple(tuple((a, k) for a, k in w) for w in self.strands)
        signs = dict(self.signs)
        for a, s in signs.items():
            if s not in (1, -1):
                raise DiagramError(f"arrow {a!r} has sign {s!r}, expected +1 or -1")
        _check_words(strands, signs)
        object.__setattr__(self, "strands", strands)
        object.__setattr__(self, "signs", tuple(sorted(signs.items(), key=lambda p: str(p[0]))))

    @classmethod
    def _trusted(cls, strands, signs) -> "GaussDiagram":
        # for internal rebuilds whose validity holds by construction
        d = object.__new__(cls)
        object.__setattr__(d, "strands", strands)
        object.__setattr__(d, "signs", tuple(sorted(signs, key=lambda p: str(p[0]))))
        return d

    @classmethod
    def build(cls, strands: Sequence[Sequence[End]], signs: dict) -> "GaussDiagram":
        return cls(tuple(tuple(w) for w in strands), tuple(signs.items()))

    @classmethod
    def empty(cls, n: int) -> "GaussDiagram":
        return cls(tuple(() for _ in range(n)))

    def sign(self, arrow) -> int:
        return self.sign_map[arrow]

    @property
    def sign_map(self) -> dict:
        """A fresh dict; callers may modify it."""
        return dict(self._cached("signs", lambda: dict(self.signs)))

    def key(self):
        order = self.arrow_ids
        sm = self.sign_map
        return (self.strands, tuple(sm[a] for a in order))

    def __lt__(self, other: "GaussDiagram") -> bool:
        return sort_key(self) < sort_key(other)


def sort_key(d: _Base):
    """Total order used to make enumeration and search deterministic."""
    words = tuple(tuple((a, 0 if k == TAIL else 1) for a, k in w) for w in d.strands)
    if isinstance(d, GaussDiagram):
        sm = d.sign_map
        return (len(d), d.n, words, tuple(sm[a] for a in sorted(sm, key=str)))
    return (len(d), d.n, words)


def canonicalize(d: GaussDiagram) -> GaussDiagram:
    """Relabel arrows ``1..k`` in order of first end met along strands 1..n."""
    mapping = _relabel_order(d.strands)
    if all(type(a) is int and a == i for a, i in mapping.items()):
        return d
    sm = d.sign_map
    return GaussDiagram._trusted(_relabel_words(d.strands, mapping), [(mapping[a], sm[a]) for a in mapping])


def forget_signs(d: GaussDiagram) -> ArrowDiagram:
    return ArrowDiagram(d.strands)


def restrict(d, arrows: Iterable) -> GaussDiagram | ArrowDiagram:
    """Subdiagram keeping only the given arrows (canonicalized)."""
    keep = set(arrows)
    strands = tuple(tuple(e for e in w if e[0] in keep) for w in d.strands)
    if isinstance(d, GaussDiagram):
        sm = d.sign_map
        return canonicalize(GaussDiagram(strands, tuple((a, sm[a]) for a in keep)))
    return ArrowDiagram(strands)


def restrict_strands(d: GaussDiagram, strands: Sequence[int]) -> GaussDiagram:
    """Sub-string-link on the given strands (1-based); arrows touching others are dropped."""
    idx = [s - 1 for s in strands]
    inside = set()
    for a in d.arrow_ids:
        t, h = d.ends_of(a)
        if t.strand in idx and h.strand in idx:
            inside.add(a)
    words = tuple(tuple(e for e in d.strands[i] if e[0] in inside) for i in idx)
    sm = d.sign_map
    return canonicalize(GaussDiagram(words, tuple((a, sm[a]) for a in inside)))


def is_self_arrow(d: _Base, arrow) -> bool:
    t, h = d.ends_of(arrow)
    return t.strand == h.strand


def stack(d1: GaussDiagram, d2: GaussDiagram) -> GaussDiagram:
    """Stacking product: ``d1`` below, ``d2`` on top."""
    if d1.n != d2.n:
        raise DiagramError(f"cannot stack a {d1.n}-strand diagram with a {d2.n}-strand diagram")
    c1, c2 = canonicalize(d1), canonicalize(d2)
    shift = len(c1)
    words = tuple(
        w1 + tuple((a + shift, k) for a, k in w2) for w1, w2 in zip(c1.strands, c2.strands)
    )
    signs = c1.signs + tuple((a + shift, s) for a, s in c2.signs)
    return canonicalize(GaussDiagram(words, signs))


def adjacent_pairs(d: _Base) -> list[tuple[End, End]]:
    """Pairs of ends met consecutively along some strand."""
    return [(w[i], w[i + 1]) for w in d.strands for i in range(len(w) - 1)]


def crosses(d: _Base, a, b) -> bool:
    """Whether arrows ``a`` and ``b`` cross.

    Reading the ends of ``a`` and ``b`` along strands 1..n in order, the two
    arrows do not cross iff the two ends of one of them are met consecutively.
    """
    seq = [x for x, _ in d.global_order() if x == a or x == b]
    return seq[0] != seq[1] and seq[1] != seq[2]


@dataclass(frozen=True)
class Edge:
    strand: int  # 0-based
    index: int  # the edge lies between ends ``index`` and ``index + 1``
    ends: tuple[End, End]
    heads: int  # number of heads among the two bounding ends
    eta: int  # +1 if the two bounding arrows cross, -1 otherwise


def internal_edges(a: _Base) -> list[Edge]:
    """Edges cobounded by two adjacent ends of distinct arrows."""
    out = []
    for s, w in enumerate(a.strands):
        for i in range(len(w) - 1):
            e1, e2 = w[i], w[i + 1]
            if e1[0] == e2[0]:
                continue
            heads = (e1[1] == HEAD) + (e2[1] == HEAD)
            eta = 1 if crosses(a, e1[0], e2[0]) else -1
            out.append(Edge(s, i, (e1, e2), heads, eta))
    return out


def _arrows_by_strands(g: _Base) -> dict[tuple[int, int], tuple]:
    pos = g.positions()
    out: dict[tuple[int, int], list] = {}
    for x in g.arrow_ids:
        out.setdefault((pos[(x, TAIL)].strand, pos[(x, HEAD)].strand), []).append(x)
    return {key: tuple(v) for key, v in out.items()}


def _pattern_plan(a: _Base) -> list[tuple]:
    """Per pattern arrow: strand pair and the order constraints of its two ends.

    Arrows are assigned in label order, tail before head.  For each end the
    plan names the nearest already-assigned ends below and above it on its
    strand (as slots ``2*i`` for tails, ``2*i + 1`` for heads, or -1); the
    g-positions assigned there must bracket the new end's g-position.
    """
    pos = a.positions()
    placed: list[tuple[int, int, int]] = []  # (strand, index, slot)
    out = []
    for i in range(1, len(a) + 1):
        row = []
        for kind, slot in ((TAIL, 2 * (i - 1)), (HEAD, 2 * (i - 1) + 1)):
            p = pos[(i, kind)]
            lo = hi = -1
            lo_i, hi_i = -1, 10**9
            for s, idx, sl in placed:
                if s != p.strand:
                    continue
                if lo_i < idx < p.index:
                    lo, lo_i = sl, idx
                elif p.index < idx < hi_i:
                    hi, hi_i = sl, idx
            placed.append((p.strand, p.index, slot))
            row.append((p.strand, lo, hi))
        out.append(tuple(row))
    return out


def count_embeddings(a: ArrowDiagram, g: GaussDiagram) -> tuple[int, int]:
    """Number of subdiagrams of ``g`` whose arrow diagram is ``a``, plain and signed.

    Backtracks over assignments of the arrows of ``a`` (taken in canonical
    order) to arrows of ``g`` with the same strand pair, pruning as soon as
    the relative order of assigned ends on some strand disagrees with ``a``.
    """
    if a.n != g.n:
        raise DiagramError(f"arity mismatch: {a.n}-strand pattern against {g.n}-strand diagram")
    memo = g._cached("counts", dict)
    if a.strands not in memo:
        memo[a.strands] = _count_embeddings(a, g)
    return memo[a.strands]


def _count_embeddings(a: ArrowDiagram, g: GaussDiagram) -> tuple[int, int]:
    k = len(a)
    if k == 0:
        return 1, 1
    if k > len(g):
        return 0, 0
    gpos = g.positions()
    sm = g._cached("signs", lambda: dict(g.signs))
    gtype = g._cached("by_strands", lambda: _arrows_by_strands(g))
    plan = a._cached("plan", lambda: _pattern_plan(a))
    steps = []
    for (ts, tlo, thi), (hs, hlo, hhi) in plan:
        cands = [(x, gpos[(x, TAIL)].index, gpos[(x, HEAD)].index, sm[x]) for x in gtype.get((ts, hs), ())]
        if not cands:
            return 0, 0
        steps.append((cands, tlo, thi, hlo, hhi))
    vals = [0] * (2 * k)
    used: set = set()
    total = signed = 0

    def rec(i: int, sgn: int) -> None:
        nonlocal total, signed
        cands, tlo, thi, hlo, hhi = steps[i]
        last = i == k - 1
        for x, ti, hi, sx in cands:
            if x in used:
                continue
            if (tlo >= 0 and vals[tlo] >= ti) or (thi >= 0 and vals[thi] <= ti):
                continue
            vals[2 * i] = ti
            if (hlo >= 0 and vals[hlo] >= hi) or (hhi >= 0 and vals[hhi] <= hi):
                continue
            if last:
                total += 1
                signed += sgn * sx
                continue
            vals[2 * i + 1] = hi
            used.add(x)
            rec(i + 1, sgn * sx)
            used.discard(x)

    rec(0, 1)
    return total, signed


def subdiagrams(g: GaussDiagram) -> Iterator[tuple[tuple, ArrowDiagram, int]]:
    """All ``2**k`` subdiagrams as (arrow subset, arrow diagram, sign product)."""
    arrows = g.arrow_ids
    sm = g.sign_map
    for r in range(len(arrows) + 1):
        for subset in combinations(arrows, r):
            sgn = 1
            for x in subset:
                sgn *= sm[x]
            keep = set(subset)
            yield subset, ArrowDiagram(tuple(tuple(e for e in w if e[0] in keep) for w in g.strands)), sgn


def count_embeddings_bruteforce(a: ArrowDiagram, g: GaussDiagram) -> tuple[int, int]:
    if a.n != g.n:
        raise DiagramError("arity mismatch")
    total = signed = 0
    for subset, sub, sgn in subdiagrams(g):
        if len(subset) == len(a) and sub == a:
            total += 1
            signed += sgn
    return total, signed
