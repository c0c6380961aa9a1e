"""Rewriting moves on Gauss diagrams, bounded equivalence search, unknotting.

Moves are addressed in the *canonical* labeling of the diagram they apply
to: :func:`apply` canonicalizes its input first, and every result is
canonical, so a sequence of moves can be replayed from a source diagram.
Virtual, mixed and detour moves leave Gauss diagrams unchanged and have no
representation here.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from itertools import product

from .gauss import HEAD, TAIL, EndPos, GaussDiagram, canonicalize, is_self_arrow, sort_key


class MoveKind(str, enum.Enum):
    R1_add = "R1_add"
    R1_del = "R1_del"
    R2_add = "R2_add"
    R2_del = "R2_del"
    R3 = "R3"
    TC = "TC"
    SV_del = "SV_del"
    SV_add = "SV_add"
    SC = "SC"

    def __str__(self) -> str:
        return self.value


REIDEMEISTER = frozenset({MoveKind.R1_add, MoveKind.R1_del, MoveKind.R2_add, MoveKind.R2_del, MoveKind.R3})
INSERTIONS = frozenset({MoveKind.R1_add, MoveKind.R2_add, MoveKind.SV_add})


class IllegalMove(ValueError):
    """A move was applied at a site where it is not legal."""


class SearchExhausted(RuntimeError):
    """The search ran out of its state budget before finishing its depth bound."""


@dataclass(frozen=True)
class MoveSet:
    kinds: frozenset
    mode: str = "virtual"

    def __post_init__(self):
        if self.mode not in ("virtual", "welded"):
            raise ValueError(f"unknown mode {self.mode!r}")
        kinds = frozenset(MoveKind(k) for k in self.kinds)
        if self.mode == "welded":
            kinds |= {MoveKind.TC}
        elif MoveKind.TC in kinds:
            raise ValueError("TC is only available in welded mode")
        object.__setattr__(self, "kinds", kinds)

    @classmethod
    def of(cls, mode: str = "virtual", *, sv: bool = False, sc: bool = False, sv_add: bool = True) -> "MoveSet":
        kinds = set(REIDEMEISTER)
        if sv:
            kinds.add(MoveKind.SV_del)
            if sv_add:
                kinds.add(MoveKind.SV_add)
        if sc:
            kinds.add(MoveKind.SC)
        return cls(frozenset(kinds), mode)

    def describe(self) -> str:
        return f"{self.mode}:" + ",".join(sorted(k.value for k in self.kinds))


@dataclass(frozen=True)
class MoveInstance:
    """One move.

    ``arrows`` name existing arrows (canonical labels).  Insertions list new
    ends as ``(strand, gap, new_arrow, kind)`` with 1-based strand, gap ``g``
    meaning "before the end currently at index g" (0-based), new arrows
    numbered from 1; several new ends in one gap go in listed order.
    ``signs`` are the signs of the new arrows.
    """

    kind: MoveKind
    arrows: tuple = ()
    inserts: tuple = ()
    signs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", MoveKind(self.kind))


@dataclass(frozen=True)
class Certificate:
    source: GaussDiagram
    steps: tuple[MoveInstance, ...]
    target: GaussDiagram

    def replay(self) -> GaussDiagram:
        cur = canonicalize(self.source)
        for i, m in enumerate(self.steps):
            try:
                cur = apply(cur, m)
            except IllegalMove as exc:
                raise IllegalMove(f"step {i + 1} ({m.kind}): {exc}") from None
        return cur

    def verify(self) -> bool:
        return self.replay() == canonicalize(self.target)

    def __len__(self) -> int:
        return len(self.steps)


# ---------------------------------------------------------------------------
# variant tables


@dataclass(frozen=True)
class MoveTables:
    r1: frozenset  # orientation strings "TH" / "HT"
    r2: frozenset  # (over order, under order, signs)
    r3: frozenset  # (top, mid, bot, signs)


def _signs(tok: str, n: int) -> list[tuple[int, ...]]:
    if len(tok) != n or any(c not in "+-*" for c in tok):
        raise ValueError(f"bad sign pattern {tok!r}")
    choices = [(1, -1) if c == "*" else ((1,) if c == "+" else (-1,)) for c in tok]
    return list(product(*choices))


def load_tables(text: str | None = None) -> MoveTables:
    if text is None:
        text = resources.files("gausscalc").joinpath("data/moves.tbl").read_text()
    r1, r2, r3 = set(), set(), set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            kind, *fields = line
            if kind == "R1":
                ends, signs = fields
                if ends not in ("TH", "HT"):
                    raise ValueError(ends)
                _signs(signs, 1)
                r1.add(ends)
            elif kind == "R2":
                over, under, signs = fields
                o, u = over.removeprefix("over:"), under.removeprefix("under:")
                if sorted(o) != ["a", "b"] or sorted(u) != ["a", "b"]:
                    raise ValueError(fields)
                for s in _signs(signs, 2):
                    r2.add((o, u, s))
            elif kind == "R3":
                top, mid, bot, signs = fields
                t, m, b = top.removeprefix("top:"), mid.removeprefix("mid:"), bot.removeprefix("bot:")
                if sorted(t) != ["a", "b"] or sorted(m) != ["a", "c"] or sorted(b) != ["b", "c"]:
                    raise ValueError(fields)
                for s in _signs(signs, 3):
                    r3.add((t, m, b, s))
            else:
                raise ValueError(kind)
        except ValueError as exc:
            raise ValueError(f"moves table line {lineno}: cannot parse {raw!r} ({exc})") from None
    return MoveTables(frozenset(r1), frozenset(r2), frozenset(r3))


_TABLES: MoveTables | None = None


def tables() -> MoveTables:
    global _TABLES
    if _TABLES is None:
        _TABLES = load_tables()
    return _TABLES


# ---------------------------------------------------------------------------
# legality and application


def _adjacent(p, q) -> bool:
    return p.strand == q.strand and abs(p.index - q.index) == 1


def _order(p, q, first: str, second: str) -> str:
    return first + second if p.index < q.index else second + first


def _swap(words: list[list], p, q) -> None:
    w = words[p.strand]
    w[p.index], w[q.index] = w[q.index], w[p.index]


def _rebuild(d: GaussDiagram, words, signs) -> GaussDiagram:
    # every move keeps each arrow's two ends, so the result is valid by construction
    return canonicalize(GaussDiagram._trusted(tuple(tuple(w) for w in words), signs.items()))


def _need(cond: bool, why: str) -> None:
    if not cond:
        raise IllegalMove(why)


def apply(d: GaussDiagram, m: MoveInstance) -> GaussDiagram:
    """Apply one move; the result is canonical.  Raises :class:`IllegalMove`."""
    d = canonicalize(d)
    sm = d.sign_map
    words = [list(w) for w in d.strands]
    pos = d.positions()
    k = m.kind

    def arrow(x):
        _need(x in sm, f"no arrow {x!r}")
        return pos[(x, TAIL)], pos[(x, HEAD)]

    if k in INSERTIONS:
        return _apply_insertion(d, m)

    if k == MoveKind.R1_del:
        (x,) = m.arrows
        t, h = arrow(x)
        _need(_adjacent(t, h), f"ends of arrow {x} are not adjacent")
        _need(("TH" if t.index < h.index else "HT") in tables().r1, "R1 variant not in table")
        del sm[x]
        words = [[e for e in w if e[0] != x] for w in words]
        return _rebuild(d, words, sm)

    if k == MoveKind.R2_del:
        x, y = m.arrows
        _need(x != y, "R2 needs two distinct arrows")
        tx, hx = arrow(x)
        ty, hy = arrow(y)
        _need(_adjacent(tx, ty), "tails are not adjacent")
        _need(_adjacent(hx, hy), "heads are not adjacent")
        key = (_order(tx, ty, "a", "b"), _order(hx, hy, "a", "b"), (sm[x], sm[y]))
        _need(key in tables().r2, f"R2 variant {key} not in table (signs must be opposite)")
        del sm[x], sm[y]
        words = [[e for e in w if e[0] not in (x, y)] for w in words]
        return _rebuild(d, words, sm)

    if k == MoveKind.R3:
        a, b, c = m.arrows
        _need(len({a, b, c}) == 3, "R3 needs three distinct arrows")
        ta, ha = arrow(a)
        tb, hb = arrow(b)
        tc, hc = arrow(c)
        _need(_adjacent(ta, tb), "tails of a and b are not adjacent")
        _need(_adjacent(ha, tc), "head of a and tail of c are not adjacent")
        _need(_adjacent(hb, hc), "heads of b and c are not adjacent")
        key = (
            _order(ta, tb, "a", "b"),
            _order(ha, tc, "a", "c"),
            _order(hb, hc, "b", "c"),
            (sm[a], sm[b], sm[c]),
        )
        _need(key in tables().r3, f"R3 variant {key} not in table")
        _swap(words, ta, tb)
        _swap(words, ha, tc)
        _swap(words, hb, hc)
        return _rebuild(d, words, sm)

    if k == MoveKind.TC:
        x, y = m.arrows
        _need(x != y, "TC needs two distinct arrows")
        tx, _ = arrow(x)
        ty, _ = arrow(y)
        _need(_adjacent(tx, ty), "TC needs two adjacent tails")
        _swap(words, tx, ty)
        return _rebuild(d, words, sm)

    if k in (MoveKind.SC, MoveKind.SV_del):
        (x,) = m.arrows
        t, h = arrow(x)
        _need(t.strand == h.strand, f"arrow {x} is not a self-arrow")
        if k == MoveKind.SV_del:
            del sm[x]
            words = [[e for e in w if e[0] != x] for w in words]
        else:
            sm[x] = -sm[x]
            _swap(words, t, h)
        return _rebuild(d, words, sm)

    raise IllegalMove(f"unsupported move kind {k}")


def _apply_insertion(d: GaussDiagram, m: MoveInstance) -> GaussDiagram:
    nnew = len(m.signs)
    expected = {MoveKind.R1_add: 1, MoveKind.SV_add: 1, MoveKind.R2_add: 2}[m.kind]
    _need(nnew == expected, f"{m.kind} inserts {expected} arrow(s), got {nnew} sign(s)")
    _need(len(m.inserts) == 2 * nnew, "each new arrow needs a head and a tail")
    seen = set()
    buckets: dict[tuple[int, int], list] = {}
    for strand, gap, idx, kind in m.inserts:
        _need(1 <= strand <= d.n, f"no strand {strand}")
        _need(0 <= gap <= len(d.strands[strand - 1]), f"no gap {gap} on strand {strand}")
        _need(1 <= idx <= nnew and kind in (HEAD, TAIL), "bad inserted end")
        _need((idx, kind) not in seen, "duplicate inserted end")
        seen.add((idx, kind))
        buckets.setdefault((strand - 1, gap), []).append((("new", idx), kind))
    words = []
    pos = {}
    for s, w in enumerate(d.strands):
        row = list(w)
        # insert at the highest gaps first so lower gap numbers stay valid
        for g in sorted({g for (bs, g) in buckets if bs == s}, reverse=True):
            row[g:g] = buckets[(s, g)]
        for i, e in enumerate(row):
            if type(e[0]) is tuple:
                pos[e] = EndPos(s, i)
        words.append(row)
    sm = d.sign_map
    for i, s in enumerate(m.signs, 1):
        _need(s in (1, -1), "signs must be +1 or -1")
        sm[("new", i)] = s
    # ends were checked above: each new arrow has exactly one head and one tail
    raw = GaussDiagram._trusted(tuple(tuple(w) for w in words), sm.items())
    if m.kind == MoveKind.R1_add:
        t, h = pos[(("new", 1), TAIL)], pos[(("new", 1), HEAD)]
        _need(_adjacent(t, h), "R1 insertion must create adjacent ends")
    elif m.kind == MoveKind.SV_add:
        t, h = pos[(("new", 1), TAIL)], pos[(("new", 1), HEAD)]
        _need(t.strand == h.strand, "SV insertion must create a self-arrow")
    else:
        t1, h1 = pos[(("new", 1), TAIL)], pos[(("new", 1), HEAD)]
        t2, h2 = pos[(("new", 2), TAIL)], pos[(("new", 2), HEAD)]
        _need(_adjacent(t1, t2) and _adjacent(h1, h2), "R2 insertion must create adjacent tails and heads")
        key = (_order(t1, t2, "a", "b"), _order(h1, h2, "a", "b"), tuple(m.signs))
        _need(key in tables().r2, f"R2 variant {key} not in table")
    return canonicalize(raw)


# ---------------------------------------------------------------------------
# neighbour enumeration


def _candidates(d: GaussDiagram, ms: MoveSet, max_arrows: int):
    sm = d.sign_map
    pos = d.positions()
    arrows = d.arrow_ids
    nar = len(arrows)
    K = ms.kinds
    selfs = [x for x in arrows if is_self_arrow(d, x)]

    if MoveKind.R1_del in K:
        for x in arrows:
            yield MoveInstance(MoveKind.R1_del, (x,))
    if MoveKind.R2_del in K:
        for x in arrows:
            for y in arrows:
                if x < y and sm[x] == -sm[y] and _adjacent(pos[(x, TAIL)], pos[(y, TAIL)]):
                    yield MoveInstance(MoveKind.R2_del, (x, y))
    tail_pairs = []
    for w in d.strands:
        for i in range(len(w) - 1):
            if w[i][1] == TAIL == w[i + 1][1]:
                tail_pairs.append((w[i][0], w[i + 1][0]))
    if MoveKind.R3 in K:
        for p, q in tail_pairs:
            for a, b in ((p, q), (q, p)):
                ha = pos[(a, HEAD)]
                wa = d.strands[ha.strand]
                for j in (ha.index - 1, ha.index + 1):
                    if 0 <= j < len(wa) and wa[j][1] == TAIL and wa[j][0] not in (a, b):
                        yield MoveInstance(MoveKind.R3, (a, b, wa[j][0]))
    if MoveKind.TC in K:
        for p, q in tail_pairs:
            yield MoveInstance(MoveKind.TC, (p, q))
    if MoveKind.SC in K:
        for x in selfs:
            yield MoveInstance(MoveKind.SC, (x,))
    if MoveKind.SV_del in K:
        for x in selfs:
            yield MoveInstance(MoveKind.SV_del, (x,))
    lens = [len(w) for w in d.strands]
    if MoveKind.R1_add in K and nar + 1 <= max_arrows:
        for s in range(1, d.n + 1):
            for g in range(lens[s - 1] + 1):
                for ends in ("TH", "HT"):
                    for sg in (1, -1):
                        yield MoveInstance(MoveKind.R1_add, (), ((s, g, 1, ends[0]), (s, g, 1, ends[1])), (sg,))
    if MoveKind.SV_add in K and nar + 1 <= max_arrows:
        for s in range(1, d.n + 1):
            L = lens[s - 1]
            for g1 in range(L + 1):
                for g2 in range(g1, L + 1):
                    for first in (TAIL, HEAD):
                        second = HEAD if first == TAIL else TAIL
                        for sg in (1, -1):
                            yield MoveInstance(MoveKind.SV_add, (), ((s, g1, 1, first), (s, g2, 1, second)), (sg,))
    if MoveKind.R2_add in K and nar + 2 <= max_arrows:
        for s1 in range(1, d.n + 1):
            for g1 in range(lens[s1 - 1] + 1):
                for s2 in range(1, d.n + 1):
                    for g2 in range(lens[s2 - 1] + 1):
                        for heads in ((1, 2), (2, 1)):
                            for signs in ((1, -1), (-1, 1)):
                                tails_ins = ((s1, g1, 1, TAIL), (s1, g1, 2, TAIL))
                                heads_ins = ((s2, g2, heads[0], HEAD), (s2, g2, heads[1], HEAD))
                                orders = [tails_ins + heads_ins]
                                if (s1, g1) == (s2, g2):
                                    orders.append(heads_ins + tails_ins)
                                for ins in orders:
                                    yield MoveInstance(MoveKind.R2_add, (), ins, signs)


def neighbors(d: GaussDiagram, ms: MoveSet, max_arrows: int | None = None) -> list[tuple[MoveInstance, GaussDiagram]]:
    """All diagrams one legal move away, one move per distinct result.

    Insertions are only enumerated while the result has at most
    ``max_arrows`` arrows (default: no insertions).
    """
    d = canonicalize(d)
    if max_arrows is None:
        max_arrows = len(d)
    out: dict = {}
    for m in _candidates(d, ms, max_arrows):
        try:
            r = apply(d, m)
        except IllegalMove:
            continue
        if r == d:
            continue
        out.setdefault(r.key(), (m, r))
    return sorted(out.values(), key=lambda mr: sort_key(mr[1]))


# ---------------------------------------------------------------------------
# search


@dataclass
class SearchStats:
    visited: int = 0
    depth_reached: int = 0
    frontier: list = field(default_factory=list)


def search_equivalent(
    d1: GaussDiagram,
    d2: GaussDiagram,
    ms: MoveSet,
    depth: int,
    max_arrows: int,
    max_states: int = 500_000,
    stats: SearchStats | None = None,
) -> Certificate | None:
    """Breadth-first search for a move sequence from ``d1`` to ``d2``.

    Returns ``None`` when no certificate exists within ``depth`` moves and
    ``max_arrows`` arrows; raises :class:`SearchExhausted` when more than
    ``max_states`` diagrams would have to be visited.
    """
    if d1.n != d2.n:
        raise ValueError(f"strand counts differ: {d1.n} vs {d2.n}")
    start, goal = canonicalize(d1), canonicalize(d2)
    max_arrows = max(max_arrows, len(start), len(goal))
    parent: dict = {start.key(): None}
    frontier = [start]
    stats = stats if stats is not None else SearchStats()
    found = start.key() == goal.key()
    level = 0
    while not found and level < depth and frontier:
        level += 1
        nxt = []
        for cur in frontier:
            for m, r in neighbors(cur, ms, max_arrows):
                key = r.key()
                if key in parent:
                    continue
                parent[key] = (cur, m)
                if len(parent) > max_states:
                    stats.visited = len(parent)
                    raise SearchExhausted(f"more than {max_states} states visited at depth {level}")
                if key == goal.key():
                    found = True
                    break
                nxt.append(r)
            if found:
                break
        frontier = nxt
    stats.visited = len(parent)
    stats.depth_reached = level
    if not found:
        return None
    steps = []
    key = goal.key()
    while parent[key] is not None:
        prev, m = parent[key]
        steps.append(m)
        key = prev.key()
    return Certificate(start, tuple(reversed(steps)), goal)


# ---------------------------------------------------------------------------
# long knots


def unknot_welded_long(d: GaussDiagram, allow_sc: bool = True) -> Certificate:
    """Certificate reducing a 1-strand diagram to the empty one.

    With ``allow_sc`` the moves are SC, TC and R1 deletion: repeatedly pick
    the arrow whose ends are closest, walk its upper end down with TC (after
    turning both ends of each swapped pair into tails by SC) and delete it by
    R1 once its ends meet.  Without ``allow_sc`` every arrow is removed by a
    self-virtualization.
    """
    if d.n != 1:
        raise ValueError(f"long knot unknotting needs 1 strand, got {d.n}")
    src = canonicalize(d)
    cur = src
    steps: list[MoveInstance] = []

    def do(m: MoveInstance) -> None:
        nonlocal cur
        cur = apply(cur, m)
        steps.append(m)

    if not allow_sc:
        while len(cur):
            do(MoveInstance(MoveKind.SV_del, (cur.arrow_ids[0],)))
        return Certificate(src, tuple(steps), cur)

    while len(cur):
        word = cur.strands[0]
        pos = cur.positions()
        best = min(cur.arrow_ids, key=lambda x: (abs(pos[(x, HEAD)].index - pos[(x, TAIL)].index), x))
        i, j = sorted((pos[(best, HEAD)].index, pos[(best, TAIL)].index))
        if j == i + 1:
            do(MoveInstance(MoveKind.R1_del, (best,)))
            continue
        # bring the end at j down past the end at j - 1
        # labels may shift after canonicalization; look them up by position
        if word[j][1] == HEAD:
            do(MoveInstance(MoveKind.SC, (best,)))
        if cur.strands[0][j - 1][1] == HEAD:
            do(MoveInstance(MoveKind.SC, (cur.strands[0][j - 1][0],)))
        w = cur.strands[0]
        do(MoveInstance(MoveKind.TC, (w[j - 1][0], w[j][0])))
    return Certificate(src, tuple(steps), cur)
