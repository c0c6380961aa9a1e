"""Random diagrams for property checks and sweeps."""

from __future__ import annotations

import random

from .gauss import HEAD, TAIL, GaussDiagram, canonicalize
from .moves import tables


def random_diagram(rng: random.Random, n: int, k: int, self_only: bool = False) -> GaussDiagram:
    words = [[] for _ in range(n)]
    for a in range(1, k + 1):
        t = rng.randrange(n)
        h = t if self_only else rng.randrange(n)
        words[t].append((a, TAIL))
        words[h].append((a, HEAD))
    for w in words:
        rng.shuffle(w)
    signs = tuple((a, rng.choice((1, -1))) for a in range(1, k + 1))
    return canonicalize(GaussDiagram(tuple(map(tuple, words)), signs))


def _insert(words, strand, gap, ends):
    words[strand][gap:gap] = ends


def with_move_sites(rng: random.Random, d: GaussDiagram, triangles: int = 1, pairs: int = 1) -> GaussDiagram:
    """Add legal R3 triangles and R2 pairs at random places so that deletions and R3 apply."""
    words = [list(w) for w in d.strands]
    signs = dict(d.signs)
    nxt = max(signs, default=0) + 1
    r3 = sorted(tables().r3)
    for _ in range(triangles):
        top, mid, bot, sg = rng.choice(r3)
        a, b, c = nxt, nxt + 1, nxt + 2
        nxt += 3
        ends = {
            "top": [((a if x == "a" else b), TAIL) for x in top],
            "mid": [((a, HEAD) if x == "a" else (c, TAIL)) for x in mid],
            "bot": [((b if x == "b" else c), HEAD) for x in bot],
        }
        for piece in ("top", "mid", "bot"):
            s = rng.randrange(len(words))
            _insert(words, s, rng.randint(0, len(words[s])), ends[piece])
        signs.update({a: sg[0], b: sg[1], c: sg[2]})
    for _ in range(pairs):
        a, b = nxt, nxt + 1
        nxt += 2
        s1, s2 = rng.randrange(len(words)), rng.randrange(len(words))
        tails = [(a, TAIL), (b, TAIL)]
        heads = [(a, HEAD), (b, HEAD)]
        rng.shuffle(tails)
        rng.shuffle(heads)
        _insert(words, s1, rng.randint(0, len(words[s1])), tails)
        _insert(words, s2, rng.randint(0, len(words[s2])), heads)
        sa = rng.choice((1, -1))
        signs.update({a: sa, b: -sa})
    return canonicalize(GaussDiagram(tuple(map(tuple, words)), tuple(signs.items())))
