"""Randomized check that certified formulas are constant across moves."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from .fixtures import MOVE_CONDITIONS, certified_formulas
from .formulae import pair
from .moves import MoveKind, MoveSet, neighbors
from .randgen import random_diagram, with_move_sites

EVERYTHING = MoveSet.of("welded", sv=True, sc=True)


@dataclass(frozen=True)
class SweepReport:
    diagrams: int
    checked: Counter = field(default_factory=Counter)
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations and set(self.checked) == set(MoveKind)


@lru_cache(maxsize=8)
def invariance_sweep(samples: int = 200, max_arrows: int = 8, seed: int = 2024) -> SweepReport:
    """Evaluate every certified formula before and after every legal move.

    Diagrams are random with R2 and R3 sites planted so that each move kind
    is exercised.  A formula is compared only across moves its certified
    conditions cover.  The result is cached, so repeated callers with the same
    arguments share one run.
    """
    rng = random.Random(seed)
    granted = certified_formulas()
    checked: Counter = Counter()
    bad = []
    for i in range(samples):
        n = (1, 2, 3)[i % 3]
        base = random_diagram(rng, n, rng.randint(0, 3))
        d = with_move_sites(rng, base, triangles=1, pairs=rng.randint(0, 1))
        if len(d) > max_arrows:
            d = base
        mine = [(k, f, conds) for k, f, conds in granted if f.n == n]
        before = {k: pair(f, d) for k, f, _ in mine}
        for m, r in neighbors(d, EVERYTHING, max_arrows):
            need = set(MOVE_CONDITIONS[m.kind])
            for k, f, conds in mine:
                if conds >= need:
                    if pair(f, r) != before[k]:
                        bad.append((k, m, d))
                    checked[m.kind] += 1
    return SweepReport(samples, checked, tuple(bad))
