"""Integer combinations of arrow diagrams and the pairing with Gauss diagrams."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .gauss import (
    ArrowDiagram,
    DiagramError,
    GaussDiagram,
    count_embeddings,
    forget_signs,
    sort_key,
    subdiagrams,
)


class Formula:
    """A finite integer combination of arrow diagrams on ``n`` strands.

    Terms are keyed by canonical arrow diagram; zero coefficients are dropped.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[ArrowDiagram, int] | Iterable[tuple[ArrowDiagram, int]] = ()):
        self.n = n
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ArrowDiagram, int] = {}
        for a, c in items:
            if a.n != n:
                raise DiagramError(f"term on {a.n} strands in a {n}-strand formula")
            acc[a] = acc.get(a, 0) + int(c)
        self._terms = {a: c for a, c in acc.items() if c}

    @classmethod
    def single(cls, a: ArrowDiagram, coeff: int = 1) -> "Formula":
        return cls(a.n, {a: coeff})

    @property
    def terms(self) -> dict[ArrowDiagram, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[ArrowDiagram, int]]:
        for a in sorted(self._terms, key=sort_key):
            yield a, self._terms[a]

    def coefficient(self, a: ArrowDiagram) -> int:
        return self._terms.get(a, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def _check(self, other: "Formula") -> None:
        if self.n != other.n:
            raise DiagramError(f"cannot combine {self.n}- and {other.n}-strand formulas")

    def __add__(self, other: "Formula") -> "Formula":
        self._check(other)
        return Formula(self.n, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "Formula":
        return Formula(self.n, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other: "Formula") -> "Formula":
        return self + (-other)

    def __mul__(self, k: int) -> "Formula":
        return Formula(self.n, {a: k * c for a, c in self._terms.items()})

    __rmul__ = __mul__

    def dot(self, other: "Formula") -> int:
        """The scalar product in which arrow diagrams are orthonormal."""
        self._check(other)
        small, big = sorted((self._terms, other._terms), key=len)
        return sum(c * big.get(a, 0) for a, c in small.items())

    def __repr__(self) -> str:
        parts = [f"{c:+d}*{a.strands}" for a, c in self.items()]
        return f"Formula(n={self.n}, {' '.join(parts) or '0'})"


def expand_i(g: GaussDiagram) -> Formula:
    """Sum over all subdiagrams of the sign product times the arrow diagram."""
    return Formula(g.n, [(sub, sgn) for _, sub, sgn in subdiagrams(g)])


def pair(f: Formula, g: GaussDiagram) -> int:
    if f.n != g.n:
        raise DiagramError(f"arity mismatch: {f.n}-strand formula on a {g.n}-strand diagram")
    return sum(c * count_embeddings(a, g)[1] for a, c in f._terms.items())


def pair_bruteforce(f: Formula, g: GaussDiagram) -> int:
    return f.dot(expand_i(g))


__all__ = ["Formula", "expand_i", "pair", "pair_bruteforce", "forget_signs"]
