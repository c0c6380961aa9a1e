"""Virtual pure-braid words, the reduced free group, and its conjugating automorphisms.

Elements of the reduced free group RF_n are stored through the Magnus map
``x_i -> 1 + X_i`` into the ring of noncommuting integer series in
``X_1..X_n`` modulo every monomial in which some index repeats.  That
quotient ring is finite (monomials have length at most ``n``), and two
elements of RF_n are equal iff their images are.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .gauss import HEAD, TAIL, GaussDiagram, canonicalize

Monomial = tuple  # strictly a tuple of distinct 1-based generator indices


class BraidError(ValueError):
    pass


class NonPureWord(BraidError):
    """The word does not induce the identity permutation."""


# ---------------------------------------------------------------------------
# braid words


@dataclass(frozen=True)
class Letter:
    """``sigma(i, sign)`` when ``sign`` is +1/-1, ``tau(i)`` when ``sign`` is 0."""

    i: int
    sign: int

    @property
    def virtual(self) -> bool:
        return self.sign == 0

    def __str__(self) -> str:
        if self.sign == 0:
            return f"v{self.i}"
        return f"s{'+' if self.sign > 0 else '-'}{self.i}"


def sigma(i: int, sign: int = 1) -> Letter:
    if sign not in (1, -1):
        raise BraidError(f"sigma sign must be +1 or -1, got {sign!r}")
    return Letter(i, sign)


def tau(i: int) -> Letter:
    return Letter(i, 0)


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise BraidError("a braid word needs at least one strand")
        letters = tuple(self.letters)
        for x in letters:
            if not 1 <= x.i <= self.n - 1:
                raise BraidError(f"letter {x} out of range for {self.n} strands")
        object.__setattr__(self, "letters", letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.n != other.n:
            raise BraidError(f"cannot concatenate words on {self.n} and {other.n} strands")
        return BraidWord(self.n, self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def permutation(self) -> tuple[int, ...]:
        """Strand (1-based) found at each position after the whole word."""
        pos = list(range(1, self.n + 1))
        for x in self.letters:
            pos[x.i - 1], pos[x.i] = pos[x.i], pos[x.i - 1]
        return tuple(pos)

    def is_pure(self) -> bool:
        return self.permutation() == tuple(range(1, self.n + 1))

    def closed_by_virtuals(self) -> "BraidWord":
        """Append virtual letters (bubble sort) so that the word becomes pure."""
        pos = list(self.permutation())
        extra = []
        for end in range(self.n - 1, 0, -1):
            for i in range(end):
                if pos[i] > pos[i + 1]:
                    pos[i], pos[i + 1] = pos[i + 1], pos[i]
                    extra.append(tau(i + 1))
        return BraidWord(self.n, self.letters + tuple(extra))

    def crossings(self) -> list[tuple[int, int, int]]:
        """Classical crossings as ``(over strand, under strand, sign)`` in word order."""
        pos = list(range(1, self.n + 1))
        out = []
        for x in self.letters:
            left, right = pos[x.i - 1], pos[x.i]
            if x.sign > 0:
                out.append((left, right, 1))
            elif x.sign < 0:
                out.append((right, left, -1))
            pos[x.i - 1], pos[x.i] = right, left
        return out

    def __str__(self) -> str:
        return f"n={self.n}; " + " ".join(map(str, self.letters))


_LETTER = re.compile(r"(?:s([+-])|v)(\d+)$")


def parse_word(text: str) -> BraidWord:
    """Parse ``n=<k>; s+1 s-2 v1 ...``; ``#`` starts a comment."""
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    m = re.match(r"n\s*=\s*(\d+)\s*;(.*)$", body, re.S)
    if not m:
        raise BraidError("braid word must start with 'n=<strands>;'")
    letters = []
    for tok in m.group(2).split():
        lm = _LETTER.match(tok)
        if not lm:
            raise BraidError(f"bad braid letter {tok!r}")
        i = int(lm.group(2))
        letters.append(tau(i) if lm.group(1) is None else sigma(i, 1 if lm.group(1) == "+" else -1))
    return BraidWord(int(m.group(1)), tuple(letters))


def compile_braid(w: BraidWord) -> GaussDiagram:
    """Gauss diagram of a pure word: one arrow per sigma, over strand to under strand."""
    if not w.is_pure():
        raise NonPureWord(f"word {w} induces permutation {w.permutation()}")
    words: list[list] = [[] for _ in range(w.n)]
    signs = {}
    for k, (over, under, sign) in enumerate(w.crossings(), 1):
        words[over - 1].append((k, TAIL))
        words[under - 1].append((k, HEAD))
        signs[k] = sign
    return canonicalize(GaussDiagram(tuple(map(tuple, words)), tuple(signs.items())))


# ---------------------------------------------------------------------------
# the Magnus ring of RF_n


class MagnusElement:
    """Truncated Magnus series; ``coeffs`` maps monomials to nonzero integers."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        self.n = n
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Monomial, int] = {}
        for mono, c in items:
            mono = tuple(mono)
            if len(set(mono)) != len(mono):
                continue
            if any(not 1 <= i <= n for i in mono):
                raise BraidError(f"monomial {mono} uses a generator outside 1..{n}")
            acc[mono] = acc.get(mono, 0) + c
        self.coeffs = {m: c for m, c in acc.items() if c}

    @classmethod
    def one(cls, n: int) -> "MagnusElement":
        return cls(n, {(): 1})

    @classmethod
    def gen(cls, n: int, i: int, power: int = 1) -> "MagnusElement":
        """``x_i ** power``; since ``X_i**2`` vanishes this is ``1 + power*X_i``."""
        return cls(n, {(): 1, (i,): power})

    def __mul__(self, other: "MagnusElement") -> "MagnusElement":
        if self.n != other.n:
            raise BraidError("elements live in different groups")
        acc: dict = {}
        for m1, c1 in self.coeffs.items():
            s1 = set(m1)
            for m2, c2 in other.coeffs.items():
                if s1.isdisjoint(m2):
                    m = m1 + m2
                    acc[m] = acc.get(m, 0) + c1 * c2
        return MagnusElement(self.n, acc)

    def __add__(self, other: "MagnusElement") -> "MagnusElement":
        return MagnusElement(self.n, list(self.coeffs.items()) + list(other.coeffs.items()))

    def __sub__(self, other: "MagnusElement") -> "MagnusElement":
        return MagnusElement(self.n, list(self.coeffs.items()) + [(m, -c) for m, c in other.coeffs.items()])

    def constant(self) -> int:
        return self.coeffs.get((), 0)

    def is_group_element(self) -> bool:
        return self.constant() == 1

    def inverse(self) -> "MagnusElement":
        if not self.is_group_element():
            raise BraidError("only elements with constant term 1 are invertible here")
        u = self - MagnusElement.one(self.n)
        neg_u = MagnusElement(self.n, {m: -c for m, c in u.coeffs.items()})
        out = term = MagnusElement.one(self.n)
        # u is nilpotent: every power beyond the n-th repeats an index
        for _ in range(self.n):
            term = term * neg_u
            if not term.coeffs:
                break
            out = out + term
        return out

    def coefficient(self, mono: Sequence[int]) -> int:
        return self.coeffs.get(tuple(mono), 0)

    def key(self) -> tuple:
        return tuple(sorted(self.coeffs.items(), key=lambda mc: (len(mc[0]), mc[0])))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MagnusElement):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.key()))

    def __repr__(self) -> str:
        return f"MagnusElement({self.n}, {render_magnus(self)})"


def render_magnus(e: MagnusElement) -> str:
    parts = []
    for mono, c in e.key():
        body = "".join(f"X{i}" for i in mono) if mono else "1"
        if mono and abs(c) == 1:
            parts.append(("+" if c > 0 else "-") + body)
        else:
            parts.append(f"{c:+d}" + ("" if not mono else "*" + body))
    s = " ".join(parts) or "0"
    return s[1:] if s.startswith("+") else s


def rf_multiply(a: MagnusElement, b: MagnusElement) -> MagnusElement:
    return a * b


def rf_invert(a: MagnusElement) -> MagnusElement:
    return a.inverse()


def rf_word(n: int, word: Iterable[int]) -> MagnusElement:
    """Magnus form of a group word given as signed generator indices (``-2`` is ``x_2^-1``)."""
    out = MagnusElement.one(n)
    for g in word:
        if g == 0 or abs(g) > n:
            raise BraidError(f"bad generator {g} for RF_{n}")
        out = out * MagnusElement.gen(n, abs(g), 1 if g > 0 else -1)
    return out


def substitute(e: MagnusElement, images: Sequence[MagnusElement]) -> MagnusElement:
    """Apply the endomorphism ``x_i -> images[i-1]`` to ``e``.

    Each ``X_i`` goes to ``images[i-1] - 1``.  For conjugates of ``x_i`` that
    difference is a multiple of ``X_i`` on every monomial, so repeated
    indices stay repeated and the substitution is well defined.
    """
    n = e.n
    one = MagnusElement.one(n)
    deltas = [img - one for img in images]
    out = MagnusElement(n)
    for mono, c in e.coeffs.items():
        term = MagnusElement(n, {(): c})
        for i in mono:
            term = term * deltas[i - 1]
        out = out + term
    return out


# ---------------------------------------------------------------------------
# basis-conjugating automorphisms


@dataclass(frozen=True, eq=False)
class ConjugatingAutomorphism:
    """``x_i -> w_i^-1 x_i w_i`` for the conjugators ``w_i``.

    Conjugators are not unique, so equality compares the images of the
    generators, which is what :func:`sv_invariant` reports.
    """

    conjugators: tuple[MagnusElement, ...]

    @property
    def n(self) -> int:
        return len(self.conjugators)

    @classmethod
    def identity(cls, n: int) -> "ConjugatingAutomorphism":
        return cls(tuple(MagnusElement.one(n) for _ in range(n)))

    def images(self) -> tuple[MagnusElement, ...]:
        n = self.n
        return tuple(
            w.inverse() * MagnusElement.gen(n, i) * w for i, w in enumerate(self.conjugators, 1)
        )

    def apply(self, e: MagnusElement) -> MagnusElement:
        return substitute(e, self.images())

    def compose(self, other: "ConjugatingAutomorphism") -> "ConjugatingAutomorphism":
        """``self`` after ``other``: x_i -> self(v_i^-1 x_i v_i)."""
        imgs = self.images()
        return ConjugatingAutomorphism(
            tuple(
                w * substitute(v, imgs) for v, w in zip(other.conjugators, self.conjugators)
            )
        )

    __matmul__ = compose

    def key(self) -> tuple:
        return tuple(img.key() for img in self.images())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConjugatingAutomorphism):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _letter_automorphism(n: int, over: int, under: int, sign: int) -> ConjugatingAutomorphism:
    # positive: x_under -> x_over x_under x_over^-1, i.e. conjugator x_over^-1
    conj = [MagnusElement.one(n) for _ in range(n)]
    conj[under - 1] = MagnusElement.gen(n, over, -sign)
    return ConjugatingAutomorphism(tuple(conj))


def action(w: BraidWord) -> ConjugatingAutomorphism:
    """Composite of the per-crossing automorphisms, first letter outermost."""
    if not w.is_pure():
        raise NonPureWord(f"word {w} induces permutation {w.permutation()}")
    out = ConjugatingAutomorphism.identity(w.n)
    for over, under, sign in w.crossings():
        out = out.compose(_letter_automorphism(w.n, over, under, sign))
    return out


def sv_invariant(w: BraidWord) -> tuple:
    """Normal form of the action on RF_n: per generator, the sorted Magnus coefficients of its image."""
    return action(w).key()


def preserves_product(a: ConjugatingAutomorphism) -> bool:
    n = a.n
    prod = rf_word(n, range(1, n + 1))
    return a.apply(prod) == prod


def xi(eta1: int, eta2: int) -> ConjugatingAutomorphism:
    """The RF_2 automorphism x_1 -> x_2^eta1 x_1 x_2^-eta1, x_2 -> x_1^eta2 x_2 x_1^-eta2."""
    return ConjugatingAutomorphism((MagnusElement.gen(2, 2, -eta1), MagnusElement.gen(2, 1, -eta2)))


def xi_parameters(a: ConjugatingAutomorphism) -> tuple[int, int]:
    """Recover ``(eta1, eta2)`` from a 2-strand automorphism.

    The image of ``x_1`` is ``1 + X_1 + eta1 (X_2 X_1 - X_1 X_2)``, and
    symmetrically for ``x_2``.
    """
    if a.n != 2:
        raise BraidError("xi parameters are only defined on 2 strands")
    i1, i2 = a.images()
    return i1.coefficient((2, 1)), i2.coefficient((1, 2))


def random_pure_word(rng, n: int, length: int, classical: bool = False) -> BraidWord:
    """Random word of ``length`` letters made pure by appending virtual letters (unless classical)."""
    letters = []
    for _ in range(length):
        i = rng.randint(1, n - 1) if n > 1 else None
        if i is None:
            break
        if classical or rng.random() < 0.7:
            letters.append(sigma(i, rng.choice((1, -1))))
        else:
            letters.append(tau(i))
    w = BraidWord(n, tuple(letters))
    if classical:
        # close up with the inverse permutation's classical crossings doubled
        pos = list(w.permutation())
        extra = []
        for end in range(n - 1, 0, -1):
            for i in range(end):
                if pos[i] > pos[i + 1]:
                    pos[i], pos[i + 1] = pos[i + 1], pos[i]
                    extra.append(sigma(i + 1, rng.choice((1, -1))))
        return BraidWord(n, w.letters + tuple(extra))
    return w.closed_by_virtuals()


__all__ = [
    "BraidError",
    "BraidWord",
    "ConjugatingAutomorphism",
    "Letter",
    "MagnusElement",
    "NonPureWord",
    "action",
    "compile_braid",
    "parse_word",
    "preserves_product",
    "random_pure_word",
    "render_magnus",
    "rf_invert",
    "rf_multiply",
    "rf_word",
    "sigma",
    "substitute",
    "sv_invariant",
    "tau",
    "xi",
    "xi_parameters",
]
