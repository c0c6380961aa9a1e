import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import arrow_diagrams, gauss_diagrams, random_diagram
from gausscalc.catalog import NAMES, evaluate_catalog, load_catalog
from gausscalc.fixtures import load_diagram
from gausscalc.formulae import Formula, expand_i, pair, pair_bruteforce
from gausscalc.gauss import ArrowDiagram, DiagramError, GaussDiagram


@st.composite
def formulas(draw, n: int):
    terms = draw(st.lists(st.tuples(arrow_diagrams(n, 3), st.integers(-3, 3)), max_size=4))
    return Formula(n, terms)


def test_formula_drops_zero_and_merges_terms():
    a = ArrowDiagram(((("x", "T"), ("x", "H")),))
    b = ArrowDiagram(((("y", "T"), ("y", "H")),))  # same canonical form as a
    f = Formula(1, [(a, 2), (b, -2)])
    assert not f and len(f) == 0
    g = Formula(1, [(a, 2), (b, 1)])
    assert g.coefficient(a) == 3
    assert (g - g) == Formula(1)
    assert (2 * g).coefficient(a) == 6
    with pytest.raises(DiagramError):
        Formula(2, [(a, 1)])
    with pytest.raises(DiagramError):
        g + Formula(2)


def test_expand_i_examples():
    e = GaussDiagram.empty(1)
    assert expand_i(e) == Formula.single(ArrowDiagram.empty(1))
    neg = GaussDiagram(((("a", "T"), ("a", "H")),), (("a", -1),))
    a = ArrowDiagram(neg.strands)
    assert expand_i(neg) == Formula(1, [(ArrowDiagram.empty(1), 1), (a, -1)])


@given(gauss_diagrams(max_arrows=6))
def test_expand_i_term_count(g):
    assert len(expand_i(g)) <= 2 ** len(g)


def test_pair_examples():
    cat = load_catalog()
    for name in NAMES:
        f = cat[name].formula
        assert pair(f, GaussDiagram.empty(f.n)) == 0
    assert pair(cat["v22"].formula, load_diagram("K")) == -1
    with pytest.raises(DiagramError):
        pair(cat["S2"].formula, load_diagram("K"))


def test_evaluate_catalog_by_arity():
    vals = evaluate_catalog(load_diagram("L"))
    assert set(vals) == {"S2", "Q2", "V2", "V2star"}
    assert vals["S2"] == 1
    assert evaluate_catalog(load_diagram("T"))["Q2"] == 1
    assert evaluate_catalog(load_diagram("Tp"))["Q2"] == -1
    assert evaluate_catalog(load_diagram("C")) == {"M2": 1}
    assert evaluate_catalog(load_diagram("Cp")) == {"M2": 0}
    with pytest.raises(DiagramError):
        evaluate_catalog(load_diagram("C"), ["S2"])


@settings(max_examples=100)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(formulas(n), formulas(n), gauss_diagrams(n=n, max_arrows=6))))
def test_pair_is_bilinear_and_matches_expansion(data):
    f1, f2, g = data
    assert pair(f1 + f2, g) == pair(f1, g) + pair(f2, g)
    assert pair(f1, g) == pair_bruteforce(f1, g)


def test_pair_matches_expansion_on_catalog():
    rng = random.Random(11)
    cat = load_catalog()
    for _ in range(100):
        n = rng.randint(1, 3)
        g = random_diagram(rng, n, rng.randint(0, 8))
        for e in cat.values():
            if e.n == n:
                assert pair(e.formula, g) == pair_bruteforce(e.formula, g)
