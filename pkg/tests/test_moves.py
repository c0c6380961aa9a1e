import random
from collections import Counter

import pytest
from hypothesis import given, settings

from conftest import gauss_diagrams, random_diagram, with_move_sites
from gausscalc.catalog import load_catalog
from gausscalc.fixtures import MOVE_CONDITIONS, load_diagram
from gausscalc.formulae import pair
from gausscalc.gauss import GaussDiagram, canonicalize, is_self_arrow
from gausscalc.mortier import certify
from gausscalc.sweep import invariance_sweep
from gausscalc.moves import (
    Certificate,
    IllegalMove,
    MoveInstance,
    MoveKind,
    MoveSet,
    SearchExhausted,
    SearchStats,
    apply,
    neighbors,
    search_equivalent,
    unknot_welded_long,
)

EVERYTHING = MoveSet.of("welded", sv=True, sc=True)


def gd(signs, *words):
    strands = tuple(tuple((int(t[:-1]), t[-1]) for t in w.split()) for w in words)
    return canonicalize(GaussDiagram(strands, tuple(signs.items())))


def test_moveset_modes():
    assert MoveKind.TC in MoveSet.of("welded").kinds
    assert MoveKind.TC not in MoveSet.of("virtual").kinds
    with pytest.raises(ValueError):
        MoveSet(frozenset({MoveKind.TC}), "virtual")
    with pytest.raises(ValueError):
        MoveSet(frozenset(), "classical")


def test_r1_deletion_of_a_kink():
    d = gd({1: 1}, "1T 1H")
    assert apply(d, MoveInstance(MoveKind.R1_del, (1,))) == GaussDiagram.empty(1)
    assert [r for _, r in neighbors(d, MoveSet.of("virtual"))] == [GaussDiagram.empty(1)]


def test_sc_flips_sign_and_orientation():
    d = gd({1: 1, 2: -1}, "1T 2T 1H", "2H")
    assert apply(d, MoveInstance(MoveKind.SC, (1,))) == gd({1: -1, 2: -1}, "1H 2T 1T", "2H")
    with pytest.raises(IllegalMove, match="not a self-arrow"):
        apply(d, MoveInstance(MoveKind.SC, (2,)))


def test_sv_deletion():
    d = gd({1: 1, 2: -1}, "1T 2T 1H", "2H")
    assert apply(d, MoveInstance(MoveKind.SV_del, (1,))) == gd({1: -1}, "1T", "1H")


def test_tc_needs_two_adjacent_tails():
    d = gd({1: 1, 2: 1}, "1T 2H 1H 2T")
    with pytest.raises(IllegalMove, match="adjacent tails"):
        apply(d, MoveInstance(MoveKind.TC, (1, 2)))


def test_illegal_sites_explain_themselves():
    d = gd({1: 1, 2: 1}, "1T 2T", "1H 2H")
    with pytest.raises(IllegalMove, match="opposite"):
        apply(d, MoveInstance(MoveKind.R2_del, (1, 2)))
    with pytest.raises(IllegalMove, match="not adjacent"):
        apply(d, MoveInstance(MoveKind.R1_del, (1,)))
    with pytest.raises(IllegalMove, match="no arrow"):
        apply(d, MoveInstance(MoveKind.SV_del, (7,)))
    with pytest.raises(IllegalMove, match="R2 insertion"):
        apply(d, MoveInstance(MoveKind.R2_add, (), ((1, 0, 1, "T"), (1, 2, 2, "T"), (2, 0, 1, "H"), (2, 0, 2, "H")), (1, -1)))


def test_r2_pair_from_a_braid_word_cancels():
    d = gd({1: 1, 2: -1}, "1T 2T", "1H 2H")
    assert apply(d, MoveInstance(MoveKind.R2_del, (1, 2))) == GaussDiagram.empty(2)


def test_tc_turns_c_into_c_prime():
    c, cp = load_diagram("C"), load_diagram("Cp")
    steps = [m for m, r in neighbors(c, MoveSet.of("welded")) if r == cp]
    assert [m.kind for m in steps] == [MoveKind.TC]
    assert Certificate(c, tuple(steps), cp).verify()
    assert not any(r == cp for _, r in neighbors(c, MoveSet.of("virtual", sc=True, sv=True)))


@settings(max_examples=60, deadline=None)
@given(gauss_diagrams(max_arrows=5))
def test_neighbors_are_sound(d):
    d = with_move_sites(random.Random(len(d)), d)
    for m, r in neighbors(d, EVERYTHING, len(d) + 1):
        assert apply(d, m) == r
        assert r == canonicalize(r)
        assert r != canonicalize(d)


def _arrow_data(d):
    sm = d.sign_map
    out = []
    for a in d.arrow_ids:
        t, h = d.ends_of(a)
        out.append((sm[a], t.strand, h.strand))
    return Counter(out)


@given(gauss_diagrams(max_arrows=6))
def test_tc_keeps_arrow_data(d):
    for m, r in neighbors(d, MoveSet(frozenset({MoveKind.TC}), "welded")):
        assert _arrow_data(r) == _arrow_data(d)


def test_certified_formulas_are_invariant_under_their_moves():
    report = invariance_sweep(200, 8)
    assert not report.violations, report.violations[:3]
    assert set(report.checked) == set(MoveKind)


def test_uncertified_moves_do_change_values():
    # the invariance test above has teeth: refused conditions are really needed
    v22 = load_catalog()["v22"].formula
    m2 = load_catalog()["M2"].formula
    k = load_diagram("K")
    c = unknot_welded_long(k)
    values = [pair(v22, k)]
    cur = c.source
    for m in c.steps:
        cur = apply(cur, m)
        values.append(pair(v22, cur))
    assert len(set(values)) > 1
    assert pair(m2, load_diagram("C")) != pair(m2, load_diagram("Cp"))


def test_search_trivial_and_bounds():
    t = load_diagram("T")
    c = search_equivalent(t, t, MoveSet.of("virtual"), 0, 2)
    assert c is not None and len(c) == 0
    assert search_equivalent(t, load_diagram("Tp"), MoveSet.of("virtual"), 2, 2) is None
    with pytest.raises(ValueError):
        search_equivalent(t, GaussDiagram.empty(1), MoveSet.of("virtual"), 1, 2)


def test_search_exhaustion_is_distinct_from_not_found():
    stats = SearchStats()
    with pytest.raises(SearchExhausted):
        search_equivalent(load_diagram("T"), load_diagram("B"), EVERYTHING, 4, 4, max_states=50, stats=stats)
    assert stats.visited > 50


def test_search_t_and_t_prime():
    c = search_equivalent(load_diagram("T"), load_diagram("Tp"), MoveSet.of("welded", sv=True), 6, 3)
    assert c is not None and c.verify()
    kinds = Counter(m.kind for m in c.steps)
    assert kinds[MoveKind.SV_del] == 2
    assert MoveKind.TC not in kinds


def test_search_is_deterministic():
    args = (load_diagram("T"), load_diagram("Tp"), MoveSet.of("welded", sv=True), 6, 3)
    assert search_equivalent(*args).steps == search_equivalent(*args).steps


def test_search_l_and_b():
    c = search_equivalent(load_diagram("L"), load_diagram("B"), MoveSet.of("welded", sv=True), 2, 3)
    assert c is not None and c.verify()
    assert [m.kind for m in c.steps] == [MoveKind.SV_del]


def test_certificate_replay_detects_tampering():
    c = search_equivalent(load_diagram("L"), load_diagram("B"), MoveSet.of("welded", sv=True), 2, 3)
    bad = Certificate(c.source, c.steps, load_diagram("T"))
    assert not bad.verify()
    wrong = Certificate(c.source, (MoveInstance(MoveKind.R1_del, (1,)),), c.target)
    with pytest.raises(IllegalMove, match="step 1"):
        wrong.replay()


def test_unknotter_examples():
    e = unknot_welded_long(GaussDiagram.empty(1))
    assert len(e) == 0 and e.verify()
    for name in ("K", "K0"):
        c = unknot_welded_long(load_diagram(name))
        assert c.verify() and len(c.target) == 0
        assert {m.kind for m in c.steps} <= {MoveKind.SC, MoveKind.TC, MoveKind.R1_del}
        sv = unknot_welded_long(load_diagram(name), allow_sc=False)
        assert [m.kind for m in sv.steps] == [MoveKind.SV_del] * len(load_diagram(name))
        assert sv.verify()
    with pytest.raises(ValueError):
        unknot_welded_long(load_diagram("T"))


def test_k0_needs_tails_commute():
    k0 = load_diagram("K0")
    empty = GaussDiagram.empty(1)
    stats = SearchStats()
    assert search_equivalent(k0, empty, MoveSet.of("virtual", sc=True), 8, 5, stats=stats) is None
    # the virtual search closed its whole component below 6 arrows
    assert stats.depth_reached < 8
    assert search_equivalent(k0, empty, MoveSet.of("welded", sc=True), 8, 4) is not None


def unknotter_bound(k: int) -> int:
    # each arrow needs at most (gap - 1) TC steps with up to two SC flips each, plus one R1
    return 3 * k * k - 2 * k


def test_unknotter_terminates_on_random_long_knots():
    rng = random.Random(99)
    worst = Counter()
    for _ in range(500):
        k = rng.randint(0, 12)
        d = random_diagram(rng, 1, k)
        c = unknot_welded_long(d)
        assert c.verify() and len(c.target) == 0
        assert len(c) <= unknotter_bound(k)
        worst[k] = max(worst[k], len(c))
        assert len(unknot_welded_long(d, allow_sc=False)) == k
    assert worst[12] <= unknotter_bound(12)
