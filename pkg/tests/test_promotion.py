import numpy as np
import pytest

import oracles
from conftest import fixture_pair
from posetdyn.catalog import random_consistent_restriction, random_poset
from posetdyn.errors import InvalidLabeling, LabelOutOfRange, MissingRestriction, NotGlobalBoundMode
from posetdyn.labelings import IncreasingLabeling, RestrictionFunction, induced_restriction, labeling_array
from posetdyn.poset import Poset, chain, linear_extensions
from posetdyn.promotion import (
    HOLE,
    BenderKnuth,
    SlideState,
    bender_knuth,
    binary_content,
    inc_promotion,
    inc_promotion_trace,
    jdt_promotion,
    jdt_slide,
    jdt_states,
    labeling_permutation,
    relabel,
    rotation,
    sliding_subposet,
    verify_bk_jdt,
    verify_equivariance,
    verify_resonance,
)

FIG2_F = {"a": 1, "b": 3, "c": 3, "d": 5, "e": 2}


def _vals(P, f):
    return tuple(f[p] for p in P.elements)


def test_figure2_involutions():
    doc, R = fixture_pair("fig2")
    P = doc.poset
    f1 = bender_knuth(P, R, FIG2_F, 1)
    assert f1.as_dict() == {"a": 2, "b": 3, "c": 3, "d": 5, "e": 1}
    assert bender_knuth(P, R, f1, 2) == f1
    f4 = bender_knuth(P, R, {"a": 2, "b": 4, "c": 4, "d": 5, "e": 1}, 4)
    assert f4.as_dict() == {"a": 2, "b": 5, "c": 4, "d": 5, "e": 1}


def test_figure2_trace():
    doc, R = fixture_pair("fig2")
    steps = inc_promotion_trace(doc.poset, R, FIG2_F)
    got = [(op, f.values) for op, f in steps]
    assert got == [
        ("start", (1, 3, 3, 5, 2)),
        ("rho_1", (2, 3, 3, 5, 1)),
        ("rho_2", (2, 3, 3, 5, 1)),
        ("rho_3", (2, 4, 4, 5, 1)),
        ("rho_4", (2, 5, 4, 5, 1)),
    ]
    assert inc_promotion(doc.poset, R, FIG2_F).values == (2, 5, 4, 5, 1)


def test_figure1_example_involutions():
    doc, R = fixture_pair("fig1")
    f = doc.labeling
    assert bender_knuth(doc.poset, R, f, 2).values == (1, 3, 2, 5, 7)
    assert bender_knuth(doc.poset, R, f, 4).values == (1, 2, 4, 5, 7)


def test_invalid_input():
    doc, R = fixture_pair("fig2")
    with pytest.raises(InvalidLabeling):
        inc_promotion(doc.poset, R, {"a": 3, "b": 3, "c": 3, "d": 5, "e": 2})
    with pytest.raises(MissingRestriction):
        inc_promotion(doc.poset, None, FIG2_F)


def test_constant_chain_identity():
    P = chain(3)
    R = RestrictionFunction({1: [1], 2: [2], 3: [3]})
    assert inc_promotion(P, R, (1, 2, 3)).values == (1, 2, 3)


def _random_cases(rng, count):
    cases = []
    for _ in range(count):
        P = random_poset(rng, int(rng.integers(1, 7)))
        cases.append((P, random_consistent_restriction(rng, P, max_gamma=14)))
    return cases


def test_rho_matches_oracle(rng, plain):
    for P, R in _random_cases(rng, 25):
        X = plain(P, R)
        bk = BenderKnuth(P, R)
        rows = labeling_array(P, R)
        for i in bk.levels:
            got = bk.apply(rows, [i])
            for r, g in zip(rows, got):
                f = dict(zip(X.elements, map(int, r)))
                want = oracles.rho(X.elements, X.less, X.Rd, f, i)
                assert tuple(map(int, g)) == _vals(P, want)
            # involution
            assert np.array_equal(bk.apply(got, [i]), rows)


def test_incpro_matches_oracle_and_is_bijective(rng, plain):
    for P, R in _random_cases(rng, 25):
        X = plain(P, R)
        rows = labeling_array(P, R)
        img = BenderKnuth(P, R).promote(rows)
        for r, g in zip(rows, img):
            f = dict(zip(X.elements, map(int, r)))
            assert tuple(map(int, g)) == _vals(P, oracles.incpro(X.elements, X.less, X.Rd, f))
        perm = labeling_permutation(rows, img)
        assert sorted(perm.tolist()) == list(range(rows.shape[0]))


def test_classical_bender_knuth_on_linear_extensions(rng, plain):
    for _ in range(10):
        P = random_poset(rng, int(rng.integers(2, 7)))
        X = plain(P)
        n = P.n
        R = induced_restriction(P, n)
        for ext in linear_extensions(P):
            f = dict(zip(P.elements, ext))
            for i in range(1, n):
                want = oracles.classical_bk(X.less, f, i)
                assert bender_knuth(P, R, f, i).values == _vals(P, want)


def test_jdt_figure11():
    doc, _ = fixture_pair("fig11")
    P, f = doc.poset, doc.labeling
    assert jdt_promotion(P, 8, f).values == (4, 2, 3, 6, 6, 5, 6, 8, 7, 8)
    assert sliding_subposet(P, 8, f) == {"a1", "a3", "b1", "b2", "b4", "c1", "c3"}
    assert inc_promotion(P, induced_restriction(P, 8), f).values == (4, 2, 3, 6, 6, 5, 6, 8, 7, 8)


def test_jdt_first_step_deletes_ones():
    doc, _ = fixture_pair("fig11")
    states = jdt_states(doc.poset, 8, doc.labeling)
    name, first = states[0]
    assert name == "1->HOLE"
    first = first.as_dict()
    holes = {p for p, v in first.items() if v is HOLE}
    assert holes == {"a1", "a3"}


def test_slide_primitives():
    P = chain(2)
    S = SlideState(P, 3, (HOLE, 2))
    T = jdt_slide(S, 2)
    assert T.values == (2, HOLE)
    assert jdt_slide(SlideState(P, 3, (1, 2)), 2).values == (1, 2)
    assert relabel(T, HOLE, 4).values == (2, 4)


def test_jdt_without_ones():
    P = chain(2)
    f = {1: 2, 2: 3}
    assert jdt_promotion(P, 4, f).values == (1, 2)
    assert sliding_subposet(P, 4, f) == frozenset()


def test_jdt_matches_oracle(rng, plain):
    for _ in range(25):
        P = random_poset(rng, int(rng.integers(1, 7)))
        q = P.longest_chain + int(rng.integers(0, 3))
        X = plain(P, induced_restriction(P, q))
        for r in labeling_array(P, X.R):
            f = dict(zip(X.elements, map(int, r)))
            want = oracles.jdt(X.elements, X.covers, q, f)
            assert jdt_promotion(P, q, f).values == _vals(P, want)


def test_jdt_rejects_general_restriction(plain):
    doc, R = fixture_pair("fig1")
    f = IncreasingLabeling(doc.poset, R, _vals(doc.poset, doc.labeling))
    with pytest.raises(NotGlobalBoundMode):
        jdt_promotion(doc.poset, 9, f)
    # the bare values are a valid labeling with labels at most 9
    X = plain(doc.poset)
    want = oracles.jdt(X.elements, X.covers, 9, doc.labeling)
    assert jdt_promotion(doc.poset, 9, doc.labeling).values == _vals(doc.poset, want)


def test_sliding_subposet_is_chain_union(rng):
    for _ in range(20):
        P = random_poset(rng, int(rng.integers(2, 7)))
        q = P.longest_chain + 1
        for r in labeling_array(P, induced_restriction(P, q)):
            S = sliding_subposet(P, q, r)
            for p in S:
                below = [a for a in P.lower_covers(p) if a in S]
                above = [b for b in P.upper_covers(p) if b in S]
                if not below:
                    assert p in P.minimal_elements()
                if not above:
                    assert p in P.maximal_elements()


def test_binary_content():
    assert binary_content(FIG2_F.values(), 5) == (1, 1, 1, 0, 1)
    assert rotation((1, 1, 1, 0, 1)) == (1, 1, 0, 1, 1)
    assert binary_content([1, 2, 3], 3) == (1, 1, 1)
    with pytest.raises(LabelOutOfRange):
        binary_content([6], 5)
    doc, R = fixture_pair("fig2")
    g = inc_promotion(doc.poset, R, FIG2_F)
    assert binary_content(g.values, 5) == (1, 1, 0, 1, 1)


def test_resonance_negative_control():
    doc, R = fixture_pair("fig2")
    bk = BenderKnuth(doc.poset, R)
    broken = [i for i in bk.levels if i != 2]
    res = verify_resonance(doc.poset, 5, promote=lambda rows: bk.apply(rows, broken))
    assert not res and res.counterexample is not None
    assert verify_resonance(doc.poset, 5)
    assert verify_resonance(Poset(["x"]), 3)


def test_equivariance_and_bkjdt_on_fixtures():
    for name in ("fig1", "fig2", "fig4", "fig10", "staircase3"):
        doc, R = fixture_pair(name)
        assert verify_equivariance(doc.poset, R), name
    for name in ("fig2", "fig4", "fig10"):
        doc, R = fixture_pair(name)
        assert verify_bk_jdt(doc.poset, doc.q), name
