import pytest
from hypothesis import assume, given, settings

from autoshift.automatic import (AutomaticPair, FiniteImage, aligned_injectivity_witness, bijective_presentation,
                                 center_difference_witness, factor_to_radius_zero, fiber_sizes,
                                 image_is_infinite, indistinguishability_classes, indistinguishable, is_minimal,
                                 mef_descriptor, minimize, replay, verify_factor_automorphism,
                                 verify_factor_map)
from autoshift.pairs import is_pair_aperiodic, p_theta
from autoshift.rules import LocalRule
from autoshift.substitution import SubstitutionError, find_renaming, height, language, power, suspension
from conftest import S, coding, images, primitive_substitutions, rule, sub
from oracles import indistinguishable_by_expansion

TM = S("a->ab b->ba")
THETA_PRIME = sub("theta_prime")
TAU_PRIME = coding("theta_prime", THETA_PRIME)


def test_indistinguishable_examples():
    assert not indistinguishable(AutomaticPair(THETA_PRIME, TAU_PRIME), "a", "c")
    assert indistinguishable(AutomaticPair(power(THETA_PRIME, 2), TAU_PRIME), "a", "c")
    assert indistinguishable(AutomaticPair(TM), "a", "a")


def test_distinguishing_column():
    # column 1 separates a and c
    assert TAU_PRIME[THETA_PRIME.images["a"][1]] == "y"
    assert TAU_PRIME[THETA_PRIME.images["c"][1]] == "z"


@pytest.mark.parametrize("name", ["theta_prime", "aac_bca_bba", "radius_large", "two_to_one"])
def test_indistinguishable_matches_expansion(name):
    theta = sub(name)
    tau = coding(name, theta)
    for P in (1, 2):
        tp = power(theta, P)
        pair = AutomaticPair(tp, tau)
        for a in tp.alphabet:
            for b in tp.alphabet:
                expect = indistinguishable_by_expansion(images(tp), tau.map, a, b, 3)
                assert indistinguishable(pair, a, b) == expect


def test_minimize_examples():
    pres = minimize(AutomaticPair(power(THETA_PRIME, 2), TAU_PRIME))
    assert find_renaming(pres.theta_star, sub("theta_prime_minimized")) is not None
    with pytest.raises(SubstitutionError):
        minimize(AutomaticPair(sub("aac_bca_bba"), coding("aac_bca_bba")))
    pres = bijective_presentation(AutomaticPair(sub("aac_bca_bba"), coding("aac_bca_bba")))
    assert find_renaming(pres.theta_star, power(sub("xxy_yyx"), pres.power)) is not None
    pres = minimize(AutomaticPair(TM))
    assert pres.is_trivial()


def test_bijective_presentation_pipeline():
    pres = bijective_presentation(AutomaticPair(THETA_PRIME, TAU_PRIME))
    assert pres.power == 2
    assert sorted(pres.classes.values()) == [("a", "c"), ("b",), ("d",)]
    q = pres.theta_star.rename({c: pres.tau_star[c] for c in pres.theta_star.alphabet})
    assert q == sub("theta_prime_minimized")
    assert is_minimal(pres.pair())


def test_bijective_presentation_unchanged_cases():
    pres = bijective_presentation(AutomaticPair(TM))
    assert pres.is_trivial() and pres.theta_star == TM
    t = S("a->aac b->bca c->bba")
    pres = bijective_presentation(AutomaticPair(t))
    assert all(len(g) == 1 for g in pres.classes.values())
    assert pres.theta_star == power(t, pres.power)


def test_finite_image_rejected():
    pair = AutomaticPair(TM, {"a": "x", "b": "x"})
    assert not image_is_infinite(pair)
    with pytest.raises(FiniteImage):
        bijective_presentation(pair)


def test_pre_pipeline_witness():
    pair = AutomaticPair(THETA_PRIME, TAU_PRIME)
    w = center_difference_witness(pair)
    assert w is not None and set(w["letters"]) == {"a", "c"}
    wa, wb = w["words"]
    assert [i for i in range(len(wa)) if wa[i] != wb[i]] == [w["index"]]
    assert TAU_PRIME(wa) == TAU_PRIME(wb)
    assert aligned_injectivity_witness(pair, 16) is not None


def test_replay_reproduces_the_record():
    pair = AutomaticPair(THETA_PRIME, TAU_PRIME)
    pres = bijective_presentation(pair)
    again = replay(pair, pres.as_dict())
    assert again.theta_star == pres.theta_star
    bad = pres.as_dict()
    bad["provenance"][0]["P"] = 1
    with pytest.raises(SubstitutionError):
        replay(pair, bad)


def test_factor_to_radius_zero_table2():
    theta = sub("no_automorphism")
    pair = factor_to_radius_zero(theta, rule("table2"))
    assert pair.theta.n == len(language(theta, 2))
    eta = sub("no_automorphism_eta")
    for L in (1, 3, 6):
        assert pair.image_language(L) == language(eta, L)


def test_factor_to_radius_zero_identity():
    ident = LocalRule(0, 0, {(a,): a for a in TM.alphabet})
    pair = factor_to_radius_zero(TM, ident)
    assert find_renaming(pair.theta, TM) is not None


def test_table2_fibres_have_three_points():
    theta = sub("no_automorphism")
    f = rule("table2")
    assert verify_factor_map(theta, f, sub("no_automorphism_eta"), 12)
    for W in (8, 16, 24):
        assert set(fiber_sizes(theta, f, sub("no_automorphism_eta"), W)) == {3}


def test_table1_factor_automorphism():
    theta = sub("radius_large")
    pair = AutomaticPair(theta, coding("radius_large", theta))
    rep = verify_factor_automorphism(pair, rule("table1"), window=64)
    assert rep["ok"] and rep["radius"] == (2, 2)
    assert {w[0]: v for w, v in rep["lift"].shrink(theta).table.items()} == {"a": "b", "b": "a", "c": "d", "d": "c"}


def test_table1_corrupted_cell_rejected():
    theta = sub("radius_large")
    pair = AutomaticPair(theta, coding("radius_large", theta))
    g = rule("table1")
    key = sorted(g.table)[0]
    g.table[key] = "z" if g.table[key] != "z" else "x"
    assert not verify_factor_automorphism(pair, g, window=32)["ok"]


def test_mef_descriptor():
    assert mef_descriptor(AutomaticPair(TM)) == (2, 1)
    assert mef_descriptor(AutomaticPair(THETA_PRIME, TAU_PRIME)) == (3, 1)
    t = suspension(TM, 3)
    assert mef_descriptor(AutomaticPair(t)) == (2, 3)
    collapse_rotation = {a: a[0] for a in t.alphabet}
    r, h = mef_descriptor(AutomaticPair(t, collapse_rotation))
    assert h in (1, 3) and height(t) % h == 0


@settings(max_examples=100, deadline=None)
@given(primitive_substitutions(max_letters=4, max_r=3))
def test_minimized_pairs_are_minimal(theta):
    assume(theta.r ** p_theta(theta) <= 27)
    A = theta.alphabet
    tau = {a: ("x" if i % 2 else "y") for i, a in enumerate(A)}
    pair = AutomaticPair(theta, tau)
    assume(image_is_infinite(pair))
    pres = bijective_presentation(pair, check=False)
    assert is_pair_aperiodic(power(theta, pres.power))
    assert is_minimal(pres.pair())
    for L in (1, 2, 4):
        assert pres.pair().image_language(L) == AutomaticPair(power(theta, pres.power), tau).image_language(L)


@settings(max_examples=100, deadline=None)
@given(primitive_substitutions(max_letters=4, max_r=3))
def test_classes_are_indistinguishability(theta):
    tau = {a: ("x" if i == 0 else "y") for i, a in enumerate(theta.alphabet)}
    pair = AutomaticPair(theta, tau)
    cls = indistinguishability_classes(pair)
    where = {a: i for i, g in enumerate(cls) for a in g}
    for a in theta.alphabet:
        for b in theta.alphabet:
            assert (where[a] == where[b]) == indistinguishable(pair, a, b)
