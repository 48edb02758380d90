import pytest
from hypothesis import assume, given, settings

from autoshift.pairs import (PairGraph, column_number, is_asymptotic_disjoint, is_pair_aperiodic,
                             le_disjoint_witness, minimal_sets, p_theta, pair_aperiodic_power, periodic_pairs,
                             reachable_pairs, replay)
from autoshift.substitution import SubstitutionError, power
from conftest import S, SUBSTITUTION_FIXTURES, images, primitive_substitutions, sub
from oracles import column_number_bruteforce, column_sets, disjoint_by_expansion, disjoint_by_position_pairs

TM = S("a->ab b->ba")
THETA_PRIME = S("a->abd b->aad c->add d->acd")


def bfs_pairs(theta, a, b):
    seen = {(a, b)}
    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        for d in range(theta.r):
            q = (theta.images[x][d], theta.images[y][d])
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def test_pair_graph_shape():
    t = S("a->aac b->bca c->bba")
    g = PairGraph(t)
    edges = list(g.edges())
    assert len(edges) == t.n ** 2 * t.r
    assert all(q[0] == q[1] for p, _, q in edges if p[0] == p[1])


def test_reachable_pairs_examples():
    assert set(reachable_pairs(TM, "a", "b")) == {("a", "b"), ("b", "a")}
    assert set(reachable_pairs(TM, "a", "a")) == {("a", "a"), ("b", "b")}
    t = S("a->aac b->bca c->bba")
    got = reachable_pairs(t, "b", "c")
    assert set(got) == bfs_pairs(t, "b", "c")
    assert ("a", "a") not in got or any(x == y for x, y in got)
    for pair, w in got.items():
        assert replay(t, ("b", "c"), w) == pair


def test_periodic_pairs_examples():
    pp = dict(periodic_pairs(THETA_PRIME))
    assert pp[("a", "c")] == 2
    assert dict(periodic_pairs(TM)) == {("a", "b"): 1, ("b", "a"): 1}
    assert periodic_pairs(S("a->ab b->ab")) == []


def test_pair_aperiodic_power_examples():
    assert pair_aperiodic_power(TM)[0] == 1
    P, tp = pair_aperiodic_power(THETA_PRIME)
    assert P == 2 and tp == power(THETA_PRIME, 2)
    assert not is_pair_aperiodic(THETA_PRIME)
    assert is_pair_aperiodic(tp)


def test_asymptotic_disjoint_small_expansion():
    for a in "ab":
        for b in "ab":
            assert is_asymptotic_disjoint(TM, a, b) == disjoint_by_expansion(images(TM), a, b, 8)


def test_asymptotic_disjoint_examples():
    assert not is_asymptotic_disjoint(TM, "a", "a")
    assert is_asymptotic_disjoint(TM, "a", "b")
    _, t = pair_aperiodic_power(S("a->ac b->ac c->cb"))
    assert not is_asymptotic_disjoint(t, "a", "b")
    with pytest.raises(SubstitutionError):
        is_asymptotic_disjoint(S("a->ac b->ac c->cb"), "a", "c")


def test_minimal_sets_examples():
    ms = minimal_sets(S("a->aac b->bba c->bca"))
    assert ms.c == 2
    assert ms.as_letters() == [("a", "b"), ("a", "c")]
    ms = minimal_sets(TM)
    assert ms.c == 2 and ms.as_letters() == [("a", "b")]
    ms = minimal_sets(S("x->xy y->xx"))
    assert ms.c == 1


@pytest.mark.parametrize("name", SUBSTITUTION_FIXTURES)
def test_column_number_matches_bruteforce(name):
    theta = sub(name)
    assert column_number(theta) == column_number_bruteforce(images(theta))


def test_le_disjoint_witness():
    w = le_disjoint_witness(TM, "a", "b")
    assert w["pair"] in {("a", "b"), ("b", "a")}
    tp = power(THETA_PRIME, 2)
    w = le_disjoint_witness(tp, "a", "d")
    a, b = w["pair"]
    assert a != b and (a, b) in dict(periodic_pairs(tp))
    for cd, word in w["certificates"].items():
        assert len(word) == w["length"]
        assert replay(tp, ("a", "d"), word) == cd
    with pytest.raises(SubstitutionError):
        le_disjoint_witness(S("a->ac b->ac c->cb"), "a", "b")


@settings(max_examples=200, deadline=None)
@given(primitive_substitutions())
def test_diagonal_absorption(theta):
    for a in theta.alphabet:
        assert all(x == y for x, y in reachable_pairs(theta, a, a))
    for (x, y), _ in periodic_pairs(theta):
        assert x != y


@settings(max_examples=200, deadline=None)
@given(primitive_substitutions())
def test_minimal_sets_closed_under_columns(theta):
    ms = minimal_sets(theta)
    sets = {frozenset(s) for s in ms.as_letters()}
    for s in sets:
        assert len(s) == ms.c
        for d in range(theta.r):
            assert frozenset(theta.images[a][d] for a in s) in sets
    assert ms.c == min(len(s) for s in column_sets(images(theta), theta.n * 4))


@settings(max_examples=200, deadline=None)
@given(primitive_substitutions())
def test_asymptotic_disjoint_matches_expansion(theta):
    assume(theta.r ** p_theta(theta) <= 81)
    P, tp = pair_aperiodic_power(theta)
    depth = 3 * tp.n ** 2 + 5
    for a in tp.alphabet:
        for b in tp.alphabet:
            assert is_asymptotic_disjoint(tp, a, b) == disjoint_by_position_pairs(images(tp), a, b, depth)
