"""Property checks shared by the property tests and the acceptance suite.

Each check takes one substitution and raises AssertionError on a violation.
Checks whose hypotheses do not hold for the input return without asserting.
"""
from autoshift.automorphisms import _require_kernel_hypotheses, build_labeling, kappa_of, search_automorphisms
from autoshift.compression import compress, decompress, perm_inverse, radius_zero_automorphisms, twist
from autoshift.pairs import (is_asymptotic_disjoint, minimal_sets, p_theta, pair_aperiodic_power, periodic_pairs,
                             reachable_pairs)
from autoshift.rules import compose
from autoshift.substitution import (SubstitutionError, fixed_point_prefix, is_finite_shift, is_injective, is_primitive,
                                    is_strongly_injective, language, odometer_digits, power, right_seeds)
from oracles import disjoint_by_position_pairs, strongly_injective_bruteforce


def images(theta):
    return {a: tuple(w) for a, w in theta.images.items()}


def diagonal_absorption(theta):
    for a in theta.alphabet:
        assert all(x == y for x, y in reachable_pairs(theta, a, a))
    for (x, y), _ in periodic_pairs(theta):
        assert x != y


def minimal_set_closure(theta):
    ms = minimal_sets(theta)
    sets = {frozenset(s) for s in ms.as_letters()}
    for s in sets:
        assert len(s) == ms.c
        for d in range(theta.r):
            assert frozenset(theta.images[a][d] for a in s) in sets


def labeling_bijective(theta):
    lab = build_labeling(theta)
    ms = minimal_sets(theta)
    for s in ms.as_letters():
        assert sorted(lab.f[a] for a in s) == list(range(ms.c))


def _kernel_ok(theta):
    try:
        _require_kernel_hypotheses(theta)
    except SubstitutionError:
        return False
    return True


def kappa_additivity(theta, p_max=1):
    if not _kernel_ok(theta) or theta.n > 4:
        return
    found = search_automorphisms(theta, p_max)
    for f, kf in found:
        for g, kg in found:
            assert kappa_of(theta, compose(theta, f, g), p_max) == kf + kg


def language_power_invariance(theta, L=4):
    for n in (2, 3):
        assert language(power(theta, n), L) == language(theta, L)


def compression_soundness(theta, ks=(2, 3)):
    if not is_primitive(theta)[0] or is_finite_shift(theta):
        return
    for k in ks:
        c, dec = compress(theta, k)
        for L in (1, 2):
            big = language(theta, k * L)
            assert all(decompress(dec, w) in big for w in language(c, L))


def twist_involutivity(theta):
    ident = {a: a for a in theta.alphabet}
    assert twist(theta, ident) == theta
    if not _kernel_ok(theta):
        return
    for tau in radius_zero_automorphisms(theta):
        sq = tau
        for _ in range(theta.r - 1):
            sq = {a: tau[sq[a]] for a in tau}
        if sq == tau:
            assert twist(twist(theta, tau), perm_inverse(tau)) == theta


def odometer_refinement(theta, n=3):
    if not is_primitive(theta)[0] or is_finite_shift(theta) or not is_injective(theta):
        return
    R = theta.r ** n
    u = fixed_point_prefix(theta, right_seeds(theta)[0], 4 * R)
    for j in (2 * R, 2 * R + 1, 2 * R + theta.r + 2):
        fine = odometer_digits(theta, u, j, n)
        coarse = odometer_digits(theta, u, j, n - 1)
        assert fine.digits[:n - 1] == coarse.digits
        assert fine.value() == j % theta.r ** n


def asymptotic_disjoint_vs_oracle(theta):
    if theta.r ** p_theta(theta) > 81:
        return
    _, tp = pair_aperiodic_power(theta)
    depth = 3 * tp.n ** 2 + 5
    for a in tp.alphabet:
        for b in tp.alphabet:
            assert is_asymptotic_disjoint(tp, a, b) == disjoint_by_position_pairs(images(tp), a, b, depth)


def strong_injectivity_vs_oracle(theta):
    if not is_injective(theta):
        return
    assert is_strongly_injective(theta)[0] == strongly_injective_bruteforce(images(theta), 3)


CHECKS = {
    "pair-graph diagonal absorption": diagonal_absorption,
    "minimal sets closed under columns": minimal_set_closure,
    "f restricted to a minimal set is bijective": labeling_bijective,
    "kappa additivity": kappa_additivity,
    "language invariance under power": language_power_invariance,
    "compression soundness": compression_soundness,
    "twist involutivity": twist_involutivity,
    "odometer digit refinement": odometer_refinement,
    "asymptotic disjointness oracle": asymptotic_disjoint_vs_oracle,
    "strong injectivity oracle": strong_injectivity_vs_oracle,
}
