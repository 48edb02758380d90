"""Automorphisms of substitution shifts: letter exchanges, rule checks, search."""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

from .groups import PermGroup, centralizer, cycle_string, inverse, mul
from .kappa import KappaValue, periodic_kappas
from .pairs import exact_step_pairs, minimal_sets, reachable_pairs
from .rules import LocalRule, compose, identity_rule, materialize, same_map
from .substitution import (LetterCoding, Substitution, SubstitutionError, height, is_finite_shift,
                           is_injective, language, language_codes, power, pure_base,
                           require_primitive)


class NotAnAutomorphism(SubstitutionError):
    pass


class RuleNotTotal(SubstitutionError):
    def __init__(self, missing):
        self.missing = missing
        shown = ", ".join("".join(w) for w in missing[:8])
        more = "" if len(missing) <= 8 else f" and {len(missing) - 8} more"
        super().__init__(f"rule is undefined on language windows {shown}{more}")


# -- labeling and the group G ------------------------------------------------

class Labeling:
    """M0 = theta^{k0}(A)_{j0}, fixed pointwise by that column; f0 sorted order on M0.

    `word` is the digit string (leading digit first) of the column map; `f`
    maps letters to 0-based labels (printed 1-based).
    """

    __slots__ = ("theta", "M0", "k0", "j0", "word", "f0", "f")

    def __init__(self, theta, M0, word, f0, f):
        self.theta = theta
        self.M0 = M0
        self.word = tuple(word)
        self.k0 = len(word)
        j = 0
        for d in word:
            j = j * theta.r + d
        self.j0 = j
        self.f0 = f0
        self.f = f

    def __repr__(self):
        f = ", ".join(f"{a}:{v + 1}" for a, v in self.f.items())
        return f"Labeling(M0={''.join(self.M0)}, k0={self.k0}, j0={self.j0}, f={{{f}}})"


def _column_of_word(theta: Substitution, word) -> tuple:
    m = tuple(range(theta.n))
    for d in word:
        col = theta.cols[d]
        m = tuple(col[x] for x in m)
    return m


def build_labeling(theta: Substitution, order=None) -> Labeling:
    """The labeling f of the minimal sets.

    `order` optionally lists M0 in the order defining f0 (any bijection works;
    the default is the alphabet order).
    """
    ms = minimal_sets(theta)
    S = ms.sets[0]
    w = ms.paths[S]
    m = _column_of_word(theta, w)
    # power of the column that fixes M0 pointwise
    perm = {x: m[x] for x in S}
    e = 1
    cur = dict(perm)
    while any(cur[x] != x for x in S):
        cur = {x: perm[cur[x]] for x in S}
        e += 1
    word = tuple(w) * e
    mm = _column_of_word(theta, word)
    A = theta.alphabet
    M0 = tuple(A[x] for x in sorted(S))
    if order is not None:
        if sorted(order) != sorted(M0):
            raise SubstitutionError("order must list the letters of M0")
        M0 = tuple(order)
    f0 = {a: i for i, a in enumerate(M0)}
    f = {a: f0[A[mm[theta.index[a]]]] for a in A}
    return Labeling(theta, M0, word, f0, f)


def sigma_perms(theta: Substitution, labeling: Labeling | None = None, f=None) -> dict:
    """{(M, j): sigma_{M,j}} with sigma^{-1}(f(a)) = f(theta(a)_j) for a in M.

    M is a tuple of letters; permutations are tuples on 0..c-1.
    """
    if f is None:
        labeling = labeling or build_labeling(theta)
        f = labeling.f
    ms = minimal_sets(theta)
    c = ms.c
    out = {}
    for M in ms.as_letters():
        if sorted(f[a] for a in M) != list(range(c)):
            raise SubstitutionError(f"labeling is not a bijection on {''.join(M)}")
        for j in range(theta.r):
            inv = [None] * c
            for a in M:
                inv[f[a]] = f[theta.images[a][j]]
            if sorted(inv) != list(range(c)):
                raise SubstitutionError("column is not a bijection between minimal sets")
            out[(M, j)] = inverse(tuple(inv))
    return out


def group_G(theta: Substitution, labeling: Labeling | None = None, f=None) -> PermGroup:
    sig = sigma_perms(theta, labeling, f)
    c = minimal_sets(theta).c
    names = [f"sigma_{{{''.join(M)}}},{j}" for (M, j) in sig]
    return PermGroup(c, list(sig.values()), names)


def groups_conjugate(G: PermGroup, H: PermGroup) -> bool:
    """Is H = h G h^{-1} for some h in the symmetric group?"""
    if G.degree != H.degree or len(G) != len(H):
        return False
    target = set(H.elements)
    for h in permutations(range(G.degree)):
        hi = inverse(h)
        if all(mul(h, mul(g, hi)) in target for g in G.generators):
            return True
    return False


# -- letter exchanging automorphisms ------------------------------------------

def commutes_with_power(theta: Substitution, tau: dict, n: int) -> bool:
    """tau o theta^n = theta^n o tau, checked on the pair graph."""
    ix = theta.index
    t = [ix[tau[a]] for a in theta.alphabet]
    start = {(x, t[x]) for x in range(theta.n)}
    return all(t[x] == y for x, y in exact_step_pairs(theta, start, n))


def _require_kernel_hypotheses(theta: Substitution):
    require_primitive(theta)
    if not is_injective(theta):
        raise SubstitutionError("substitution is not injective")
    if is_finite_shift(theta):
        raise SubstitutionError("the shift is finite")
    if height(theta) != 1:
        raise SubstitutionError("height is not 1")


def centralizer_lifts(theta: Substitution, labeling: Labeling | None = None) -> list:
    """For each tau' in C(G): the letter map f|_M^{-1} tau' f, or None if it depends on M."""
    labeling = labeling or build_labeling(theta)
    f = labeling.f
    ms = minimal_sets(theta)
    C = centralizer(group_G(theta, labeling))
    out = []
    for tp in C.elements:
        tau = {}
        ok = True
        for M in ms.as_letters():
            back = {f[a]: a for a in M}
            for a in M:
                b = back[tp[f[a]]]
                if tau.setdefault(a, b) != b:
                    ok = False
        out.append((tp, tau if ok and len(tau) == theta.n else None))
    return out


def radius_zero_automorphisms(theta: Substitution, labeling: Labeling | None = None) -> list:
    """All letter permutations that are automorphisms, as dicts, identity first."""
    _require_kernel_hypotheses(theta)
    c = minimal_sets(theta).c
    cf = math.factorial(c)
    out = []
    for tp, tau in centralizer_lifts(theta, labeling):
        if tau is None or len(set(tau.values())) != theta.n:
            continue
        if commutes_with_power(theta, tau, cf):
            out.append(tau)
    out.sort(key=lambda t: [theta.index[t[a]] for a in theta.alphabet])
    return out


def perm_string(theta: Substitution, tau: dict) -> str:
    p = tuple(theta.index[tau[a]] for a in theta.alphabet)
    return cycle_string(p, theta.alphabet)


# -- d* and reduction ----------------------------------------------------------

def dstar(w1, w2) -> Fraction:
    if len(w1) != len(w2):
        raise SubstitutionError("words have different lengths")
    if not w1:
        raise SubstitutionError("empty words")
    return Fraction(sum(1 for a, b in zip(w1, w2) if a != b), len(w1))


def dstar_asymptotically_equal(theta: Substitution, a: str, b: str, labeling: Labeling | None = None) -> bool:
    f = (labeling or build_labeling(theta)).f
    return all(f[x] == f[y] for x, y in reachable_pairs(theta, a, b))


def reduce(theta: Substitution) -> tuple:
    """(reduced substitution, merging coding); classes are named by their sorted letters."""
    labeling = build_labeling(theta)
    A = theta.alphabet
    cls = {}
    reps = []
    for a in A:
        for r0 in reps:
            if dstar_asymptotically_equal(theta, r0, a, labeling):
                cls[a] = r0
                break
        else:
            reps.append(a)
            cls[a] = a
    members = {r0: [a for a in A if cls[a] == r0] for r0 in reps}
    multi = any(len(a) > 1 for a in A)
    name = {r0: ("|".join(members[r0]) if multi else "".join(members[r0])) for r0 in reps}
    images = {name[r0]: tuple(name[cls[b]] for b in theta.images[r0]) for r0 in reps}
    # well defined on classes
    for a in A:
        if tuple(name[cls[b]] for b in theta.images[a]) != images[name[cls[a]]]:
            raise SubstitutionError("classes are not compatible with the substitution")
    red = Substitution(images, [name[r0] for r0 in reps])
    coding = LetterCoding({a: name[cls[a]] for a in A}, A)
    return red, coding


def is_reduced(theta: Substitution) -> bool:
    return reduce(theta)[0].n == theta.n


def induced_labeling_f(theta: Substitution, coding: LetterCoding, labeling: Labeling) -> dict:
    """f([a]) := f(a) on the reduced alphabet."""
    out = {}
    for a in theta.alphabet:
        b = coding.map[a]
        if out.setdefault(b, labeling.f[a]) != labeling.f[a]:
            raise SubstitutionError("labeling is not constant on a class")
    return out


def essential_centralizer_roots(theta: Substitution) -> dict:
    """G(theta), its centralizer (the measurable roots of the identity) and the
    letter exchanges that are topological automorphisms."""
    labeling = build_labeling(theta)
    G = group_G(theta, labeling)
    C = centralizer(G)
    lifts = dict(centralizer_lifts(theta, labeling))
    reduced = is_reduced(theta)
    try:
        topo = radius_zero_automorphisms(theta, labeling)
        topo_ok = True
    except SubstitutionError:
        topo, topo_ok = [], False
    f = labeling.f
    topo_primes = set()
    for tau in topo:
        tp = [None] * G.degree
        for a in theta.alphabet:
            tp[f[a]] = f[tau[a]]
        topo_primes.add(tuple(tp))
    if reduced:
        for tp in C.elements:
            if lifts.get(tp) is None:
                raise SubstitutionError("a centralizer element of a reduced substitution failed to lift")
    return {
        "labeling": labeling,
        "G": G,
        "centralizer": C,
        "reduced": reduced,
        "topological": topo,
        "topological_available": topo_ok,
        "measurable_only": [tp for tp in C.elements if tp not in topo_primes],
    }


# -- rule verification ---------------------------------------------------------

class RuleCheck:
    """Outcome of a rule verification: ok, the failing condition and a witness."""

    __slots__ = ("ok", "condition", "witness", "steps")

    def __init__(self, ok, condition=None, witness=None, steps=None):
        self.ok = ok
        self.condition = condition
        self.witness = witness
        self.steps = steps

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return f"RuleCheck(ok, steps={self.steps})"
        return f"RuleCheck(fails {self.condition} at {''.join(self.witness) if self.witness else None})"


def _fit(theta: Substitution, rule: LocalRule, lo: int, hi: int) -> dict:
    rule = materialize(rule, theta)
    if rule.lo < lo or rule.hi > hi:
        raise SubstitutionError(f"rule window [{rule.lo},{rule.hi}] does not fit in [{lo},{hi}]")
    missing = rule.missing(theta)
    if missing:
        raise RuleNotTotal(missing)
    return rule.widen(theta, lo, hi).table


def _inverse_images(tp: Substitution) -> dict:
    inv = {}
    for a in tp.alphabet:
        inv.setdefault(tp.images[a], a)
    return inv


def kappa_step(theta: Substitution, table: dict, p: int, k: int) -> tuple:
    """theta^{-p} sigma^{-k} Phi theta^p for a radius-(1,0) table.

    Returns (new table, None) or (None, 2-word where de-substitution fails).
    """
    tp = power(theta, p)
    R = tp.r
    inv = _inverse_images(tp)
    out = {}
    for w in language(theta, 2):
        z = tp.images[w[0]] + tp.images[w[1]]
        block = tuple(table[(z[j - 1], z[j])] for j in range(R - k, 2 * R - k))
        a = inv.get(block)
        if a is None:
            return None, w
        out[w] = a
    return out, None


def kernel_step(theta: Substitution, table: dict) -> tuple:
    """theta^{-1} Phi theta for a radius-(1,1) table."""
    R = theta.r
    inv = _inverse_images(theta)
    out = {}
    for w in language(theta, 3):
        z = theta.images[w[0]] + theta.images[w[1]] + theta.images[w[2]]
        block = tuple(table[(z[j - 1], z[j], z[j + 1])] for j in range(R, 2 * R))
        a = inv.get(block)
        if a is None:
            return None, w
        out[w] = a
    return out, None


def _orbit_check(step, table, cf):
    """Does step^{cf}(table) == table?  Iterates until the orbit returns."""
    cur = table
    for t in range(1, cf + 1):
        cur, bad = step(cur)
        if cur is None:
            return RuleCheck(False, "commutation", bad, t)
        if cur == table:
            if cf % t == 0:
                return RuleCheck(True, steps=t)
            return RuleCheck(False, "commutation", None, t)
    return RuleCheck(False, "commutation", None, cf)


def _block_condition(theta: Substitution, table: dict, width: int) -> tuple | None:
    lang2 = language(theta, 2)
    for w in sorted(language(theta, width + 1)):
        if (table[w[:width]], table[w[1:]]) not in lang2:
            return w
    return None


def check_rule_kappa(theta: Substitution, rule: LocalRule, p: int, k: int, method: str = "orbit",
                     c: int | None = None) -> RuleCheck:
    """Conditions (1) and (2) for a radius-(1,0) rule and kappa = k/(1-r^p).

    method "orbit" iterates Phi -> theta^{-p} sigma^{-k} Phi theta^p; the
    relation at exponent c!p holds exactly when the orbit returns to Phi after a
    number of steps dividing c!.  method "direct" enumerates all 3-words and all
    0 <= i < r^{c!p} (only for small exponents).
    """
    if not 0 < k < theta.r ** p - 1:
        raise SubstitutionError("need 0 < k < r^p - 1")
    table = _fit(theta, rule, -1, 0)
    bad = _block_condition(theta, table, 2)
    if bad is not None:
        return RuleCheck(False, "block", bad)
    c = c or minimal_sets(theta).c
    cf = math.factorial(c)
    if method == "orbit":
        return _orbit_check(lambda t: kappa_step(theta, t, p, k), table, cf)
    M = cf * p
    R = theta.r ** M
    if R > 200000:
        raise SubstitutionError(f"direct check needs r^{M} positions")
    big = power(theta, M)
    rp = theta.r ** p
    N = k * sum(rp ** i for i in range(cf))
    for w in sorted(language(theta, 3)):
        U = big.images[w[0]] + big.images[w[1]]
        V = big.images[table[w[:2]]] + big.images[table[w[1:]]]
        for i in range(R):
            if table[(U[R + i - 1], U[R + i])] != V[N + i]:
                return RuleCheck(False, "commutation", w, i)
    return RuleCheck(True, steps=cf)


def check_rule_kernel(theta: Substitution, rule: LocalRule, method: str = "orbit",
                      c: int | None = None) -> RuleCheck:
    """Conditions (3) and (4) for a rule of radius at most (1,1)."""
    table = _fit(theta, rule, -1, 1)
    bad = _block_condition(theta, table, 3)
    if bad is not None:
        return RuleCheck(False, "block", bad)
    c = c or minimal_sets(theta).c
    cf = math.factorial(c)
    if method == "orbit":
        return _orbit_check(lambda t: kernel_step(theta, t), table, cf)
    R = theta.r ** cf
    if R > 200000:
        raise SubstitutionError(f"direct check needs r^{cf} positions")
    big = power(theta, cf)
    for w in sorted(language(theta, 3)):
        u = big.images[w[0]] + big.images[w[1]] + big.images[w[2]]
        v = big.images[table[w]]
        for i in range(R):
            if table[(u[R + i - 1], u[R + i], u[R + i + 1])] != v[i]:
                return RuleCheck(False, "commutation", w, i)
    return RuleCheck(True, steps=cf)


def verify_rule_kappa(theta: Substitution, rule: LocalRule, p: int, k: int, **kw) -> bool:
    return check_rule_kappa(theta, rule, p, k, **kw).ok


def verify_rule_kernel(theta: Substitution, rule: LocalRule, **kw) -> bool:
    return check_rule_kernel(theta, rule, **kw).ok


def kappa_of(theta: Substitution, rule: LocalRule, p_max: int = 3) -> KappaValue:
    """kappa of an automorphism given by any rule (up to p_max for the fractional part)."""
    rule = materialize(rule, theta).shrink(theta)
    c = minimal_sets(theta).c
    r = theta.r
    for m in range(rule.hi - 1, rule.lo + 2):
        sh = rule.shifted(-m)
        if sh.lo >= -1 and sh.hi <= 1:
            if check_rule_kernel(theta, sh, c=c):
                return KappaValue(r, m)
    for m in range(rule.hi, rule.lo + 2):
        sh = rule.shifted(-m)
        if sh.lo >= -1 and sh.hi <= 0:
            for p in range(1, p_max + 1):
                for kv in periodic_kappas(r, p):
                    if check_rule_kappa(theta, sh, kv.p, kv.k, c=c):
                        return kv + m
    raise NotAnAutomorphism("rule is not an automorphism with kappa period <= p_max")


# -- search ----------------------------------------------------------------------

def _bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class _CSP:
    """Domains are bitmasks; constraints are x = m[y] or (x, y) in an allowed set."""

    def __init__(self, nvars, nvals):
        self.nvars = nvars
        self.nvals = nvals
        self.func = [[] for _ in range(nvars)]  # var -> list of (other, kind, data)
        self.full = (1 << nvals) - 1

    def add_map(self, x, y, m):
        """x = m[y]."""
        pre = [0] * self.nvals
        for v, w in enumerate(m):
            pre[w] |= 1 << v
        img = [1 << w for w in m]
        # when y changes, x is restricted to the image; when x changes, y to the preimage
        self.func[y].append((x, img))
        self.func[x].append((y, pre))

    def add_rel(self, x, y, allowed):
        fwd = [0] * self.nvals
        bwd = [0] * self.nvals
        for a, b in allowed:
            fwd[a] |= 1 << b
            bwd[b] |= 1 << a
        self.func[x].append((y, fwd))
        self.func[y].append((x, bwd))

    def propagate(self, dom, queue):
        while queue:
            v = queue.pop()
            dv = dom[v]
            for other, table in self.func[v]:
                allowed = 0
                for val in _bits(dv):
                    allowed |= table[val]
                nd = dom[other] & allowed
                if nd != dom[other]:
                    if not nd:
                        return False
                    dom[other] = nd
                    queue.append(other)
        return True

    def solve(self, dom=None, limit=10000):
        dom = list(dom) if dom is not None else [self.full] * self.nvars
        sols = []
        if not self.propagate(dom, list(range(self.nvars))):
            return sols

        def rec(d):
            if len(sols) >= limit:
                return
            best = None
            for i, m in enumerate(d):
                if m & (m - 1):
                    n = bin(m).count("1")
                    if best is None or n < best[0]:
                        best = (n, i)
                        if n == 2:
                            break
            if best is None:
                sols.append([_bits(m)[0] for m in d])
                return
            i = best[1]
            for val in _bits(d[i]):
                nd = list(d)
                nd[i] = 1 << val
                if self.propagate(nd, [i]):
                    rec(nd)

        rec(dom)
        return sols


def _kappa_cycle_solutions(theta: Substitution, p: int, k: int, L: int) -> list:
    """Radius-(1,0) tables f_0 on the 2-language lying on an F-cycle of length L,
    where F(Phi) = theta^{-p} sigma^{-k} Phi theta^p, and satisfying condition (1)."""
    tp = power(theta, p)
    R = tp.r
    words2 = sorted(language_codes(theta, 2))
    pid = {w: i for i, w in enumerate(words2)}
    V = len(words2)
    cons = set()
    for (a, b, c) in language_codes(theta, 3):
        U = tp.table[a] + tp.table[b]
        q0, q1 = pid[(a, b)], pid[(b, c)]
        for i in range(R):
            P = pid[(U[R + i - 1], U[R + i])]
            j = k + i
            cons.add((P, q0, j) if j < R else (P, q1, j - R))
    lang2 = set(words2)
    csp = _CSP(L * V, theta.n)
    for t in range(L):
        nxt = (t + 1) % L
        for P, Q, j in cons:
            csp.add_map(t * V + P, nxt * V + Q, tp.cols[j])
        for (a, b, c) in language_codes(theta, 3):
            csp.add_rel(t * V + pid[(a, b)], t * V + pid[(b, c)], lang2)
    A = theta.alphabet
    out = []
    for sol in csp.solve():
        out.append({(A[w[0]], A[w[1]]): A[sol[pid[w]]] for w in words2})
    return out


def _kernel_cycle_solutions(theta: Substitution, L: int) -> list:
    R = theta.r
    words3 = sorted(language_codes(theta, 3))
    wid = {w: i for i, w in enumerate(words3)}
    V = len(words3)
    cons = set()
    for (a, b, c) in words3:
        u = theta.table[a] + theta.table[b] + theta.table[c]
        src = wid[(a, b, c)]
        for i in range(R):
            cons.add((wid[(u[R + i - 1], u[R + i], u[R + i + 1])], src, i))
    lang2 = set(language_codes(theta, 2))
    csp = _CSP(L * V, theta.n)
    for t in range(L):
        nxt = (t + 1) % L
        for P, Q, j in cons:
            csp.add_map(t * V + P, nxt * V + Q, theta.cols[j])
        for w in language_codes(theta, 4):
            csp.add_rel(t * V + wid[w[:3]], t * V + wid[w[1:]], lang2)
    A = theta.alphabet
    return [{tuple(A[x] for x in w): A[sol[wid[w]]] for w in words3} for sol in csp.solve()]


def search_automorphisms(theta: Substitution, p_max: int = 3) -> list:
    """All automorphisms with kappa = 0 or periodic kappa of period <= p_max, modulo
    shift powers, as (rule, KappaValue); each rule is shrunk to its minimal window.

    An automorphism with kappa = t lies in the fibre over t, which has at most c
    elements, so it lies on a cycle of length L <= c of the map
    Phi -> theta^{-p} sigma^{-k} Phi theta^p; for each L the cycle condition is a
    system of equations x = theta^p_j(y) between table entries, solved by
    propagation and branching.  Every solution is re-verified.
    """
    _require_kernel_hypotheses(theta)
    c = minimal_sets(theta).c
    r = theta.r
    found = {}
    for L in range(1, c + 1):
        for tab in _kernel_cycle_solutions(theta, L):
            rule = LocalRule(-1, 1, tab)
            if not check_rule_kernel(theta, rule, c=c):
                raise SubstitutionError("search produced an unverified kernel rule")
            found.setdefault(rule.key(), (rule, KappaValue(r, 0)))
    for p in range(1, p_max + 1):
        for kv in periodic_kappas(r, p):
            for L in range(1, c + 1):
                for tab in _kappa_cycle_solutions(theta, p, kv.k, L):
                    rule = LocalRule(-1, 0, tab)
                    if not check_rule_kappa(theta, rule, p, kv.k, c=c):
                        raise SubstitutionError("search produced an unverified rule")
                    found.setdefault(rule.key(), (rule, kv))
    out = [(rule.shrink(theta), kv) for rule, kv in found.values()]
    out.sort(key=lambda x: (x[1].value, -x[0].lo, x[0].hi, x[0].key()))
    return out


def kernel_rules(found: list) -> list:
    return [rule for rule, kv in found if kv.is_integer()]


def rule_order(theta: Substitution, rule: LocalRule, cap: int = 64) -> int | None:
    """Smallest m >= 1 with rule^m = id, or None up to cap."""
    ident = identity_rule(theta)
    cur = rule
    for m in range(1, cap + 1):
        if same_map(theta, cur.shrink(theta), ident):
            return m
        cur = compose(theta, rule, cur).shrink(theta)
    return None


def letter_perm_rule(tau: dict) -> LocalRule:
    return LocalRule(0, 0, {(a,): b for a, b in tau.items()})


# -- height -----------------------------------------------------------------------

def letter_phases(theta: Substitution, decoding: dict) -> dict:
    """Phase (position in its h-block) of each letter; unique by the height structure."""
    phase = {}
    for block in decoding.values():
        for i, a in enumerate(block):
            if phase.setdefault(a, i) != i:
                raise SubstitutionError(f"letter {a} occurs at two phases")
    return phase


def lift_automorphism(theta: Substitution, base: Substitution, decoding: dict, rule: LocalRule, j: int) -> LocalRule:
    """Psi_j = sigma^j o Psi_0 on X_theta, where Psi_0 applies Psi block by block
    and keeps the phase."""
    h = len(next(iter(decoding.values())))
    rule = materialize(rule, base)
    phase = letter_phases(theta, decoding)
    encode = {tuple(v): k for k, v in decoding.items()}
    lo = rule.lo * h - (h - 1)
    hi = rule.hi * h + (h - 1)
    table = {}
    for w in language(theta, hi - lo + 1):
        ctr = -lo
        ph = phase[w[ctr]]
        start = ctr - ph
        blocks = []
        for b in range(rule.lo, rule.hi + 1):
            s = start + b * h
            blocks.append(encode[tuple(w[s:s + h])])
        img = rule(tuple(blocks))
        table[w] = decoding[img][ph]
    return LocalRule(lo, hi, table).shifted(j).shrink(theta)


def lift_automorphisms_with_height(theta: Substitution, base_automorphisms: list | None = None,
                                   p_max: int = 1) -> list:
    """[(Psi, j, lifted rule)] for Psi in Aut of the pure base (mod shift) and 0 <= j < h."""
    h = height(theta)
    if h == 1:
        raise SubstitutionError("height is 1, nothing to lift")
    base, decoding = pure_base(theta)
    if base_automorphisms is None:
        base_automorphisms = [rule for rule, _ in search_automorphisms(base, p_max)]
    out = []
    for rule in base_automorphisms:
        for j in range(h):
            out.append((rule, j, lift_automorphism(theta, base, decoding, rule, j)))
    return out
