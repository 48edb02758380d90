"""Compressions, twists, roots of the shift and the substitution behind a root."""
from __future__ import annotations

import math
from fractions import Fraction

from .automatic import AutomaticPair, fiber_sizes
from .automorphisms import (_require_kernel_hypotheses, radius_zero_automorphisms,
                            search_automorphisms)
from .groups import cycle_string, order
from .rules import (LocalRule, compose, identity_rule, maps_into_language, materialize, power_rule,
                    same_map, shift_rule)
from .substitution import (LetterCoding, Substitution, SubstitutionError, _named_block_substitution,
                           find_renaming, fixed_point_prefix, is_finite_shift, is_primitive, language,
                           power, require_primitive, right_seeds, show,
                           sliding_block_representation)


# -- compression -------------------------------------------------------------------

def compress(theta: Substitution, k: int) -> tuple:
    """The k-compression on the k-blocks at positions 0 mod k of a fixed point.

    Returns (substitution, decoding) where decoding sends a block letter to its
    word.  Block letters are named by their words.
    """
    if k < 1:
        raise SubstitutionError("k must be at least 1")
    require_primitive(theta)
    seed = right_seeds(theta)[0]
    first = fixed_point_prefix(theta, seed, k)
    return _named_block_substitution(theta, first, k)


def decompress(decoding: dict, word) -> tuple:
    out = []
    for b in word:
        out.extend(decoding[b])
    return tuple(out)


# -- letter automorphisms and twists -------------------------------------------------

def _perm_power(tau: dict, n: int) -> dict:
    out = {a: a for a in tau}
    for _ in range(n):
        out = {a: tau[out[a]] for a in tau}
    return out


def commuting_power(theta: Substitution, tau: dict, cap: int = 4096) -> int | None:
    """Least m >= 1 with tau o theta^m = theta^m o tau, or None.

    The set of pairs reached in exactly m steps from the graph of tau is a
    deterministic sequence of sets, so it is followed until it cycles.
    """
    ix = theta.index
    cols = theta.cols
    t = [ix[tau[a]] for a in theta.alphabet]
    graph = {(x, t[x]) for x in range(theta.n)}
    cur = frozenset(graph)
    seen = {}
    for m in range(1, cap + 1):
        cur = frozenset((c[x], c[y]) for (x, y) in cur for c in cols)
        if cur <= graph:
            return m
        if cur in seen:
            return None
        seen[cur] = m
    return None


def is_letter_automorphism(theta: Substitution, tau: dict) -> bool:
    """A letter bijection preserving 2-words and commuting with a power of theta."""
    if sorted(tau) != sorted(theta.alphabet) or sorted(tau.values()) != sorted(theta.alphabet):
        return False
    L2 = language(theta, 2)
    if any((tau[a], tau[b]) not in L2 for a, b in L2):
        return False
    return commuting_power(theta, tau) is not None


def twist(theta: Substitution, tau: dict) -> Substitution:
    """theta_tau(a)_j = tau^j(theta(a)_j)."""
    tau = dict(tau)
    if _perm_power(tau, theta.r) != tau:
        raise SubstitutionError("twist needs tau^r = tau")
    if not is_letter_automorphism(theta, tau):
        raise SubstitutionError("tau is not a radius-0 automorphism")
    images = {}
    for a in theta.alphabet:
        images[a] = tuple(_perm_power(tau, j)[b] for j, b in enumerate(theta.images[a]))
    return Substitution(images, theta.alphabet)


def perm_inverse(tau: dict) -> dict:
    return {b: a for a, b in tau.items()}


# -- roots of the shift ------------------------------------------------------------------

def kappa_denominator(found: list) -> int:
    """k with kappa(Aut) = <1/k>, from search results (lcm of denominators)."""
    k = 1
    for _, kv in found:
        q = kv.residue().denominator
        k = k * q // math.gcd(k, q)
    return k


def roots_with_kappa(theta: Substitution, k: int, found: list) -> list:
    """The found rules moved by a shift power so that kappa = 1/k exactly."""
    out = []
    target = Fraction(1, k)
    for rule, kv in found:
        m = target - kv.value
        if m.denominator == 1 and not kv.is_integer():
            out.append(rule.shifted(int(m)).shrink(theta))
    return out


def find_shift_roots(theta: Substitution, k: int, p_max: int = 3, found: list | None = None) -> list:
    """Rules Phi with Phi^k = sigma (checked on the language)."""
    if found is None:
        found = search_automorphisms(theta, p_max)
    sigma = shift_rule(theta, 1)
    out = []
    for phi in roots_with_kappa(theta, k, found):
        if same_map(theta, power_rule(theta, phi, k), sigma):
            out.append(phi)
    return out


def root_step(theta: Substitution, phi: LocalRule) -> LocalRule | None:
    """theta^{-1} o Phi^r o theta for a rule inside the window [-1, 1], or None
    when the image is not a theta-image."""
    phi = materialize(phi, theta)
    if phi.lo < -1 or phi.hi > 1:
        raise SubstitutionError("rule must fit in the window [-1, 1]")
    r = theta.r
    R = power_rule(theta, phi, r)
    inv = {}
    for a in theta.alphabet:
        inv.setdefault(theta.images[a], a)
    out = {}
    for w in language(theta, 3):
        y, _ = R.apply(theta(w))
        block = tuple(y[i + R.lo] for i in range(r, 2 * r))
        a = inv.get(block)
        if a is None:
            return None
        out[w] = a
    return LocalRule(-1, 1, out).shrink(theta)


class NormalizedRoot:
    """Phi' with Phi'^{r^n} o theta^n = theta^n o Phi' and Phi'^k = sigma o tau."""

    __slots__ = ("n", "theta_n", "phi", "tau", "k")

    def __init__(self, n, theta_n, phi, tau, k):
        self.n = n
        self.theta_n = theta_n
        self.phi = phi
        self.tau = tau
        self.k = k

    def __iter__(self):
        return iter((self.n, self.theta_n, self.phi))


def normalize_phi(theta: Substitution, phi: LocalRule, k: int, cap: int = 64) -> NormalizedRoot:
    """Iterate Phi -> theta^{-1} Phi^r theta until the orbit cycles."""
    seq = [materialize(phi, theta).shrink(theta)]
    while len(seq) <= cap:
        nxt = root_step(theta, seq[-1])
        if nxt is None:
            raise SubstitutionError("theta^{-1} Phi^r theta is not defined; Phi is not a 1/k root")
        for i, old in enumerate(seq):
            if same_map(theta, nxt, old):
                n = len(seq) - i
                tn = power(theta, n)
                good = seq[i]
                tau = _root_tau(theta, good, k)
                if _perm_power(tau, tn.r) != tau:
                    raise SubstitutionError("tau^r != tau")
                return NormalizedRoot(n, tn, good, tau, k)
        seq.append(nxt)
    raise SubstitutionError(f"no cycle within {cap} steps")


def root_relation(theta: Substitution, phi: LocalRule, k: int, m: int = 1) -> dict | None:
    """The letter map tau with Phi^k = sigma^m o tau, or None if there is none."""
    t = power_rule(theta, phi, k).shifted(-m).shrink(theta)
    if t.width != 1 or t.lo != 0:
        return None
    return {w[0]: v for w, v in t.table.items()}


def _root_tau(theta: Substitution, phi: LocalRule, k: int) -> dict:
    """tau = sigma^{-1} o Phi^k, which must be a letter map."""
    t = power_rule(theta, phi, k).shifted(-1).shrink(theta)
    if t.width != 1 or t.lo != 0:
        raise SubstitutionError("sigma^{-1} Phi^k does not have radius 0")
    return {w[0]: v for w, v in t.table.items()}


def extract_eta(theta: Substitution, phi: LocalRule, k: int | None = None) -> Substitution:
    """eta(a)_i = (Phi^i theta(x))_0 with x_0 = a.

    Phi must have left radius 0 and right radius at most 1, so the value only
    sees theta(a); independence from the context is re-checked on every
    language 2-word.
    """
    phi = materialize(phi, theta).shrink(theta)
    if phi.lo < 0 or phi.hi > 1:
        raise SubstitutionError("Phi must have left radius 0 and right radius at most 1")
    r = theta.r
    images = {}
    for a in theta.alphabet:
        cur = theta.images[a]
        img = [cur[0]]
        for _ in range(1, r):
            cur, _ = phi.apply(cur)
            img.append(cur[0])
        images[a] = tuple(img)
    for w in language(theta, 2):
        cur = theta(w)
        for i in range(r):
            if cur[0] != images[w[0]][i]:
                raise SubstitutionError(f"eta depends on the context {show(w)}")
            cur, _ = phi.apply(cur)
    eta = Substitution(images, theta.alphabet)
    if not is_primitive(eta)[0]:
        raise SubstitutionError("eta is not primitive")
    if is_finite_shift(eta):
        raise SubstitutionError("eta generates a finite shift")
    return eta


# -- collapsing block presentations ---------------------------------------------------

def congruence_closure(theta: Substitution, a: str, b: str) -> list:
    """Least partition merging a and b that is compatible with every column."""
    parent = {x: x for x in theta.alphabet}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        fx, fy = find(x), find(y)
        if fx == fy:
            continue
        parent[fy] = fx
        for d in range(theta.r):
            todo.append((theta.images[x][d], theta.images[y][d]))
    groups = {}
    for x in theta.alphabet:
        groups.setdefault(find(x), []).append(x)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: theta.index[g[0]])


def inverse_radius(theta: Substitution, coding: LetterCoding, cap: int = 3) -> int | None:
    """Least R such that the coded (2R+1)-window determines the centre letter."""
    for R in range(cap + 1):
        seen = {}
        ok = True
        for w in language(theta, 2 * R + 1):
            if seen.setdefault(coding(w), w[R]) != w[R]:
                ok = False
                break
        if ok:
            return R
    return None


def collapse(theta: Substitution, cap: int = 3) -> tuple:
    """Merge letters along congruences whose coding has a sliding block inverse.

    Each accepted merge is a conjugacy (the inverse radius is a certificate).
    Returns (smaller substitution, coding from theta's letters, list of radii).
    """
    from .automatic import _quotient

    cur = theta
    coding = LetterCoding({a: a for a in theta.alphabet}, theta.alphabet)
    radii = []
    changed = True
    while changed:
        changed = False
        A = cur.alphabet
        for i, a in enumerate(A):
            for b in A[i + 1:]:
                classes = congruence_closure(cur, a, b)
                q, _, cls = _quotient(cur, LetterCoding({x: x for x in A}, A), classes)
                step = LetterCoding({x: name for name, g in cls.items() for x in g}, A)
                R = inverse_radius(cur, step, cap)
                if R is None:
                    continue
                coding = step.compose(coding)
                radii.append(R)
                cur = q
                changed = True
                break
            if changed:
                break
    members = {}
    for a in theta.alphabet:
        members.setdefault(coding[a], []).append(a)
    if all(len(a) == 1 for a in theta.alphabet):
        names = {c: "".join(m) for c, m in members.items()}
        cur = cur.rename(names)
        coding = LetterCoding({a: names[coding[a]] for a in theta.alphabet}, theta.alphabet)
    return cur, coding, radii


# -- the decomposition ---------------------------------------------------------------------

def default_window(theta: Substitution) -> int:
    return max(3 * theta.r ** 2, 2 * theta.r * theta.n)


class RootsDecomposition:
    """theta is conjugate to twist(compress(eta, k), tau_bar)."""

    __slots__ = ("k", "root", "n", "tau", "eta", "eta_compact", "compact_coding", "compressed",
                 "decoding", "tau_bar", "twisted", "verified_window", "reference")

    def __init__(self, **kw):
        for s in self.__slots__:
            setattr(self, s, kw.get(s))

    def tau_bar_is_identity(self) -> bool:
        return all(a == b for a, b in self.tau_bar.items())

    def tau_bar_string(self) -> str:
        A = self.compressed.alphabet
        p = tuple(A.index(self.tau_bar[a]) for a in A)
        return cycle_string(p, list(A))

    def tau_string(self) -> str:
        if self.tau is None:
            return "id"
        A = sorted(self.tau)
        p = tuple(A.index(self.tau[a]) for a in A)
        return cycle_string(p, A)

    def as_dict(self) -> dict:
        def sub(t):
            return {a: show(w) for a, w in t.images.items()}
        return {
            "k": self.k,
            "normalizing_power": self.n,
            "root_rule": None if self.root is None else self.root.to_text(),
            "tau": self.tau_string(),
            "eta": sub(self.eta),
            "eta_compact": sub(self.eta_compact),
            "compact_coding": None if self.compact_coding is None else dict(self.compact_coding.map),
            "compressed_letters": len(self.compressed.alphabet),
            "tau_bar": self.tau_bar_string(),
            "tau_bar_letterwise": "inverse of tau applied to each letter of a block",
            "conjugacy": {"forward": "x -> ((Phi^i x)_n)_{i<k}, window [0, k-1]",
                          "backward": "first letter of each block"},
            "verified_window": self.verified_window,
            "reference": self.reference,
        }


def _psi_image(theta: Substitution, phi: LocalRule, k: int, W: int, names: dict) -> set:
    """Images of language words under x -> ((Phi^i x)_n)_{i<k}, length W."""
    out = set()
    for w in language(theta, W + k - 1):
        rows = [w]
        cur = w
        for _ in range(1, k):
            cur, _ = phi.apply(cur)
            rows.append(cur)
        blocks = []
        for n in range(W):
            blk = tuple(rows[i][n] for i in range(k))
            if blk not in names:
                return None
            blocks.append(names[blk])
        out.add(tuple(blocks))
    return out


def match_reference(eta: Substitution, compact: Substitution, references: dict) -> dict | None:
    """Find a reference equal to eta or its collapse up to renaming, or to a twist of one.

    Returns {"name", "renaming", "twist"} where twist is None or the letter
    automorphism of the reference (cycle notation) that was applied first.
    """
    for label, ref in references.items():
        for cand in (eta, compact):
            m = find_renaming(cand, ref)
            if m is not None:
                return {"name": label, "renaming": m, "twist": None}
    for label, ref in references.items():
        try:
            autos = radius_zero_automorphisms(ref)
        except SubstitutionError:
            continue
        for t in autos:
            if all(a == b for a, b in t.items()) or not _is_idempotent_power(t, ref.r):
                continue
            try:
                tw = twist(ref, t)
            except SubstitutionError:
                continue
            for cand in (eta, compact):
                m = find_renaming(cand, tw)
                if m is not None:
                    A = list(ref.alphabet)
                    return {"name": label, "renaming": m,
                            "twist": cycle_string(tuple(A.index(t[a]) for a in A), A)}
    return None


def _is_idempotent_power(tau: dict, r: int) -> bool:
    return _perm_power(tau, r) == tau


def decompose_root(theta: Substitution, phi: LocalRule, k: int, window: int | None = None,
                   references: dict | None = None) -> RootsDecomposition:
    """Normalize one root, extract eta, compress, twist and verify."""
    norm = normalize_phi(theta, phi, k)
    tn, good, tau = norm.theta_n, norm.phi, norm.tau
    eta = extract_eta(tn, good, k)
    comp, decoding = compress(eta, k)
    names = {tuple(v): name for name, v in decoding.items()}
    tinv = perm_inverse(tau)
    tau_bar = {}
    for name, blk in decoding.items():
        img = tuple(tinv[x] for x in blk)
        if img not in names:
            raise SubstitutionError("tau does not act on the blocks")
        tau_bar[name] = names[img]
    tw = twist(comp, tau_bar)
    W = window or default_window(theta)
    img = _psi_image(tn, good, k, W, names)
    if img is None or img != language(tw, W):
        raise SubstitutionError(f"twisted compression differs from the shift at window {W}")
    back = {tuple(decoding[b][0] for b in v) for v in img}
    if back != language(theta, W):
        raise SubstitutionError(f"first-letter coding is not onto the language at window {W}")
    compact, coding, _ = collapse(eta)
    match = match_reference(eta, compact, references or {})
    return RootsDecomposition(k=k, root=good, n=norm.n, tau=tau, eta=eta, eta_compact=compact,
                              compact_coding=coding, compressed=comp, decoding=decoding,
                              tau_bar=tau_bar, twisted=tw, verified_window=W, reference=match)


def roots_decomposition(theta: Substitution, p_max: int = 3, window: int | None = None,
                        references: dict | None = None, found: list | None = None) -> list:
    """One decomposition per automorphism with kappa = 1/k, where kappa(Aut) = <1/k>."""
    _require_kernel_hypotheses(theta)
    if found is None:
        found = search_automorphisms(theta, p_max)
    k = kappa_denominator(found)
    if k == 1:
        ident = {a: a for a in theta.alphabet}
        return [RootsDecomposition(k=1, root=None, n=1, tau=ident, eta=theta, eta_compact=theta,
                                   compact_coding=None, compressed=theta,
                                   decoding={a: (a,) for a in theta.alphabet}, tau_bar=ident,
                                   twisted=theta, verified_window=0, reference=None)]
    return [decompose_root(theta, phi, k, window, references) for phi in roots_with_kappa(theta, k, found)]


# -- finite order automorphisms and uniformly 2-to-1 factors --------------------------------

def _orbits(alphabet, phi: dict, m: int) -> dict:
    """Letter -> name of its orbit under phi; every orbit must have size m."""
    seen = {}
    for a in alphabet:
        if a in seen:
            continue
        orbit = [a]
        b = phi[a]
        while b != a:
            orbit.append(b)
            b = phi[b]
        if len(orbit) != m:
            raise SubstitutionError("Phi has a short orbit on letters, the quotient is not m-to-1")
        nm = "".join(orbit) if all(len(x) == 1 for x in orbit) else "{" + ",".join(orbit) + "}"
        for x in orbit:
            seen[x] = nm
    return seen


def phase_is_local(theta: Substitution, phi: dict, m: int) -> bool:
    """True when no 2-word (a, b) has a partner (Phi^i a, Phi^j b) with i != j.

    Then two points with the same orbit letters differ by one global power of
    Phi, so coding letters by their orbit is exactly the quotient by <Phi>.
    """
    L2 = language(theta, 2)
    pw = [_perm_power(phi, i) for i in range(m)]
    for a, b in L2:
        for i in range(m):
            for j in range(m):
                if i != j and (pw[i][a], pw[j][b]) in L2:
                    return False
    return True


def order_k_quotient(theta: Substitution, phi: dict) -> AutomaticPair:
    """The factor identifying the orbit {x, Phi x, ...} of a radius-0 Phi.

    Letters are coded by their Phi-orbit when that already separates the
    orbits of points (see phase_is_local); otherwise theta is first written on
    its 2-blocks and 2-blocks are coded by their orbit under Phi x Phi.
    """
    if not is_letter_automorphism(theta, phi):
        raise SubstitutionError("Phi is not a radius-0 automorphism")
    A = list(theta.alphabet)
    m = order(tuple(A.index(phi[a]) for a in A))
    if phase_is_local(theta, phi, m):
        return AutomaticPair(theta, LetterCoding(_orbits(A, phi, m), A))
    rep, _, to_block = sliding_block_representation(theta, 2, 0)
    phi2 = {to_block[w]: to_block[(phi[w[0]], phi[w[1]])] for w in to_block}
    return AutomaticPair(rep, LetterCoding(_orbits(rep.alphabet, phi2, m), rep.alphabet))


def involution_from_two_to_one(theta: Substitution, pi: LocalRule, radius_cap: int = 2,
                               width: int = 16) -> dict:
    """A rule Phi != id with pi o Phi = pi and Phi^2 = id.

    Returns {"rule": Phi or None, "radius": R, "fibers": sizes}; a miss reports
    that the radius exceeds the cap.
    """
    pi = materialize(pi, theta)
    sizes = fiber_sizes(theta, pi, None, width)
    if set(sizes) != {2}:
        raise SubstitutionError(f"the map is not uniformly 2-to-1 at width {width}: fibre sizes {sorted(sizes)}")
    ident = identity_rule(theta)
    for R in range(radius_cap + 1):
        words = language(theta, 2 * R + pi.width)
        c = R + pi.left
        pre = {}
        for w in words:
            pre.setdefault(pi.apply(w)[0], []).append(w)
        table = {}
        ok = True
        for w in words:
            others = {u[c] for u in pre[pi.apply(w)[0]] if u[c] != w[c]}
            if len(others) > 1:
                ok = False
                break
            table[w] = others.pop() if others else w[c]
        if not ok:
            continue
        rule = LocalRule(-c, len(words and next(iter(words))) - 1 - c, table)
        if same_map(theta, rule, ident):
            continue
        if not all(maps_into_language(theta, rule, L) for L in (2, 3, 4)):
            continue
        if not same_map(theta, compose(theta, rule, rule), ident):
            continue
        if not same_map(theta, compose(theta, pi, rule), pi):
            continue
        rule = rule.shrink(theta)
        return {"rule": rule, "radius": max(rule.left, rule.right), "fibers": sizes}
    return {"rule": None, "radius": None, "fibers": sizes, "note": f"radius exceeds cap {radius_cap}"}
