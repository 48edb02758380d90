"""Automatic shifts: letter codings of substitution shifts and their normal forms."""
from __future__ import annotations

from bisect import bisect_left

from .pairs import is_pair_aperiodic, pair_aperiodic_power, periodic_pairs
from .rules import LocalRule, materialize
from .substitution import (LetterCoding, Substitution, SubstitutionError, height, is_primitive,
                           language, power, require_primitive, sliding_block_representation)


class FiniteImage(SubstitutionError):
    pass


class AutomaticPair:
    """A substitution theta with a letter coding tau; presents Y = tau(X_theta)."""

    __slots__ = ("theta", "tau")

    def __init__(self, theta: Substitution, tau: LetterCoding | dict | None = None):
        if tau is None:
            tau = {a: a for a in theta.alphabet}
        if not isinstance(tau, LetterCoding):
            tau = LetterCoding(tau, theta.alphabet)
        if set(tau.source) != set(theta.alphabet):
            raise SubstitutionError("coding and substitution have different alphabets")
        self.theta = theta
        self.tau = LetterCoding(tau.map, theta.alphabet)

    def __repr__(self):
        return f"AutomaticPair({self.theta!r}, {self.tau!r})"

    def image_language(self, L: int) -> set:
        return {self.tau(w) for w in language(self.theta, L)}


def image_complexity(pair: AutomaticPair, L: int) -> int:
    return len(pair.image_language(L))


def image_is_infinite(pair: AutomaticPair, bound: int | None = None) -> bool:
    """False as soon as some length L <= bound has at most L image words.

    By the Morse-Hedlund theorem p(L) <= L forces a periodic, hence finite,
    minimal shift; a finite image with period q is caught at L = q.
    """
    theta = pair.theta
    require_primitive(theta)
    bound = bound or theta.r * theta.n ** 2
    return all(image_complexity(pair, L) > L for L in range(1, bound + 1))


def require_infinite(pair: AutomaticPair, bound: int | None = None):
    if not image_is_infinite(pair, bound):
        raise FiniteImage("the coded shift is finite")


# -- indistinguishability ---------------------------------------------------------

def indistinguishable(pair: AutomaticPair, a: str, b: str) -> bool:
    """Every pair reachable from (a, b), step 0 included, has equal codes."""
    theta, tau = pair.theta, pair.tau
    seen = {(a, b)}
    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        if tau[x] != tau[y]:
            return False
        for d in range(theta.r):
            q = (theta.images[x][d], theta.images[y][d])
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return True


def indistinguishability_classes(pair: AutomaticPair) -> list:
    """Coarsest partition refining tau that is stable under every column.

    This is Moore's automaton minimisation; classes are tuples in alphabet
    order, listed by first member.
    """
    theta, tau = pair.theta, pair.tau
    A = theta.alphabet
    block = {a: tau[a] for a in A}
    while True:
        sig = {a: (block[a],) + tuple(block[b] for b in theta.images[a]) for a in A}
        ids = {}
        new = {a: ids.setdefault(sig[a], len(ids)) for a in A}
        if len(ids) == len(set(block.values())):
            break
        block = new
    groups = {}
    for a in A:
        groups.setdefault(block[a], []).append(a)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: theta.index[g[0]])


def class_name(members) -> str:
    if len(members) == 1:
        return members[0]
    if all(len(a) == 1 for a in members):
        return "".join(members)
    return "{" + ",".join(members) + "}"


class Presentation:
    """theta_star with tau_star, obtained from a pair by a power and a merge."""

    __slots__ = ("theta_star", "tau_star", "power", "classes", "provenance", "window")

    def __init__(self, theta_star, tau_star, power, classes, window=None):
        self.theta_star = theta_star
        self.tau_star = tau_star
        self.power = power
        self.classes = classes
        self.window = window
        self.provenance = [{"step": "power", "P": power},
                           {"step": "merge", "classes": {k: list(v) for k, v in classes.items()}}]

    def pair(self) -> AutomaticPair:
        return AutomaticPair(self.theta_star, self.tau_star)

    def is_trivial(self) -> bool:
        return self.power == 1 and all(len(v) == 1 for v in self.classes.values())

    def as_dict(self) -> dict:
        return {
            "power": self.power,
            "classes": {k: list(v) for k, v in self.classes.items()},
            "theta_star": {a: "".join(w) if all(len(x) == 1 for x in w) else list(w)
                           for a, w in self.theta_star.images.items()},
            "tau_star": dict(self.tau_star.map),
            "provenance": self.provenance,
            "injectivity_window": self.window,
            "injectivity_check": "aligned pairs of points, finite window",
        }


def _quotient(theta: Substitution, tau: LetterCoding, classes: list) -> tuple:
    name = {}
    for g in classes:
        for a in g:
            name[a] = class_name(g)
    letters = [class_name(g) for g in classes]
    images = {}
    for g in classes:
        imgs = {tuple(name[b] for b in theta.images[a]) for a in g}
        if len(imgs) != 1:
            raise SubstitutionError("classes are not compatible with the substitution")
        images[class_name(g)] = imgs.pop()
    q = Substitution(images, letters)
    t = LetterCoding({class_name(g): tau[g[0]] for g in classes}, letters)
    return q, t, {class_name(g): g for g in classes}


def minimize(pair: AutomaticPair) -> Presentation:
    """Quotient by indistinguishability (no power is taken)."""
    theta = pair.theta
    require_primitive(theta)
    if not is_pair_aperiodic(theta):
        raise SubstitutionError("substitution is not pair-aperiodic; take pair_aperiodic_power first")
    classes = indistinguishability_classes(pair)
    q, t, cls = _quotient(theta, pair.tau, classes)
    if not is_primitive(q)[0]:
        raise SubstitutionError("quotient is not primitive")
    if not is_pair_aperiodic(q):
        raise SubstitutionError("quotient is not pair-aperiodic")
    return Presentation(q, t, 1, cls)


def is_minimal(pair: AutomaticPair) -> bool:
    return len(indistinguishability_classes(pair)) == pair.theta.n


# -- injectivity on aligned pairs ------------------------------------------------------

def default_window(theta: Substitution) -> int:
    return 4 * theta.n ** 2 * theta.r ** 2


def aligned_pair_seeds(theta: Substitution) -> set:
    """Pair 2-words of aligned pairs of points.

    Start from all pairs of language 2-words and keep those that occur inside
    the image of a surviving pair 2-word under theta x theta (greatest fixpoint).
    Returns a set of ((x0, x1), (y0, y1)) in letter codes.
    """
    L2 = [theta.encode(w) for w in language(theta, 2)]
    Z = {(u, v) for u in L2 for v in L2}
    cols = theta.cols
    r = theta.r
    while True:
        keep = set()
        for u, v in Z:
            iu = [cols[d][u[0]] for d in range(r)] + [cols[d][u[1]] for d in range(r)]
            iv = [cols[d][v[0]] for d in range(r)] + [cols[d][v[1]] for d in range(r)]
            for i in range(2 * r - 1):
                s = ((iu[i], iu[i + 1]), (iv[i], iv[i + 1]))
                if s in Z:
                    keep.add(s)
        if keep == Z:
            return Z
        Z = keep


def aligned_injectivity_witness(pair: AutomaticPair, window: int | None = None):
    """Look for two aligned points that differ at a position while their codes
    agree on the whole window centred there.

    Every window of an aligned pair of points of length at most r^n sits in
    the image of a pair 2-word under (theta x theta)^n, so scanning those images
    is exhaustive at the given window.  Returns None or a dict witness.
    """
    theta, tau = pair.theta, pair.tau
    W = window or default_window(theta)
    half = W // 2
    n = 1
    while theta.r ** n < W + 1:
        n += 1
    tn = power(theta, n)
    A = theta.alphabet
    tcode = [tau[a] for a in A]
    for (u, v) in sorted(aligned_pair_seeds(theta)):
        x = tn.apply_codes(u)
        y = tn.apply_codes(v)
        diff = [i for i in range(len(x)) if x[i] != y[i]]
        if not diff:
            continue
        cdiff = [i for i in range(len(x)) if tcode[x[i]] != tcode[y[i]]]
        for d in diff:
            if d - half < 0 or d + half >= len(x):
                continue
            j = bisect_left(cdiff, d - half)
            if j < len(cdiff) and cdiff[j] <= d + half:
                continue
            lo, hi = d - half, d + half + 1
            return {
                "seed": (theta.decode(u), theta.decode(v)),
                "level": n,
                "position": d - lo,
                "left": theta.decode(x[lo:hi]),
                "right": theta.decode(y[lo:hi]),
                "window": W,
            }
    return None


def center_difference_witness(pair: AutomaticPair, max_level: int = 4):
    """Letters a != b and a level m such that theta^m(a) and theta^m(b) differ
    only at the centre (r^m - 1)/2, keep a and b there, and have equal codes.

    Iterating gives two points that differ exactly at one coordinate yet have
    the same image.  Needs r odd.  Returns None or a dict.
    """
    theta, tau = pair.theta, pair.tau
    if theta.r % 2 == 0:
        return None
    for m in range(1, max_level + 1):
        tm = power(theta, m)
        mid = (tm.r - 1) // 2
        for a in theta.alphabet:
            for b in theta.alphabet:
                if a >= b or tau[a] != tau[b]:
                    continue
                wa, wb = tm.images[a], tm.images[b]
                if wa[mid] != a or wb[mid] != b:
                    continue
                if all(wa[i] == wb[i] for i in range(tm.r) if i != mid):
                    return {"letters": (a, b), "level": m, "index": mid,
                            "words": (wa, wb)}
    return None


def bijective_presentation(pair: AutomaticPair, window: int | None = None, check: bool = True) -> Presentation:
    """Pair-aperiodic power, then minimisation.

    The coding of the result is checked for injectivity on aligned pairs of
    points at a finite window; a witness here would contradict the theory and
    is raised as an error.
    """
    theta = pair.theta
    require_primitive(theta)
    require_infinite(pair)
    P, tp = pair_aperiodic_power(theta)
    pres = minimize(AutomaticPair(tp, pair.tau))
    pres.power = P
    pres.provenance[0]["P"] = P
    if check:
        W = window or default_window(pres.theta_star)
        wit = aligned_injectivity_witness(pres.pair(), W)
        if wit is not None:
            raise SubstitutionError(f"presentation is not injective at window {W}: {wit}")
        pres.window = W
    return pres


def replay(pair: AutomaticPair, record: dict) -> Presentation:
    """Re-run a serialised provenance chain and check it reproduces the record."""
    theta = pair.theta
    steps = record.get("provenance") or []
    P = next((s["P"] for s in steps if s.get("step") == "power"), record.get("power", 1))
    merge = next((s["classes"] for s in steps if s.get("step") == "merge"), record.get("classes"))
    tp = power(theta, P)
    classes = [tuple(v) for v in merge.values()]
    if sorted(a for g in classes for a in g) != sorted(tp.alphabet):
        raise SubstitutionError("merge classes do not partition the alphabet")
    q, t, cls = _quotient(tp, pair.tau, classes)
    expect = record.get("theta_star")
    if expect is not None:
        got = Presentation(q, t, P, cls).as_dict()["theta_star"]
        if got != expect:
            raise SubstitutionError("replayed substitution differs from the record")
    return Presentation(q, t, P, cls)


def periodic_pair_report(theta: Substitution) -> list:
    return [{"pair": list(p), "period": q} for p, q in periodic_pairs(theta)]


# -- sliding block factors ------------------------------------------------------------

def factor_to_radius_zero(theta: Substitution, rule: LocalRule) -> AutomaticPair:
    """The factor given by a rule as a letter coding of a block presentation.

    The block letter at n is x[n, n + width); its code is the rule output,
    so the coded point is the rule image shifted by the left radius.
    """
    rule = materialize(rule, theta)
    missing = rule.missing(theta)
    if missing:
        raise SubstitutionError(f"rule is undefined on {len(missing)} language windows")
    sub, _, to_block = sliding_block_representation(theta, rule.width, 0)
    coding = {name: rule.table[w] for w, name in to_block.items()}
    return AutomaticPair(sub, LetterCoding(coding, sub.alphabet))


def mef_descriptor(pair: AutomaticPair) -> tuple:
    """(r, h) describing the maximal equicontinuous factor Z_r x Z/h of Y."""
    pres = bijective_presentation(pair, check=False)
    hbar = height(pres.theta_star)
    h = height(pair.theta)
    if h % hbar:
        raise SubstitutionError(f"height {hbar} of the factor does not divide {h}")
    return (pair.theta.r, hbar)


def fiber_sizes(theta: Substitution, rule: LocalRule, target: Substitution | None, W: int) -> dict:
    """For every target word v of length W, the number of distinct middle
    segments x[W/4, W - W/4) over language words x with rule(x) = v.

    For a uniformly k-to-1 sliding block map with large enough W every value
    equals k.  Returns {size: count of target words}; without a target the
    image words themselves are used.
    """
    rule = materialize(rule, theta)
    lo, hi = W // 4, W - W // 4
    mids = {}
    for x in language(theta, W + rule.width - 1):
        v, _ = rule.apply(x)
        mids.setdefault(v, set()).add(x[lo + rule.left: hi + rule.left])
    out = {}
    tl = language(target, W) if target is not None else mids
    for v in tl:
        k = len(mids.get(v, ()))
        out[k] = out.get(k, 0) + 1
    return out


def verify_factor_map(theta: Substitution, rule: LocalRule, target: Substitution, L: int = 12) -> bool:
    """The rule maps the language of theta onto the language of target at
    every length up to L."""
    rule = materialize(rule, theta)
    if rule.missing(theta):
        return False
    for n in range(1, L + 1):
        img = {rule.apply(x)[0] for x in language(theta, n + rule.width - 1)}
        if img != language(target, n):
            return False
    return True


def verify_factor_automorphism(pair: AutomaticPair, g: LocalRule, phi: LocalRule | None = None,
                               window: int | None = None) -> dict:
    """Check that a rule g on Y = tau(X_theta) is an automorphism of Y.

    g must be total on the language of Y, and g o tau = tau o phi for an
    automorphism phi of X_theta (found among the radius-one kernel
    automorphisms when not given).  Injectivity of tau on aligned points is
    checked at a finite window.
    """
    from .automorphisms import kernel_rules, search_automorphisms, verify_rule_kernel
    from .rules import same_map

    theta, tau = pair.theta, pair.tau
    width = g.width
    ylang = {tau(w) for w in language(theta, width)}
    table = dict(g.table)
    centers = getattr(g, "centers", {})
    c = -g.lo
    for w in ylang:
        if w not in table and w[c] in centers:
            table[w] = centers[w[c]]
    missing = sorted(w for w in ylang if w not in table)
    gt = LocalRule(g.lo, g.hi, {w: table[w] for w in ylang if w in table})
    small = gt.shrink()
    report = {"total": not missing, "missing": missing, "radius": (small.left, small.right)}
    if missing:
        report["ok"] = False
        return report
    lifted = LocalRule(gt.lo, gt.hi, {w: gt.table[tau(w)] for w in language(theta, width)})
    if phi is not None:
        candidates = [phi]
    else:
        candidates = kernel_rules(search_automorphisms(theta, 0))
    match = None
    for cand in candidates:
        for m in range(gt.lo - cand.hi, gt.hi - cand.lo + 1):
            moved = cand.shifted(m)
            coded = LocalRule(moved.lo, moved.hi, {w: tau[v] for w, v in moved.table.items()})
            if same_map(theta, lifted, coded):
                if cand.lo >= -1 and cand.hi <= 1:
                    cand3 = cand.widen(theta, -1, 1)
                    if verify_rule_kernel(theta, cand3):
                        match = (cand, m)
                        break
        if match:
            break
    report["lift"] = match[0] if match else None
    report["shift"] = match[1] if match else None
    wit = aligned_injectivity_witness(pair, window)
    report["injectivity_window"] = window or default_window(theta)
    report["injective_witness"] = wit
    report["ok"] = match is not None and wit is None
    return report
