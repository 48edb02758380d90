"""The digit-labelled graph on letter pairs and the closure on letter subsets."""
from __future__ import annotations

import math
from collections import deque

from .substitution import Substitution, SubstitutionError, power


class PairGraph:
    """Nodes are letter pairs; digit d sends (x, y) to (theta_d x, theta_d y)."""

    __slots__ = ("theta",)

    def __init__(self, theta: Substitution):
        self.theta = theta

    @property
    def nodes(self):
        A = self.theta.alphabet
        return [(a, b) for a in A for b in A]

    def step(self, pair, d):
        return (self.theta.images[pair[0]][d], self.theta.images[pair[1]][d])

    def edges(self):
        for p in self.nodes:
            for d in range(self.theta.r):
                yield p, d, self.step(p, d)


def reachable_pairs(theta: Substitution, a: str, b: str) -> dict:
    """BFS closure from (a, b): pair -> shortest digit string reaching it.

    The digit string w reaches (c, d) when theta^|w|(a)_j = c and
    theta^|w|(b)_j = d for the index j whose base-r digits are w.
    """
    cols = theta.cols
    ix = theta.index
    start = (ix[a], ix[b])
    paths = {start: ()}
    todo = deque([start])
    while todo:
        x, y = todo.popleft()
        w = paths[(x, y)]
        for d in range(theta.r):
            q = (cols[d][x], cols[d][y])
            if q not in paths:
                paths[q] = w + (d,)
                todo.append(q)
    A = theta.alphabet
    return {(A[x], A[y]): w for (x, y), w in paths.items()}


def replay(theta: Substitution, pair, word) -> tuple:
    """Follow a digit string from a pair."""
    a, b = pair
    for d in word:
        a, b = theta.images[a][d], theta.images[b][d]
    return (a, b)


def exact_step_pairs(theta: Substitution, pairs, k: int) -> set:
    """Pairs reachable in exactly k steps from the given (integer) pairs."""
    cols = theta.cols
    cur = set(pairs)
    for _ in range(k):
        cur = {(c[x], c[y]) for (x, y) in cur for c in cols}
    return cur


def _cycle_length(theta: Substitution, x: int, y: int) -> int | None:
    """Length of a shortest closed walk through (x, y), or None."""
    cols = theta.cols
    start = (x, y)
    dist = {start: 0}
    todo = deque([start])
    while todo:
        p = todo.popleft()
        for c in cols:
            q = (c[p[0]], c[p[1]])
            if q == start:
                return dist[p] + 1
            if q not in dist:
                dist[q] = dist[p] + 1
                todo.append(q)
    return None


def periodic_pairs(theta: Substitution) -> list:
    """Off-diagonal pairs on a cycle of the pair graph with their minimal cycle length."""
    out = []
    A = theta.alphabet
    for x in range(theta.n):
        for y in range(theta.n):
            if x == y:
                continue
            p = _cycle_length(theta, x, y)
            if p is not None:
                out.append(((A[x], A[y]), p))
    return out


def p_theta(theta: Substitution) -> int:
    """lcm of the minimal cycle lengths of periodic pairs (1 if there are none)."""
    p = 1
    for _, q in periodic_pairs(theta):
        p = p * q // math.gcd(p, q)
    return p


def is_pair_aperiodic(theta: Substitution) -> bool:
    """Every periodic pair has a loop labelled by a single digit."""
    for (a, b), _ in periodic_pairs(theta):
        x, y = theta.index[a], theta.index[b]
        if not any(c[x] == x and c[y] == y for c in theta.cols):
            return False
    return True


def _has_closed_walk(theta: Substitution, x: int, y: int, P: int) -> bool:
    return (x, y) in exact_step_pairs(theta, {(x, y)}, P)


def pair_aperiodic_power(theta: Substitution, bound: int | None = None) -> tuple:
    """(P, theta^P) with theta^P pair-aperiodic.

    P starts at the lcm of minimal cycle lengths; the claim that every periodic
    pair then has a closed walk of length exactly P is checked directly, and P
    is enlarged if the check ever fails.
    """
    pp = periodic_pairs(theta)
    P = 1
    for _, q in pp:
        P = P * q // math.gcd(P, q)
    limit = bound or theta.r ** (theta.n ** 2)
    while True:
        bad = [(a, b) for (a, b), _ in pp if not _has_closed_walk(theta, theta.index[a], theta.index[b], P)]
        if not bad:
            break
        P *= 2
        if P > limit:
            raise SubstitutionError(f"no pair-aperiodic power up to {limit}")
    tp = power(theta, P)
    if not is_pair_aperiodic(tp):
        raise SubstitutionError("power failed pair-aperiodicity re-verification")
    return P, tp


def is_asymptotic_disjoint(theta: Substitution, a: str, b: str) -> bool:
    """Decide whether theta^k(a) and theta^k(b) differ for every k.

    theta must be pair-aperiodic; then the pair is disjoint exactly when
    theta^{|A|^2}(a) != theta^{|A|^2}(b), which we test on the pair graph.
    """
    if not is_pair_aperiodic(theta):
        raise SubstitutionError("substitution is not pair-aperiodic")
    if a == b:
        return False
    K = theta.n ** 2
    reach = exact_step_pairs(theta, {(theta.index[a], theta.index[b])}, K)
    return any(x != y for x, y in reach)


def asymptotic_disjoint_bruteforce(theta: Substitution, a: str, b: str, depth: int) -> bool:
    """Column-by-column check that theta^k(a) != theta^k(b) for all k <= depth."""
    cur = {(theta.index[a], theta.index[b])}
    for _ in range(depth + 1):
        if not any(x != y for x, y in cur):
            return False
        cur = {(c[x], c[y]) for (x, y) in cur for c in theta.cols}
    return True


def le_disjoint_witness(theta: Substitution, a: str, b: str) -> dict:
    """A periodic pair reachable from an asymptotically disjoint (a, b).

    Returns a dict with the periodic pair, the digit string reaching it, a loop
    digit, and for each pair (c, d) reachable from it a digit string of length
    2|A|^2 from (a, b) to (c, d).  `achieved_bound` is the least K for which
    the construction gives every length >= K.
    """
    if not is_asymptotic_disjoint(theta, a, b):
        raise SubstitutionError("pair is not asymptotically disjoint")
    n2 = theta.n ** 2
    cols = theta.cols
    ix = theta.index
    # walk of off-diagonal pairs of length |A|^2, built backwards from survivors
    layers = [{(ix[a], ix[b])}]
    for _ in range(n2):
        layers.append({(c[x], c[y]) for (x, y) in layers[-1] for c in cols if c[x] != c[y]})
    path = [next(iter(sorted(layers[-1])))]
    digits_back = []
    for k in range(n2 - 1, -1, -1):
        target = path[-1]
        for (x, y) in sorted(layers[k]):
            d = next((d for d, c in enumerate(cols) if (c[x], c[y]) == target), None)
            if d is not None:
                path.append((x, y))
                digits_back.append(d)
                break
    path.reverse()
    digits = list(reversed(digits_back))
    first = {}
    k1 = k2 = None
    for k, p in enumerate(path):
        if p in first:
            k1, k2 = first[p], k
            break
        first[p] = k
    pa = path[k1]
    loop = next(d for d, c in enumerate(cols) if c[pa[0]] == pa[0] and c[pa[1]] == pa[1])
    prefix = tuple(digits[:k1])
    A = theta.alphabet
    pa_named = (A[pa[0]], A[pa[1]])
    inner = reachable_pairs(theta, *pa_named)
    K = 2 * n2
    certs = {}
    longest = 0
    for cd, w in inner.items():
        longest = max(longest, len(w))
        pad = K - len(prefix) - len(w)
        certs[cd] = prefix + (loop,) * pad + w
    return {
        "pair": pa_named,
        "prefix": prefix,
        "loop_digit": loop,
        "cycle": (k1, k2),
        "certificates": certs,
        "length": K,
        "achieved_bound": len(prefix) + longest,
    }


# -- subsets ---------------------------------------------------------------

class SubsetClosure:
    """Letter subsets reached from the full alphabet under the column maps."""

    __slots__ = ("theta", "members", "paths", "c")

    def __init__(self, theta: Substitution, cap: int = 16):
        if theta.n > cap:
            raise SubstitutionError(f"alphabet larger than the subset cap {cap}")
        self.theta = theta
        full = frozenset(range(theta.n))
        self.paths = {full: ()}
        todo = deque([full])
        while todo:
            S = todo.popleft()
            for d, col in enumerate(theta.cols):
                T = frozenset(col[x] for x in S)
                if T not in self.paths:
                    self.paths[T] = self.paths[S] + (d,)
                    todo.append(T)
        self.members = list(self.paths)
        self.c = min(len(S) for S in self.members)


def set_name(theta: Substitution, S) -> str:
    return "".join(theta.alphabet[x] for x in sorted(S)) if all(len(a) == 1 for a in theta.alphabet) \
        else "{" + ",".join(theta.alphabet[x] for x in sorted(S)) + "}"


class MinimalSets:
    """Column number c, the family of minimal sets and the induced substitution."""

    __slots__ = ("theta", "c", "sets", "paths", "tilde", "names")

    def __init__(self, theta, c, sets, paths, tilde, names):
        self.theta = theta
        self.c = c
        self.sets = sets
        self.paths = paths
        self.tilde = tilde
        self.names = names

    def as_letters(self) -> list:
        """Minimal sets as sorted tuples of letters."""
        A = self.theta.alphabet
        return [tuple(A[x] for x in sorted(S)) for S in self.sets]


def minimal_sets(theta: Substitution, cap: int = 16) -> MinimalSets:
    closure = SubsetClosure(theta, cap)
    c = closure.c
    sets = sorted((S for S in closure.members if len(S) == c), key=lambda S: sorted(S))
    names = {S: set_name(theta, S) for S in sets}
    images = {}
    for S in sets:
        img = []
        for col in theta.cols:
            T = frozenset(col[x] for x in S)
            if len(T) != c or T not in names:
                raise SubstitutionError("minimal sets are not closed under the columns")
            img.append(names[T])
        images[names[S]] = tuple(img)
    tilde = Substitution(images, [names[S] for S in sets])
    paths = {S: closure.paths[S] for S in sets}
    return MinimalSets(theta, c, sets, paths, tilde, names)


def column_number(theta: Substitution) -> int:
    return SubsetClosure(theta).c
