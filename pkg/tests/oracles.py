"""Independent brute-force oracles, written against plain dicts and strings.

Nothing here imports the library, so a bug in the library cannot leak into
the expected values.
"""
from itertools import permutations, product
from math import lcm


def expand(images: dict, word, n: int) -> list:
    w = list(word)
    for _ in range(n):
        w = [b for a in w for b in images[a]]
    return w


def blocks(word, L: int) -> set:
    return {tuple(word[i:i + L]) for i in range(len(word) - L + 1)}


def language_by_expansion(images: dict, L: int, length: int = 3000) -> set:
    """L-words of theta^n(a) over all letters a, with n large enough for the length."""
    r = len(next(iter(images.values())))
    n = 1
    while r ** n < length:
        n += 1
    out = set()
    for a in images:
        out |= blocks(expand(images, a, n), L)
    return out


def column_sets(images: dict, depth: int) -> set:
    """All column sets theta^k(A)_j for k <= depth."""
    A = list(images)
    r = len(images[A[0]])
    out = set()
    cur = {frozenset(A)}
    for _ in range(depth + 1):
        out |= cur
        cur = {frozenset(images[a][j] for a in S) for S in cur for j in range(r)}
    return out


def column_number_bruteforce(images: dict) -> int:
    return min(len(S) for S in column_sets(images, len(images) * 4))


def is_primitive_bruteforce(images: dict) -> bool:
    A = list(images)
    n = len(A)
    for k in range(1, (n - 1) ** 2 + 2):
        if all(set(expand(images, a, k)) == set(A) for a in A):
            return True
    return False


def indistinguishable_by_expansion(images: dict, coding: dict, a: str, b: str, depth: int) -> bool:
    return all([coding[x] for x in expand(images, a, n)] == [coding[x] for x in expand(images, b, n)]
               for n in range(depth + 1))


def disjoint_by_expansion(images: dict, a: str, b: str, depth: int) -> bool:
    return all(expand(images, a, n) != expand(images, b, n) for n in range(depth + 1))


def disjoint_by_position_pairs(images: dict, a: str, b: str, depth: int) -> bool:
    """theta^k(a) != theta^k(b) for k <= depth, tracking the set of letter pairs
    (theta^k(a)_j, theta^k(b)_j) over all positions j instead of the words."""
    r = len(images[a])
    cur = {(a, b)}
    for _ in range(depth + 1):
        if all(x == y for x, y in cur):
            return False
        cur = {(images[x][j], images[y][j]) for x, y in cur for j in range(r)}
    return True


def group_closure(gens, degree: int) -> set:
    e = tuple(range(degree))
    out = {e}
    todo = [e]
    while todo:
        x = todo.pop()
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in out:
                out.add(y)
                todo.append(y)
    return out


def centralizer_bruteforce(elements, degree: int) -> set:
    return {p for p in permutations(range(degree))
            if all(tuple(p[i] for i in g) == tuple(g[i] for i in p) for g in elements)}


def renaming_exists(images1: dict, images2: dict) -> bool:
    """Brute force over all letter bijections."""
    A, B = list(images1), list(images2)
    if len(A) != len(B):
        return False
    for perm in permutations(B):
        m = dict(zip(A, perm))
        if all([m[x] for x in images1[a]] == list(images2[m[a]]) for a in A):
            return True
    return False


def twist_by_formula(images: dict, tau: dict) -> dict:
    def tpow(a, j):
        for _ in range(j):
            a = tau[a]
        return a
    return {a: tuple(tpow(x, j) for j, x in enumerate(w)) for a, w in images.items()}


def compress_by_expansion(images: dict, seed: str, k: int, length: int = 4000) -> tuple:
    """Blocks at positions 0 mod k of the fixed point from seed, and their images."""
    r = len(images[seed])
    n = 1
    while r ** n < length:
        n += 1
    u = expand(images, seed, n)
    bl = {tuple(u[i:i + k]) for i in range(0, len(u) - k + 1, k)}
    img = {}
    for b in bl:
        w = expand(images, b, 1)
        img[b] = tuple(tuple(w[i:i + k]) for i in range(0, len(w), k))
    return bl, img


def _periodic_letters(f: dict) -> tuple:
    """Periodic points of a self-map of letters and the lcm of their periods."""
    per, p = [], 1
    for a in f:
        x, seen = f[a], [a]
        while x not in seen:
            seen.append(x)
            x = f[x]
        if x == a:
            per.append(a)
            p = lcm(p, len(seen))
    return per, p


def strongly_injective_bruteforce(images: dict, depth: int) -> bool:
    """No two seeds whose one-sided fixed points agree off the boundary entry,
    tested on theta^(p m) images for m <= depth."""
    right, p1 = _periodic_letters({a: w[0] for a, w in images.items()})
    left, p2 = _periodic_letters({a: w[-1] for a, w in images.items()})
    p = lcm(p1, p2)
    for seeds, cut in ((right, slice(1, None)), (left, slice(None, -1))):
        for a, b in product(seeds, repeat=2):
            if a < b and all(expand(images, a, p * m)[cut] == expand(images, b, p * m)[cut]
                             for m in range(1, depth + 1)):
                return False
    return True
