"""Small permutation groups on {0, ..., c-1}, printed 1-based."""
from __future__ import annotations

from itertools import permutations

from .substitution import SubstitutionError

Perm = tuple


def identity(c: int) -> Perm:
    return tuple(range(c))


def mul(p: Perm, q: Perm) -> Perm:
    """p o q (apply q first)."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def order(p: Perm) -> int:
    e = identity(len(p))
    q, n = p, 1
    while q != e:
        q, n = mul(p, q), n + 1
    return n


def cycles(p: Perm) -> list:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        if len(cyc) > 1:
            out.append(tuple(cyc))
    return out


def cycle_string(p: Perm, labels=None) -> str:
    """Cycle notation; 1-based numbers unless labels are given."""
    cyc = cycles(p)
    if not cyc:
        return "id"
    lab = (lambda i: labels[i]) if labels is not None else (lambda i: str(i + 1))
    if labels is None:
        sep = "" if len(p) <= 9 else " "
    else:
        sep = "" if all(len(x) == 1 for x in labels) else " "
    return "".join("(" + sep.join(lab(i) for i in c) + ")" for c in cyc)


def parse_cycles(text: str, c: int) -> Perm:
    """Parse 1-based cycle notation such as '(12)(34)' or '(1 2)'; 'id' is the identity."""
    p = list(range(c))
    text = text.strip()
    if text in ("", "id", "()"):
        return tuple(p)
    for part in text.replace(")", ")|").split("|"):
        part = part.strip()
        if not part:
            continue
        if not (part.startswith("(") and part.endswith(")")):
            raise SubstitutionError(f"bad cycle {part!r}")
        body = part[1:-1].replace(",", " ")
        toks = body.split() if " " in body.strip() else list(body.strip())
        nums = [int(x) - 1 for x in toks]
        for a, b in zip(nums, nums[1:] + nums[:1]):
            p[a] = b
    return tuple(p)


class PermGroup:
    """A permutation group given by generators; elements are enumerated."""

    __slots__ = ("degree", "generators", "names", "elements")

    def __init__(self, degree: int, generators, names=None):
        self.degree = degree
        self.generators = [tuple(g) for g in generators]
        self.names = list(names) if names is not None else [None] * len(self.generators)
        e = identity(degree)
        elems = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = mul(g, x)
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        self.elements = sorted(elems)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, p):
        return tuple(p) in set(self.elements)

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.degree == other.degree and self.elements == other.elements

    def __hash__(self):
        return hash((self.degree, tuple(self.elements)))

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={len(self)})"

    def element_strings(self) -> list:
        return [cycle_string(p) for p in self.elements]

    def is_abelian(self) -> bool:
        return all(mul(a, b) == mul(b, a) for a in self.generators for b in self.generators)

    def conjugate(self, h: Perm) -> "PermGroup":
        hi = inverse(h)
        return PermGroup(self.degree, [mul(h, mul(g, hi)) for g in self.generators], self.names)

    def as_dict(self) -> dict:
        gens = []
        for g, n in zip(self.generators, self.names):
            gens.append({"name": n, "perm": cycle_string(g)})
        return {"degree": self.degree, "order": len(self), "generators": gens,
                "elements": self.element_strings()}


def symmetric_group(c: int) -> PermGroup:
    if c < 2:
        return PermGroup(c, [])
    gens = [tuple([1, 0] + list(range(2, c)))]
    if c > 2:
        gens.append(tuple(list(range(1, c)) + [0]))
    return PermGroup(c, gens)


def alternating_group(c: int) -> PermGroup:
    gens = []
    for i in range(2, c):
        p = list(range(c))
        p[0], p[1], p[i] = 1, i, 0
        gens.append(tuple(p))
    return PermGroup(c, gens)


def centralizer(G: PermGroup, cap: int = 8) -> PermGroup:
    """All permutations of {0..c-1} commuting with every generator of G (brute force)."""
    c = G.degree
    if c > cap:
        raise SubstitutionError(f"degree {c} exceeds the centralizer cap {cap}")
    elems = [p for p in permutations(range(c)) if all(mul(p, g) == mul(g, p) for g in G.generators)]
    return PermGroup(c, elems)
