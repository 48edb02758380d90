"""Sliding block codes given by tables on language windows."""
from __future__ import annotations

import re
from typing import Mapping

from .substitution import (ParseError, Substitution, SubstitutionError, as_word, language,
                           show)


class LocalRule:
    """(Phi x)_n = table[x_{n+lo} ... x_{n+hi}].

    The left radius is -lo and the right radius is hi; lo may be positive and hi
    negative (shift powers are rules with lo = hi).  The table may be partial.
    """

    __slots__ = ("lo", "hi", "table")

    def __init__(self, lo: int, hi: int, table: Mapping):
        if hi < lo:
            raise SubstitutionError("empty window")
        self.lo = lo
        self.hi = hi
        self.table = {as_word(k): v for k, v in table.items()}
        for k in self.table:
            if len(k) != self.width:
                raise SubstitutionError(f"window {show(k)} has the wrong width")

    @classmethod
    def radii(cls, left: int, right: int, table: Mapping) -> "LocalRule":
        return cls(-left, right, table)

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    @property
    def left(self) -> int:
        return -self.lo

    @property
    def right(self) -> int:
        return self.hi

    def __call__(self, window):
        return self.table[as_word(window)]

    def __eq__(self, other):
        return isinstance(other, LocalRule) and (self.lo, self.hi, self.table) == (other.lo, other.hi, other.table)

    def __hash__(self):
        return hash((self.lo, self.hi, tuple(sorted(self.table.items()))))

    def __repr__(self):
        return f"LocalRule(lo={self.lo}, hi={self.hi}, {len(self.table)} entries)"

    def key(self):
        return (self.lo, self.hi, tuple(sorted(self.table.items())))

    def apply(self, word, origin: int = 0) -> tuple:
        """Apply to a finite word; returns (image, origin of the image).

        Image position j sits over input position j - lo, so the input origin
        moves to origin + lo.
        """
        w = as_word(word)
        W = self.width
        out = tuple(self.table[w[j:j + W]] for j in range(len(w) - W + 1))
        return out, origin + self.lo

    def missing(self, theta: Substitution) -> list:
        return sorted(w for w in language(theta, self.width) if w not in self.table)

    def is_total(self, theta: Substitution) -> bool:
        return not self.missing(theta)

    def restrict(self, theta: Substitution) -> "LocalRule":
        """Keep only entries on language windows."""
        lang = language(theta, self.width)
        return LocalRule(self.lo, self.hi, {w: v for w, v in self.table.items() if w in lang})

    def widen(self, theta: Substitution, lo: int, hi: int) -> "LocalRule":
        """Same map on a larger window [lo, hi] (over language words)."""
        if lo > self.lo or hi < self.hi:
            raise SubstitutionError("can only widen")
        a = self.lo - lo
        table = {}
        for w in language(theta, hi - lo + 1):
            table[w] = self.table[w[a:a + self.width]]
        return LocalRule(lo, hi, table)

    def shrink(self, theta: Substitution | None = None) -> "LocalRule":
        """Drop outer window letters the output does not depend on.

        With theta the table is first restricted to its language; without it
        the table is taken as it stands.
        """
        rule = self.restrict(theta) if theta is not None else self
        changed = True
        while changed and rule.width > 1:
            changed = False
            for side in ("left", "right"):
                if rule.width == 1:
                    break
                groups = {}
                ok = True
                for w, v in rule.table.items():
                    k = w[1:] if side == "left" else w[:-1]
                    if groups.setdefault(k, v) != v:
                        ok = False
                        break
                if ok:
                    lo, hi = (rule.lo + 1, rule.hi) if side == "left" else (rule.lo, rule.hi - 1)
                    rule = LocalRule(lo, hi, groups)
                    changed = True
        return rule

    def shifted(self, m: int) -> "LocalRule":
        """sigma^m o Phi: (sigma^m Phi x)_n = (Phi x)_{n+m}."""
        return LocalRule(self.lo + m, self.hi + m, self.table)

    def to_text(self, theta: Substitution | None = None) -> str:
        return rule_to_text(self, theta)


def identity_rule(theta: Substitution) -> LocalRule:
    return LocalRule(0, 0, {(a,): a for a in theta.alphabet})


def shift_rule(theta: Substitution, m: int = 1) -> LocalRule:
    return LocalRule(m, m, {(a,): a for a in theta.alphabet})


def letter_rule(perm: Mapping[str, str]) -> LocalRule:
    return LocalRule(0, 0, {(a,): b for a, b in perm.items()})


def compose(theta: Substitution, outer: LocalRule, inner: LocalRule, target: Substitution | None = None) -> LocalRule:
    """outer o inner on the language of theta (inner maps X_theta into the
    domain of outer, which lives on `target` if given)."""
    lo = outer.lo + inner.lo
    hi = outer.hi + inner.hi
    table = {}
    for w in language(theta, hi - lo + 1):
        mid, _ = inner.apply(w)
        out, _ = outer.apply(mid)
        table[w] = out[0]
    return LocalRule(lo, hi, table)


def power_rule(theta: Substitution, rule: LocalRule, n: int) -> LocalRule:
    if n == 0:
        return identity_rule(theta)
    out = rule
    for _ in range(n - 1):
        out = compose(theta, rule, out)
    return out


def same_map(theta: Substitution, a: LocalRule, b: LocalRule) -> bool:
    """Do two rules define the same map on X_theta?"""
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    return a.widen(theta, lo, hi).table == b.widen(theta, lo, hi).table


def maps_into_language(theta: Substitution, rule: LocalRule, L: int, target: Substitution | None = None) -> bool:
    """Every image of a language word of width L + width - 1 is a target language word."""
    target = target or theta
    lang = language(target, L)
    for w in language(theta, L + rule.width - 1):
        if rule.apply(w)[0] not in lang:
            return False
    return True


# -- text format -------------------------------------------------------------

def parse_rule(text: str) -> LocalRule:
    """Parse a rule table.

    Format::

        radius 1 0          # left and right radius (default 1 0)
        center y -> x       # optional: output for a centre letter in any context
              a  b  c       # header: the last letter of the window
        a     z  y  x       # row label: the window without its last letter
        b     y  .  z       # '.' or '-' marks a window outside the language

    Row labels are read letter by letter (or as space-free tokens joined by
    ``|`` for multi-character letters).
    """
    left, right = 1, 0
    centers = {}
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        toks = line.split()
        if toks[0] == "radius":
            if len(toks) != 3 or not all(t.lstrip("-").isdigit() for t in toks[1:]):
                raise ParseError("expected 'radius L R'", lineno, 1)
            left, right = int(toks[1]), int(toks[2])
            continue
        if toks[0] == "center":
            m = re.match(r"^\s*center\s+(\S+)\s*->\s*(\S+)\s*$", line)
            if not m:
                raise ParseError("expected 'center a -> b'", lineno, 1)
            centers[m.group(1)] = m.group(2)
            continue
        if header is None:
            header = toks
            continue
        if len(toks) != len(header) + 1:
            raise ParseError(f"row has {len(toks) - 1} cells, header has {len(header)}", lineno, 1)
        rows.append((lineno, toks))
    width = left + right + 1
    table = {}
    for lineno, toks in rows:
        label = tuple(toks[0].split("|")) if "|" in toks[0] else tuple(toks[0])
        if len(label) != width - 1:
            raise ParseError(f"row label {toks[0]!r} should have {width - 1} letters", lineno, 1)
        for col, cell in zip(header, toks[1:]):
            if cell in (".", "-"):
                continue
            table[label + (col,)] = cell
    rule = LocalRule(-left, right, table)
    if centers:
        rule = _CenteredRule(rule, centers)
    return rule


class _CenteredRule(LocalRule):
    """A table completed by context-free outputs for some centre letters."""

    __slots__ = ("centers",)

    def __init__(self, rule: LocalRule, centers: Mapping[str, str]):
        super().__init__(rule.lo, rule.hi, rule.table)
        self.centers = dict(centers)

    def over(self, theta: Substitution) -> LocalRule:
        """Materialise on the language of theta."""
        table = dict(self.table)
        c = -self.lo
        for w in language(theta, self.width):
            if w not in table and w[c] in self.centers:
                table[w] = self.centers[w[c]]
        return LocalRule(self.lo, self.hi, table)


def materialize(rule: LocalRule, theta: Substitution) -> LocalRule:
    if isinstance(rule, _CenteredRule):
        return rule.over(theta)
    return rule


def rule_to_text(rule: LocalRule, theta: Substitution | None = None) -> str:
    if rule.lo > 0 or rule.hi < 0:
        raise SubstitutionError("window must contain the origin to print as a table")
    letters = list(theta.alphabet) if theta is not None else sorted({a for w in rule.table for a in w})
    multi = any(len(a) > 1 for a in letters)
    labels = sorted({w[:-1] for w in rule.table}, key=lambda w: [letters.index(a) for a in w])
    def lab(w):
        return "|".join(w) if multi else "".join(w)
    wlab = max([len(lab(w)) for w in labels] + [1])
    cw = max(len(a) for a in letters + list(rule.table.values()))
    lines = [f"radius {rule.left} {rule.right}"]
    lines.append(" " * wlab + " " + " ".join(a.rjust(cw) for a in letters))
    for w in labels:
        cells = [rule.table.get(w + (a,), ".").rjust(cw) for a in letters]
        lines.append(lab(w).ljust(wlab) + " " + " ".join(cells))
    return "\n".join(lines) + "\n"
