"""Constant-length substitutions, their languages, fixed points and basic invariants.

Letters are strings (usually single characters) and words are tuples of
letters.  Internally every substitution also keeps an integer-coded copy of its
table so that the combinatorial routines can work on small ints.
"""
from __future__ import annotations

import math
import re
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

Word = tuple


class SubstitutionError(ValueError):
    """Raised for malformed substitutions, codings or violated preconditions."""


class ParseError(SubstitutionError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


def as_word(w) -> Word:
    """Turn a string (one letter per character) or a sequence into a word."""
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def show(word: Iterable[str]) -> str:
    """Render a word; multi-character letters are separated by spaces."""
    word = list(word)
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return " ".join(word)


class Substitution:
    """A substitution of constant length r on an ordered alphabet.

    >>> t = Substitution({"a": "ab", "b": "ba"})
    >>> t.r, t.alphabet
    (2, ('a', 'b'))
    >>> show(t("ab"))
    'abba'
    """

    __slots__ = ("alphabet", "r", "images", "index", "table", "cols", "_hash")

    def __init__(self, images: Mapping[str, Sequence[str] | str], alphabet: Sequence[str] | None = None):
        if alphabet is None:
            alphabet = list(images)
        alphabet = tuple(alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise SubstitutionError("repeated letter in alphabet")
        if set(alphabet) != set(images):
            raise SubstitutionError("alphabet and image keys differ")
        if not alphabet:
            raise SubstitutionError("empty alphabet")
        imgs = {a: as_word(images[a]) for a in alphabet}
        lengths = {len(w) for w in imgs.values()}
        if len(lengths) != 1:
            raise SubstitutionError(f"images have different lengths {sorted(lengths)}")
        r = lengths.pop()
        if r < 2:
            raise SubstitutionError("length must be at least 2")
        index = {a: i for i, a in enumerate(alphabet)}
        for a, w in imgs.items():
            for b in w:
                if b not in index:
                    raise SubstitutionError(f"letter {b!r} in image of {a!r} is not in the alphabet")
        self.alphabet = alphabet
        self.r = r
        self.images = imgs
        self.index = index
        self.table = tuple(tuple(index[b] for b in imgs[a]) for a in alphabet)
        self.cols = tuple(tuple(self.table[x][d] for x in range(len(alphabet))) for d in range(r))
        self._hash = None

    # -- basic protocol -------------------------------------------------
    def __len__(self):
        return len(self.alphabet)

    @property
    def n(self) -> int:
        return len(self.alphabet)

    def __call__(self, word) -> Word:
        out = []
        for a in as_word(word):
            out.extend(self.images[a])
        return tuple(out)

    def apply(self, word, times: int = 1) -> Word:
        w = as_word(word)
        for _ in range(times):
            w = self(w)
        return w

    def __eq__(self, other):
        return isinstance(other, Substitution) and self.alphabet == other.alphabet and self.images == other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.alphabet, tuple(self.images[a] for a in self.alphabet)))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{a}->{show(self.images[a])}" for a in self.alphabet)
        return f"Substitution({body})"

    def to_text(self) -> str:
        return "".join(f"{a} -> {show(self.images[a])}\n" for a in self.alphabet)

    def column(self, d: int) -> dict:
        """The column map theta_d as a dict letter -> letter."""
        if not 0 <= d < self.r:
            raise SubstitutionError(f"digit {d} out of range for length {self.r}")
        return {a: self.images[a][d] for a in self.alphabet}

    def encode(self, word) -> tuple:
        return tuple(self.index[a] for a in as_word(word))

    def decode(self, codes: Iterable[int]) -> Word:
        return tuple(self.alphabet[i] for i in codes)

    def apply_codes(self, codes: Sequence[int], times: int = 1) -> tuple:
        t = self.table
        w = tuple(codes)
        for _ in range(times):
            w = tuple(y for x in w for y in t[x])
        return w

    def rename(self, mapping: Mapping[str, str]) -> "Substitution":
        """Rename letters with a bijection."""
        if len(set(mapping[a] for a in self.alphabet)) != len(self.alphabet):
            raise SubstitutionError("renaming is not injective")
        return Substitution({mapping[a]: tuple(mapping[b] for b in self.images[a]) for a in self.alphabet},
                            [mapping[a] for a in self.alphabet])


# -- text formats ---------------------------------------------------------

_RULE = re.compile(r"^\s*(\S+)\s*->\s*(.*?)\s*$")
_CODE = re.compile(r"^\s*(\S+)\s*=>\s*(\S+)\s*$")


def _split_word(text: str) -> Word:
    text = text.strip()
    if any(ch.isspace() for ch in text):
        return tuple(text.split())
    return tuple(text)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def parse_substitution(text: str) -> Substitution:
    """Parse lines ``a -> aac``; ``#`` starts a comment, blank lines are ignored.

    Image words are read one letter per character unless they contain spaces, in
    which case the space-separated tokens are the letters.  The alphabet order
    is the order in which left-hand sides appear.
    """
    images = {}
    where = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _RULE.match(line)
        if not m:
            raise ParseError("expected 'letter -> word'", lineno, len(raw) - len(raw.lstrip()) + 1)
        a, rhs = m.group(1), m.group(2)
        if a in images:
            raise ParseError(f"letter {a!r} defined twice", lineno, m.start(1) + 1)
        if not rhs:
            raise ParseError("empty image", lineno, m.end(1) + 1)
        images[a] = _split_word(rhs)
        where[a] = (lineno, m.start(2) + 1, raw)
    if not images:
        raise ParseError("no rules found")
    for a, w in images.items():
        for pos, b in enumerate(w):
            if b not in images:
                lineno, col, raw = where[a]
                if len(b) == 1:
                    col = col + raw[col - 1:].index(b)
                raise ParseError(f"unknown letter {b!r}", lineno, col)
    lengths = {len(w) for w in images.values()}
    if len(lengths) != 1:
        a = next(a for a in images if len(images[a]) != len(next(iter(images.values()))))
        raise ParseError(f"image of {a!r} has a different length", where[a][0], where[a][1])
    try:
        return Substitution(images)
    except SubstitutionError as exc:
        raise ParseError(str(exc)) from exc


class LetterCoding:
    """A total letter-to-letter map from a source alphabet onto a target alphabet."""

    __slots__ = ("source", "target", "map")

    def __init__(self, mapping: Mapping[str, str], source: Sequence[str] | None = None):
        source = tuple(source) if source is not None else tuple(mapping)
        missing = [a for a in source if a not in mapping]
        if missing:
            raise SubstitutionError(f"coding undefined on {missing}")
        self.source = source
        self.map = {a: mapping[a] for a in source}
        target = []
        for a in source:
            if self.map[a] not in target:
                target.append(self.map[a])
        self.target = tuple(target)

    def __call__(self, word) -> Word:
        return tuple(self.map[a] for a in as_word(word))

    def __getitem__(self, a):
        return self.map[a]

    def is_injective(self) -> bool:
        return len(self.target) == len(self.source)

    def classes(self) -> list:
        out = {}
        for a in self.source:
            out.setdefault(self.map[a], []).append(a)
        return [tuple(v) for v in out.values()]

    def compose(self, other: "LetterCoding") -> "LetterCoding":
        """self after other."""
        return LetterCoding({a: self.map[other.map[a]] for a in other.source}, other.source)

    def __eq__(self, other):
        return isinstance(other, LetterCoding) and self.source == other.source and self.map == other.map

    def __repr__(self):
        return "LetterCoding(" + ", ".join(f"{a}=>{b}" for a, b in self.map.items()) + ")"

    def to_text(self) -> str:
        return "".join(f"{a} => {b}\n" for a, b in self.map.items())


def parse_coding(text: str, alphabet: Sequence[str] | None = None) -> LetterCoding:
    """Parse lines ``a => x``."""
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _CODE.match(line)
        if not m:
            raise ParseError("expected 'letter => letter'", lineno, 1)
        a = m.group(1)
        if alphabet is not None and a not in alphabet:
            raise ParseError(f"unknown letter {a!r}", lineno, m.start(1) + 1)
        if a in mapping:
            raise ParseError(f"letter {a!r} coded twice", lineno, m.start(1) + 1)
        mapping[a] = m.group(2)
    if alphabet is not None:
        missing = [a for a in alphabet if a not in mapping]
        if missing:
            raise ParseError(f"coding undefined on {missing}")
    return LetterCoding(mapping, alphabet)


# -- powers and columns ---------------------------------------------------

@lru_cache(maxsize=256)
def power(theta: Substitution, n: int) -> Substitution:
    """theta applied n times, as a substitution of length r**n."""
    if n < 1:
        raise SubstitutionError("power needs n >= 1")
    if n == 1:
        return theta
    return Substitution({a: theta.apply((a,), n) for a in theta.alphabet}, theta.alphabet)


def digits(j: int, r: int, n: int) -> tuple:
    """Base-r digits of j, most significant first, padded to n places."""
    out = []
    for _ in range(n):
        j, d = divmod(j, r)
        out.append(d)
    if j:
        raise SubstitutionError("index too large for the number of digits")
    return tuple(reversed(out))


def column_map(theta: Substitution, w: Sequence[int]) -> dict:
    """Column map of the digit word w = (d_{n-1}, ..., d_0).

    The result sends a to the letter of theta^n(a) at index sum d_i r^i, that is
    theta_{d_0} o ... o theta_{d_{n-1}} (the leading digit acts first).
    """
    m = list(range(theta.n))
    for d in w:
        if not 0 <= d < theta.r:
            raise SubstitutionError(f"digit {d} out of range for length {theta.r}")
        col = theta.cols[d]
        m = [col[x] for x in m]
    return {theta.alphabet[i]: theta.alphabet[m[i]] for i in range(theta.n)}


def _column_codes(theta: Substitution, w: Sequence[int]) -> tuple:
    m = tuple(range(theta.n))
    for d in w:
        col = theta.cols[d]
        m = tuple(col[x] for x in m)
    return m


# -- primitivity and language ---------------------------------------------

def primitivity_exponent(theta: Substitution) -> int | None:
    """Smallest k <= |A|^2 with every letter in every theta^k(a), or None."""
    n = theta.n
    full = (1 << n) - 1
    step = [0] * n
    for x in range(n):
        for y in theta.table[x]:
            step[x] |= 1 << y
    reach = list(step)
    for k in range(1, n * n + 1):
        if all(s == full for s in reach):
            return k
        nxt = []
        for s in reach:
            t = 0
            y = 0
            while s:
                if s & 1:
                    t |= step[y]
                s >>= 1
                y += 1
            nxt.append(t)
        reach = nxt
    return None


def is_primitive(theta: Substitution) -> tuple:
    """(primitive?, smallest witness exponent or None)."""
    k = primitivity_exponent(theta)
    return (k is not None, k)


def require_primitive(theta: Substitution):
    if primitivity_exponent(theta) is None:
        raise SubstitutionError("substitution is not primitive")


@lru_cache(maxsize=512)
def _two_words(theta: Substitution) -> frozenset:
    """Integer-coded 2-letter language, closed under 2-subwords of images."""
    t = theta.table
    found = set()
    for x in range(theta.n):
        w = t[x]
        found.update(zip(w, w[1:]))
    todo = list(found)
    while todo:
        x, y = todo.pop()
        w = t[x] + t[y]
        for p in zip(w, w[1:]):
            if p not in found:
                found.add(p)
                todo.append(p)
    return frozenset(found)


@lru_cache(maxsize=2048)
def _language_codes(theta: Substitution, L: int) -> frozenset:
    if L == 1:
        return frozenset((x,) for x in range(theta.n))
    if L == 2:
        return _two_words(theta)
    n = 1
    while theta.r ** n < L - 1:
        n += 1
    big = power(theta, n).table
    out = set()
    for x, y in _two_words(theta):
        w = big[x] + big[y]
        for i in range(len(w) - L + 1):
            out.add(w[i:i + L])
    return frozenset(out)


def language(theta: Substitution, L: int) -> set:
    """The length-L words of X_theta (theta must be primitive).

    Every word of length L sits inside theta^n(xy) for a 2-letter word xy of the
    language as soon as r^n >= L - 1, and the 2-letter words are the closure of
    the 2-subwords of single images under taking 2-subwords of images.
    """
    require_primitive(theta)
    if L < 1:
        raise SubstitutionError("length must be positive")
    return {theta.decode(w) for w in _language_codes(theta, L)}


def language_codes(theta: Substitution, L: int) -> frozenset:
    """Integer-coded version of language(); assumes primitivity was checked."""
    return _language_codes(theta, L)


def in_language(theta: Substitution, word) -> bool:
    w = theta.encode(word)
    return w in _language_codes(theta, len(w))


def complexity(theta: Substitution, L: int) -> int:
    return len(_language_codes(theta, L))


def is_finite_shift(theta: Substitution, bound: int | None = None) -> bool:
    """Is X_theta finite, i.e. is a fixed point u of theta^p periodic?

    X_theta is the orbit closure of u, so it is finite exactly when u = w w w ...
    and then theta^p(w) = w^(r^p) for w = u[0:q].  That identity is checked for
    every q up to r*|A|^2 (or the given bound).
    """
    require_primitive(theta)
    bound = bound or max(theta.r * theta.n ** 2, 4)
    p = seed_period(theta)
    tp = power(theta, p)
    seed = right_seeds(theta)[0]
    u = fixed_point_prefix(theta, seed, bound)
    for q in range(1, bound + 1):
        w = u[:q]
        if any(w[i % q] != u[i] for i in range(q, min(len(u), 2 * bound))):
            continue
        if tp(w) == w * tp.r:
            return True
    return False


# -- periodic points -------------------------------------------------------

class PeriodicPointSeed:
    __slots__ = ("left_seed", "right_seed", "period", "admissible")

    def __init__(self, left_seed, right_seed, period, admissible):
        self.left_seed = left_seed
        self.right_seed = right_seed
        self.period = period
        self.admissible = admissible

    def __repr__(self):
        return f"{self.left_seed}.{self.right_seed} (p={self.period})"

    def __eq__(self, other):
        return isinstance(other, PeriodicPointSeed) and (self.left_seed, self.right_seed, self.period, self.admissible) == (
            other.left_seed, other.right_seed, other.period, other.admissible)

    def __hash__(self):
        return hash((self.left_seed, self.right_seed, self.period))


def _cycle_period(m: Sequence[int]) -> tuple:
    """(lcm of cycle lengths, set of periodic points) of a self map of range(n)."""
    periodic = set()
    p = 1
    for x in range(len(m)):
        seen = {}
        y = x
        i = 0
        while y not in seen:
            seen[y] = i
            y = m[y]
            i += 1
        length = i - seen[y]
        p = p * length // math.gcd(p, length)
        z = y
        for _ in range(length):
            periodic.add(z)
            z = m[z]
    return p, periodic


def seed_period(theta: Substitution) -> int:
    """Common period p of all one-sided periodic points of theta."""
    p0, _ = _cycle_period(theta.cols[0])
    p1, _ = _cycle_period(theta.cols[-1])
    return p0 * p1 // math.gcd(p0, p1)


def right_seeds(theta: Substitution) -> list:
    return [theta.alphabet[x] for x in sorted(_cycle_period(theta.cols[0])[1])]


def left_seeds(theta: Substitution) -> list:
    return [theta.alphabet[x] for x in sorted(_cycle_period(theta.cols[-1])[1])]


def periodic_point_seeds(theta: Substitution) -> list:
    """All admissible bi-infinite periodic points b.a of the common period p."""
    require_primitive(theta)
    p = seed_period(theta)
    two = _two_words(theta)
    out = []
    for b in left_seeds(theta):
        for a in right_seeds(theta):
            if (theta.index[b], theta.index[a]) in two:
                out.append(PeriodicPointSeed(b, a, p, True))
    return out


def fixed_point_prefix(theta: Substitution, seed: str, N: int) -> Word:
    """First N letters of the one-sided fixed point of theta^p starting at seed."""
    p = seed_period(theta)
    tp = power(theta, p)
    if tp.images[seed][0] != seed:
        raise SubstitutionError(f"{seed!r} is not a right seed")
    w = (seed,)
    while len(w) < N:
        w = tp(w)
    return w[:N]


def left_fixed_point_suffix(theta: Substitution, seed: str, N: int) -> Word:
    """Last N letters of the left-infinite fixed point of theta^p ending at seed."""
    p = seed_period(theta)
    tp = power(theta, p)
    if tp.images[seed][-1] != seed:
        raise SubstitutionError(f"{seed!r} is not a left seed")
    w = (seed,)
    while len(w) < N:
        w = tp(w)
    return w[-N:]


# -- height and pure base -------------------------------------------------

def _strip_common(g: int, r: int) -> int:
    """Largest divisor of g coprime to r."""
    while True:
        d = math.gcd(g, r)
        if d == 1:
            return g
        g //= d


def height(theta: Substitution, max_doublings: int = 12) -> int:
    """Height from the return positions of u_0 in a fixed point.

    The running gcd is taken over a prefix of length r*|A|^2 and re-checked on a
    prefix twice as long; the prefix keeps doubling until two consecutive
    lengths agree.
    """
    require_primitive(theta)
    seed = right_seeds(theta)[0]
    N = max(theta.r * theta.n ** 2, 2)
    prev = None
    for _ in range(max_doublings):
        u = fixed_point_prefix(theta, seed, N)
        g = 0
        for i in range(1, N):
            if u[i] == u[0]:
                g = math.gcd(g, i)
        h = _strip_common(g, theta.r) if g else None
        if h is not None and h == prev:
            return h
        prev = h
        N *= 2
    raise SubstitutionError("height did not stabilise")


def _block_substitution(theta: Substitution, first_block: Word, k: int) -> tuple:
    """Closure of k-blocks under theta, starting from first_block.

    Returns (ordered list of blocks, dict block -> list of image blocks).
    """
    blocks = [first_block]
    seen = {first_block: 0}
    images = {}
    i = 0
    while i < len(blocks):
        b = blocks[i]
        img = theta(b)
        parts = [tuple(img[j * k:(j + 1) * k]) for j in range(theta.r)]
        images[b] = parts
        for q in parts:
            if q not in seen:
                seen[q] = len(blocks)
                blocks.append(q)
        i += 1
    return blocks, images


def block_name(block: Sequence[str]) -> str:
    return "".join(block) if all(len(a) == 1 for a in block) else "(" + " ".join(block) + ")"


def _named_block_substitution(theta, first_block, k):
    blocks, images = _block_substitution(theta, first_block, k)
    names = {}
    for b in blocks:
        nm = block_name(b)
        names[b] = nm
    if len(set(names.values())) != len(names):
        names = {b: f"B{i}" for i, b in enumerate(blocks)}
    order = sorted(blocks)
    sub = Substitution({names[b]: tuple(names[q] for q in images[b]) for b in order}, [names[b] for b in order])
    decoding = {names[b]: b for b in order}
    return sub, decoding


def pure_base(theta: Substitution) -> tuple:
    """(theta', decoding) on the h-blocks at positions 0 mod h of a fixed point."""
    h = height(theta)
    if h == 1:
        raise SubstitutionError("height is 1, the pure base is the substitution itself")
    seed = right_seeds(theta)[0]
    first = fixed_point_prefix(theta, seed, h)
    return _named_block_substitution(theta, first, h)


def suspension(theta: Substitution, h: int) -> Substitution:
    """A height-h substitution whose pure base is theta (needs gcd(h, r) = 1).

    The letters are (a, i) written ``a0, a1, ...``; the h-block a0 a1 ... stands
    for a, and the image of a_i is the i-th length-r piece of the decoded
    image of a.
    """
    if math.gcd(h, theta.r) != 1 or h < 2:
        raise SubstitutionError("suspension height must be >= 2 and coprime to r")
    def name(a, i):
        return f"{a}{i}"
    images = {}
    alphabet = []
    for a in theta.alphabet:
        dec = [name(b, i) for b in theta.images[a] for i in range(h)]
        for i in range(h):
            alphabet.append(name(a, i))
            images[name(a, i)] = tuple(dec[i * theta.r:(i + 1) * theta.r])
    return Substitution(images, alphabet)


# -- injectivity -----------------------------------------------------------

def is_injective(theta: Substitution) -> bool:
    return len(set(theta.table)) == theta.n


def injectivize(theta: Substitution) -> tuple:
    """Merge letters with equal images until injective.

    Returns (quotient, coding); each class is named after its first member.
    A one-letter quotient means X_theta is finite.
    """
    cls = {a: a for a in theta.alphabet}
    cur = theta
    while not is_injective(cur):
        rep = {}
        merge = {}
        for a in cur.alphabet:
            img = cur.images[a]
            merge[a] = rep.setdefault(img, a)
        letters = [a for a in cur.alphabet if merge[a] == a]
        cur = Substitution({a: tuple(merge[b] for b in cur.images[a]) for a in letters}, letters)
        cls = {a: merge[cls[a]] for a in theta.alphabet}
    return cur, LetterCoding(cls, theta.alphabet)


# -- strong injectivity --------------------------------------------------------

def _fixed_points_agree_off_boundary(tp: Substitution, x: int, y: int, boundary: int) -> bool:
    """True if every pair reached from (x, y) along a digit string of tp that
    contains a digit other than `boundary` is diagonal."""
    start = (x, y, False)
    seen = {start}
    todo = [start]
    while todo:
        a, b, flag = todo.pop()
        if flag and a != b:
            return False
        for d in range(tp.r):
            col = tp.cols[d]
            st = (col[a], col[b], flag or d != boundary)
            if st not in seen:
                seen.add(st)
                todo.append(st)
    return True


def strong_injectivity_violation(theta: Substitution):
    """None if strongly injective, else ('right'|'left', seed1, seed2)."""
    if not is_injective(theta):
        raise SubstitutionError("substitution is not injective")
    require_primitive(theta)
    p = seed_period(theta)
    tp = power(theta, p)
    for side, seeds, boundary in (("right", right_seeds(theta), 0), ("left", left_seeds(theta), tp.r - 1)):
        idx = [theta.index[a] for a in seeds]
        for i, x in enumerate(idx):
            for y in idx[i + 1:]:
                if _fixed_points_agree_off_boundary(tp, x, y, boundary):
                    return (side, theta.alphabet[x], theta.alphabet[y])
    return None


def is_strongly_injective(theta: Substitution) -> tuple:
    """(strongly injective?, violating seed pair or None)."""
    v = strong_injectivity_violation(theta)
    return (v is None, v)


# -- sliding block representations -------------------------------------------

def sliding_block_representation(theta: Substitution, ell: int, k: int = 0) -> tuple:
    """The k-shifted ell-sliding block representation.

    Returns (substitution on language ell-words, to_letter, to_block) where
    to_letter sends a block letter to its first letter and to_block sends a
    language ell-word to its block letter.  Projecting to the first letter
    intertwines the new substitution with sigma^k o theta.
    """
    if ell < 1 or not 0 <= k < theta.r:
        raise SubstitutionError("need ell >= 1 and 0 <= k < r")
    if k + theta.r + ell - 1 > ell * theta.r:
        raise SubstitutionError("shift too large for this block length")
    require_primitive(theta)
    words = sorted(language(theta, ell), key=lambda w: theta.encode(w))
    names = {w: block_name(w) for w in words}
    if len(set(names.values())) != len(names):
        names = {w: f"B{i}" for i, w in enumerate(words)}
    images = {}
    for w in words:
        img = theta(w)
        images[names[w]] = tuple(names[tuple(img[k + i:k + i + ell])] for i in range(theta.r))
    sub = Substitution(images, [names[w] for w in words])
    to_letter = LetterCoding({names[w]: w[0] for w in words}, sub.alphabet)
    to_block = {w: names[w] for w in words}
    return sub, to_letter, to_block


# -- recognizability and odometer digits -------------------------------------

class OdometerDigits:
    __slots__ = ("digits", "r")

    def __init__(self, digits, r):
        self.digits = tuple(digits)
        self.r = r

    @property
    def precision(self):
        return len(self.digits)

    def value(self) -> int:
        """Lambda_{r^n} as an integer in [0, r^n)."""
        return sum(d * self.r ** i for i, d in enumerate(self.digits))

    def __eq__(self, other):
        return isinstance(other, OdometerDigits) and self.digits == other.digits and self.r == other.r

    def __repr__(self):
        return f"OdometerDigits({self.digits}, r={self.r})"


class AmbiguousWindow(SubstitutionError):
    pass


def cut_offsets(theta: Substitution, word, origin: int) -> set:
    """Offsets i in [0, r) such that the window, with its origin at `origin`,
    occurs in some sigma^i theta(y); i is the position of the origin inside
    its theta-block."""
    w = theta.encode(word)
    L = len(w)
    r = theta.r
    m = (L + 2 * r - 2) // r + 1
    t = theta.table
    found = set()
    for v in _language_codes(theta, m):
        img = tuple(y for x in v for y in t[x])
        for s in range(len(img) - L + 1):
            if img[s:s + L] == w:
                found.add((s + origin) % r)
    return found


def desubstitute(theta: Substitution, word, origin: int) -> tuple:
    """One level of recognizability: (digit, preimage window, new origin).

    Only blocks completely inside the window are decoded; the cut must be
    unique, otherwise AmbiguousWindow is raised.
    """
    if not is_injective(theta):
        raise SubstitutionError("de-substitution needs an injective substitution")
    w = as_word(word)
    r = theta.r
    # a cut that is unique on a subwindow around the origin is unique on the
    # whole window, so grow the subwindow before paying for the full one
    R = r
    while True:
        lo, hi = max(0, origin - R), min(len(w), origin + R + 1)
        offs = cut_offsets(theta, w[lo:hi], origin - lo)
        if len(offs) == 1 or (lo == 0 and hi == len(w)):
            break
        R *= 2
    if len(offs) != 1:
        raise AmbiguousWindow(f"window of length {len(word)} has cut offsets {sorted(offs)}")
    i = offs.pop()
    start = origin - i  # start of the block containing the origin
    first = start % r
    inverse = {theta.images[a]: a for a in theta.alphabet}
    pre = []
    pos = first
    new_origin = None
    while pos + r <= len(w):
        if pos == start:
            new_origin = len(pre)
        pre.append(inverse[tuple(w[pos:pos + r])])
        pos += r
    if new_origin is None:
        raise AmbiguousWindow("the origin's block is not complete inside the window")
    return i, tuple(pre), new_origin


def odometer_digits(theta: Substitution, window, origin: int, n: int) -> OdometerDigits:
    """Digits x_0..x_{n-1} of Lambda_{r^n} for a window with a marked origin."""
    require_primitive(theta)
    out = []
    w = as_word(window)
    o = origin
    for _ in range(n):
        d, w, o = desubstitute(theta, w, o)
        out.append(d)
    return OdometerDigits(out, theta.r)


def recognizability_radius(theta: Substitution, cap: int = 64) -> int:
    """Smallest R such that every language window of length 2R+1 has a unique
    cut at its centre."""
    require_primitive(theta)
    for R in range(1, cap + 1):
        ok = True
        for w in _language_codes(theta, 2 * R + 1):
            if len(cut_offsets(theta, theta.decode(w), R)) != 1:
                ok = False
                break
        if ok:
            return R
    raise SubstitutionError(f"no recognizability radius up to {cap}")


def all_words(alphabet: Sequence[str], L: int):
    return (tuple(w) for w in product(alphabet, repeat=L))


def find_renaming(theta: Substitution, other: Substitution):
    """A letter bijection carrying theta onto other, or None.

    Once the image of one letter is fixed the images of all letters reachable
    from it are forced, so only |A| starting choices need to be tried.
    """
    if theta.n != other.n or theta.r != other.r:
        return None
    A = theta.alphabet
    for start in other.alphabet:
        m = {A[0]: start}
        todo = [A[0]]
        ok = True
        while todo and ok:
            a = todo.pop()
            for x, y in zip(theta.images[a], other.images[m[a]]):
                if x in m:
                    if m[x] != y:
                        ok = False
                        break
                else:
                    m[x] = y
                    todo.append(x)
        if ok and len(m) == theta.n and len(set(m.values())) == theta.n:
            if all(tuple(m[x] for x in theta.images[a]) == other.images[m[a]] for a in A):
                return m
    return None
