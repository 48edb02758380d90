import random
from pathlib import Path

import pytest
from hypothesis import assume, strategies as st

from autoshift.substitution import Substitution, is_primitive, parse_coding, parse_substitution
from autoshift.rules import parse_rule

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "autoshift" / "fixtures"


def sub(name):
    return parse_substitution((FIXTURES / f"{name}.sub").read_text())


def coding(name, theta=None):
    return parse_coding((FIXTURES / f"{name}.coding").read_text(), theta.alphabet if theta else None)


def rule(name):
    return parse_rule((FIXTURES / f"{name}.rule").read_text())


def S(text):
    """Shorthand: S('a->aac b->bca c->bba')."""
    images = {}
    for part in text.split():
        a, w = part.split("->")
        images[a] = w
    return Substitution(images)


def images(theta):
    return {a: tuple(w) for a, w in theta.images.items()}


SUBSTITUTION_FIXTURES = sorted(p.stem for p in FIXTURES.glob("*.sub"))


def random_primitive(rng, max_letters=4, max_r=3):
    while True:
        n = rng.randint(2, max_letters)
        r = rng.randint(2, max_r)
        A = "abcd"[:n]
        theta = Substitution({a: "".join(rng.choice(A) for _ in range(r)) for a in A})
        if is_primitive(theta)[0]:
            return theta


def random_primitive_list(count=200, seed=20261018):
    rng = random.Random(seed)
    return [random_primitive(rng) for _ in range(count)]


@st.composite
def primitive_substitutions(draw, max_letters=4, max_r=3):
    n = draw(st.integers(2, max_letters))
    r = draw(st.integers(2, max_r))
    A = "abcd"[:n]
    imgs = {a: "".join(draw(st.lists(st.sampled_from(A), min_size=r, max_size=r))) for a in A}
    theta = Substitution(imgs)
    assume(is_primitive(theta)[0])
    return theta


@pytest.fixture(scope="session")
def random_subs():
    return random_primitive_list()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
