import itertools
import random

from hypothesis import settings, strategies as st

from shiftvar.field import PrimeField
from shiftvar.poly import MPoly, shift

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_PRIMES = (3, 5, 7, 11, 13)


@st.composite
def polys(draw, primes=SMALL_PRIMES, max_n=3, max_degree=4, max_terms=6):
    """Random MPoly with degree below p."""
    p = draw(st.sampled_from(primes))
    fld = PrimeField(p)
    n = draw(st.integers(1, max_n))
    deg = min(max_degree, p - 1)
    exps = st.lists(st.integers(0, deg), min_size=n, max_size=n).filter(lambda e: sum(e) <= deg)
    terms = draw(st.dictionaries(exps.map(tuple), st.integers(0, p - 1), max_size=max_terms))
    return MPoly(n, fld, terms)


def points(fld, n):
    return st.tuples(*[st.integers(0, fld.p - 1)] * n)


def brute_kernel(f):
    """Every u in F_p^n with f(x - u) == f, by exhaustive scan."""
    p = f.field.p
    return {u for u in itertools.product(range(p), repeat=f.n) if shift(f, u) == f}


def span(basis, p, n):
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        out.add(tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(n)))
    return out


def rng(seed=0):
    return random.Random(seed)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
