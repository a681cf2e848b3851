from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from schwarz.exact import ExactComplex
from schwarz.numeric import precision
from schwarz.poly import Poly, UniPoly

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

small_int = st.integers(-9, 9)
small_frac = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))
exact = st.builds(ExactComplex, small_frac, small_frac)
gaussian_int = st.builds(ExactComplex.gaussian, small_int, small_int)


@st.composite
def unipolys(draw, min_degree=0, max_degree=5, coeffs=gaussian_int):
    n = draw(st.integers(min_degree, max_degree))
    cs = draw(st.lists(coeffs, min_size=n + 1, max_size=n + 1))
    if cs[-1].is_zero():
        cs[-1] = ExactComplex.gaussian(1)
    return UniPoly(cs, "z")


@st.composite
def real_bipolys(draw, gens=("x", "y"), max_degree=4, max_terms=6):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(0, max_degree))
        j = draw(st.integers(0, max_degree - i))
        terms[(i, j)] = ExactComplex.gaussian(draw(st.integers(-9, 9)))
    p = Poly(terms, gens)
    if p.is_constant():
        p = p + Poly.var(gens[0], gens)
    return p


@pytest.fixture
def bits128():
    with precision(128):
        yield 128


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects one (criterion, passed, seconds, detail) line per acceptance check."""
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, seconds, detail in lines:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {name}  ({seconds:.2f}s)  {detail}")
