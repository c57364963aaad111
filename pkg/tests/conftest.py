from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from shadowlab.circle_maps import PLCircleMap, TorusCurve
from shadowlab.generators import gen_planar_circle, gen_tree_shadow_curve

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def hexagon():
    return gen_planar_circle(3, 6)


@pytest.fixture(scope="session")
def tree_curve():
    return gen_tree_shadow_curve()


small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=12)


@st.composite
def circle_maps(draw, degree=None, max_pieces=6):
    """Random PL circle map with a prescribed or random degree."""
    w = draw(st.integers(-4, 4)) if degree is None else degree
    m = draw(st.integers(1, max_pieces))
    inner = sorted(set(draw(st.lists(st.fractions(0, 1, max_denominator=24)
                                     .filter(lambda t: 0 < t < 1), max_size=m - 1))))
    bps = [Fraction(0)] + inner
    vals = [draw(small_rationals) for _ in bps]
    return PLCircleMap(tuple(bps), tuple(vals), w)


@st.composite
def torus_curves(draw, degrees=None):
    a = draw(circle_maps(None if degrees is None else degrees[0]))
    b = draw(circle_maps(None if degrees is None else degrees[1]))
    return TorusCurve(a, b)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
