from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shadowlab.curve import (
    CurveError,
    DistinctCoordinate,
    PerturbationError,
    PLClosedCurve,
    parse_rational,
    perturb_general_position,
    project,
    segments_intersect,
    validate_simple,
)
from shadowlab.generators import gen_planar_circle

F = Fraction

SQUARE = PLClosedCurve.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])


def brute_intersect(p, q, r, s):
    """Independent oracle: sample-free exact test via Cramer's rule on every pair of coordinates."""
    m = len(p)
    u = [q[i] - p[i] for i in range(m)]
    w = [s[i] - r[i] for i in range(m)]
    d = [r[i] - p[i] for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            det = u[i] * (-w[j]) - u[j] * (-w[i])
            if det:
                a = (d[i] * (-w[j]) - d[j] * (-w[i])) / det
                b = (u[i] * d[j] - u[j] * d[i]) / det
                ok = all(p[k] + a * u[k] == r[k] + b * w[k] for k in range(m))
                return ok and 0 <= a <= 1 and 0 <= b <= 1
    # parallel: collinear overlap?
    def on(x, a0, a1):
        t = None
        for k in range(m):
            if a1[k] != a0[k]:
                t = (x[k] - a0[k]) / (a1[k] - a0[k])
                break
        if t is None:
            return x == a0
        return 0 <= t <= 1 and all(a0[k] + t * (a1[k] - a0[k]) == x[k] for k in range(m))
    return on(r, p, q) or on(s, p, q) or on(p, r, s) or on(q, r, s)


coord = st.integers(-3, 3).map(Fraction)


@given(st.integers(2, 3).flatmap(lambda m: st.lists(st.tuples(*[coord] * m), min_size=4, max_size=4)))
def test_segment_intersection_matches_oracle(pts):
    p, q, r, s = pts
    if p == q or r == s:
        return
    assert segments_intersect(p, q, r, s) == brute_intersect(p, q, r, s)


def test_parse_rational():
    assert parse_rational("3/6") == F(1, 2)
    assert parse_rational("-7") == -7
    for bad in ["0.5", "1/0", "abc", "1e3", "", "1/-2"]:
        with pytest.raises(ValueError):
            parse_rational(bad)
    with pytest.raises(ValueError):
        parse_rational(True)


def test_square_is_simple():
    assert validate_simple(SQUARE)


def test_figure_eight_is_not_simple():
    assert not validate_simple(PLClosedCurve.from_points([(0, 0), (2, 0), (2, 2), (1, -1)]))


def test_planar_hexagon_in_space(hexagon):
    assert validate_simple(hexagon)


def test_fold_back_is_not_simple():
    assert not validate_simple(PLClosedCurve.from_points([(0, 0), (2, 0), (1, 0), (1, 1)]))


def test_structural_errors():
    with pytest.raises(CurveError):
        PLClosedCurve.from_points([(0, 0), (1, 0)])
    with pytest.raises(CurveError):
        PLClosedCurve.from_points([(0, 0), (1, 0), (1, 0)])
    with pytest.raises(CurveError):
        PLClosedCurve(3, ((0, 0, 0), (1, 0), (0, 1, 0)))


def test_json_roundtrip_and_rejection():
    c = gen_planar_circle(3, 5)
    assert PLClosedCurve.from_json(c.to_json()) == c
    with pytest.raises(CurveError):
        PLClosedCurve.from_json('{"dimension": 2, "vertices": [[0, 0], ["1", "0"], ["0", "1"]]}')
    with pytest.raises(ValueError):
        PLClosedCurve.from_json('{"dimension": 2, "vertices": [["0.5", "0"], ["1", "0"], ["0", "1"]]}')


def test_project_hexagon(hexagon):
    segs3 = project(hexagon, 3)
    assert [p for p, _ in segs3] == [v[:2] for v in hexagon.vertices]
    segs1 = project(hexagon, 1)
    assert all(p[1] == 0 and q[1] == 0 for p, q in segs1)
    assert len(segs1) == hexagon.n


def test_project_curve_in_hyperplane_is_translate():
    c = PLClosedCurve.from_points([(5, 0, 0), (5, 1, 0), (5, 0, 1)])
    assert [p for p, _ in project(c, 1)] == [(0, 0), (1, 0), (0, 1)]


def test_project_keeps_degenerate_segments():
    c = PLClosedCurve.from_points([(0, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 0)])
    segs = project(c, 3)
    assert segs[0] == ((0, 0), (0, 0))
    assert len(segs) == 4


def test_project_axis_out_of_range(hexagon):
    with pytest.raises(CurveError):
        project(hexagon, 4)
    with pytest.raises(CurveError):
        project(hexagon, 0)


def test_perturb_square_with_shared_coordinate():
    rep = perturb_general_position(SQUARE, DistinctCoordinate(2), F(1, 100))
    assert rep.perturbation_applied
    assert rep.max_displacement <= F(1, 100)
    assert DistinctCoordinate(2)(rep.curve) and validate_simple(rep.curve)
    for v, w in zip(SQUARE.vertices, rep.curve.vertices):
        assert max(abs(a - b) for a, b in zip(v, w)) <= F(1, 100)


def test_perturb_noop_and_zero_budget(hexagon):
    generic = PLClosedCurve.from_points([(0, 0), (3, 1), (1, 2)])
    rep = perturb_general_position(generic, DistinctCoordinate(2), F(1, 10))
    assert not rep.perturbation_applied and rep.curve == generic
    with pytest.raises(PerturbationError) as err:
        perturb_general_position(SQUARE, DistinctCoordinate(2), 0)
    assert err.value.constraint == "budget"


def test_perturbation_is_deterministic():
    a = perturb_general_position(SQUARE, DistinctCoordinate(1), F(1, 7))
    b = perturb_general_position(SQUARE, DistinctCoordinate(1), F(1, 7))
    assert a == b


def rotation_3d(c, s):
    # rational rotation about the x3 axis (c^2 + s^2 = 1)
    return [[c, -s, 0], [s, c, 0], [0, 0, 1]]


@given(st.integers(0, 40), st.sampled_from([(F(3, 5), F(4, 5)), (F(5, 13), F(12, 13)), (F(-4, 5), F(3, 5))]),
       st.tuples(coord, coord, coord))
def test_simplicity_invariant_under_rigid_motion(seed, cs, offset):
    from shadowlab.generators import gen_random_knot
    curve = gen_random_knot(3, 6, seed, denominator=4)
    moved = curve.transform(rotation_3d(*cs), offset)
    assert validate_simple(moved) == validate_simple(curve)


@given(st.integers(0, 40), st.integers(0, 5), st.fractions(0, 1, max_denominator=9).filter(lambda s: 0 < s < 1))
def test_simplicity_invariant_under_subdivision(seed, j, s):
    from shadowlab.generators import gen_random_knot
    curve = gen_random_knot(3, 6, seed, denominator=4)
    assert validate_simple(curve.subdivide(j, s))


def test_subdivided_figure_eight_stays_non_simple():
    c = PLClosedCurve.from_points([(0, 0), (2, 0), (2, 2), (1, -1)])
    for j in range(4):
        assert not validate_simple(c.subdivide(j, F(1, 3)))


@given(st.lists(st.tuples(coord, coord, coord), min_size=4, max_size=7, unique=True))
def test_projection_segment_count(points):
    try:
        c = PLClosedCurve.from_points(points)
    except CurveError:
        return
    for axis in (1, 2, 3):
        assert len(project(c, axis)) == c.n


@given(st.lists(st.tuples(coord, coord), min_size=4, max_size=6, unique=True))
def test_perturbation_output_is_simple_and_generic(points):
    c = PLClosedCurve.from_points(points)
    if not validate_simple(c):
        return
    pred = DistinctCoordinate(1)
    try:
        rep = perturb_general_position(c, pred, F(1, 50))
    except PerturbationError:
        return
    assert validate_simple(rep.curve) and pred(rep.curve)
    assert rep.max_displacement <= F(1, 50)
