from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from shadowlab.complex import (
    ImageComplex,
    PathBoundViolation,
    Topology,
    build_image_complex,
    classify,
    path_parameterization,
    shadow_classes,
)
from shadowlab.curve import point_on_segment
from shadowlab.generators import gen_planar_circle, gen_random_knot

F = Fraction
SP, SCC, TREE = Topology.SIMPLE_PATH, Topology.SIMPLE_CLOSED_CURVE, Topology.TREE


def pts(*xs):
    return tuple(tuple(F(c) for c in x) for x in xs)


def oracle_tag(cx: ImageComplex) -> Topology:
    g = nx.Graph()
    g.add_nodes_from(range(len(cx.vertices)))
    g.add_edges_from(cx.edges)
    if g.number_of_nodes() == 0:
        return Topology.OTHER
    if not nx.is_connected(g):
        return Topology.DISCONNECTED
    degs = [d for _, d in g.degree()]
    if nx.is_tree(g):
        return SP if max(degs) <= 2 and degs.count(1) == 2 else TREE
    return SCC if all(d == 2 for d in degs) else Topology.OTHER


def all_pieces(cx):
    """Edges plus isolated vertices as zero-length segments."""
    deg = cx.degrees()
    return cx.segments() + [(v, v) for v, g in zip(cx.vertices, deg) if g == 0]


def test_x_shape():
    cx = build_image_complex([pts((0, 0), (2, 2)), pts((0, 2), (2, 0))])
    assert len(cx.vertices) == 5 and len(cx.edges) == 4
    assert sorted(cx.degrees()) == [1, 1, 1, 1, 4]
    assert cx.degrees()[cx.vertices.index(pts((1, 1))[0])] == 4


def test_identical_segments_merge():
    cx = build_image_complex([pts((0, 0), (1, 1)), pts((1, 1), (0, 0))])
    assert len(cx.vertices) == 2 and len(cx.edges) == 1


def test_overlapping_collinear_segments():
    cx = build_image_complex([pts((0, 0), (2, 0)), pts((1, 0), (3, 0))])
    assert sorted(v[0] for v in cx.vertices) == [0, 1, 2, 3]
    assert len(cx.edges) == 3


def test_zero_length_segment_only():
    cx = build_image_complex([pts((1, 1), (1, 1))])
    assert len(cx.vertices) == 1 and not cx.edges


def test_segment_crossing_in_three_space():
    cx = build_image_complex([pts((0, 0, 0), (2, 2, 2)), pts((0, 2, 2), (2, 0, 0)),
                              pts((0, 0, 1), (1, 0, 1))])
    assert len(cx.vertices) == 7 and len(cx.edges) == 5


def test_classify_basic_shapes():
    path = build_image_complex([pts((0, 0), (1, 0)), pts((1, 0), (1, 1)), pts((1, 1), (2, 1))])
    c = classify(path)
    assert c.tag is SP
    assert set(c.witness_points()) == set(pts((0, 0), (2, 1)))
    square = build_image_complex([pts((0, 0), (1, 0)), pts((1, 0), (1, 1)),
                                  pts((1, 1), (0, 1)), pts((0, 1), (0, 0))])
    assert classify(square).tag is SCC
    y = build_image_complex([pts((0, 0), (1, 0)), pts((0, 0), (0, 1)), pts((0, 0), (-1, -1))])
    c = classify(y)
    assert c.tag is TREE and c.witness_points() == [pts((0, 0))[0]]
    two = build_image_complex([pts((0, 0), (1, 0)), pts((0, 1), (1, 1))])
    c = classify(two)
    assert c.tag is Topology.DISCONNECTED and c.witness == 2
    theta = build_image_complex([pts((0, 0), (2, 0)), pts((2, 0), (2, 2)), pts((2, 2), (0, 2)),
                                 pts((0, 2), (0, 0)), pts((1, 0), (1, 2))])
    c = classify(theta)
    assert c.tag is Topology.OTHER and len(c.witness) >= 3


def test_hexagon_shadow_classes(hexagon):
    assert [c.tag for c in shadow_classes(hexagon)] == [SP, SP, SCC]


def test_tree_fixture_classes(tree_curve):
    classes = shadow_classes(tree_curve)
    assert [c.tag for c in classes] == [TREE] * 3
    for c in classes:
        assert all(c.complex.degrees()[i] >= 3 for i in c.witness)


def test_shadow_classes_rejects_non_simple():
    from shadowlab.curve import PLClosedCurve
    with pytest.raises(ValueError):
        shadow_classes(PLClosedCurve.from_points([(0, 0, 0), (2, 0, 0), (2, 2, 0), (1, -1, 0)]))


def test_path_bound_violation_is_distinguished():
    assert issubclass(PathBoundViolation, RuntimeError)


def test_path_parameterization_examples():
    lam = path_parameterization(build_image_complex([pts((0, 0), (1, 0))]))
    assert lam.inverse(pts((F(1, 2), 0))[0]) == F(1, 2)
    lshape = path_parameterization(build_image_complex([pts((0, 0), (1, 0)), pts((1, 0), (1, 1))]))
    assert lshape.inverse(pts((1, 0))[0]) == F(1, 2)
    # edge lengths 1, 2, 1: edge-fraction parameter ignores length
    lam = path_parameterization(build_image_complex(
        [pts((0, 0), (1, 0)), pts((1, 0), (1, 2)), pts((1, 2), (2, 2))]))
    assert lam.inverse(lam.complex.vertices[lam.walk[1]]) == F(1, 3)
    assert lam(F(1, 3)) == lam.complex.vertices[lam.walk[1]]


def test_path_parameterization_rejects_cycle():
    square = build_image_complex([pts((0, 0), (1, 0)), pts((1, 0), (1, 1)),
                                  pts((1, 1), (0, 1)), pts((0, 1), (0, 0))])
    with pytest.raises(ValueError):
        path_parameterization(square)


@given(st.fractions(0, 1, max_denominator=30))
def test_path_parameterization_roundtrip(s):
    lam = path_parameterization(build_image_complex(
        [pts((0, 0), (3, 0)), pts((3, 0), (3, 1)), pts((3, 1), (-1, 1))]))
    assert lam.inverse(lam(s)) == s


coord = st.integers(-3, 3).map(F)
segment = st.tuples(st.tuples(coord, coord), st.tuples(coord, coord))


@given(st.lists(segment, min_size=1, max_size=6))
def test_arrangement_invariants(segs):
    cx = build_image_complex(segs)
    verts, edges = cx.vertices, cx.edges
    assert len(set(verts)) == len(verts)
    for i, j in edges:
        assert i != j
    # no vertex inside an edge; edge interiors pairwise disjoint (check midpoints and crossings)
    for i, j in edges:
        for k, v in enumerate(verts):
            if k not in (i, j):
                assert not point_on_segment(v, verts[i], verts[j])
    from shadowlab.curve import segments_intersect
    for a in range(len(edges)):
        for b in range(a + 1, len(edges)):
            (i, j), (k, l) = edges[a], edges[b]
            if len({i, j, k, l}) == 4:
                assert not segments_intersect(verts[i], verts[j], verts[k], verts[l])
    # the union is preserved: sample points on inputs lie on the complex and vice versa
    for p, q in segs:
        for t in (F(0), F(1, 3), F(1, 2), F(1)):
            x = tuple(a + t * (b - a) for a, b in zip(p, q))
            assert cx.contains(x)
    for i, j in edges:
        mid = tuple((a + b) / 2 for a, b in zip(verts[i], verts[j]))
        assert any(point_on_segment(mid, p, q) if p != q else mid == p for p, q in segs)
    assert classify(cx).tag is oracle_tag(cx)


@given(st.lists(segment, min_size=1, max_size=6))
def test_arrangement_idempotent(segs):
    cx = build_image_complex(segs)
    again = build_image_complex(all_pieces(cx))
    assert again.vertices == cx.vertices
    assert sorted(map(sorted, again.edges)) == sorted(map(sorted, cx.edges))


@given(st.lists(segment, min_size=1, max_size=5), st.data())
def test_classify_invariant_under_subdivision(segs, data):
    cx = build_image_complex(segs)
    if not cx.edges:
        return
    e = data.draw(st.integers(0, len(cx.edges) - 1))
    s = data.draw(st.fractions(0, 1, max_denominator=7).filter(lambda s: 0 < s < 1))
    i, j = cx.edges[e]
    m = tuple(a + s * (b - a) for a, b in zip(cx.vertices[i], cx.vertices[j]))
    split = [seg for seg in all_pieces(cx) if seg != cx.segments()[e]]
    split += [(cx.vertices[i], m), (m, cx.vertices[j])]
    assert classify(build_image_complex(split)).tag is classify(cx).tag


def test_image_complex_json_roundtrip(hexagon):
    from shadowlab.complex import shadow_complex
    cx = shadow_complex(hexagon, 1)
    assert ImageComplex.from_dict(cx.to_dict()) == cx


@given(st.integers(0, 10 ** 6))
def test_random_curves_have_at_most_two_path_shadows(seed):
    curve = gen_random_knot(3, 6, seed, denominator=3)
    assert sum(c.tag is SP for c in shadow_classes(curve)) <= 2


@given(st.integers(3, 9), st.integers(0, 10 ** 6), st.integers(1, 3))
def test_tilted_polygons_respect_the_bound(n, seed, axis):
    # planar polygons with a small third coordinate often have one or two path shadows
    import random
    rng = random.Random(seed)
    base = gen_planar_circle(3, n)
    verts = [(x, y, F(rng.randint(-2, 2), 50)) for x, y, _ in base.vertices]
    perm = [[1 if r == (c + axis) % 3 else 0 for c in range(3)] for r in range(3)]
    from shadowlab.curve import PLClosedCurve, validate_simple
    curve = PLClosedCurve(3, tuple(verts)).transform(perm)
    assert validate_simple(curve)
    assert sum(c.tag is SP for c in shadow_classes(curve)) <= 2
