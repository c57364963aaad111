"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed as they are produced (visible with ``pytest -s``) and
repeated in the terminal summary. Run standalone with
``python tests/test_acceptance.py`` for just the report.
"""

import random
import time
from fractions import Fraction

import pytest

from shadowlab.circle_maps import (
    PLCircleMap,
    TorusCurve,
    compose,
    degree,
    diagonal_intersections,
    fixed_points,
    torus_degree,
)
from shadowlab.cli import thread_cap, verify_theorem
from shadowlab.complex import Topology, shadow_classes
from shadowlab.curve import validate_simple
from shadowlab.fiber import MappedGraph, Target, fiber_product, vertex_degree_check
from shadowlab.generators import gen_planar_circle, gen_tree_shadow_curve
from shadowlab.relations import (
    build_relation_curve,
    compose_relation_curves,
    flip_map_demo,
    relation_fixed_point,
    split_top_bottom,
)

F = Fraction
RESULTS = {}


def record(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def random_map(rng, winding, pieces=5, den=16):
    inner = sorted({F(rng.randint(1, den - 1), den) for _ in range(rng.randint(0, pieces - 1))})
    bps = [F(0)] + inner
    vals = [F(rng.randint(-3 * den, 3 * den), den) for _ in bps]
    return PLCircleMap(tuple(bps), tuple(vals), winding)


def wiggly(rng, degrees, n):
    grid = [F(j, n) for j in range(n)]
    wig = [F(rng.randint(-4, 4), 16 * n) for _ in grid]
    phase = F(rng.randint(0, 9), 10)
    return TorusCurve.from_lifts(grid, [degrees[0] * t + w for t, w in zip(grid, wig)],
                                 [degrees[1] * t + phase - w for t, w in zip(grid, wig)], degrees)


def test_criterion_1_planar_circle_shadows():
    start = time.perf_counter()
    ok = True
    for d in (3, 4, 5):
        for n in (3, 6, 32):
            tags = [c.tag for c in shadow_classes(gen_planar_circle(d, n))]
            expected = [Topology.SIMPLE_PATH] * 2 + [Topology.SIMPLE_CLOSED_CURVE] * (d - 2)
            ok &= tags == expected
    elapsed = time.perf_counter() - start
    record(1, ok and elapsed < 1, f"9 planar circles classified as [P, P, C...] in {elapsed:.2f}s (limit 1s)")


def test_criterion_2_path_bound_harness():
    start = time.perf_counter()
    workers = thread_cap()
    s3 = verify_theorem(10_000, 2024, 3, 12, workers)
    s4 = verify_theorem(1_000, 2025, 4, 12, workers)
    elapsed = time.perf_counter() - start
    counted = sum(s3["histogram"].values()) + sum(s4["histogram"].values())
    ok = s3["max"] <= 2 and s4["max"] <= 2 and counted == 11_000 and elapsed < 300
    record(2, ok, f"{counted} random curves, histograms d=3 {s3['histogram']} d=4 {s4['histogram']}, "
                  f"{elapsed:.0f}s on {workers} worker(s) (limit 300s)")


def test_criterion_3_trig_example():
    rng = random.Random(3)
    ok = True
    ks = set()
    for n in (1, 2, 3, 5, 8):
        c = compose_relation_curves(wiggly(rng, (1, 3), n), wiggly(rng, (5, 2), n))
        ks.add(c.k)
        ok &= c.k % 15 == 0 and c.k % 2 == 1 and c.degree() == (c.k // 3, 2 * c.k // 5)
    exact = compose_relation_curves(wiggly(random.Random(0), (1, 3), 12), wiggly(random.Random(1), (5, 2), 12))
    ok &= exact.k == 15 and exact.degree() == (5, 6)
    record(3, ok, f"degrees match (k/3, 2k/5) for k in {sorted(ks)}; resolution 12 gives k=15, degree {exact.degree()}")


def test_criterion_4_degree_algebra():
    rng = random.Random(4)
    products = 0
    for _ in range(1000):
        f = random_map(rng, rng.randint(-4, 4), 4)
        g = random_map(rng, rng.randint(-4, 4), 4)
        h = compose(f, g)
        t = F(rng.randint(0, 99), 100)
        products += degree(h) == degree(f) * degree(g) and h(t) == f(g(t))
    with_fixed = 0
    for _ in range(1000):
        w = rng.choice([-5, -4, -3, -2, -1, 0, 2, 3, 4, 5])
        f = random_map(rng, w)
        pts = fixed_points(f)
        with_fixed += bool(pts) and all(f(t) == t for t in pts)
    record(4, products == 1000 and with_fixed == 1000,
           f"deg(f o g) = deg f * deg g in {products}/1000; fixed point found for {with_fixed}/1000 maps of degree != 1")


def test_criterion_5_diagonal():
    rng = random.Random(5)
    hits = 0
    for _ in range(500):
        a = rng.randint(-4, 4)
        b = rng.choice([x for x in range(-4, 5) if x != a])
        c = TorusCurve(random_map(rng, a), random_map(rng, b))
        pts = diagonal_intersections(c)
        hits += bool(pts) and all(c.first(t) == c.second(t) for t in pts)
    misses = 0
    for _ in range(100):
        f = random_map(rng, rng.randint(-3, 3))
        wig = F(rng.randint(-7, 7), 16)
        g = PLCircleMap(f.breakpoints, tuple(v + F(1, 2) + wig * (i % 2) for i, v in enumerate(f.lifted_values)),
                        f.winding)
        misses += diagonal_intersections(TorusCurve(f, g)) == []
    misses += diagonal_intersections(TorusCurve(PLCircleMap.identity(), PLCircleMap.linear(1, F(1, 2)))) == []
    record(5, hits == 500 and misses == 101,
           f"unequal degrees met the diagonal in {hits}/500; offset equal-degree curves missed it in {misses}/101")


def random_mapped_graph(rng, circle):
    n = rng.randint(2, 6)
    if circle:
        spans = [F(rng.choice([k for k in range(-7, 8) if k]), 8) for _ in range(n - 1)]
        vals = [F(rng.randint(0, 7), 8)]
        for s in spans:
            vals.append(vals[-1] + s)
        gap = (vals[0] - vals[-1]) % 1
        choices = [x for x in (gap, gap - 1) if 0 < abs(x) < 1]
        if not choices:
            return random_mapped_graph(rng, circle)
        last = rng.choice(choices)
        return MappedGraph.cycle(vals, spans + [last], Target.CIRCLE)
    vals = [F(rng.randint(0, 8), 4)]
    while len(vals) < n:
        v = F(rng.randint(0, 8), 4)
        if v != vals[-1]:
            vals.append(v)
    if rng.random() < 0.5 and vals[0] != vals[-1] and n >= 3:
        return MappedGraph.cycle(vals)
    return MappedGraph.path(vals)


def test_criterion_6_degree_preservation():
    rng = random.Random(6)
    good, checked = 0, 0
    for i in range(500):
        circle = i % 2 == 1
        fp = fiber_product(random_mapped_graph(rng, circle), random_mapped_graph(rng, circle))
        rep = vertex_degree_check(fp)
        good += rep.ok
        checked += rep.checked
    record(6, good == 500, f"{good}/500 random fiber products satisfy the degree rule ({checked} vertices checked)")


def test_criterion_7_relation_curves():
    eps = F(1, 1000)
    details, ok = [], True
    for n in (6, 32):
        curve = gen_planar_circle(3, n)
        for axis in (1, 2):
            rc = build_relation_curve(curve, split_top_bottom(curve, axis), eps)
            bad = rc.violations(curve)
            ok &= rc.degree() == (1, -1) and not bad
            details.append(f"n={n} axis {axis}: {rc.degree()}, {len(rc.curve.breakpoints)} vertices, {len(bad)} outside")
    record(7, ok, "; ".join(details))


def test_criterion_8_synthetic_triples():
    rng = random.Random(8)
    ok, seen = True, set()
    for trial in range(20):
        psis = [wiggly(rng, (1, -1), rng.randint(1, 6)) for _ in range(3)]
        fx = relation_fixed_point(*psis)
        j, jj = fx.first_degree
        k, mk = fx.final_degree
        s1, s2, s3 = fx.factor_params
        ok &= j == jj and j % 2 == 1 and mk == -k and k % 2 == 1
        ok &= psis[0].first(s1) == fx.q0 == psis[2].second(s3)
        ok &= fx.composites[1].curve.first(fx.t) == fx.composites[1].curve.second(fx.t)
        seen.add((fx.first_degree, fx.final_degree))
    record(8, ok, f"20 triples: degrees (j, j) then (k, -k) with odd j, k, observed {sorted(seen)}; diagonal point found each time")


def test_criterion_9_tree_fixture():
    curve = gen_tree_shadow_curve()
    tags = [c.tag for c in shadow_classes(curve)]
    record(9, validate_simple(curve) and tags == [Topology.TREE] * 3,
           f"simple={validate_simple(curve)}, classes {[str(t) for t in tags]}")


def test_criterion_10_flips():
    ok, details = True, []
    for n in (6, 32):
        curve = gen_planar_circle(3, n)
        flips = []
        for axis in (1, 2):
            s = split_top_bottom(curve, axis)
            f = flip_map_demo(curve, axis)
            ff = compose(f, f)
            involution = all(v == t for t, v in zip(ff.breakpoints, ff.lifted_values))
            ok &= f.winding == -1 and fixed_points(f) == sorted([s.a, s.a_tilde]) and involution
            flips.append(f)
        chain = [flips[0], flips[1], flips[0], flips[1]]
        g = chain[0]
        for count, f in enumerate(chain[1:], start=2):
            g = compose(f, g)
            ok &= g.winding == (-1) ** count
            if g.winding != 1:
                ok &= bool(fixed_points(g))
        details.append(f"n={n}: two flips of degree -1 with 2 fixed points each, composites of 2..4 flips have degree +-1 as expected")
    record(10, ok, "; ".join(details))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
