"""Shadow relations on a closed curve and their fixed points.

Pipeline for a shadow that is a simple path:

1. split the curve into a top and a bottom arc between two points that project
   to the ends of the path (:func:`split_top_bottom`);
2. unravel the curve into the plane, first coordinate the path parameter of the
   projection, second coordinate the deleted coordinate (:func:`unravel`);
3. take the fiber product of slightly perturbed copies of the two arcs over the
   first coordinate; the component through the common start is a path whose
   swap-reversal closes it into a torus curve of degree (1, -1)
   (:func:`build_relation_curve`);
4. compose such torus curves through a middle factor of odd degree
   (:func:`compose_relation_curves`) and look for a diagonal point
   (:func:`find_triple_fixed_point`).

Curve points are handled through their curve parameter in [0, 1) (see
:meth:`PLClosedCurve.point_at`), so the torus is literally the parameter torus.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .circle_maps import (
    PLCircleMap,
    TorusCurve,
    diagonal_intersections,
    torus_degree,
)
from .complex import (
    ImageComplex,
    PathParameterization,
    Topology,
    classify,
    shadow_complex,
)
from .curve import (
    PLClosedCurve,
    PerturbationError,
    format_rational,
    index_offsets,
    lerp,
    point_on_segment,
    project,
    segment_parameter,
    sub,
)
from .fiber import (
    FactorPoint,
    MappedGraph,
    Target,
    cycle_decomposition,
    fiber_product,
)

DEFAULT_EPSILON = Fraction(1, 1000)


class NotASimplePath(ValueError):
    pass


class OddDegreeError(ValueError):
    """The middle degrees of a relation composition are not both odd."""


class CompositionError(RuntimeError):
    """An internal consistency check of the composition failed (a bug, not bad input)."""


class NotTwoToOne(ValueError):
    pass


# -- splitting and unraveling -----------------------------------------------------------

@dataclass(frozen=True)
class ShadowSplit:
    """Top arc runs forward from ``a`` to ``a_tilde``; the bottom arc from ``a_tilde`` back to ``a``."""

    axis: int
    a: Fraction
    a_tilde: Fraction
    path: Optional[PathParameterization] = field(default=None, compare=False, repr=False)

    @property
    def a_tilde_lift(self) -> Fraction:
        """``a_tilde`` lifted into (a, a + 1)."""
        return self.a + (self.a_tilde - self.a) % 1

    @property
    def top(self) -> tuple:
        return self.a, self.a_tilde_lift

    @property
    def bottom(self) -> tuple:
        return self.a_tilde_lift, self.a + 1


def preimages(curve: PLClosedCurve, axis: int, x) -> list:
    """Curve parameters projecting to ``x``; a segment parallel to the axis gives both ends.

    Returns ``(parameter, coordinate)`` pairs, ``coordinate`` the deleted one.
    """
    n = curve.n
    out = set()
    for j, (p, q) in enumerate(project(curve, axis)):
        if p == q:
            if p == x:
                for s in (0, 1):
                    t = Fraction(j + s, n) % 1
                    out.add((t, curve.vertices[(j + s) % n][axis - 1]))
        elif point_on_segment(x, p, q):
            s = segment_parameter(x, p, q)
            t = (j + s) / n % 1
            out.add((t, curve.point_at(t)[axis - 1]))
    return sorted(out)


def _lowest_preimage(curve, axis, x) -> Fraction:
    pre = preimages(curve, axis, x)
    return min(pre, key=lambda tc: (tc[1], tc[0]))[0]


def split_top_bottom(curve: PLClosedCurve, axis: int, complex_: ImageComplex = None) -> ShadowSplit:
    """Split the curve at points over the two ends of the shadow path.

    When several curve points lie over an end, the one with the least value of
    the deleted coordinate is used (ties: least parameter).
    """
    if complex_ is None:
        complex_ = shadow_complex(curve, axis)
    cls = classify(complex_)
    if cls.tag is not Topology.SIMPLE_PATH:
        raise NotASimplePath(f"shadow {axis} is a {cls.tag}")
    lam = PathParameterization(complex_)
    a = _lowest_preimage(curve, axis, lam.start)
    a_tilde = _lowest_preimage(curve, axis, lam.end)
    return ShadowSplit(axis, a, a_tilde, lam)


@dataclass(frozen=True)
class UnraveledCurve:
    """The curve flattened along one shadow path.

    ``params`` lists (ascending, in [0, 1)) every curve parameter lying over a
    vertex of the shadow complex, and ``points`` their images
    ``(path parameter of the projection, deleted coordinate)``. The flattening
    is linear between consecutive entries.
    """

    axis: int
    params: tuple
    points: tuple
    complex_vertices: tuple = field(repr=False)  # shadow vertex index under each param
    degenerate: tuple = field(repr=False)  # params starting a segment parallel to the axis

    def index(self, t) -> int:
        t = Fraction(t) % 1
        i = bisect.bisect_left(self.params, t)
        if i == len(self.params) or self.params[i] != t:
            raise KeyError(f"{t} is not a breakpoint")
        return i

    def first_at(self, t) -> Fraction:
        """Path parameter of the projection of the curve point at parameter ``t``."""
        t = Fraction(t) % 1
        ps = self.params
        i = bisect.bisect_right(ps, t) - 1
        t0, u0 = ps[i], self.points[i][0]
        if t0 == t:
            return u0
        if i + 1 < len(ps):
            t1, u1 = ps[i + 1], self.points[i + 1][0]
        else:
            t1, u1 = Fraction(1), self.points[0][0]
        return u0 + (u1 - u0) * (t - t0) / (t1 - t0)

    def arc(self, start, end) -> list:
        """Indices from parameter ``start`` forward to ``end`` (both included)."""
        i, j = self.index(start), self.index(end)
        m = len(self.params)
        out = [i]
        while out[-1] != j:
            out.append((out[-1] + 1) % m)
        return out

    def as_curve(self) -> PLClosedCurve:
        pts = [p for k, p in enumerate(self.points) if p != self.points[k - 1]]
        return PLClosedCurve(2, tuple(pts))


def unravel(curve: PLClosedCurve, split: ShadowSplit) -> UnraveledCurve:
    """Flatten the curve along the shadow path of ``split.axis``."""
    axis = split.axis
    lam = split.path
    if lam is None:
        lam = PathParameterization(shadow_complex(curve, axis))
    cx = lam.complex
    index = {v: i for i, v in enumerate(cx.vertices)}
    n = curve.n
    entries = []
    degenerate = []
    for j, (p, q) in enumerate(project(curve, axis)):
        v0, v1 = curve.vertices[j], curve.vertices[(j + 1) % n]
        if p == q:
            entries.append((Fraction(j, n), v0, index[p]))
            degenerate.append(Fraction(j, n))
            continue
        hits = []
        for i, x in enumerate(cx.vertices):
            if point_on_segment(x, p, q):
                s = segment_parameter(x, p, q)
                if s < 1:
                    hits.append((s, i))
        for s, i in sorted(hits):
            entries.append(((j + s) / n, lerp(v0, v1, s), i))
    params = tuple(t for t, _, _ in entries)
    points = tuple((lam.vertex_parameter(i), x[axis - 1]) for _, x, i in entries)
    verts = tuple(i for _, _, i in entries)
    return UnraveledCurve(axis, params, points, verts, tuple(degenerate))


# -- relation membership ----------------------------------------------------------------------

def _norm_sq(v) -> Fraction:
    return sum(c * c for c in v)


def _sum_of_norms_at_most(u, v, eps) -> bool:
    """Exact test of ``|u| + |v| <= eps`` via squared quantities."""
    A, B, e2 = _norm_sq(u), _norm_sq(v), eps * eps
    rhs = e2 - A - B
    return rhs >= 0 and 4 * A * B <= rhs * rhs


def in_shadow_relation(curve: PLClosedCurve, split: ShadowSplit, unraveled: UnraveledCurve,
                       epsilon, x, y) -> bool:
    """Exact membership of the parameter pair ``(x, y)`` in the thickened shadow relation.

    The pair qualifies when the projections are within ``epsilon`` in path
    parameter, or when the two points are jointly within ``epsilon`` of one of
    the split points (sum of Euclidean distances).
    """
    epsilon = Fraction(epsilon)
    if abs(unraveled.first_at(x) - unraveled.first_at(y)) <= epsilon:
        return True
    px, py = curve.point_at(x), curve.point_at(y)
    for t in (split.a, split.a_tilde):
        c = curve.point_at(t)
        if _sum_of_norms_at_most(sub(px, c), sub(py, c), epsilon):
            return True
    return False


# -- relation curves -------------------------------------------------------------------------------

@dataclass(frozen=True)
class RelationCurve:
    """Torus curve of degree (1, -1) inside the epsilon-thickened relation of one shadow."""

    curve: TorusCurve
    epsilon: Fraction
    axis: int
    split: ShadowSplit = field(repr=False)
    unraveled: UnraveledCurve = field(repr=False)
    perturbation: Fraction = Fraction(0)

    def degree(self) -> tuple:
        return torus_degree(self.curve)

    def violations(self, base: PLClosedCurve) -> list:
        """Breakpoints of the torus curve that fall outside the relation."""
        bad = []
        for t in self.curve.breakpoints:
            x, y = self.curve(t)
            if not in_shadow_relation(base, self.split, self.unraveled, self.epsilon, x, y):
                bad.append(t)
        return bad


def _spread_interior(values: list, fixed: set, limit: Fraction):
    """Pull the free entries of ``values`` toward distinct interior points of (0, 1).

    Entry ``k`` becomes ``(1 - d) v_k + d c_k`` with distinct weights ``c_k``; the
    displacement is at most ``d < limit``. Returns ``(new_values, d)``.
    """
    free = [k for k in range(len(values)) if k not in fixed]

    def ok(vals):
        inner = [vals[k] for k in free]
        return len(set(inner)) == len(inner) and all(0 < v < 1 for v in inner)

    if ok(values):
        return list(values), Fraction(0)
    weights = index_offsets(len(values))
    d = min(limit / 2, Fraction(1, 2))
    for _ in range(64):
        vals = list(values)
        for k in free:
            vals[k] = (1 - d) * values[k] + d * weights[k]
        if ok(vals):
            return vals, d
        d /= 2
    raise PerturbationError("could not separate the arc vertices within the budget",
                            constraint="distinct first coordinates")


def build_relation_curve(curve: PLClosedCurve, split: ShadowSplit, epsilon=DEFAULT_EPSILON,
                         unraveled: UnraveledCurve = None) -> RelationCurve:
    """Closed curve of degree (1, -1) in the epsilon-thickened relation of ``split.axis``.

    The unraveled top and bottom arcs are perturbed by less than ``epsilon / 2``
    in their first coordinate so that interior vertices get distinct values;
    the fiber product of the two arcs over the first coordinate then has
    exactly two vertices of degree one, joined by a path. That path followed by
    its swapped reversal is the returned curve.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    U = unraveled if unraveled is not None else unravel(curve, split)
    a, A = split.top
    top = U.arc(split.a, split.a_tilde)
    bottom = U.arc(split.a_tilde, split.a)

    def lifted(indices, start):
        out = [start]
        for i, j in zip(indices, indices[1:]):
            out.append(out[-1] + (U.params[j] - U.params[i]) % 1)
        return out

    top_t = lifted(top, a)
    bot_t = lifted(bottom, A)
    assert top_t[-1] == A and bot_t[-1] == a + 1

    firsts = [U.points[i][0] for i in top] + [U.points[i][0] for i in bottom]
    nt = len(top)
    fixed = {0, nt - 1, nt, len(firsts) - 1}
    moved, delta = _spread_interior(firsts, fixed, epsilon / 2)
    top_graph = MappedGraph.path(moved[:nt])
    bot_graph = MappedGraph.path(moved[nt:])
    fp = fiber_product(top_graph, bot_graph)

    start = (FactorPoint(vertex=0), FactorPoint(vertex=len(bottom) - 1))
    finish = (FactorPoint(vertex=nt - 1), FactorPoint(vertex=0))
    s_idx, f_idx = fp.points.index(start), fp.points.index(finish)
    walk = next(w for w in cycle_decomposition(fp) if s_idx in w.vertices)
    if walk.kind != "path" or {walk.vertices[0], walk.vertices[-1]} != {s_idx, f_idx}:
        raise CompositionError("the fiber product path does not join the split points")
    verts = walk.vertices if walk.vertices[0] == s_idx else walk.vertices[::-1]

    def param(point, graph_lifts, graph):
        if point.vertex is not None:
            return graph_lifts[point.vertex]
        u, v, _ = graph.edges[point.edge]
        return graph_lifts[u] + point.fraction * (graph_lifts[v] - graph_lifts[u])

    sigma = [(param(fp.points[v][0], top_t, top_graph), param(fp.points[v][1], bot_t, bot_graph))
             for v in verts]
    N = len(sigma) - 1
    first = [t for t, _ in sigma] + [b for _, b in sigma[N - 1:0:-1]]
    second = [b for _, b in sigma] + [t for t, _ in sigma[N - 1:0:-1]]
    L = len(first)
    psi = TorusCurve.from_lifts([Fraction(j, L) for j in range(L)], first, second, (1, -1))
    rc = RelationCurve(psi, epsilon, split.axis, split, U, delta)
    if rc.degree() != (1, -1):
        raise CompositionError(f"relation curve has degree {rc.degree()}")
    bad = rc.violations(curve)
    if bad:
        raise CompositionError(f"relation curve leaves the relation at {bad[:3]}")
    return rc


# -- composing relations ---------------------------------------------------------------------------

def regular_value(values) -> Fraction:
    """Least dyadic ``m / 2**n`` in [0, 1) (``n`` minimal, then ``m``) avoiding ``values`` mod 1."""
    taken = {Fraction(v) % 1 for v in values}
    n = 0
    while True:
        for m in range(2 ** n):
            y = Fraction(m, 2 ** n)
            if y not in taken:
                return y
        n += 1


def _level_count(lo_val, span, y0) -> int:
    """Points where a lift running from ``lo_val`` by ``span`` passes ``y0 + Z`` (ends excluded)."""
    a, b = (lo_val, lo_val + span) if span > 0 else (lo_val + span, lo_val)
    return max(0, math.ceil(b - y0) - math.floor(a - y0) - 1)


def preimage_count(f: PLCircleMap, y0) -> int:
    """Number of parameters mapped to the regular value ``y0``."""
    total = 0
    for _, _, v0, v1 in f.pieces():
        if v1 == v0:
            raise ValueError("map is constant on a piece")
        total += _level_count(v0, v1 - v0, y0)
    # breakpoints are assumed not to hit y0
    return total


def _split_long_pieces(c: TorusCurve, factor: str) -> TorusCurve:
    f = getattr(c, factor)
    extra = []
    for t0, t1, v0, v1 in f.pieces():
        m = math.ceil(2 * abs(v1 - v0))
        for i in range(1, m):
            extra.append(t0 + (t1 - t0) * Fraction(i, m))
    return c.refine(extra) if extra else c


def _separate_mod_one(vals1: list, vals2: list, budget: Fraction):
    """Shift vertex values by at most ``budget`` so all are distinct mod 1."""
    allv = vals1 + vals2

    def distinct(vs):
        return len({v % 1 for v in vs}) == len(vs)

    if distinct(allv):
        return vals1, vals2, Fraction(0)
    weights = index_offsets(len(allv))
    d = budget
    for _ in range(64):
        moved = [v + d * w for v, w in zip(allv, weights)]
        if distinct(moved):
            return moved[:len(vals1)], moved[len(vals1):], d
        d /= 2
    raise PerturbationError("could not separate middle values", constraint="distinct middle values")


def _cycle_graph(breakpoints, values, winding) -> MappedGraph:
    L = len(values)
    spans = [values[j + 1] - values[j] for j in range(L - 1)] + [values[0] + winding - values[-1]]
    return MappedGraph.cycle(values, spans, Target.CIRCLE)


@dataclass(frozen=True)
class ComposedCurve:
    """Torus curve in the composite relation, with the factor positions behind each piece.

    ``steps[j]`` describes output piece ``j`` as
    ``(edge1, f1_start, f1_end, edge2, f2_start, f2_end)``: the factor grid
    pieces and the fractions along them at both ends.
    """

    curve: TorusCurve
    k: int
    input_degrees: tuple
    steps: tuple = field(repr=False)
    grids: tuple = field(repr=False)
    cycle_count: int = 1
    perturbation: Fraction = Fraction(0)
    regular_value: Fraction = Fraction(0)
    fiber_size: int = 0

    def degree(self) -> tuple:
        return torus_degree(self.curve)

    def factor_params(self, t) -> tuple:
        """Parameters ``(s1, s2)`` on the two input curves behind output parameter ``t``."""
        t = Fraction(t) % 1
        L = len(self.steps)
        j = int(t * L)
        g = t * L - j
        e1, a1, b1, e2, a2, b2 = self.steps[j]
        out = []
        for grid, e, f in ((self.grids[0], e1, a1 + g * (b1 - a1)), (self.grids[1], e2, a2 + g * (b2 - a2))):
            t0 = grid[e]
            t1 = grid[e + 1] if e + 1 < len(grid) else Fraction(1)
            out.append((t0 + f * (t1 - t0)) % 1)
        return tuple(out)


def compose_relation_curves(psi1, psi2, budget=Fraction(1, 10 ** 6)) -> ComposedCurve:
    """Curve in the composite relation from curves of degrees (a, b1) and (b2, c).

    Requires ``b1`` and ``b2`` odd. Builds the fiber product of the two curves
    over their middle factors (after separating middle values by at most
    ``budget``), picks a cycle meeting the fiber over a regular value an odd
    number of times, and reads off the outer factors along it. The result has
    degree ``(k a / b1, k c / b2)`` where ``k`` is the odd degree of the middle
    map along the cycle (oriented so that ``k > 0``).
    """
    psi1 = getattr(psi1, "curve", psi1)
    psi2 = getattr(psi2, "curve", psi2)
    a, b1 = torus_degree(psi1)
    b2, c = torus_degree(psi2)
    if b1 % 2 == 0 or b2 % 2 == 0:
        raise OddDegreeError(f"middle degrees {b1} and {b2} must both be odd")
    psi1 = _split_long_pieces(psi1, "second")
    psi2 = _split_long_pieces(psi2, "first")
    grid1, grid2 = psi1.breakpoints, psi2.breakpoints
    y1, y2, delta = _separate_mod_one(list(psi1.second.lifted_values),
                                      list(psi2.first.lifted_values), Fraction(budget))
    S1 = _cycle_graph(grid1, y1, b1)
    S2 = _cycle_graph(grid2, y2, b2)
    fp = fiber_product(S1, S2)
    degs = fp.graph.degrees()
    if any(g != 2 for g in degs):
        raise CompositionError("fiber product over separated values is not a union of cycles")
    cycles = cycle_decomposition(fp)

    y0 = regular_value(list(S1.values) + list(S2.values))
    counts = []
    for w in cycles:
        cnt = 0
        for e, _ in w.steps:
            u, _, span = fp.graph.edges[e]
            cnt += _level_count(fp.graph.values[u], span, y0)
        counts.append(cnt)
    n1 = preimage_count(PLCircleMap(grid1, tuple(y1), b1), y0)
    n2 = preimage_count(PLCircleMap(grid2, tuple(y2), b2), y0)
    if sum(counts) != n1 * n2 or (n1 * n2) % 2 == 0:
        raise CompositionError(f"fiber over {y0} has {sum(counts)} points, expected odd {n1}*{n2}")
    pick = next((i for i, cnt in enumerate(counts) if cnt % 2), None)
    if pick is None:
        raise CompositionError("no cycle meets the fiber an odd number of times")
    walk = cycles[pick]

    steps = list(walk.steps)
    xi = sum(fp.graph.edges[e][2] * (1 if fwd else -1) for e, fwd in steps)
    if xi.denominator != 1 or xi == 0:
        raise CompositionError(f"middle map along the cycle has non-integral degree {xi}")
    if xi < 0:
        steps = [(e, not fwd) for e, fwd in reversed(steps)]
        xi = -xi
    k = int(xi)

    X = psi1.first.lifted_values + (psi1.first.lifted_values[0] + a,)
    Z = psi2.second.lifted_values + (psi2.second.lifted_values[0] + c,)

    def dparam(grid, e, f):
        t0 = grid[e]
        t1 = grid[e + 1] if e + 1 < len(grid) else Fraction(1)
        return t0 + f * (t1 - t0)

    out_steps = []
    xs, zs = [], []
    for idx, (e, fwd) in enumerate(steps):
        src = fp.sources[e]
        f1 = (src.start1, src.end1) if fwd else (src.end1, src.start1)
        f2 = (src.start2, src.end2) if fwd else (src.end2, src.start2)
        if idx == 0:
            xs.append(psi1.first.lift(dparam(grid1, src.edge1, f1[0])))
            zs.append(psi2.second.lift(dparam(grid2, src.edge2, f2[0])))
        e1, e2 = src.edge1, src.edge2
        xs.append(xs[-1] + (f1[1] - f1[0]) * (X[e1 + 1] - X[e1]))
        zs.append(zs[-1] + (f2[1] - f2[0]) * (Z[e2 + 1] - Z[e2]))
        out_steps.append((e1, f1[0], f1[1], e2, f2[0], f2[1]))
    dx, dz = xs[-1] - xs[0], zs[-1] - zs[0]
    if dx.denominator != 1 or dz.denominator != 1:
        raise CompositionError("outer factors do not close up")
    L = len(steps)
    out = TorusCurve.from_lifts([Fraction(j, L) for j in range(L)], xs[:L], zs[:L], (int(dx), int(dz)))

    if k % b1 or k % b2 or k % 2 == 0:
        raise CompositionError(f"k = {k} is not an odd common multiple of {b1} and {b2}")
    expected = (k * a // b1, k * c // b2)
    if torus_degree(out) != expected:
        raise CompositionError(f"measured degree {torus_degree(out)} != expected {expected}")
    return ComposedCurve(out, k, ((a, b1), (b2, c)), tuple(out_steps), (grid1, grid2),
                         len(cycles), delta, y0, n1 * n2)


# -- fixed points -------------------------------------------------------------------------------------

def circular_distance(x, y) -> Fraction:
    d = (Fraction(x) - Fraction(y)) % 1
    return min(d, 1 - d)


@dataclass(frozen=True)
class TripleFixedPoint:
    """Diagonal point of a composite of three torus curves, traced back to the factors.

    ``q0``, ``q1``, ``q2`` are circle parameters. ``gaps`` records how far the
    two factor curves sharing a middle point disagree about it (caused only by
    the separation of middle values, hence at most twice the budget).
    """

    t: Fraction
    q0: Fraction
    q1: Fraction
    q2: Fraction
    gaps: tuple
    first_degree: tuple
    final_degree: tuple
    factor_params: tuple
    composites: tuple = field(repr=False)

    def to_dict(self) -> dict:
        fmt = format_rational
        return {
            "t": fmt(self.t),
            "q": [fmt(self.q0), fmt(self.q1), fmt(self.q2)],
            "gaps": [fmt(g) for g in self.gaps],
            "first_degree": list(self.first_degree),
            "final_degree": list(self.final_degree),
            "factor_params": [fmt(x) for x in self.factor_params],
            "k": [c.k for c in self.composites],
        }


def relation_fixed_point(psi1, psi2, psi3, budget=Fraction(1, 10 ** 6)) -> TripleFixedPoint:
    """Fixed point of ``R3 o R2 o R1`` for relations containing the three torus curves."""
    psi1, psi2, psi3 = (getattr(p, "curve", p) for p in (psi1, psi2, psi3))
    c12 = compose_relation_curves(psi1, psi2, budget)
    c123 = compose_relation_curves(c12.curve, psi3, budget)
    hits = diagonal_intersections(c123.curve)
    if not hits:
        raise CompositionError(f"no diagonal point although the degree is {c123.degree()}")
    t = hits[0]
    s12, s3 = c123.factor_params(t)
    s1, s2 = c12.factor_params(s12)
    q0, q1 = psi1(s1)
    q1b, q2 = psi2(s2)
    q2b, q0b = psi3(s3)
    if q0 != q0b:
        raise CompositionError("diagonal point does not close the chain")
    gaps = (circular_distance(q1, q1b), circular_distance(q2, q2b))
    return TripleFixedPoint(t, q0, q1, q2, gaps, c12.degree(), c123.degree(), (s1, s2, s3),
                            (c12, c123))


@dataclass(frozen=True)
class FixedPointCertificate:
    """Points ``q0, q1, q2`` of a curve chained through three shadow relations.

    ``residuals[i]`` is ``q_{i+1} - q_i`` (indices mod 3) and ``deviations[i]``
    its largest coordinate off the axis of the ``i``-th relation.
    """

    axes: tuple
    epsilon: Fraction
    params: tuple
    points: tuple
    residuals: tuple
    deviations: tuple
    memberships: tuple
    gaps: tuple
    degrees: tuple

    def to_dict(self) -> dict:
        fmt = format_rational
        return {
            "axes": list(self.axes),
            "epsilon": fmt(self.epsilon),
            "params": [fmt(t) for t in self.params],
            "points": [[fmt(c) for c in p] for p in self.points],
            "residuals": [[fmt(c) for c in r] for r in self.residuals],
            "deviations": [fmt(x) for x in self.deviations],
            "memberships": list(self.memberships),
            "gaps": [fmt(g) for g in self.gaps],
            "degrees": [list(d) for d in self.degrees],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def find_triple_fixed_point(curve: PLClosedCurve, epsilon=DEFAULT_EPSILON, axes=(1, 2, 3),
                            budget=None) -> FixedPointCertificate:
    """Fixed point of the composite of three thickened shadow relations of ``curve``.

    Every listed axis must have a simple-path shadow. For three distinct axes
    this never happens for a simple curve; repeating an axis gives a genuine
    run of the same machinery.
    """
    epsilon = Fraction(epsilon)
    if budget is None:
        budget = epsilon / 1000
    splits, unr, psis = [], [], []
    for ax in axes:
        split = split_top_bottom(curve, ax)
        U = unravel(curve, split)
        splits.append(split)
        unr.append(U)
        psis.append(build_relation_curve(curve, split, epsilon, U))
    fx = relation_fixed_point(*psis, budget=budget)
    s1, s2, s3 = fx.factor_params
    q1b = psis[1].curve.first(s2)
    q2b = psis[2].curve.first(s3)
    params = (fx.q0, fx.q1, fx.q2)
    pts = tuple(curve.point_at(q) for q in params)
    residuals = (sub(pts[1], pts[0]), sub(pts[2], pts[1]), sub(pts[0], pts[2]))
    deviations = tuple(max((abs(c) for i, c in enumerate(r) if i != ax - 1), default=Fraction(0))
                       for r, ax in zip(residuals, axes))
    memberships = (
        in_shadow_relation(curve, splits[0], unr[0], epsilon, fx.q0, fx.q1),
        in_shadow_relation(curve, splits[1], unr[1], epsilon, q1b, fx.q2),
        in_shadow_relation(curve, splits[2], unr[2], epsilon, q2b, fx.q0),
    )
    return FixedPointCertificate(tuple(axes), epsilon, params, pts, residuals, deviations,
                                 memberships, fx.gaps, (fx.first_degree, fx.final_degree))


# -- endpoint witness -------------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessReport:
    endpoint_axes: tuple
    is_triple_witness: bool
    hyperplane: Optional[Fraction] = None
    p: Optional[tuple] = None
    p_prime: Optional[tuple] = None
    steps: tuple = ()
    forces_equal: bool = False
    contradiction: bool = False

    def lines(self) -> list:
        out = [f"endpoint axes: {list(self.endpoint_axes)}"]
        if not self.is_triple_witness:
            out.append("not a triple endpoint witness")
            return out
        out.append(f"hyperplane x = {self.hyperplane}")
        out.append(f"p = {self.p}, p' = {self.p_prime}")
        for text, ok in self.steps:
            out.append(f"[{'ok' if ok else 'fails'}] {text}")
        out.append("contradiction: p = p' forced although p != p'" if self.contradiction
                   else "no contradiction derived")
        return out


def _first_hit(curve: PLClosedCurve, t0: Fraction, coord: int, c, forward: bool):
    """First point after parameter ``t0`` (going forward or backward) with coordinate ``c``.

    The coordinate at ``t0`` itself must differ from ``c``.
    """
    n = curve.n
    pos = Fraction(t0) * n
    j = math.floor(pos)
    s0 = pos - j
    for step in range(n):
        if forward:
            seg = (j + step) % n
            lo, hi = (s0 if step == 0 else Fraction(0)), Fraction(1)
        else:
            seg = (j - step - (s0 == 0)) % n
            lo, hi = Fraction(0), (s0 if step == 0 and s0 else Fraction(1))
        p, q = curve.vertices[seg], curve.vertices[(seg + 1) % n]
        if p[coord] == q[coord]:
            # a level segment at height c would have been hit at its near end already
            continue
        s = (c - p[coord]) / (q[coord] - p[coord])
        if (forward and lo < s <= hi) or (not forward and lo <= s < hi):
            return lerp(p, q, s)
    return None


def _path_first_hit(lam: PathParameterization, start_point, coord: int, c):
    verts = lam.complex.vertices
    walk = list(lam.walk)
    if verts[walk[0]] != start_point:
        walk.reverse()
    for i, j in zip(walk, walk[1:]):
        p, q = verts[i], verts[j]
        if p[coord] == c:
            return p
        if (p[coord] - c) * (q[coord] - c) < 0:
            s = (c - p[coord]) / (q[coord] - p[coord])
            return lerp(p, q, s)
    last = verts[walk[-1]]
    return last if last[coord] == c else None


def _drop(x, axis):
    return x[:axis - 1] + x[axis:]


def endpoint_witness_check(curve: PLClosedCurve, q0, splits: Sequence[ShadowSplit]) -> WitnessReport:
    """Test whether ``q0`` (a curve parameter) is a split point for all three axes.

    For a triple witness, replay the hyperplane argument along the first axis
    ``h``: cut with ``{x_h = c}`` away from ``q0``, take the first cut points
    ``p`` and ``p'`` reached from ``q0`` in either direction, and check for each
    remaining axis ``j`` that ``p`` and ``p'`` both project to the first point of
    shadow ``j`` at level ``c``. Those equalities make ``p - p'`` parallel to
    two different axes, forcing ``p = p'``; with ``p != p'`` the premises are
    contradictory (``contradiction``). The steps record which equalities
    actually hold on the given geometry.
    """
    q0 = Fraction(q0) % 1
    x0 = curve.point_at(q0)
    endpoint_axes = tuple(s.axis for s in splits
                          if x0 in (curve.point_at(s.a), curve.point_at(s.a_tilde)))
    if len(splits) != 3 or len(set(endpoint_axes)) != 3:
        return WitnessReport(endpoint_axes, False)
    h = splits[0].axis
    coord = h - 1
    xs = [v[coord] for v in curve.vertices]
    lo, hi = min(xs), max(xs)
    steps = []
    if lo == hi:
        steps.append((f"the curve lies in a hyperplane x_{h} = {lo}, so shadow {h} is a "
                       f"translate of the curve, not a path", True))
        return WitnessReport(endpoint_axes, True, lo, None, None, tuple(steps), True, True)
    c0 = x0[coord]
    c = (lo + hi) / 2 if (lo + hi) / 2 != c0 else (c0 + hi) / 2
    p = _first_hit(curve, q0, coord, c, forward=True)
    pp = _first_hit(curve, q0, coord, c, forward=False)
    steps.append((f"the hyperplane x_{h} = {c} misses q0", c != c0))
    steps.append(("p != p'", p != pp))
    equal_on = []
    for s in splits[1:]:
        j = s.axis
        cx = shadow_complex(curve, j)
        if classify(cx).tag is not Topology.SIMPLE_PATH:
            steps.append((f"shadow {j} is a simple path", False))
            continue
        lam = s.path if s.path is not None else PathParameterization(cx)
        jc = coord if h < j else coord - 1
        hit = _path_first_hit(lam, _drop(x0, j), jc, c)
        a1 = hit is not None and _drop(p, j) == hit
        a2 = hit is not None and _drop(pp, j) == hit
        steps.append((f"pi_{j}(p) is the first point of shadow {j} at level {c}", a1))
        steps.append((f"pi_{j}(p') is the first point of shadow {j} at level {c}", a2))
        if a1 and a2:
            equal_on.append(j)
    # p - p' lies in span(e_j) for each remaining axis whose projections agree;
    # two distinct axes leave only the zero vector
    j2, j3 = (s.axis for s in splits[1:])
    forces = j2 != j3
    steps.append((f"equal projections along axes {j2} and {j3} force p = p'", forces))
    if len(equal_on) < 2:
        steps.append(("the projection equalities fail on this geometry, so the endpoint premise is false",
                      True))
    return WitnessReport(endpoint_axes, True, c, p, pp, tuple(steps), forces,
                         forces and p is not None and p != pp)


# -- the 2-to-1 special case -------------------------------------------------------------------------------

def flip_map_demo(curve: PLClosedCurve, axis: int) -> PLCircleMap:
    """Involution of the curve swapping the two points over each interior shadow point.

    Requires the projection to be exactly 2-to-1 over the interior of the
    shadow path (one point over each end). The result has degree -1 and fixes
    exactly the two split points.
    """
    split = split_top_bottom(curve, axis)
    U = unravel(curve, split)
    if U.degenerate:
        raise NotTwoToOne(f"a segment is parallel to axis {axis}; its shadow point has infinitely many preimages")
    cx = split.path.complex
    ends = {split.path.walk[0], split.path.walk[-1]}
    counts = [0] * len(cx.vertices)
    for i in U.complex_vertices:
        counts[i] += 1
    for i, cnt in enumerate(counts):
        want = 1 if i in ends else 2
        if cnt != want:
            raise NotTwoToOne(f"shadow vertex {cx.vertices[i]} has {cnt} preimages, expected {want}")
    m = len(U.params)
    edge_cover = {}
    for k in range(m):
        e = frozenset((U.complex_vertices[k], U.complex_vertices[(k + 1) % m]))
        edge_cover[e] = edge_cover.get(e, 0) + 1
    if any(v != 2 for v in edge_cover.values()) or len(edge_cover) != len(cx.edges):
        raise NotTwoToOne("some shadow edge is not covered exactly twice")

    a, A = split.top
    top = U.arc(split.a, split.a_tilde)
    bottom = U.arc(split.a_tilde, split.a)
    first = lambda i: U.points[i][0]
    if any(first(i) >= first(j) for i, j in zip(top, top[1:])) or \
            any(first(i) <= first(j) for i, j in zip(bottom, bottom[1:])):
        raise NotTwoToOne("arcs are not monotone over the shadow path")

    def lifted(indices, start):
        out = [start]
        for i, j in zip(indices, indices[1:]):
            out.append(out[-1] + (U.params[j] - U.params[i]) % 1)
        return out

    top_t = dict(zip((first(i) for i in top), lifted(top, a)))
    bot_t = dict(zip((first(i) for i in bottom), lifted(bottom, A)))
    lift = {}
    for i, t in zip(top, lifted(top, a)):
        lift[t] = bot_t[first(i)]
    for i, t in zip(bottom, lifted(bottom, A)):
        lift.setdefault(t, top_t[first(i)])
    lift.pop(a + 1, None)  # same point as a
    values = {}
    for t, v in lift.items():
        if t >= 1:
            values[t - 1] = v + 1
        else:
            values[t] = v
    grid = sorted(values)
    return PLCircleMap(tuple(grid), tuple(values[t] for t in grid), -1)
