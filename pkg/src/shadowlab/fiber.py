"""Fiber products of graphs mapped to the line or the circle.

For maps ``f1: G1 -> Y`` and ``f2: G2 -> Y`` that are injective on edges, the
fiber product ``{(x1, x2) : f1(x1) = f2(x2)}`` is again a graph: its vertices
are the pairs where ``x1`` or ``x2`` is a vertex of its factor.
"""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .curve import parse_rational


class Target(str, enum.Enum):
    LINE = "Line"
    CIRCLE = "Circle"


class FiberProductError(ValueError):
    pass


@dataclass(frozen=True)
class MappedGraph:
    """Graph on vertices ``0..n-1`` with a PL map to the line or the circle.

    Each edge is ``(u, v, span)``: along the edge the lift of the map runs
    linearly from ``values[u]`` to ``values[u] + span``. Circle values are kept
    in [0, 1) and ``0 < |span| < 1`` (the map is injective on the closed edge).
    """

    values: tuple
    edges: tuple
    target: Target = Target.LINE

    def __post_init__(self):
        target = Target(self.target)
        object.__setattr__(self, "target", target)
        vals = tuple(parse_rational(v) for v in self.values)
        if target is Target.CIRCLE:
            vals = tuple(v % 1 for v in vals)
        object.__setattr__(self, "values", vals)
        edges = []
        for e in self.edges:
            if len(e) == 2:
                if target is Target.CIRCLE:
                    raise FiberProductError("circle-valued edges need an explicit span")
                u, v = e
                span = vals[v] - vals[u]
            else:
                u, v, span = e
                span = parse_rational(span)
            if not (0 <= u < len(vals) and 0 <= v < len(vals)):
                raise FiberProductError(f"edge {e} refers to a missing vertex")
            if span == 0:
                raise FiberProductError(f"map is constant on edge {(u, v)}")
            if target is Target.LINE and span != vals[v] - vals[u]:
                raise FiberProductError(f"span of edge {(u, v)} disagrees with vertex values")
            if target is Target.CIRCLE:
                if abs(span) >= 1:
                    raise FiberProductError(f"map wraps all the way around on edge {(u, v)}")
                if (vals[u] + span - vals[v]) % 1:
                    raise FiberProductError(f"span of edge {(u, v)} disagrees with vertex values")
            edges.append((u, v, span))
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def path(cls, values) -> "MappedGraph":
        """Path graph ``0 - 1 - ... - n-1`` mapped to the line."""
        return cls(tuple(values), tuple((i, i + 1) for i in range(len(values) - 1)), Target.LINE)

    @classmethod
    def cycle(cls, values, spans=None, target: Target = Target.LINE) -> "MappedGraph":
        """Cycle graph ``0 - 1 - ... - n-1 - 0``; circle targets need the spans."""
        n = len(values)
        if spans is None:
            edges = tuple((i, (i + 1) % n) for i in range(n))
        else:
            edges = tuple((i, (i + 1) % n, spans[i]) for i in range(n))
        return cls(tuple(values), edges, target)

    @property
    def vertex_count(self) -> int:
        return len(self.values)

    def degrees(self) -> list:
        deg = [0] * len(self.values)
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def value_at(self, point: "FactorPoint") -> Fraction:
        if point.vertex is not None:
            return self.values[point.vertex]
        u, _, span = self.edges[point.edge]
        y = self.values[u] + point.fraction * span
        return y % 1 if self.target is Target.CIRCLE else y


@dataclass(frozen=True)
class FactorPoint:
    """A point of a factor graph: a vertex, or an edge at a fraction in (0, 1)."""

    vertex: Optional[int] = None
    edge: Optional[int] = None
    fraction: Optional[Fraction] = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self):
        return (0, self.vertex, 0) if self.vertex is not None else (1, self.edge, self.fraction)

    def fraction_on(self, graph: MappedGraph, edge: int) -> Fraction:
        """Position of this point along ``edge`` (0 at its start, 1 at its end)."""
        if self.vertex is None:
            if self.edge != edge:
                raise ValueError("point is not on that edge")
            return self.fraction
        u, v, _ = graph.edges[edge]
        if self.vertex == u:
            return Fraction(0)
        if self.vertex == v:
            return Fraction(1)
        raise ValueError("vertex is not an end of that edge")


def _point_on_edge(graph: MappedGraph, e: int, f: Fraction) -> FactorPoint:
    u, v, _ = graph.edges[e]
    if f == 0:
        return FactorPoint(vertex=u)
    if f == 1:
        return FactorPoint(vertex=v)
    return FactorPoint(edge=e, fraction=f)


@dataclass(frozen=True)
class EdgeSource:
    """Where a product edge lives: factor edges and the fractions at both ends."""

    edge1: int
    edge2: int
    start1: Fraction
    end1: Fraction
    start2: Fraction
    end2: Fraction


@dataclass(frozen=True)
class FiberProduct:
    graph: MappedGraph
    points: tuple  # per product vertex: (FactorPoint, FactorPoint)
    sources: tuple  # per product edge: EdgeSource
    factors: tuple = field(repr=False)

    def provenance(self, vertex: int) -> str:
        """Which factor supplies a vertex coordinate: 'first', 'second' or 'both'."""
        p1, p2 = self.points[vertex]
        if p1.is_vertex and p2.is_vertex:
            return "both"
        return "first" if p1.is_vertex else "second"

    def factor_params(self, edge: int, fraction: Fraction) -> tuple:
        """Factor points (edge, fraction) reached at ``fraction`` along a product edge."""
        s = self.sources[edge]
        return ((s.edge1, s.start1 + fraction * (s.end1 - s.start1)),
                (s.edge2, s.start2 + fraction * (s.end2 - s.start2)))


def fiber_product(g1: MappedGraph, g2: MappedGraph) -> FiberProduct:
    """Fiber product graph of two mapped graphs over the same target."""
    if g1.target is not g2.target:
        raise FiberProductError("factors map to different targets")
    circle = g1.target is Target.CIRCLE
    keys = set()
    raw_edges = []
    for e1, (u1, _, s1) in enumerate(g1.edges):
        a1 = g1.values[u1]
        lo1, hi1 = (a1, a1 + s1) if s1 > 0 else (a1 + s1, a1)
        for e2, (u2, _, s2) in enumerate(g2.edges):
            a2 = g2.values[u2]
            lo2, hi2 = (a2, a2 + s2) if s2 > 0 else (a2 + s2, a2)
            shifts = range(math.ceil(lo1 - hi2), math.floor(hi1 - lo2) + 1) if circle else (0,)
            for n in shifts:
                lo = max(lo1, lo2 + n)
                hi = min(hi1, hi2 + n)
                if lo > hi:
                    continue
                ends = []
                for y in ((lo,) if lo == hi else (lo, hi)):
                    f1 = (y - a1) / s1
                    f2 = (y - n - a2) / s2
                    key = (_point_on_edge(g1, e1, f1), _point_on_edge(g2, e2, f2))
                    keys.add(key)
                    ends.append((key, f1, f2))
                if len(ends) == 2:
                    raw_edges.append((ends[0], ends[1], hi - lo, e1, e2))

    # isolated factor vertices are not reached through edge pairs
    deg1, deg2 = g1.degrees(), g2.degrees()
    for first, second, deg_a, flip in ((g1, g2, deg1, False), (g2, g1, deg2, True)):
        for v, d in enumerate(deg_a):
            if d:
                continue
            y = first.values[v]
            for w, yw in enumerate(second.values):
                same = (y - yw) % 1 == 0 if circle else y == yw
                if same:
                    pair = (FactorPoint(vertex=v), FactorPoint(vertex=w))
                    keys.add(pair[::-1] if flip else pair)
            for e, (u, _, s) in enumerate(second.edges):
                a = second.values[u]
                lo, hi = (a, a + s) if s > 0 else (a + s, a)
                cands = [y + n for n in range(math.ceil(lo - y), math.floor(hi - y) + 1)] \
                    if circle else [y]
                for yy in cands:
                    if lo < yy < hi:
                        pair = (FactorPoint(vertex=v), FactorPoint(edge=e, fraction=(yy - a) / s))
                        keys.add(pair[::-1] if flip else pair)

    ordered = sorted(keys, key=lambda k: (k[0].sort_key(), k[1].sort_key()))
    index = {k: i for i, k in enumerate(ordered)}
    values = tuple(g1.value_at(k[0]) for k in ordered)
    edges = []
    sources = []
    for (ka, fa1, fa2), (kb, fb1, fb2), span, e1, e2 in sorted(
            raw_edges, key=lambda r: (index[r[0][0]], index[r[1][0]], r[3], r[4])):
        edges.append((index[ka], index[kb], span))
        sources.append(EdgeSource(e1, e2, fa1, fb1, fa2, fb2))
    graph = MappedGraph(values, tuple(edges), g1.target)
    return FiberProduct(graph, tuple(ordered), tuple(sources), (g1, g2))


@dataclass(frozen=True)
class DegreeReport:
    checked: int
    violations: tuple  # (product vertex, factor name, factor degree, product degree)

    @property
    def ok(self) -> bool:
        return not self.violations


def vertex_degree_check(fp: FiberProduct) -> DegreeReport:
    """Check that a product vertex with exactly one factor-vertex coordinate has that vertex's degree."""
    prod_deg = fp.graph.degrees()
    fdeg = [g.degrees() for g in fp.factors]
    checked = 0
    bad = []
    for i, (p1, p2) in enumerate(fp.points):
        if p1.is_vertex == p2.is_vertex:
            continue
        which, p = (0, p1) if p1.is_vertex else (1, p2)
        checked += 1
        expected = fdeg[which][p.vertex]
        if prod_deg[i] != expected:
            bad.append((i, ("first", "second")[which], expected, prod_deg[i]))
    return DegreeReport(checked, tuple(bad))


@dataclass(frozen=True)
class Walk:
    """A maximal path or a cycle: vertex sequence and ``(edge, forward)`` steps.

    For a cycle the start vertex is not repeated at the end.
    """

    kind: str  # "path" or "cycle"
    vertices: tuple
    steps: tuple

    def __len__(self):
        return len(self.steps)


def cycle_decomposition(graph) -> list:
    """Split a graph with all degrees in {1, 2} into paths and cycles.

    Isolated vertices are ignored. Components come out ordered by their least
    vertex; a path starts at its smaller end, a cycle at its least vertex.
    """
    if isinstance(graph, FiberProduct):
        graph = graph.graph
    n = graph.vertex_count
    inc = defaultdict(list)
    for e, (u, v, _) in enumerate(graph.edges):
        inc[u].append(e)
        inc[v].append(e)
    for v in range(n):
        if len(inc[v]) > 2:
            raise FiberProductError(f"vertex {v} has graphical degree {len(inc[v])}")
    used_edges = set()
    seen = set()
    walks = []

    def other_end(e, x):
        u, v, _ = graph.edges[e]
        return v if x == u else u

    def trace(start):
        verts = [start]
        steps = []
        x = start
        while True:
            nxt = [e for e in sorted(inc[x]) if e not in used_edges]
            if not nxt:
                break
            e = nxt[0]
            used_edges.add(e)
            y = other_end(e, x)
            steps.append((e, graph.edges[e][0] == x))
            if y == start:
                break
            verts.append(y)
            x = y
        return verts, steps

    for v in range(n):
        if v in seen or not inc[v]:
            continue
        # collect the component
        stack, members = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            members.append(x)
            for e in inc[x]:
                y = other_end(e, x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        ends = sorted(x for x in members if len(inc[x]) == 1)
        if ends:
            verts, steps = trace(ends[0])
            walks.append(Walk("path", tuple(verts), tuple(steps)))
        else:
            verts, steps = trace(min(members))
            walks.append(Walk("cycle", tuple(verts), tuple(steps)))
    return walks
