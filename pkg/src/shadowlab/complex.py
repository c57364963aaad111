"""Embedded 1-complexes of shadows and their homeomorphism type."""

from __future__ import annotations

import enum
import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional

from .curve import (
    PLClosedCurve,
    _nonzero_minor,
    format_rational,
    integer_coordinates,
    parse_rational,
    point_on_segment,
    project,
    segment_parameter,
    validate_simple,
)


class PathBoundViolation(RuntimeError):
    """Three or more coordinate shadows of a simple closed curve came out as simple paths.

    This cannot happen for a correct classifier; it signals an arithmetic or
    construction bug.
    """


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.components = size

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        self.components -= 1
        return True


@dataclass(frozen=True)
class ImageComplex:
    """Vertices in R^m with straight edges whose interiors are pairwise disjoint."""

    vertices: tuple
    edges: tuple  # (i, j) with i < j

    @property
    def dimension(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    def incidence(self) -> list:
        inc = [[] for _ in self.vertices]
        for e, (i, j) in enumerate(self.edges):
            inc[i].append(e)
            inc[j].append(e)
        return inc

    def degrees(self) -> list:
        deg = [0] * len(self.vertices)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def segments(self) -> list:
        return [(self.vertices[i], self.vertices[j]) for i, j in self.edges]

    def contains(self, x) -> bool:
        x = tuple(x)
        if x in set(self.vertices):
            return True
        return any(point_on_segment(x, p, q) for p, q in self.segments())

    def to_dict(self) -> dict:
        return {
            "vertices": [[format_rational(c) for c in v] for v in self.vertices],
            "edges": [list(e) for e in self.edges],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "ImageComplex":
        verts = tuple(tuple(parse_rational(c) for c in v) for v in data["vertices"])
        edges = tuple(tuple(sorted(e)) for e in data["edges"])
        return cls(verts, edges)


# -- arrangement ---------------------------------------------------------------------

def _line_key(p, q):
    """Canonical key of the line through distinct integer points ``p``, ``q``.

    The key is the primitive direction (first non-zero entry positive) together
    with its moment minors, which pin down the line exactly. Also returns the
    index ``k`` of the first non-zero direction entry; coordinate ``k`` serves
    as the position along the line.
    """
    u = [b - a for a, b in zip(p, q)]
    g = 0
    for c in u:
        g = gcd(g, c)
    k = next(i for i, c in enumerate(u) if c)
    if u[k] < 0:
        g = -g
    v = tuple(c // g for c in u)
    m = len(v)
    moments = tuple(p[i] * v[j] - p[j] * v[i] for i in range(m) for j in range(i + 1, m))
    return (v, moments), k


def _merge(intervals):
    intervals.sort()
    merged = []
    for lo, hi in intervals:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return merged


def build_image_complex(segments) -> ImageComplex:
    """Arrangement-refined complex whose point set is the union of ``segments``.

    Collinear overlaps are merged, segments are split at every mutual contact
    and at every original endpoint, and vertices are identified by exact
    equality. Zero-length segments contribute a vertex (isolated unless the
    point lies on another segment).
    """
    segs = [(tuple(p), tuple(q)) for p, q in segments]
    if not segs:
        return ImageComplex((), ())
    # a homothety does not change the topology; integer coordinates keep the
    # incidence tests division-free
    flat, den = integer_coordinates([x for seg in segs for x in seg])
    lines = defaultdict(list)
    known = defaultdict(dict)  # line key -> {position: point}
    axis_of = {}
    ref_of = {}
    points = []
    for idx in range(0, len(flat), 2):
        p, q = flat[idx], flat[idx + 1]
        if p == q:
            points.append(p)
            continue
        key, k = _line_key(p, q)
        axis_of[key] = k
        ref_of.setdefault(key, p)
        lo, hi = (p[k], q[k]) if p[k] < q[k] else (q[k], p[k])
        lines[key].append((lo, hi))
        known[key][p[k]] = p
        known[key][q[k]] = q

    pieces = []
    for key, ivals in lines.items():
        k = axis_of[key]
        cuts = known[key]
        for lo, hi in _merge(ivals):
            e0, e1 = cuts[lo], cuts[hi]
            bb_lo = tuple(min(x, y) for x, y in zip(e0, e1))
            bb_hi = tuple(max(x, y) for x, y in zip(e0, e1))
            split = {t: x for t, x in cuts.items() if lo <= t <= hi}
            pieces.append((key, k, ref_of[key], lo, hi, bb_lo, bb_hi, split))

    m = len(flat[0])
    for a, piece in enumerate(pieces):
        (v, _), k, p, lo, hi, bb_lo, bb_hi, split = piece
        for other in pieces[a + 1:]:
            (w, _), k2, r, lo2, hi2, obb_lo, obb_hi, osplit = other
            if v == w:
                continue  # parallel; pieces on one line are disjoint
            if any(x > y2 or x2 > y for x, y, x2, y2 in zip(bb_lo, bb_hi, obb_lo, obb_hi)):
                continue
            i, j, det = _nonzero_minor(v, w)
            rp = [y - x for x, y in zip(p, r)]
            # p + (na/det) v == r + (nb/det) w
            na = rp[i] * w[j] - rp[j] * w[i]
            nb = rp[i] * v[j] - rp[j] * v[i]
            if det < 0:
                det, na, nb = -det, -na, -nb
            ta = p[k] * det + na * v[k]
            tb = r[k2] * det + nb * w[k2]
            if not (lo * det <= ta <= hi * det and lo2 * det <= tb <= hi2 * det):
                continue
            num = [p[c] * det + na * v[c] for c in range(m)]
            if m > 2 and any(num[c] != r[c] * det + nb * w[c] for c in range(m)):
                continue
            x = tuple(Fraction(c, det) for c in num)
            split[x[k]] = x
            osplit[x[k2]] = x

    isolated = []
    for x in points:
        hit = False
        for (v, moments), k, _, lo, hi, _, _, split in pieces:
            if lo <= x[k] <= hi and moments == tuple(
                    x[i] * v[j] - x[j] * v[i] for i in range(m) for j in range(i + 1, m)):
                split[x[k]] = x
                hit = True
        if not hit:
            isolated.append(x)

    raw_edges = []
    all_points = set(isolated)
    for piece in pieces:
        split = piece[7]
        pts = [split[t] for t in sorted(split)]
        all_points.update(pts)
        raw_edges.extend(zip(pts, pts[1:]))

    verts = sorted(all_points)
    index = {x: i for i, x in enumerate(verts)}
    edges = sorted(tuple(sorted((index[p], index[q]))) for p, q in raw_edges)
    verts = tuple(tuple(Fraction(c) / den for c in x) for x in verts)
    return ImageComplex(verts, tuple(edges))


# -- classification ----------------------------------------------------------------------

class Topology(str, enum.Enum):
    SIMPLE_PATH = "SimplePath"
    SIMPLE_CLOSED_CURVE = "SimpleClosedCurve"
    TREE = "Tree"
    DISCONNECTED = "Disconnected"
    OTHER = "Other"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TopologyClass:
    """Homeomorphism type plus evidence.

    ``witness`` holds the two endpoint vertex indices for a simple path, the
    vertex indices of a cycle for a closed curve or ``Other``, the branch
    vertices (graphical degree >= 3) for a tree, and the component count for a
    disconnected complex.
    """

    tag: Topology
    witness: object
    complex: Optional[ImageComplex] = field(default=None, compare=False, repr=False)

    def witness_points(self) -> list:
        if self.complex is None or isinstance(self.witness, int):
            return []
        return [self.complex.vertices[i] for i in self.witness]


def find_cycle(complex_: ImageComplex) -> tuple:
    """Vertex indices of some cycle, or () for a forest."""
    uf = UnionFind(len(complex_.vertices))
    tree_adj = defaultdict(list)
    for i, j in complex_.edges:
        if not uf.union(i, j):
            # path from i to j in the spanning forest closes a cycle
            prev = {i: None}
            queue = deque([i])
            while queue:
                x = queue.popleft()
                if x == j:
                    break
                for y in tree_adj[x]:
                    if y not in prev:
                        prev[y] = x
                        queue.append(y)
            cycle = []
            x = j
            while x is not None:
                cycle.append(x)
                x = prev[x]
            return tuple(cycle)
        tree_adj[i].append(j)
        tree_adj[j].append(i)
    return ()


def classify(complex_: ImageComplex) -> TopologyClass:
    nv, ne = len(complex_.vertices), len(complex_.edges)
    if nv == 0:
        return TopologyClass(Topology.OTHER, (), complex_)
    uf = UnionFind(nv)
    for i, j in complex_.edges:
        uf.union(i, j)
    if uf.components > 1:
        return TopologyClass(Topology.DISCONNECTED, uf.components, complex_)
    deg = complex_.degrees()
    if ne == nv - 1:
        leaves = tuple(i for i, g in enumerate(deg) if g == 1)
        if len(leaves) == 2 and all(g in (1, 2) for g in deg):
            return TopologyClass(Topology.SIMPLE_PATH, leaves, complex_)
        branch = tuple(i for i, g in enumerate(deg) if g >= 3)
        return TopologyClass(Topology.TREE, branch, complex_)
    cycle = find_cycle(complex_)
    if all(g == 2 for g in deg):
        return TopologyClass(Topology.SIMPLE_CLOSED_CURVE, cycle, complex_)
    return TopologyClass(Topology.OTHER, cycle, complex_)


def shadow_complex(curve: PLClosedCurve, axis: int) -> ImageComplex:
    return build_image_complex(project(curve, axis))


def shadow_class(curve: PLClosedCurve, axis: int) -> TopologyClass:
    return classify(shadow_complex(curve, axis))


def shadow_classes(curve: PLClosedCurve, check_simple: bool = True) -> list:
    """Topology of every coordinate shadow, axis 1 first.

    Raises :class:`PathBoundViolation` if three or more shadows are simple paths.
    """
    if check_simple and not validate_simple(curve):
        raise ValueError("curve is not simple")
    classes = [shadow_class(curve, i) for i in range(1, curve.dimension + 1)]
    paths = [i + 1 for i, c in enumerate(classes) if c.tag is Topology.SIMPLE_PATH]
    if len(paths) >= 3:
        raise PathBoundViolation(f"shadows {paths} all classified as simple paths")
    return classes


# -- path parameterization -------------------------------------------------------------------

class PathParameterization:
    """Edge-fraction parameterization of a simple-path complex.

    The walk visits ``vertices[0], ..., vertices[E]``; vertex ``k`` sits at
    parameter ``k / E`` and each edge is traversed linearly.
    """

    def __init__(self, complex_: ImageComplex, start: Optional[int] = None):
        cls = classify(complex_)
        if cls.tag is not Topology.SIMPLE_PATH:
            raise ValueError(f"complex is a {cls.tag}, not a simple path")
        ends = cls.witness
        if start is None:
            start = min(ends)
        if start not in ends:
            raise ValueError("start must be an endpoint of the path")
        adj = defaultdict(list)
        for i, j in complex_.edges:
            adj[i].append(j)
            adj[j].append(i)
        walk = [start]
        prev = None
        while len(walk) <= len(complex_.edges):
            nxt = next(y for y in adj[walk[-1]] if y != prev)
            prev = walk[-1]
            walk.append(nxt)
        self.complex = complex_
        self.walk = tuple(walk)
        self.edge_count = len(walk) - 1
        self.position = {v: k for k, v in enumerate(walk)}

    @property
    def start(self):
        return self.complex.vertices[self.walk[0]]

    @property
    def end(self):
        return self.complex.vertices[self.walk[-1]]

    def vertex_parameter(self, v: int) -> Fraction:
        return Fraction(self.position[v], self.edge_count)

    def cumulative(self) -> list:
        return [Fraction(k, self.edge_count) for k in range(self.edge_count + 1)]

    def __call__(self, s) -> tuple:
        """The point at parameter ``s`` in [0, 1]."""
        s = Fraction(s)
        if not 0 <= s <= 1:
            raise ValueError("parameter outside [0, 1]")
        pos = s * self.edge_count
        k = min(int(pos), self.edge_count - 1)
        p = self.complex.vertices[self.walk[k]]
        q = self.complex.vertices[self.walk[k + 1]]
        f = pos - k
        return tuple(a + (b - a) * f for a, b in zip(p, q))

    def inverse(self, x) -> Fraction:
        """Parameter of the point ``x`` of the path."""
        x = tuple(x)
        verts = self.complex.vertices
        for k in range(self.edge_count):
            p, q = verts[self.walk[k]], verts[self.walk[k + 1]]
            if point_on_segment(x, p, q):
                return (k + segment_parameter(x, p, q)) / self.edge_count if x != p \
                    else Fraction(k, self.edge_count)
        if x == verts[self.walk[-1]]:
            return Fraction(1)
        raise ValueError(f"point {x} is not on the path")


def path_parameterization(complex_: ImageComplex, start: Optional[int] = None) -> PathParameterization:
    return PathParameterization(complex_, start)
