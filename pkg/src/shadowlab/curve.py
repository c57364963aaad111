"""Exact piecewise-linear closed curves in R^d.

Coordinates are :class:`fractions.Fraction` throughout, so every incidence
decision (does this segment touch that one?) is exact.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

Point = tuple  # tuple of Fractions
Segment = tuple  # (Point, Point)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class CurveError(ValueError):
    """Malformed curve input."""


class PerturbationError(ValueError):
    """No admissible perturbation was found within the budget."""

    def __init__(self, message: str, constraint: str):
        super().__init__(message)
        self.constraint = constraint


def parse_rational(token: Union[str, int, Fraction]) -> Fraction:
    """Parse an integer literal or a ``p/q`` literal.

    Decimal, exponent and special float spellings are rejected on purpose:
    the interchange format only carries exact values.
    """
    if isinstance(token, bool):
        raise CurveError(f"not a rational literal: {token!r}")
    if isinstance(token, (int, Fraction)):
        return Fraction(token)
    if not isinstance(token, str):
        raise CurveError(f"not a rational literal: {token!r}")
    m = _RATIONAL_RE.match(token)
    if m is None:
        raise CurveError(f"not a rational literal: {token!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise CurveError(f"zero denominator in {token!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


# -- small exact vector helpers ------------------------------------------------

def sub(p: Point, q: Point) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def scale(p: Point, s) -> Point:
    return tuple(a * s for a in p)


def lerp(p: Point, q: Point, s) -> Point:
    return tuple(a + (b - a) * s for a, b in zip(p, q))


def dot(p: Point, q: Point):
    return sum(a * b for a, b in zip(p, q))


def _nonzero_minor(u: Point, w: Point):
    """Return (i, j, det) for a non-vanishing 2x2 minor of [u w], or None."""
    m = len(u)
    for i in range(m):
        ui, wi = u[i], w[i]
        for j in range(i + 1, m):
            det = ui * w[j] - u[j] * wi
            if det:
                return i, j, det
    return None


def parallel(u: Point, w: Point) -> bool:
    return _nonzero_minor(u, w) is None


def point_on_segment(x: Point, p: Point, q: Point) -> bool:
    """Exact membership of ``x`` in the closed segment ``pq``."""
    u = sub(q, p)
    r = sub(x, p)
    if not parallel(u, r):
        return False
    k = next((i for i, c in enumerate(u) if c), None)
    if k is None:
        return x == p
    s = r[k] / u[k]
    return 0 <= s <= 1


def segment_parameter(x: Point, p: Point, q: Point) -> Fraction:
    """Fraction ``s`` with ``x == p + s (q - p)``; ``x`` must lie on the line."""
    u = sub(q, p)
    k = next(i for i, c in enumerate(u) if c)
    return Fraction(x[k] - p[k]) / u[k]


def segments_intersect(p: Point, q: Point, r: Point, s: Point) -> bool:
    """Exact test for a common point of the closed segments ``pq`` and ``rs``.

    Division-free, so integer inputs stay in integer arithmetic.
    """
    for a, b, c, d in zip(p, q, r, s):
        if (a if a > b else b) < (c if c < d else d) or (c if c > d else d) < (a if a < b else b):
            return False
    u = sub(q, p)
    w = sub(s, r)
    rp = sub(r, p)
    minor = _nonzero_minor(u, w)
    if minor is None:
        if p == q:
            return point_on_segment(p, r, s)
        if r == s:
            return point_on_segment(r, p, q)
        if not parallel(u, rp):
            return False
        k = next(i for i, c in enumerate(u) if c)
        lo1, hi1 = sorted((p[k], q[k]))
        lo2, hi2 = sorted((r[k], s[k]))
        return max(lo1, lo2) <= min(hi1, hi2)
    i, j, det = minor
    # p + (na/det) u = r + (nb/det) w
    na = rp[i] * w[j] - rp[j] * w[i]
    nb = rp[i] * u[j] - rp[j] * u[i]
    if det < 0:
        det, na, nb = -det, -na, -nb
    if not (0 <= na <= det and 0 <= nb <= det):
        return False
    return all(pk * det + na * uk == rk * det + nb * wk for pk, uk, rk, wk in zip(p, u, r, w))


def integer_coordinates(points) -> tuple:
    """Scale ``points`` by the least common denominator; return ``(int_points, factor)``."""
    from math import lcm

    den = 1
    for v in points:
        for c in v:
            if not isinstance(c, int):
                den = lcm(den, c.denominator)
    scaled = tuple(tuple(int(c * den) for c in v) for v in points)
    return scaled, den


# -- the curve type -------------------------------------------------------------

@dataclass(frozen=True)
class PLClosedCurve:
    """Closed polygon through ``vertices``; the last vertex joins the first.

    Construction checks the structural conditions only (dimension, at least
    three vertices, no repeated consecutive vertex). Simplicity is a separate,
    more expensive question answered by :func:`validate_simple`.
    """

    dimension: int
    vertices: tuple

    def __post_init__(self):
        verts = tuple(tuple(parse_rational(c) for c in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if self.dimension < 2:
            raise CurveError("dimension must be at least 2")
        if len(verts) < 3:
            raise CurveError("a closed curve needs at least 3 vertices")
        for v in verts:
            if len(v) != self.dimension:
                raise CurveError(f"vertex {v} does not have {self.dimension} coordinates")
        n = len(verts)
        for j in range(n):
            if verts[j] == verts[(j + 1) % n]:
                raise CurveError(f"repeated consecutive vertex at index {j}")

    @classmethod
    def from_points(cls, points: Iterable[Sequence]) -> "PLClosedCurve":
        pts = [tuple(p) for p in points]
        if not pts:
            raise CurveError("empty vertex list")
        return cls(len(pts[0]), tuple(pts))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def segments(self) -> list:
        v = self.vertices
        return [(v[j], v[(j + 1) % len(v)]) for j in range(len(v))]

    def point_at(self, t) -> Point:
        """Point at curve parameter ``t`` (mod 1); vertex ``j`` sits at ``j/n``."""
        t = Fraction(t) % 1
        pos = t * self.n
        j = int(pos)  # floor, pos >= 0
        s = pos - j
        p, q = self.vertices[j], self.vertices[(j + 1) % self.n]
        return lerp(p, q, s) if s else p

    def coordinate(self, axis: int):
        """Dual coordinate function reading coordinate ``axis`` (1-based)."""
        _check_axis(self.dimension, axis)
        return lambda x: x[axis - 1]

    def subdivide(self, j: int, s: Fraction = Fraction(1, 2)) -> "PLClosedCurve":
        """Insert a vertex at fraction ``s`` of segment ``j``."""
        p, q = self.vertices[j], self.vertices[(j + 1) % self.n]
        new = list(self.vertices)
        new.insert(j + 1, lerp(p, q, Fraction(s)))
        return PLClosedCurve(self.dimension, tuple(new))

    def transform(self, matrix: Sequence[Sequence], offset: Sequence = None) -> "PLClosedCurve":
        """Apply ``x -> M x + b`` with a rational matrix ``M``.

        Projecting the transformed curve along coordinate axes is how shadows in
        arbitrary linearly independent directions are handled.
        """
        M = [[parse_rational(c) for c in row] for row in matrix]
        b = [parse_rational(c) for c in offset] if offset is not None else [0] * len(M)
        verts = [tuple(sum(r * x for r, x in zip(row, v)) + bi for row, bi in zip(M, b))
                 for v in self.vertices]
        return PLClosedCurve(len(M), tuple(verts))

    # -- interchange ---------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "vertices": [[format_rational(c) for c in v] for v in self.vertices],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "PLClosedCurve":
        if not isinstance(data, dict) or "dimension" not in data or "vertices" not in data:
            raise CurveError("curve JSON needs 'dimension' and 'vertices'")
        dim = data["dimension"]
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise CurveError("'dimension' must be an integer")
        verts = data["vertices"]
        if not isinstance(verts, list) or not all(isinstance(v, list) for v in verts):
            raise CurveError("'vertices' must be an array of arrays")
        for v in verts:
            for c in v:
                if not isinstance(c, str):
                    raise CurveError(f"coordinates must be strings, got {c!r}")
        return cls(dim, tuple(tuple(parse_rational(c) for c in v) for v in verts))

    @classmethod
    def from_json(cls, text: str) -> "PLClosedCurve":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CurveError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def _check_axis(dimension: int, axis: int):
    if not isinstance(axis, int) or not 1 <= axis <= dimension:
        raise CurveError(f"axis must be in 1..{dimension}, got {axis!r}")


def validate_simple(curve: PLClosedCurve) -> bool:
    """True iff the closed polygon has no self-intersection.

    Non-adjacent segments must be disjoint; adjacent ones may only share
    their common vertex (so no fold-backs along a line).
    """
    verts, _ = integer_coordinates(curve.vertices)
    n = len(verts)
    segs = [(verts[j], verts[(j + 1) % n]) for j in range(n)]
    for i in range(n):
        p, q = segs[i]
        u = sub(q, p)
        for j in range(i + 1, n):
            r, s = segs[j]
            if j == i + 1 or (i == 0 and j == n - 1):
                # shared vertex; only a collinear fold-back can add more contact
                w = sub(s, r)
                if parallel(u, w) and dot(u, w) < 0:
                    return False
                continue
            if segments_intersect(p, q, r, s):
                return False
    return True


def project(curve: PLClosedCurve, axis: int) -> list:
    """Images of the curve's segments after deleting coordinate ``axis`` (1-based).

    Segment order is preserved and segments parallel to the deleted axis come
    back as zero-length segments.
    """
    _check_axis(curve.dimension, axis)
    k = axis - 1
    out = []
    for p, q in curve.segments():
        out.append((p[:k] + p[k + 1:], q[:k] + q[k + 1:]))
    return out


# -- general position --------------------------------------------------------------

class DistinctCoordinate:
    """Genericity predicate: all vertices have pairwise distinct coordinate ``axis``."""

    def __init__(self, axis: int):
        self.axis = axis
        self.axes = (axis,)

    def __call__(self, curve: PLClosedCurve) -> bool:
        vals = [v[self.axis - 1] for v in curve.vertices]
        return len(set(vals)) == len(vals)

    def __repr__(self):
        return f"DistinctCoordinate({self.axis})"


@dataclass(frozen=True)
class GeneralPositionReport:
    curve: PLClosedCurve
    perturbation_applied: bool
    max_displacement: Fraction


def index_offsets(count: int) -> list:
    """Distinct deterministic weights in (0, 1), one per index."""
    return [Fraction(j + 1, count + 1) for j in range(count)]


def perturb_general_position(
    curve: PLClosedCurve,
    predicate: Callable[[PLClosedCurve], bool],
    budget,
    max_halvings: int = 64,
) -> GeneralPositionReport:
    """Nudge vertices so ``predicate`` holds while the curve stays simple.

    Vertex ``j`` moves along each perturbed axis by ``delta * w_j`` with the
    fixed weights of :func:`index_offsets`; ``delta`` starts at ``budget`` and
    is halved until both conditions hold. Only the axes named by
    ``predicate.axes`` move (all axes if the predicate does not say).
    """
    budget = parse_rational(budget)
    if predicate(curve):
        return GeneralPositionReport(curve, False, Fraction(0))
    if budget <= 0:
        raise PerturbationError("budget must be positive to perturb a non-generic curve",
                                constraint="budget")
    axes = getattr(predicate, "axes", tuple(range(1, curve.dimension + 1)))
    n, d = curve.n, curve.dimension
    weights = index_offsets(n * d)
    delta = budget
    blocked = "predicate"
    for _ in range(max_halvings):
        verts = []
        for j, v in enumerate(curve.vertices):
            v = list(v)
            for a in axes:
                v[a - 1] += delta * weights[j * d + a - 1]
            verts.append(tuple(v))
        try:
            cand = PLClosedCurve(d, tuple(verts))
        except CurveError:
            blocked = "distinct consecutive vertices"
            delta /= 2
            continue
        if not predicate(cand):
            blocked = "predicate"
        elif not validate_simple(cand):
            blocked = "simplicity"
        else:
            disp = max(delta * weights[j * d + a - 1] for j in range(n) for a in axes)
            return GeneralPositionReport(cand, True, disp)
        delta /= 2
    raise PerturbationError(f"no perturbation within budget {budget} satisfies "
                            f"{predicate!r}; blocked by {blocked}", constraint=blocked)
