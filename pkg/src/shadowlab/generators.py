"""Fixture curves: planar circles, a tree-shadow curve and random polygons."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .curve import PLClosedCurve, validate_simple

# Axis-parallel lattice cycle in {0,1,2}^3 found by exhaustive search over
# self-avoiding cycles whose three projections stay forests; the classifier
# certifies all three shadows as trees (each has a branch vertex).
TREE_SHADOW_VERTICES = (
    (0, 0, 0), (2, 0, 0), (2, 1, 0), (1, 1, 0), (1, 1, 1), (2, 1, 1),
    (2, 2, 1), (2, 2, 2), (2, 0, 2), (2, 0, 1), (1, 0, 1), (1, 0, 2),
    (0, 0, 2), (0, 2, 2), (1, 2, 2), (1, 2, 0), (0, 2, 0), (0, 2, 1),
    (0, 1, 1), (0, 1, 0),
)


class GeneratorKind(str, enum.Enum):
    PLANAR_CIRCLE = "planar-circle"
    TREE_SHADOW = "tree-shadow"
    RANDOM_KNOT = "random-knot"


@dataclass(frozen=True)
class GeneratorSpec:
    kind: GeneratorKind
    dimension: int = 3
    resolution: int = 12
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", GeneratorKind(self.kind))
        if self.resolution < 3:
            raise ValueError("resolution must be at least 3")
        if self.kind is GeneratorKind.TREE_SHADOW and self.dimension < 3:
            raise ValueError("the tree-shadow curve lives in dimension >= 3")


class GeneratorExhausted(RuntimeError):
    pass


def circle_point(t: Fraction) -> tuple:
    """Rational point of the unit circle from the tangent of the half angle."""
    t2 = t * t
    return ((1 - t2) / (1 + t2), 2 * t / (1 + t2))


def gen_planar_circle(d: int, n: int, max_denominator: int = 1000) -> PLClosedCurve:
    """Convex n-gon inscribed in the unit circle of the x1 x2 plane of R^d.

    Vertices are exact rational points of the circle at approximately equal
    angular spacing; only their cyclic order matters.
    """
    if d < 2 or n < 3:
        raise ValueError("need d >= 2 and n >= 3")
    verts = []
    for k in range(n):
        if 2 * k == n:
            xy = (Fraction(-1), Fraction(0))
        else:
            t = Fraction(math.tan(math.pi * k / n)).limit_denominator(max_denominator)
            xy = circle_point(t)
        verts.append(xy + (Fraction(0),) * (d - 2))
    return PLClosedCurve(d, tuple(verts))


def gen_tree_shadow_curve(d: int = 3) -> PLClosedCurve:
    """Closed curve in R^3 (padded with zeros for d > 3) whose three coordinate shadows are trees."""
    return PLClosedCurve(d, tuple(v + (0,) * (d - 3) for v in TREE_SHADOW_VERTICES))


def gen_random_knot(d: int, n: int, seed: int, denominator: int = 1024,
                    max_tries: int = 1000) -> PLClosedCurve:
    """Random simple closed polygon with vertices in [-1, 1]^d.

    Coordinates are multiples of ``1/denominator`` drawn from a generator seeded
    with ``seed``; draws are repeated until the polygon is simple.
    """
    if d < 3 or n < 4:
        raise ValueError("need d >= 3 and n >= 4")
    rng = random.Random(seed)
    for _ in range(max_tries):
        verts = tuple(tuple(Fraction(rng.randint(-denominator, denominator), denominator)
                            for _ in range(d)) for _ in range(n))
        if len(set(verts)) < n:
            continue
        curve = PLClosedCurve(d, verts)
        if validate_simple(curve):
            return curve
    raise GeneratorExhausted(f"no simple curve after {max_tries} draws (seed {seed})")


def generate(spec: GeneratorSpec) -> PLClosedCurve:
    if spec.kind is GeneratorKind.PLANAR_CIRCLE:
        return gen_planar_circle(spec.dimension, spec.resolution)
    if spec.kind is GeneratorKind.TREE_SHADOW:
        return gen_tree_shadow_curve(spec.dimension)
    return gen_random_knot(spec.dimension, spec.resolution, spec.seed)
