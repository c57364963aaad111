"""Piecewise-linear maps of the circle R/Z and curves on the torus.

A circle map is stored by a lift ``F: R -> R`` with ``F(t + 1) = F(t) + w``;
the integer ``w`` is the topological degree. Angles never appear, so every
value is an exact rational.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .curve import parse_rational


def _floor(x) -> int:
    return math.floor(x)


def _ceil(x) -> int:
    return math.ceil(x)


@dataclass(frozen=True)
class PLCircleMap:
    """PL circle map given by lift values at ``breakpoints``.

    ``breakpoints`` is strictly increasing in [0, 1) and starts at 0. The lift is
    linear between consecutive breakpoints, and on the last piece it runs from
    ``lifted_values[-1]`` to ``lifted_values[0] + winding``.
    """

    breakpoints: tuple
    lifted_values: tuple
    winding: int

    def __post_init__(self):
        bps = tuple(parse_rational(b) for b in self.breakpoints)
        vals = tuple(parse_rational(v) for v in self.lifted_values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "lifted_values", vals)
        if not bps or bps[0] != 0:
            raise ValueError("breakpoints must start at 0")
        if len(bps) != len(vals):
            raise ValueError("one lifted value per breakpoint")
        if any(a >= b for a, b in zip(bps, bps[1:])) or bps[-1] >= 1:
            raise ValueError("breakpoints must increase strictly within [0, 1)")
        if int(self.winding) != self.winding:
            raise ValueError("winding must be an integer")
        object.__setattr__(self, "winding", int(self.winding))

    # -- constructors -----------------------------------------------------------------

    @classmethod
    def linear(cls, k: int, offset=0) -> "PLCircleMap":
        """The map with lift ``t -> k t + offset``."""
        return cls((Fraction(0),), (Fraction(offset),), k)

    @classmethod
    def identity(cls) -> "PLCircleMap":
        return cls.linear(1)

    @classmethod
    def constant(cls, c=0) -> "PLCircleMap":
        return cls.linear(0, c)

    @classmethod
    def from_lift(cls, lift, breakpoints: Sequence, winding: int) -> "PLCircleMap":
        """Sample a lift function at ``breakpoints`` (PL interpolation in between)."""
        bps = [Fraction(b) for b in breakpoints]
        return cls(tuple(bps), tuple(Fraction(lift(b)) for b in bps), winding)

    # -- evaluation --------------------------------------------------------------------

    def pieces(self) -> Iterator[tuple]:
        """Yield ``(t0, t1, v0, v1)`` for each linear piece of the lift on [0, 1]."""
        bps, vals = self.breakpoints, self.lifted_values
        m = len(bps)
        for j in range(m):
            if j + 1 < m:
                yield bps[j], bps[j + 1], vals[j], vals[j + 1]
            else:
                yield bps[j], Fraction(1), vals[j], vals[0] + self.winding

    def lift(self, t) -> Fraction:
        t = Fraction(t)
        n = _floor(t)
        f = t - n
        j = bisect.bisect_right(self.breakpoints, f) - 1
        bps, vals = self.breakpoints, self.lifted_values
        t0, v0 = bps[j], vals[j]
        if j + 1 < len(bps):
            t1, v1 = bps[j + 1], vals[j + 1]
        else:
            t1, v1 = Fraction(1), vals[0] + self.winding
        return v0 + (v1 - v0) * (f - t0) / (t1 - t0) + n * self.winding

    def __call__(self, t) -> Fraction:
        return self.lift(t) % 1

    def refine(self, extra: Sequence) -> "PLCircleMap":
        """Same map on a finer grid (``extra`` parameters are taken mod 1)."""
        grid = sorted(set(self.breakpoints) | {Fraction(t) % 1 for t in extra})
        return PLCircleMap(tuple(grid), tuple(self.lift(t) for t in grid), self.winding)

    def shifted(self, n: int) -> "PLCircleMap":
        """The same circle map with the lift moved by the integer ``n``."""
        return PLCircleMap(self.breakpoints, tuple(v + n for v in self.lifted_values), self.winding)


def degree(f: PLCircleMap) -> int:
    return f.winding


def signed_crossings(f: PLCircleMap, y) -> int:
    """Count passages of ``f`` through the value ``y`` (mod 1) with sign.

    For a regular value this equals the degree.
    """
    y = Fraction(y)
    total = 0
    for _, _, v0, v1 in f.pieces():
        if v1 > v0:
            # levels y + n in (v0, v1]
            total += _floor(v1 - y) - _floor(v0 - y)
        elif v1 < v0:
            total -= _floor(v0 - y) - _floor(v1 - y)
    return total


def compose(f: PLCircleMap, g: PLCircleMap) -> PLCircleMap:
    """``f o g`` on the grid of ``g`` refined where ``g`` crosses a breakpoint of ``f``."""
    grid = set(g.breakpoints)
    for s0, s1, g0, g1 in g.pieces():
        if g0 == g1:
            continue
        lo, hi = (g0, g1) if g0 < g1 else (g1, g0)
        for b in f.breakpoints:
            for n in range(_ceil(lo - b), _floor(hi - b) + 1):
                level = b + n
                if lo < level < hi:
                    u = s0 + (level - g0) / (g1 - g0) * (s1 - s0)
                    grid.add(u)
    grid = sorted(grid)
    values = tuple(f.lift(g.lift(u)) for u in grid)
    return PLCircleMap(tuple(grid), values, f.winding * g.winding)


def _integer_level_params(pieces) -> list:
    """Parameters in [0, 1) where a PL function (given by pieces) hits an integer.

    A piece along which the function is constantly an integer contributes its
    left endpoint.
    """
    found = set()
    for t0, t1, d0, d1 in pieces:
        if d0 == d1:
            if d0.denominator == 1:
                found.add(t0)
            continue
        lo, hi = (d0, d1) if d0 < d1 else (d1, d0)
        for n in range(_ceil(lo), _floor(hi) + 1):
            t = t0 + (n - d0) / (d1 - d0) * (t1 - t0)
            if t < t1:
                found.add(t)
    return sorted(found)


def fixed_points(f: PLCircleMap) -> list:
    """Parameters ``t`` in [0, 1) with ``f(t) = t``."""
    return _integer_level_params((t0, t1, v0 - t0, v1 - t1) for t0, t1, v0, v1 in f.pieces())


@dataclass(frozen=True)
class TorusCurve:
    """A curve ``S^1 -> S^1 x S^1``; both factors are stored on one shared grid."""

    first: PLCircleMap
    second: PLCircleMap

    def __post_init__(self):
        if self.first.breakpoints != self.second.breakpoints:
            a = self.first.refine(self.second.breakpoints)
            b = self.second.refine(self.first.breakpoints)
            object.__setattr__(self, "first", a)
            object.__setattr__(self, "second", b)

    @classmethod
    def from_lifts(cls, breakpoints, first_values, second_values, degrees) -> "TorusCurve":
        return cls(PLCircleMap(tuple(breakpoints), tuple(first_values), degrees[0]),
                   PLCircleMap(tuple(breakpoints), tuple(second_values), degrees[1]))

    @property
    def breakpoints(self) -> tuple:
        return self.first.breakpoints

    def __call__(self, t) -> tuple:
        return self.first(t), self.second(t)

    def swapped(self) -> "TorusCurve":
        return TorusCurve(self.second, self.first)

    def refine(self, extra) -> "TorusCurve":
        return TorusCurve(self.first.refine(extra), self.second.refine(extra))


def torus_degree(c: TorusCurve) -> tuple:
    return degree(c.first), degree(c.second)


def diagonal_intersections(c: TorusCurve) -> list:
    """Parameters where the curve meets the diagonal ``{(u, u)}``.

    Found exactly on each linear piece of the difference lift. Non-empty
    whenever the two factor degrees differ.
    """
    pieces = ((t0, t1, a0 - b0, a1 - b1)
              for (t0, t1, a0, a1), (_, _, b0, b1) in zip(c.first.pieces(), c.second.pieces()))
    return _integer_level_params(pieces)


def signed_diagonal_crossings(c: TorusCurve) -> int:
    """Signed number of passages of the difference lift through the integers."""
    diff = PLCircleMap(c.breakpoints,
                       tuple(a - b for a, b in zip(c.first.lifted_values, c.second.lifted_values)),
                       c.first.winding - c.second.winding)
    return signed_crossings(diff, 0)
