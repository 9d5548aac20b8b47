"""Planar convex geometry: directions, rays, convex compacta and support functions.

All sets live in the complex plane.  A convex compact set is represented by its
counterclockwise vertex polygon; discs are polygonized with a configurable
vertex count.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError

__all__ = [
    "Direction",
    "Ray",
    "ConvexCompact",
    "normalize_angle",
    "convex_hull",
    "support_function",
    "extreme_point_in_direction",
]

_TWO_PI = 2.0 * math.pi

#: Relative tolerance for collinearity and tie detection, scaled by the
#: hull diameter where a length scale is available.
COLLINEAR_RTOL = 1e-10


def normalize_angle(angle: float) -> float:
    """Reduce an angle to the branch (-pi, pi]."""
    a = math.fmod(angle, _TWO_PI)
    if a > math.pi:
        a -= _TWO_PI
    elif a <= -math.pi:
        a += _TWO_PI
    return a


@dataclass(frozen=True)
class Direction:
    """A unit direction e^{i angle} with the angle normalized to (-pi, pi]."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", normalize_angle(float(self.angle)))

    @property
    def unit(self) -> complex:
        return cmath.exp(1j * self.angle)

    @classmethod
    def of(cls, z: complex) -> "Direction":
        """Direction of a nonzero complex number."""
        if z == 0:
            raise DomainError("zero has no direction")
        return cls(cmath.phase(z))

    def __repr__(self):
        return f"Direction({self.angle!r})"


@dataclass(frozen=True)
class Ray:
    """The open ray origin + t e^{i angle}, t > 0."""

    origin: complex
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "origin", complex(self.origin))
        object.__setattr__(self, "angle", normalize_angle(float(self.angle)))

    def point(self, t: float) -> complex:
        if t <= 0:
            raise DomainError("ray parameter must be positive")
        return self.origin + t * cmath.exp(1j * self.angle)


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def _hull_vertices(points: Sequence[complex]) -> tuple[complex, ...]:
    """Monotone-chain hull; collinear points are dropped.

    Degenerate inputs collapse to one vertex (all coincident) or two
    (all collinear).
    """
    pts = sorted(set((p.real, p.imag) for p in points))
    if not pts:
        raise DomainError("empty point set has no hull")
    span = math.hypot(pts[-1][0] - pts[0][0], max(y for _, y in pts) - min(y for _, y in pts))
    if len(pts) == 1 or span <= COLLINEAR_RTOL:
        return (complex(*pts[0]),)

    def chain(seq):
        # pop on exact non-positive cross only: a tolerance here can discard a
        # genuinely extreme vertex of a near-degenerate sliver
        out = []
        for x, y in seq:
            p = complex(x, y)
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0.0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    verts = lower[:-1] + upper[:-1]
    if len(verts) < 2:
        # all collinear: keep the two extreme endpoints
        verts = [complex(*pts[0]), complex(*pts[-1])]
    return tuple(verts)


@dataclass(frozen=True)
class ConvexCompact:
    """Convex polygon with counterclockwise vertices in strictly convex position.

    Degenerate sets are allowed: a single point has one vertex, a segment two.
    """

    vertices: tuple[complex, ...]

    def __post_init__(self):
        if not self.vertices:
            raise DomainError("a convex compact set needs at least one vertex")
        object.__setattr__(self, "vertices", tuple(complex(v) for v in self.vertices))

    @classmethod
    def from_points(cls, points: Sequence[complex]) -> "ConvexCompact":
        return cls(_hull_vertices(points))

    @classmethod
    def disc(cls, radius: float, center: complex = 0j, n: int = 256) -> "ConvexCompact":
        """Regular n-gon inscribed in the disc of the given radius.

        The polygon support function underestimates the disc radius by at
        most a factor cos(pi/n).
        """
        if radius <= 0:
            raise DomainError("disc radius must be positive")
        if n < 3:
            raise DomainError("polygonization needs at least 3 vertices")
        return cls(tuple(center + radius * cmath.exp(2j * math.pi * k / n) for k in range(n)))

    @property
    def diameter(self) -> float:
        vs = self.vertices
        return max((abs(a - b) for a in vs for b in vs), default=0.0)

    def translate(self, c: complex) -> "ConvexCompact":
        return ConvexCompact(tuple(v + c for v in self.vertices))


def convex_hull(points: Sequence[complex]) -> ConvexCompact:
    """Minimal convex polygon containing all input points."""
    return ConvexCompact.from_points(points)


def support_function(k: ConvexCompact, theta: float) -> float:
    """h_K(theta) = max over vertices of Re(v e^{i theta})."""
    u = cmath.exp(1j * theta)
    return max((v * u).real for v in k.vertices)


def support_at(k: ConvexCompact, z: complex) -> float:
    """H_K(z) = h_K(arg z) * |z|; zero at z = 0."""
    if z == 0:
        return 0.0
    return support_function(k, cmath.phase(z)) * abs(z)


def extreme_point_in_direction(k: ConvexCompact, alpha: Direction | float) -> tuple[complex, bool]:
    """Vertex maximizing Re(v e^{i alpha}) and whether the maximizer is unique.

    The returned vertex satisfies Re(v e^{i alpha}) == h_K(alpha) by the same
    arithmetic path as :func:`support_function`.
    """
    a = alpha.angle if isinstance(alpha, Direction) else float(alpha)
    u = cmath.exp(1j * a)
    values = [(v * u).real for v in k.vertices]
    best = max(values)
    tol = COLLINEAR_RTOL * max(k.diameter, 1.0)
    winners = [v for v, val in zip(k.vertices, values) if best - val <= tol]
    idx = values.index(best)
    return k.vertices[idx], len(winners) == 1
