"""Growth machinery along a ray: the convex majorant, its conjugate, and norms.

Given a finite exponent prefix, h(x) = max_n (Re lambda_n * x - |lambda_n|)
bounds the growth of every normalized exponential sum along the positive ray.
The same function arises as the Young-Fenchel conjugate of the lower convex
envelope of the points (Re lambda, |lambda|); both routes are implemented so
one can cross-check the other.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, PreconditionError
from .geometry import ConvexCompact, support_at

__all__ = [
    "ExpSum",
    "GrowthMajorant",
    "h_direct",
    "phi",
    "phi_star",
    "tail_norm",
    "growth_bound_check",
    "GrowthBoundReport",
    "defeating_data",
]

#: Relative tolerance used to group exponents sharing a real part.
GROUP_RTOL = 1e-12


@dataclass(frozen=True)
class ExpSum:
    """A finite exponential sum: terms (c_n, lambda_n) with distinct exponents."""

    terms: tuple[tuple[complex, complex], ...]

    def __post_init__(self):
        terms = tuple((complex(c), complex(lam)) for c, lam in self.terms)
        object.__setattr__(self, "terms", terms)
        lams = [lam for _, lam in terms]
        if len(set(lams)) != len(lams):
            raise DomainError("exponents of an ExpSum must be pairwise distinct")

    def __call__(self, z: complex) -> complex:
        return sum((c * cmath.exp(lam * z) for c, lam in self.terms), 0j)

    @property
    def exponents(self) -> list[complex]:
        return [lam for _, lam in self.terms]


def h_direct(prefix: Sequence[complex], x: float) -> float:
    """max over the prefix of Re(lambda) * x - |lambda|, for x > 0."""
    if x <= 0:
        raise DomainError("h is defined for x > 0 only")
    if not prefix:
        raise DomainError("empty exponent prefix")
    return max(lam.real * x - abs(lam) for lam in map(complex, prefix))


def _group_by_real_part(prefix: Sequence[complex]) -> list[tuple[float, float]]:
    """Support points (l, |l + i min|Im||), grouping equal real parts."""
    pts = sorted(map(complex, prefix), key=lambda z: (z.real, abs(z.imag)))
    groups: list[tuple[float, float]] = []
    for z in pts:
        if groups and abs(z.real - groups[-1][0]) <= GROUP_RTOL * max(abs(z.real), 1.0):
            continue  # same real part; the minimal |Im| came first
        groups.append((z.real, math.hypot(z.real, z.imag)))
    return groups


@dataclass(frozen=True)
class GrowthMajorant:
    """Support points (l_k, v_k), l_k increasing, with their lower convex envelope."""

    support_points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(l), float(v)) for l, v in self.support_points)
        object.__setattr__(self, "support_points", pts)
        if not pts:
            raise DomainError("a growth majorant needs at least one support point")
        for (l0, _), (l1, _) in zip(pts, pts[1:]):
            if not l1 > l0:
                raise DomainError("abscissas must be strictly increasing")
        for l, v in pts:
            if l <= 0:
                raise DomainError("abscissas must be positive")
            if v < l - 1e-12 * max(abs(l), 1.0):
                raise DomainError("|lambda| cannot be below its real part")

    @classmethod
    def from_exponents(cls, prefix: Sequence[complex]) -> "GrowthMajorant":
        pts = [complex(z) for z in prefix]
        if not pts:
            raise DomainError("empty exponent prefix")
        if any(z.real <= 0 for z in pts):
            raise DomainError("majorant construction expects Re lambda > 0")
        return cls(tuple(_group_by_real_part(pts)))

    @property
    def hull(self) -> tuple[tuple[float, float], ...]:
        """Breakpoints of the lower convex envelope (Andrew chain, lower side)."""
        out: list[tuple[float, float]] = []
        for p in self.support_points:
            while len(out) >= 2:
                (x0, y0), (x1, y1) = out[-2], out[-1]
                if (x1 - x0) * (p[1] - y0) - (p[0] - x0) * (y1 - y0) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return tuple(out)


def phi(gm: GrowthMajorant, t: float) -> float:
    """Lower convex envelope of the support points at t; +inf outside its domain."""
    hull = gm.hull
    lo, hi = hull[0][0], hull[-1][0]
    if t < lo or t > hi:
        return math.inf
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        if t <= x1:
            w = (t - x0) / (x1 - x0)
            return y0 + w * (y1 - y0)
    return hull[-1][1]


def phi_star(gm: GrowthMajorant, x: float) -> float:
    """Young-Fenchel conjugate sup_t (x t - phi(t)), attained at a hull breakpoint."""
    if x <= 0:
        raise DomainError("the conjugate is evaluated for x > 0 only")
    return max(x * l - v for l, v in gm.hull)


def tail_norm(u: ExpSum, k: ConvexCompact) -> float:
    """Series of norms: sum |c_n| exp(H_K(lambda_n)) over the terms of u."""
    return sum(abs(c) * math.exp(support_at(k, lam)) for c, lam in u.terms)


@dataclass(frozen=True)
class GrowthBoundReport:
    """Per-sample comparison of |u(x)| against C e^{h(eps x)}."""

    constant: float
    rows: tuple[tuple[float, float, float, bool], ...]  # (x, |u(x)|, bound, ok)

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.rows)

    @property
    def failures(self) -> list[tuple[float, float, float, bool]]:
        return [r for r in self.rows if not r[3]]


def growth_bound_check(u: ExpSum, eps: float, xs: Sequence[float]) -> GrowthBoundReport:
    """Check |u(x)| <= C e^{eps h(x/eps)} with C = sum |c_n| e^{eps |lambda_n|}.

    The rescaled majorant makes the bound exact term by term:
    Re(lambda) x - eps |lambda| = eps (Re(lambda) x/eps - |lambda|) <= eps h(x/eps).
    Requires every exponent in the closed right half-plane; rotate the
    problem first otherwise (see the node-set normalization).
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    if any(x <= 0 for x in xs):
        raise DomainError("sample points must be positive")
    if any(lam.real < 0 for lam in u.exponents):
        raise PreconditionError(
            "exponent with negative real part; rotate exponents and nodes first"
        )
    if not u.terms:
        return GrowthBoundReport(0.0, tuple((float(x), 0.0, 0.0, True) for x in xs))
    c_const = sum(abs(c) * math.exp(eps * abs(lam)) for c, lam in u.terms)
    lams = u.exponents
    rows = []
    for x in xs:
        # Both sides can overflow a double for moderate x; compare logs after
        # factoring out the largest exponential.
        m = max(lam.real * x for lam in lams)
        scaled = abs(sum((c * cmath.exp(lam * x - m) for c, lam in u.terms), 0j))
        log_lhs = (math.log(scaled) + m) if scaled > 0 else -math.inf
        log_bound = math.log(c_const) + eps * h_direct(lams, x / eps)
        ok = log_lhs <= log_bound + math.log1p(1e-9)
        lhs = math.exp(log_lhs) if log_lhs < 700 else math.inf
        bound = math.exp(log_bound) if log_bound < 700 else math.inf
        rows.append((float(x), lhs, bound, ok))
    return GrowthBoundReport(c_const, tuple(rows))


def defeating_data(prefix: Sequence[complex], nodes: Sequence[float], eps: float) -> list[float]:
    """Data b_k = k exp(h(eps mu_k)) that outruns every sum with this majorant."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    mus = [float(m) for m in nodes]
    if any(m <= 0 for m in mus) or any(b <= a for a, b in zip(mus, mus[1:])):
        raise DomainError("nodes must be positive and increasing")
    return [k * math.exp(h_direct(prefix, eps * mu)) for k, mu in enumerate(mus, start=1)]
