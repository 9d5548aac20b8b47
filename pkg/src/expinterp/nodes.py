"""Node sets on finite systems of rays and the solvability criterion checker.

The decision procedure: interpolation by exponential sums with exponents from
an unbounded set is solvable for nodes on rays iff (i) every ray direction
beta has a limit direction alpha of the exponent set with |beta + alpha| < pi/2,
and (ii) under the chosen alpha no two nodes project onto the same value.
Condition (ii) is verified on a finite node prefix, which the verdict records.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .exponents import ExponentSet, limit_directions
from .geometry import Direction, Ray, normalize_angle

__all__ = [
    "RayNodes",
    "NodeSet",
    "RayWitness",
    "Violation",
    "CriterionVerdict",
    "check_condition_i",
    "check_condition_ii",
    "check_criterion",
]

#: Strictness margin for condition (i): cos(beta + alpha) must exceed this.
ANGLE_MARGIN = 1e-9

#: Relative tolerance for projection collisions in condition (ii).
PROJECTION_RTOL = 1e-10

DEFAULT_PREFIX = 200


@dataclass(frozen=True)
class RayNodes:
    """Nodes on one ray: parameters t_k (strictly increasing) with multiplicities."""

    ray: Ray
    params: tuple[float, ...]
    multiplicities: tuple[int, ...] = ()

    def __post_init__(self):
        params = tuple(float(t) for t in self.params)
        mults = tuple(int(m) for m in self.multiplicities) or tuple(1 for _ in params)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "multiplicities", mults)
        if len(mults) != len(params):
            raise DomainError("one multiplicity per ray parameter required")
        if any(t <= 0 for t in params):
            raise DomainError("ray parameters must be positive")
        if any(b <= a for a, b in zip(params, params[1:])):
            raise DomainError("ray parameters must be strictly increasing")
        if any(m < 1 for m in mults):
            raise DomainError("multiplicities must be positive integers")

    def points(self, prefix: int | None = None) -> list[complex]:
        ts = self.params if prefix is None else self.params[:prefix]
        return [self.ray.point(t) for t in ts]


@dataclass(frozen=True)
class NodeSet:
    """A finite description of interpolation nodes: rays plus off-ray points."""

    rays: tuple[RayNodes, ...]
    off_ray: tuple[tuple[complex, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(self.rays))
        off = tuple((complex(p), int(m)) for p, m in self.off_ray)
        object.__setattr__(self, "off_ray", off)
        if any(m < 1 for _, m in off):
            raise DomainError("multiplicities must be positive integers")
        pts = self.all_points()
        scale = max((abs(p) for p, _ in pts), default=1.0)
        tol = PROJECTION_RTOL * max(scale, 1.0)
        seen: list[complex] = []
        for p, _ in pts:
            for q in seen:
                if abs(p - q) <= tol:
                    raise DomainError(f"duplicate node {p}")
            seen.append(p)

    def all_points(self, prefix: int | None = None) -> list[tuple[complex, int]]:
        """(point, multiplicity) across all rays (up to prefix per ray) and off-ray."""
        out: list[tuple[complex, int]] = []
        for rn in self.rays:
            ts = rn.params if prefix is None else rn.params[:prefix]
            ms = rn.multiplicities if prefix is None else rn.multiplicities[:prefix]
            out.extend((rn.ray.point(t), m) for t, m in zip(ts, ms))
        out.extend(self.off_ray)
        return out


@dataclass(frozen=True)
class RayWitness:
    """Chosen limit direction for one ray, with its margin cos(beta + alpha)."""

    ray_index: int
    direction: Direction
    margin: float


@dataclass(frozen=True)
class Violation:
    kind: str  # "no_direction" or "projection_collision"
    ray_index: int
    mu_l: complex | None = None
    mu_k: complex | None = None
    projection: float | None = None


@dataclass(frozen=True)
class CriterionVerdict:
    holds: bool
    witnesses: tuple[RayWitness, ...]
    violations: tuple[Violation, ...]
    prefix: int = DEFAULT_PREFIX


def check_condition_i(
    m: NodeSet, directions: Sequence[Direction]
) -> tuple[list[RayWitness], list[Violation]]:
    """Per-ray search for a limit direction with cos(beta + alpha) > 0.

    The winning direction maximizes the margin; ties go to the smallest |alpha|.
    Rays without an admissible direction become "no_direction" violations.
    """
    if not directions:
        raise DomainError("empty direction set")
    witnesses, violations = [], []
    for j, rn in enumerate(m.rays):
        beta = rn.ray.angle
        best = max(
            directions,
            key=lambda d: (math.cos(normalize_angle(beta + d.angle)), -abs(d.angle)),
        )
        margin = math.cos(normalize_angle(beta + best.angle))
        if margin > ANGLE_MARGIN:
            witnesses.append(RayWitness(j, best, margin))
        else:
            violations.append(Violation("no_direction", j))
    return witnesses, violations


def check_condition_ii(
    m: NodeSet, witnesses: Sequence[RayWitness], prefix: int = DEFAULT_PREFIX
) -> list[Violation]:
    """Detect equal projections Re(mu e^{i alpha}) among the examined nodes.

    For each ray with a witness alpha, every node of that ray is compared
    against all other nodes (all rays plus off-ray points) on the prefix.
    """
    all_pts = [p for p, _ in m.all_points(prefix)]
    seen_pairs: list[tuple[int, complex, complex]] = []
    violations: list[Violation] = []
    for w in witnesses:
        u = cmath.exp(1j * w.direction.angle)
        ray_pts = m.rays[w.ray_index].points(prefix)
        proj_all = [(p, (p * u).real) for p in all_pts]
        for mu_l in ray_pts:
            pl = (mu_l * u).real
            for mu_k, pk in proj_all:
                if mu_k == mu_l:
                    continue
                if abs(pl - pk) <= PROJECTION_RTOL * (1 + abs(mu_l) + abs(mu_k)):
                    pair = (w.ray_index, mu_l, mu_k)
                    if (w.ray_index, mu_k, mu_l) not in seen_pairs:
                        seen_pairs.append(pair)
                        violations.append(
                            Violation("projection_collision", w.ray_index, mu_l, mu_k, pl)
                        )
    return violations


def check_criterion(
    m: NodeSet, lam: ExponentSet, prefix: int = DEFAULT_PREFIX
) -> CriterionVerdict:
    """Compose limit directions with conditions (i) and (ii) into a verdict."""
    if not m.rays:
        raise DomainError("criterion requires at least one ray of nodes")
    if prefix < 1:
        raise DomainError("prefix must be positive")
    directions = limit_directions(lam)
    witnesses, violations = check_condition_i(m, directions)
    if not violations:
        violations = check_condition_ii(m, witnesses, prefix)
    return CriterionVerdict(
        holds=not violations,
        witnesses=tuple(witnesses),
        violations=tuple(violations),
        prefix=prefix,
    )
