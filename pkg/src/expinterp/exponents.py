"""Exponent sets: enumeration, limit directions, sparse extraction, canonical product.

An exponent set is described by finitely many explicit points plus parametric
generators (arithmetic or geometric progressions), and is enumerated by
increasing modulus with ties broken by angle.
"""

from __future__ import annotations

import cmath
import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    BoundedSetError,
    DomainError,
    ResourceLimitError,
    UnreachableDirectionError,
)
from .geometry import Direction, normalize_angle

__all__ = [
    "Generator",
    "ExponentSet",
    "SparseSequence",
    "limit_directions",
    "sparse_subsequence",
    "canonical_product",
    "condensation_index_estimate",
]

#: Enumeration stops when a point exceeds this modulus or this many points
#: were produced; going further raises :class:`ResourceLimitError`.
MODULUS_CAP = 1e12
COUNT_CAP = 1_000_000

#: Angle tolerance for deduplicating and matching limit directions.
DIRECTION_ATOL = 1e-9


@dataclass(frozen=True)
class Generator:
    """A parametric family of exponents.

    kind "arithmetic": scale * n with n over the positive integers or over
    all nonzero integers.  kind "geometric": scale * ratio**n, n >= 1.
    """

    kind: str
    scale: complex
    ratio: float = 2.0
    index_range: str = "positive"

    def __post_init__(self):
        object.__setattr__(self, "scale", complex(self.scale))
        if self.kind not in ("arithmetic", "geometric"):
            raise DomainError(f"unknown generator kind {self.kind!r}")
        if self.scale == 0:
            raise DomainError("generator scale must be nonzero")
        if self.index_range not in ("positive", "nonzero"):
            raise DomainError(f"unknown index range {self.index_range!r}")
        if self.kind == "geometric":
            if self.ratio <= 1:
                raise DomainError("geometric ratio must exceed 1")
            if self.index_range != "positive":
                raise DomainError("geometric generators are indexed over n >= 1")

    def directions(self) -> list[Direction]:
        """Closed-form limit directions contributed by this generator."""
        d = Direction.of(self.scale)
        if self.kind == "arithmetic" and self.index_range == "nonzero":
            return [d, Direction(d.angle + math.pi)]
        return [d]

    def points(self) -> Iterator[complex]:
        """Points in nondecreasing modulus; infinite."""
        if self.kind == "arithmetic":
            if self.index_range == "nonzero":
                pair = sorted((self.scale, -self.scale), key=_sort_key)
                for n in itertools.count(1):
                    yield pair[0] * n
                    yield pair[1] * n
            else:
                for n in itertools.count(1):
                    yield self.scale * n
        else:
            r = 1.0
            for _ in itertools.count(1):
                r *= self.ratio
                yield self.scale * r


def _sort_key(z: complex) -> tuple[float, float]:
    return (abs(z), normalize_angle(cmath.phase(z)))


@dataclass(frozen=True)
class ExponentSet:
    """Explicit points plus generators, enumerable by increasing modulus."""

    explicit: tuple[complex, ...] = ()
    generators: tuple[Generator, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "explicit", tuple(complex(z) for z in self.explicit))
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def is_bounded(self) -> bool:
        return not self.generators

    def iter_by_modulus(self) -> Iterator[complex]:
        """Deterministic enumeration by (modulus, angle), capped.

        Raises :class:`ResourceLimitError` once the modulus or count cap is
        crossed while the caller still consumes points.
        """
        streams: list[Iterable[complex]] = [sorted(self.explicit, key=_sort_key)]
        streams.extend(g.points() for g in self.generators)
        merged = heapq.merge(*streams, key=_sort_key)
        for i, z in enumerate(merged):
            if abs(z) > MODULUS_CAP or i >= COUNT_CAP:
                raise ResourceLimitError(
                    f"exponent enumeration exceeded cap (|z|={abs(z):.3g}, count={i})"
                )
            yield z

    def enumerate_prefix(self, count: int) -> list[complex]:
        return list(itertools.islice(self.iter_by_modulus(), count))


def limit_directions(lam: ExponentSet) -> list[Direction]:
    """P(Lambda): the set of limit directions at infinity, in closed form.

    Only generator-described sets are unbounded; an explicit-only set has no
    limit directions and raises :class:`BoundedSetError`.
    """
    if lam.is_bounded:
        raise BoundedSetError("bounded exponent set has no limit directions at infinity")
    dirs: list[Direction] = []
    for g in lam.generators:
        for d in g.directions():
            if not any(_angles_close(d.angle, e.angle) for e in dirs):
                dirs.append(d)
    return sorted(dirs, key=lambda d: d.angle)


def _angles_close(a: float, b: float, atol: float = DIRECTION_ATOL) -> bool:
    return abs(normalize_angle(a - b)) <= atol


@dataclass(frozen=True)
class SparseSequence:
    """An ordered sequence whose moduli at least double at every step."""

    points: tuple[complex, ...]

    def __post_init__(self):
        pts = tuple(complex(z) for z in self.points)
        object.__setattr__(self, "points", pts)
        for a, b in zip(pts, pts[1:]):
            if abs(b) < 2 * abs(a) * (1 - 1e-12):
                raise DomainError(
                    f"sparseness violated: |{b}| < 2|{a}|"
                )

    def __len__(self):
        return len(self.points)

    @classmethod
    def from_ratio(cls, base: complex, ratio: float, count: int) -> "SparseSequence":
        """Convenience constructor for {base * ratio**n, 1 <= n <= count}."""
        return cls(tuple(base * ratio**n for n in range(1, count + 1)))


def sparse_subsequence(
    lam: ExponentSet, targets: Sequence[Direction], count: int
) -> SparseSequence:
    """Greedy extraction of a sparse subsequence aimed at the target directions.

    The n-th selected point cycles through the targets and satisfies both
    | lambda/|lambda| - s | < 1/2**n and |lambda_{n+1}| > 2 |lambda_n|; the
    scan runs once over the modulus-ordered enumeration and accepts the first
    admissible point at each step.
    """
    if count < 1:
        raise DomainError("count must be at least 1")
    if not targets:
        raise DomainError("at least one target direction required")
    available = limit_directions(lam)
    for t in targets:
        if not any(_angles_close(t.angle, d.angle) for d in available):
            raise UnreachableDirectionError(
                f"direction {t} is not a limit direction of the set"
            )
    picked: list[complex] = []
    prev_mod = 0.0
    n = 1
    stream = lam.iter_by_modulus()
    try:
        for z in stream:
            if abs(z) <= 2 * prev_mod or z == 0:
                continue
            target = targets[(n - 1) % len(targets)]
            if abs(z / abs(z) - target.unit) < 0.5**n:
                picked.append(z)
                prev_mod = abs(z)
                n += 1
                if n > count:
                    break
    except ResourceLimitError as exc:
        raise ResourceLimitError(
            f"sparse extraction found only {len(picked)} of {count} points: {exc}"
        ) from exc
    if len(picked) < count:
        raise ResourceLimitError(
            f"enumeration ended after {len(picked)} of {count} points"
        )
    return SparseSequence(tuple(picked))


def canonical_product(seq: SparseSequence, z: complex, n_terms: int) -> tuple[complex, float]:
    """Partial canonical product prod_{n<=N} (1 - z/lambda_n) with a tail bound.

    The bound covers the factors of the remaining enumerated points:
    |value| * (exp(sum_{n>N} |z|/|lambda_n|) - 1).
    """
    if n_terms > len(seq.points):
        raise DomainError("n_terms exceeds the sequence length")
    z = complex(z)
    value = 1.0 + 0j
    for lam in seq.points[:n_terms]:
        value = value * (0.0 if z == lam else 1 - z / lam)
    tail_sum = sum(abs(z) / abs(lam) for lam in seq.points[n_terms:])
    tail = abs(value) * math.expm1(tail_sum)
    return value, tail


def _log_abs_derivative(points: Sequence[complex], n: int) -> float:
    """log |G_N'(lambda_n)| with G_N the N-term canonical product (1-based n)."""
    lam = points[n - 1]
    acc = -math.log(abs(lam))
    for m, other in enumerate(points, start=1):
        if m == n:
            continue
        acc += math.log(abs(1 - lam / other))
    return acc


def condensation_index_estimate(seq: SparseSequence, n_terms: int) -> float:
    """Finite surrogate of the condensation index of the canonical product.

    The index is a tail quantity (a limsup of (1/|lambda_n|) log 1/|G'(lambda_n)|,
    zero for sparse sequences); the surrogate reports the magnitude of that
    expression at the largest enumerated zero, which tracks the distance of
    the finite prefix from the limiting value and shrinks as n_terms grows.
    """
    if n_terms < 3:
        raise DomainError("need at least 3 points")
    if n_terms > len(seq.points):
        raise DomainError("n_terms exceeds the sequence length")
    pts = seq.points[:n_terms]
    lam = pts[-1]
    return abs(_log_abs_derivative(pts, n_terms)) / abs(lam)
