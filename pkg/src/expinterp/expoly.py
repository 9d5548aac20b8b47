"""Polynomials of exponentials and the extreme-term dominance estimates.

An element sum_k a_k(z) e^{mu_k z} with polynomial coefficients is dominated,
inside a narrow angle around a direction alpha, by the term whose exponent
maximizes Re(mu e^{i alpha}); quantifying that dominance yields a lower bound
on |p| and hence a zero-free angle outside a disc, which is what rules out
such a polynomial vanishing on a sparse sequence aimed at alpha.

Evaluations in the angle are carried out after scaling by e^{-mu_tau z} so
that large |z| stays representable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, PreconditionError, TiedExtremePointError
from .exponents import SparseSequence
from .geometry import Direction, normalize_angle

__all__ = [
    "ExpPolynomial",
    "DominantSplit",
    "LowerBoundCertificate",
    "ZeroFreeReport",
    "MembershipVerdict",
    "dominant_split",
    "lower_bound_in_angle",
    "zero_free_angle_check",
    "membership_contradiction",
]

DEGREE_CAP = 64

_TIE_RTOL = 1e-10


def _polyval(coeffs: Sequence[complex], z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class ExpPolynomial:
    """Terms (coeffs, mu): coefficient polynomials in ascending degree order."""

    terms: tuple[tuple[tuple[complex, ...], complex], ...]

    def __post_init__(self):
        cleaned = []
        mus = set()
        for coeffs, mu in self.terms:
            cs = tuple(complex(c) for c in coeffs)
            if len(cs) > DEGREE_CAP + 1:
                raise DomainError(f"coefficient degree exceeds cap {DEGREE_CAP}")
            mu = complex(mu)
            if mu in mus:
                raise DomainError("exponents must be pairwise distinct")
            mus.add(mu)
            if any(c != 0 for c in cs):
                cleaned.append((cs, mu))
        object.__setattr__(self, "terms", tuple(cleaned))

    @classmethod
    def from_exponents(cls, mus: Sequence[complex]) -> "ExpPolynomial":
        """sum e^{mu z} with unit constant coefficients."""
        return cls(tuple(((1 + 0j,), mu) for mu in mus))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def eval(self, z: complex) -> complex:
        z = complex(z)
        return sum(
            (_polyval(cs, z) * cmath.exp(mu * z) for cs, mu in self.terms), 0j
        )

    def eval_scaled(self, z: complex, shift: complex) -> complex:
        """p(z) e^{-shift z}; finite whenever Re((mu - shift) z) stays moderate."""
        z = complex(z)
        return sum(
            (_polyval(cs, z) * cmath.exp((mu - shift) * z) for cs, mu in self.terms), 0j
        )

    def __add__(self, other: "ExpPolynomial") -> "ExpPolynomial":
        acc: dict[complex, list[complex]] = {}
        for cs, mu in self.terms + other.terms:
            cur = acc.setdefault(mu, [])
            for i, c in enumerate(cs):
                if i < len(cur):
                    cur[i] += c
                else:
                    cur.append(c)
        return ExpPolynomial(tuple((tuple(cs), mu) for mu, cs in acc.items()))


@dataclass(frozen=True)
class DominantSplit:
    """Extreme term in a direction, the remainder, and the projection gap."""

    mu_tau: complex
    leading: tuple[tuple[complex, ...], complex]
    rest: ExpPolynomial
    gap: float


def dominant_split(p: ExpPolynomial, alpha: Direction | float) -> DominantSplit:
    """Split off the term maximizing Re(mu e^{i alpha}).

    A tie within tolerance is exactly a projection collision of the node set
    and is reported as :class:`TiedExtremePointError`.
    """
    if p.is_zero:
        raise DomainError("cannot split the zero polynomial")
    a = alpha.angle if isinstance(alpha, Direction) else float(alpha)
    u = cmath.exp(1j * a)
    projections = [((mu * u).real, cs, mu) for cs, mu in p.terms]
    projections.sort(key=lambda t: -t[0])
    best = projections[0][0]
    scale = max(1.0, max(abs(mu) for _, _, mu in projections))
    if len(projections) > 1 and best - projections[1][0] <= _TIE_RTOL * scale:
        raise TiedExtremePointError(
            f"extreme point tied in direction {a}: "
            f"{projections[0][2]} vs {projections[1][2]}"
        )
    _, cs, mu_tau = projections[0]
    rest = ExpPolynomial(tuple(t for t in p.terms if t[1] != mu_tau))
    gap = best - projections[1][0] if len(projections) > 1 else math.inf
    return DominantSplit(mu_tau, (cs, mu_tau), rest, gap)


def _rest_support(rest: ExpPolynomial, theta: float) -> float:
    u = cmath.exp(1j * theta)
    return max(((mu * u).real for _, mu in rest.terms), default=-math.inf)


@dataclass(frozen=True)
class LowerBoundCertificate:
    """Certified dominance: |p(z)| >= bound(z) in the angle beyond the radius."""

    alpha: float
    delta: float
    epsilon: float
    mu_tau: complex
    leading_coeffs: tuple[complex, ...]
    c_eps: float
    radius: float

    def bound_scaled(self, z: complex) -> float:
        """Lower bound for |p(z) e^{-mu_tau z}|."""
        return abs(_polyval(self.leading_coeffs, z)) - self.c_eps * math.exp(
            -self.epsilon * abs(z)
        )

    def bound(self, z: complex) -> float:
        """Lower bound for |p(z)|; may overflow to inf for large |z|."""
        scaled = self.bound_scaled(z)
        exponent = (self.mu_tau * z).real
        if exponent > 700:
            return math.inf if scaled > 0 else -math.inf
        return scaled * math.exp(exponent)


def lower_bound_in_angle(
    p: ExpPolynomial,
    alpha: Direction | float,
    delta: float,
    epsilon: float,
    theta_grid: int = 101,
) -> LowerBoundCertificate:
    """Certify |p(z)| >= |a_tau(z)| e^{Re(mu_tau e^{i theta})|z|} (1 - C e^{-eps|z|}).

    The remainder bound constant is a sampled over-bound times a 1.5 safety
    factor; the gap must persist (>= 2 eps) over the whole theta grid.
    """
    if delta <= 0 or epsilon <= 0:
        raise DomainError("delta and epsilon must be positive")
    a = alpha.angle if isinstance(alpha, Direction) else float(alpha)
    split = dominant_split(p, a)
    if split.gap < 2 * epsilon:
        raise PreconditionError(
            f"projection gap {split.gap:.3g} below 2*epsilon = {2 * epsilon:.3g}"
        )
    thetas = [a + delta * (2 * t / (theta_grid - 1) - 1) for t in range(theta_grid)]
    if not split.rest.is_zero:
        for th in thetas:
            u = cmath.exp(1j * th)
            if (split.mu_tau * u).real < _rest_support(split.rest, th) + 2 * epsilon:
                raise PreconditionError(
                    f"gap does not persist at theta={th:.4f}; shrink delta"
                )
        max_deg = max(len(cs) - 1 for cs, _ in split.rest.terms)
        rho_max = (max_deg + 1) / epsilon + 10.0
        c_eps = 0.0
        for th in thetas:
            h1 = _rest_support(split.rest, th)
            u = cmath.exp(1j * th)
            for i in range(1, 201):
                rho = rho_max * i / 200
                z = rho * u
                val = sum(
                    abs(_polyval(cs, z))
                    * math.exp(((mu * u).real - h1 - epsilon) * rho)
                    for cs, mu in split.rest.terms
                )
                c_eps = max(c_eps, val)
        c_eps *= 1.5
    else:
        c_eps = 0.0
    lead_floor = abs(split.leading[0][0]) if len(split.leading[0]) == 1 else 1.0
    if c_eps == 0.0:
        radius = 0.0
    elif lead_floor > 0:
        radius = max(0.0, math.log(2 * c_eps / lead_floor) / epsilon)
    else:
        radius = max(0.0, math.log(2 * c_eps) / epsilon)
    return LowerBoundCertificate(
        alpha=a,
        delta=delta,
        epsilon=epsilon,
        mu_tau=split.mu_tau,
        leading_coeffs=split.leading[0],
        c_eps=c_eps,
        radius=radius,
    )


@dataclass(frozen=True)
class ZeroFreeReport:
    """Grid verification that p stays above its bound in the truncated angle."""

    passed: bool
    samples: int
    min_log_abs: float
    min_location: complex
    failures: tuple[complex, ...]


def zero_free_angle_check(
    p: ExpPolynomial,
    alpha: Direction | float,
    delta: float,
    radius: float,
    grid: int = 64,
) -> ZeroFreeReport:
    """Sample |p| on a polar grid of the angle over radius < |z| <= 4 radius + 10.

    A sample passes when the analytic lower bound is positive there and |p|
    clears it; the caller vouches that the excluded disc contains the
    certificate radius.  Failures are reported, not raised.
    """
    a = alpha.angle if isinstance(alpha, Direction) else float(alpha)
    split = dominant_split(p, a)
    epsilon = min(split.gap / 4, 1.0) if math.isfinite(split.gap) else 1.0
    cert = lower_bound_in_angle(p, a, delta, epsilon)
    r_hi = 4 * radius + 10
    failures = []
    min_log = math.inf
    min_loc = 0j
    count = 0
    for ti in range(grid):
        th = a + delta * (2 * ti / (grid - 1) - 1) if grid > 1 else a
        u = cmath.exp(1j * th)
        for ri in range(1, grid + 1):
            rho = radius + (r_hi - radius) * ri / grid
            z = rho * u
            count += 1
            scaled = abs(p.eval_scaled(z, cert.mu_tau))
            bound = cert.bound_scaled(z)
            ok = bound > 0 and scaled > 0 and scaled >= bound * (1 - 1e-9)
            if not ok:
                failures.append(z)
            log_abs = (math.log(scaled) if scaled > 0 else -math.inf) + (
                cert.mu_tau * z
            ).real
            if log_abs < min_log:
                min_log, min_loc = log_abs, z
    return ZeroFreeReport(
        passed=not failures,
        samples=count,
        min_log_abs=min_log,
        min_location=min_loc,
        failures=tuple(failures),
    )


@dataclass(frozen=True)
class MembershipVerdict:
    """Whether p was certified nonvanishing on the sequence (hence not in the ideal)."""

    kind: str  # "nonzero_at" | "zero_element" | "no_candidates"
    witness: complex | None
    log_abs: float | None
    checked: int
    radius: float


def membership_contradiction(
    p: ExpPolynomial, seq: SparseSequence, alpha: Direction | float
) -> MembershipVerdict:
    """Certify that p cannot vanish on the whole sparse sequence.

    Sequence points of large modulus fall in the zero-free angle around
    alpha; the first one where the certified lower bound is met witnesses
    p(lambda_n) != 0.  The zero polynomial is the sole exception.
    """
    if p.is_zero:
        return MembershipVerdict("zero_element", None, None, 0, 0.0)
    a = alpha.angle if isinstance(alpha, Direction) else float(alpha)
    split = dominant_split(p, a)
    epsilon = min(split.gap / 4, 1.0) if math.isfinite(split.gap) else 1.0
    delta = 0.3
    cert = None
    while delta >= 1e-4:
        try:
            cert = lower_bound_in_angle(p, a, delta, epsilon)
            break
        except PreconditionError:
            delta /= 2
    if cert is None:
        raise PreconditionError("no admissible angle width around the direction")
    checked = 0
    for lam in seq.points:
        if abs(lam) <= cert.radius:
            continue
        if abs(normalize_angle(cmath.phase(lam) - a)) >= delta:
            continue
        checked += 1
        scaled = abs(p.eval_scaled(lam, cert.mu_tau))
        bound = cert.bound_scaled(lam)
        if bound > 0 and scaled >= bound * (1 - 1e-9):
            log_abs = math.log(scaled) + (cert.mu_tau * lam).real
            return MembershipVerdict("nonzero_at", lam, log_abs, checked, cert.radius)
    return MembershipVerdict("no_candidates", None, None, checked, cert.radius)
