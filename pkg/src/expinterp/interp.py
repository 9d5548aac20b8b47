"""Finite-truncation interpolation: generalized Vandermonde solves and obstructions.

The square system for derivative interpolation by exponentials has entries
lambda^j e^{lambda mu}; raw entries overflow quickly, so every column is
scaled by exp(-max_k Re(lambda mu_k)) and the factorization runs either in
double precision or, when the scaled entries span too many orders of
magnitude, in adaptive-precision arithmetic (mpmath).  Status thresholds
scale with the working precision and reduce to 1e-12 / 1e12 at double.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from mpmath import mp
from scipy.linalg import lstsq, qr

from .errors import DomainError, PreconditionError
from .exponents import ExponentSet, limit_directions
from .geometry import ConvexCompact
from .growth import ExpSum, defeating_data, tail_norm

__all__ = [
    "InterpolationProblem",
    "InterpolationSystem",
    "SolveReport",
    "build_system",
    "solve",
    "solve_crude",
    "evaluate_solution",
    "verify_obstruction_pairing",
    "ObstructionReport",
    "demonstrate_growth_failure",
    "GrowthFailureReport",
]

#: Largest square system the solver accepts.
DIMENSION_CAP = 64

#: Decimal digits of scaled-entry spread beyond which the solve leaves doubles.
_DOUBLE_DIGITS = 12


@dataclass(frozen=True)
class InterpolationProblem:
    """Nodes with multiplicities, flattened data, and matching exponents.

    Data is node-major with derivative orders ascending; the system is square:
    sum of multiplicities equals the number of exponents.
    """

    nodes: tuple[tuple[complex, int], ...]
    data: tuple[complex, ...]
    exponents: tuple[complex, ...]

    def __post_init__(self):
        nodes = tuple((complex(p), int(m)) for p, m in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "data", tuple(complex(b) for b in self.data))
        object.__setattr__(self, "exponents", tuple(complex(l) for l in self.exponents))
        if any(m < 1 for _, m in nodes):
            raise DomainError("multiplicities must be positive")
        total = sum(m for _, m in nodes)
        if total != len(self.exponents) or total != len(self.data):
            raise DomainError(
                f"square system required: {total} conditions, "
                f"{len(self.exponents)} exponents, {len(self.data)} data values"
            )
        if total > DIMENSION_CAP:
            raise DomainError(f"system dimension {total} exceeds cap {DIMENSION_CAP}")
        pts = [p for p, _ in nodes]
        if len(set(pts)) != len(pts):
            raise DomainError("nodes must be pairwise distinct")
        if len(set(self.exponents)) != len(self.exponents):
            raise DomainError("exponents must be pairwise distinct")

    @property
    def rows(self) -> list[tuple[complex, int]]:
        """(node, derivative order) in row order."""
        return [(p, j) for p, m in self.nodes for j in range(m)]

    @property
    def simple(self) -> bool:
        return all(m == 1 for _, m in self.nodes)


@dataclass(frozen=True)
class InterpolationSystem:
    """Column-scaled system matrix with its per-column log scales."""

    rows: tuple[tuple[complex, int], ...]
    exponents: tuple[complex, ...]
    scaled: np.ndarray  # entries lambda^j exp(lambda mu - s_n)
    log_scales: np.ndarray  # s_n = max_k Re(lambda_n mu_k)

    def dense(self) -> np.ndarray:
        """Raw entries lambda^j e^{lambda mu}; may overflow to inf."""
        with np.errstate(over="ignore"):
            return self.scaled * np.exp(self.log_scales)[None, :]

    @property
    def spread_digits(self) -> float:
        """Decimal digits spanned by the scaled entries of the worst column."""
        spread = 0.0
        for lam, s in zip(self.exponents, self.log_scales):
            lo = min((lam * mu).real for mu, _ in self.rows)
            spread = max(spread, s - lo)
        return spread / math.log(10)


def build_system(p: InterpolationProblem) -> InterpolationSystem:
    """Square matrix of derivative conditions, node-major rows, scaled columns."""
    rows = p.rows
    lams = p.exponents
    scales = np.array([max((lam * mu).real for mu, _ in rows) for lam in lams])
    a = np.empty((len(rows), len(lams)), dtype=complex)
    for i, (mu, j) in enumerate(rows):
        for n, lam in enumerate(lams):
            a[i, n] = lam**j * cmath.exp(lam * mu - scales[n])
    return InterpolationSystem(tuple(rows), lams, a, scales)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a solve: coefficients, residual, conditioning, status."""

    status: str  # "solved" | "singular" | "ill_conditioned"
    residual_rel: float
    condition_estimate: float
    scaled_coefficients: tuple[complex, ...]
    log_scales: tuple[float, ...]
    deviations: tuple[float, ...] = ()
    working_dps: int = 16
    _mp_coefficients: tuple = field(default=(), repr=False, compare=False)

    @property
    def coefficients(self) -> tuple[complex, ...]:
        """True coefficients c_n = scaled_n * exp(-s_n); may underflow to 0."""
        out = []
        for c, s in zip(self.scaled_coefficients, self.log_scales):
            if c == 0:
                out.append(0j)
                continue
            log_mag = math.log(abs(c)) - s
            if log_mag < -700:
                out.append(0j)
            elif log_mag > 700:
                out.append(complex(math.inf, math.inf))
            else:
                out.append(c * math.exp(-s))
        return tuple(out)


def _required_dps(system: InterpolationSystem) -> int:
    d = system.spread_digits
    return int(25 + len(system.exponents) + 1.1 * d)


def _status(rank: int, dim: int, cond: float, residual: float, tol: float,
            cond_cap: float) -> str:
    if rank < dim:
        return "singular"
    if cond > cond_cap:
        return "ill_conditioned"
    if residual <= tol:
        return "solved"
    return "ill_conditioned"


def _solve_double(system: InterpolationSystem, b: np.ndarray, tol: float) -> SolveReport:
    a = system.scaled
    n = a.shape[1]
    q, r, perm = qr(a, pivoting=True)
    diag = np.abs(np.diag(r))
    rank_tol = 1e-12
    rank = n
    for k in range(n):
        if diag[k] <= rank_tol * diag[0]:
            rank = k
            break
    y = q.conj().T @ b
    c_piv = np.zeros(n, dtype=complex)
    if rank > 0:
        c_piv[:rank] = np.linalg.solve(r[:rank, :rank], y[:rank])
    c = np.zeros(n, dtype=complex)
    c[perm] = c_piv
    residual = float(np.linalg.norm(a @ c - b) / max(np.linalg.norm(b), 1.0))
    cond = float(diag[0] / diag[rank - 1]) if rank > 0 and diag[rank - 1] > 0 else math.inf
    status = _status(rank, n, cond, residual, tol, 1e12)
    return SolveReport(
        status=status,
        residual_rel=residual,
        condition_estimate=cond,
        scaled_coefficients=tuple(c),
        log_scales=tuple(system.log_scales),
        working_dps=16,
    )


def _mp_matrix(system: InterpolationSystem):
    """Scaled matrix rebuilt at the current mpmath precision."""
    rows, lams, scales = system.rows, system.exponents, system.log_scales
    cols = []
    for lam, s in zip(lams, scales):
        lam_mp = mp.mpc(lam)
        col = [
            lam_mp**j * mp.exp(lam_mp * mp.mpc(mu) - mp.mpf(s)) for mu, j in rows
        ]
        cols.append(col)
    return cols


def _solve_mp(system: InterpolationSystem, b: Sequence[complex], tol: float,
              dps: int) -> SolveReport:
    """Modified Gram-Schmidt QR with column pivoting in mpmath arithmetic."""
    n = len(system.exponents)
    with mp.workdps(dps):
        cols = _mp_matrix(system)
        orig = [list(col) for col in cols]
        bv = [mp.mpc(x) for x in b]
        perm = list(range(n))
        qcols = []
        rmat = [[mp.mpc(0)] * n for _ in range(n)]

        def cnorm(v):
            return mp.sqrt(mp.fsum(abs(x) ** 2 for x in v))

        for k in range(n):
            piv = max(range(k, n), key=lambda j: cnorm(cols[j]))
            cols[k], cols[piv] = cols[piv], cols[k]
            perm[k], perm[piv] = perm[piv], perm[k]
            for row in rmat:
                row[k], row[piv] = row[piv], row[k]
            nrm = cnorm(cols[k])
            rmat[k][k] = nrm
            if nrm == 0:
                qcols.append([mp.mpc(0)] * len(cols[k]))
                continue
            qk = [x / nrm for x in cols[k]]
            qcols.append(qk)
            for j in range(k + 1, n):
                rkj = mp.fsum(q.conjugate() * x for q, x in zip(qk, cols[j]))
                rmat[k][j] = rkj
                cols[j] = [x - rkj * q for x, q in zip(cols[j], qk)]

        diag = [abs(rmat[k][k]) for k in range(n)]
        rank_tol = mp.mpf(10) ** (-(dps - 12))
        rank = n
        for k in range(n):
            if diag[k] <= rank_tol * diag[0]:
                rank = k
                break
        y = [mp.fsum(q.conjugate() * x for q, x in zip(qcols[k], bv)) for k in range(n)]
        c_piv = [mp.mpc(0)] * n
        for k in range(rank - 1, -1, -1):
            acc = y[k] - mp.fsum(rmat[k][j] * c_piv[j] for j in range(k + 1, rank))
            c_piv[k] = acc / rmat[k][k]
        c = [mp.mpc(0)] * n
        for k, p in enumerate(perm):
            c[p] = c_piv[k]
        res_vec = [
            mp.fsum(orig[j][i] * c[j] for j in range(n)) - bv[i]
            for i in range(len(bv))
        ]
        bnorm = cnorm(bv)
        residual = float(cnorm(res_vec) / (bnorm if bnorm > 1 else mp.mpf(1)))
        cond = (
            float(diag[0] / diag[rank - 1])
            if rank > 0 and diag[rank - 1] > 0
            else math.inf
        )
        cond_cap = float(mp.mpf(10) ** (dps - 12))
        status = _status(rank, n, cond, residual, tol, cond_cap)
        c_float = tuple(complex(x) for x in c)
        c_frozen = tuple(mp.mpc(x) for x in c)
    return SolveReport(
        status=status,
        residual_rel=residual,
        condition_estimate=cond,
        scaled_coefficients=c_float,
        log_scales=tuple(system.log_scales),
        working_dps=dps,
        _mp_coefficients=c_frozen,
    )


def solve(p: InterpolationProblem, tol: float = 1e-9) -> SolveReport:
    """Solve the square interpolation system by pivoted orthogonal factorization."""
    system = build_system(p)
    b = np.array(p.data, dtype=complex)
    if system.spread_digits <= _DOUBLE_DIGITS:
        return _solve_double(system, b, tol)
    return _solve_mp(system, p.data, tol, _required_dps(system))


def solve_crude(
    p: InterpolationProblem, deltas: Sequence[float], tol: float = 1e-9
) -> SolveReport:
    """Least-squares solve accepted when every |u(mu_k) - b_k| <= delta_k.

    Only simple nodes are supported.  Acceptance carries a tol-sized slack so
    that delta_k = 0 degenerates to exact-interpolation acceptance.
    """
    if not p.simple:
        raise PreconditionError("crude approximation is defined for simple nodes only")
    ds = [float(d) for d in deltas]
    if len(ds) != len(p.nodes):
        raise DomainError("one delta per node required")
    if any(d < 0 for d in ds):
        raise DomainError("deltas must be nonnegative")
    system = build_system(p)
    b = np.array(p.data, dtype=complex)
    if system.spread_digits <= _DOUBLE_DIGITS:
        a = system.scaled
        c, *_ = lstsq(a, b, lapack_driver="gelsd")
        fit = a @ c
        base = _solve_double(system, b, tol)
        deviations = tuple(float(abs(f - bb)) for f, bb in zip(fit, b))
        report = SolveReport(
            status=base.status,
            residual_rel=float(np.linalg.norm(fit - b) / max(np.linalg.norm(b), 1.0)),
            condition_estimate=base.condition_estimate,
            scaled_coefficients=tuple(c),
            log_scales=tuple(system.log_scales),
            deviations=deviations,
            working_dps=16,
        )
    else:
        base = _solve_mp(system, p.data, tol, _required_dps(system))
        fit = _evaluate_rows(system, base)
        deviations = tuple(abs(f - bb) for f, bb in zip(fit, p.data))
        report = SolveReport(
            status=base.status,
            residual_rel=base.residual_rel,
            condition_estimate=base.condition_estimate,
            scaled_coefficients=base.scaled_coefficients,
            log_scales=base.log_scales,
            deviations=deviations,
            working_dps=base.working_dps,
            _mp_coefficients=base._mp_coefficients,
        )
    slack = tol * max(float(np.linalg.norm(b)), 1.0)
    accepted = all(dev <= d + slack for dev, d in zip(report.deviations, ds))
    if accepted:
        return SolveReport(
            status="solved",
            residual_rel=report.residual_rel,
            condition_estimate=report.condition_estimate,
            scaled_coefficients=report.scaled_coefficients,
            log_scales=report.log_scales,
            deviations=report.deviations,
            working_dps=report.working_dps,
            _mp_coefficients=report._mp_coefficients,
        )
    return report


def _evaluate_rows(system: InterpolationSystem, report: SolveReport) -> list[complex]:
    with mp.workdps(report.working_dps):
        cols = _mp_matrix(system)
        cs = report._mp_coefficients or [mp.mpc(c) for c in report.scaled_coefficients]
        return [
            complex(mp.fsum(cols[j][i] * cs[j] for j in range(len(cols))))
            for i in range(len(system.rows))
        ]


def evaluate_solution(
    p: InterpolationProblem, report: SolveReport, z: complex, order: int = 0
) -> complex:
    """u^{(order)}(z) from a solve report, in the report's working precision."""
    with mp.workdps(max(report.working_dps, 30)):
        cs = report._mp_coefficients or [mp.mpc(c) for c in report.scaled_coefficients]
        acc = mp.mpc(0)
        for c_hat, lam, s in zip(cs, p.exponents, report.log_scales):
            lam_mp = mp.mpc(lam)
            acc += c_hat * lam_mp**order * mp.exp(lam_mp * mp.mpc(z) - mp.mpf(s))
        return complex(acc)


# ---------------------------------------------------------------------------
# Obstruction demonstrations


@dataclass(frozen=True)
class ObstructionReport:
    """Pair-identity check u(mu_l) = u(mu_k) for the lattice exponent set."""

    exponents: tuple[complex, ...]
    trials: int
    max_difference: float
    column_mismatch: float  # worst relative mismatch of e^{lambda mu} columns


def obstruction_lattice(mu_l: complex, mu_k: complex, count: int) -> list[complex]:
    """Zero lattice {2 pi n e^{i(pi/2 - beta)} / |mu_k - mu_l|, 0 < |n| <= count}."""
    d = complex(mu_k) - complex(mu_l)
    if d == 0:
        raise DomainError("nodes must be distinct")
    beta = cmath.phase(d)
    base = 2 * math.pi / abs(d) * cmath.exp(1j * (math.pi / 2 - beta))
    out = []
    for n in range(1, count + 1):
        out.extend([base * n, -base * n])
    return out


def verify_obstruction_pairing(
    mu_l: complex, mu_k: complex, count: int, trials: int, seed: int = 0
) -> ObstructionReport:
    """Exercise the identity u(mu_l) = u(mu_k) shared by all sums over the lattice.

    Every exponential of the lattice takes equal values at the two nodes
    (e^{lambda (mu_k - mu_l)} = 1), so the identity holds for every
    coefficient choice; sampled vectors with sum |c_n| = 1 plus an entry-wise
    column comparison certify it numerically.
    """
    if count < 1:
        raise DomainError("count must be at least 1")
    lams = obstruction_lattice(mu_l, mu_k, count)
    mu_l, mu_k = complex(mu_l), complex(mu_k)
    worst_exponent = max(
        abs((lam * mu).real) for lam in lams for mu in (mu_l, mu_k)
    )
    dps = int(30 + worst_exponent / math.log(10))
    rng = np.random.default_rng(seed)
    with mp.workdps(dps):
        col_l = [mp.exp(mp.mpc(lam) * mp.mpc(mu_l)) for lam in lams]
        col_k = [mp.exp(mp.mpc(lam) * mp.mpc(mu_k)) for lam in lams]
        mismatch = max(
            float(abs(a - b) / abs(a)) for a, b in zip(col_l, col_k)
        )
        max_diff = 0.0
        for _ in range(trials):
            raw = rng.standard_normal(len(lams)) + 1j * rng.standard_normal(len(lams))
            c = raw / np.sum(np.abs(raw))
            ul = mp.fsum(mp.mpc(ci) * e for ci, e in zip(c, col_l))
            uk = mp.fsum(mp.mpc(ci) * e for ci, e in zip(c, col_k))
            max_diff = max(max_diff, float(abs(ul - uk)))
    return ObstructionReport(tuple(lams), trials, max_diff, mismatch)


@dataclass(frozen=True)
class GrowthFailureReport:
    """How far sampled unit-norm sums fall short of the defeating data."""

    nodes: tuple[float, ...]
    data: tuple[float, ...]
    per_node_max: tuple[float, ...]  # max over trials of |u(mu_k)| / b_k
    per_trial_max: tuple[float, ...]
    trials: int

    @property
    def overall_max(self) -> float:
        return max(self.per_trial_max, default=0.0)


def demonstrate_growth_failure(
    lam: ExponentSet,
    nodes: Sequence[float],
    eps: float,
    count: int,
    trials: int,
    seed: int = 0,
) -> GrowthFailureReport:
    """Show that bounded-norm sums cannot reach the defeating data b_k.

    Requires every limit direction of the exponent set to be orthogonal or
    worse to the positive real ray (the failing-criterion regime).  Sampled
    sums are normalized to tail norm 1 on the disc of radius eps.
    """
    dirs = limit_directions(lam)
    if any(math.cos(d.angle) > 1e-9 for d in dirs):
        raise DomainError(
            "exponent set has a limit direction with positive real part; "
            "growth failure needs the failing-criterion regime"
        )
    mus = [float(m) for m in nodes]
    prefix = lam.enumerate_prefix(count)
    b = defeating_data(prefix, mus, eps)
    disc = ConvexCompact.disc(eps)
    rng = np.random.default_rng(seed)
    per_node = [0.0] * len(mus)
    per_trial = []
    for _ in range(trials):
        raw = rng.standard_normal(count) + 1j * rng.standard_normal(count)
        u0 = ExpSum(tuple(zip(raw, prefix)))
        norm = tail_norm(u0, disc)
        u = ExpSum(tuple((c / norm, l) for c, l in u0.terms))
        ratios = [abs(u(mu)) / bk for mu, bk in zip(mus, b)]
        per_trial.append(max(ratios))
        per_node = [max(a, r) for a, r in zip(per_node, ratios)]
    return GrowthFailureReport(
        tuple(mus), tuple(b), tuple(per_node), tuple(per_trial), trials
    )
