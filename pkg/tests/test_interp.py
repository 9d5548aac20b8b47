import cmath
import math

import numpy as np
import pytest

from expinterp.errors import DomainError, PreconditionError
from expinterp.exponents import ExponentSet, Generator
from expinterp.interp import (
    InterpolationProblem,
    build_system,
    demonstrate_growth_failure,
    evaluate_solution,
    obstruction_lattice,
    solve,
    solve_crude,
    verify_obstruction_pairing,
)


def test_problem_validation():
    with pytest.raises(DomainError):
        InterpolationProblem(((0j, 1),), (1.0,), (1 + 0j, 2 + 0j))  # not square
    with pytest.raises(DomainError):
        InterpolationProblem(((0j, 1), (0j, 1)), (1.0, 2.0), (1 + 0j, 2 + 0j))
    with pytest.raises(DomainError):
        InterpolationProblem(((0j, 1),), (1.0,), (0j,))  # repeated exponent set ok, zero fine
        InterpolationProblem(((0j, 1), (1 + 0j, 1)), (1.0, 2.0), (1 + 0j, 1 + 0j))


def test_solve_two_by_two_hand_check():
    # u(z) = c1 e^z + c2 e^{2z}, u(0) = 1, u(ln 2) = 0
    p = InterpolationProblem(
        ((0j, 1), (complex(math.log(2)), 1)), (1.0, 0.0), (1 + 0j, 2 + 0j)
    )
    rep = solve(p)
    assert rep.status == "solved"
    c1, c2 = rep.coefficients
    # hand solution: c1 + c2 = 1, 2 c1 + 4 c2 = 0 -> c1 = 2, c2 = -1
    assert c1 == pytest.approx(2.0, abs=1e-9)
    assert c2 == pytest.approx(-1.0, abs=1e-9)


def test_solve_reproduces_data():
    rng = np.random.default_rng(7)
    nodes = tuple((complex(k), 1) for k in (0.5, 1.0, 1.5))
    b = tuple(map(complex, rng.standard_normal(3)))
    p = InterpolationProblem(nodes, b, (1 + 0j, 1j, -0.5 + 0j))
    rep = solve(p)
    assert rep.status == "solved"
    for (mu, _), bk in zip(nodes, b):
        assert evaluate_solution(p, rep, mu) == pytest.approx(bk, abs=1e-8)


def test_solve_multiplicity_derivatives():
    # node 0 with order 3: prescribes u, u', u''
    p = InterpolationProblem(((0j, 3),), (1.0, 2.0, 0.5), (1 + 0j, 2 + 0j, 3 + 0j))
    rep = solve(p)
    assert rep.status == "solved"
    for j, target in enumerate((1.0, 2.0, 0.5)):
        assert evaluate_solution(p, rep, 0j, order=j) == pytest.approx(target, abs=1e-10)


def test_solve_singular_obstruction_system():
    lat = obstruction_lattice(0j, 1 + 0j, 1)
    p = InterpolationProblem(((0j, 1), (1 + 0j, 1)), (0.0, 1.0), tuple(lat))
    rep = solve(p)
    assert rep.status == "singular"


def test_obstruction_lattice_values():
    lat = obstruction_lattice(0j, 1 + 0j, 2)
    expected = [2j * math.pi, -2j * math.pi, 4j * math.pi, -4j * math.pi]
    assert sorted(lat, key=lambda z: (abs(z), z.imag)) == pytest.approx(
        sorted(expected, key=lambda z: (abs(z), z.imag))
    )
    # every lattice exponential takes equal values at the two nodes
    for lam in lat:
        assert cmath.exp(lam * 0) == pytest.approx(cmath.exp(lam * 1))


def test_verify_obstruction_pairing_tight():
    rep = verify_obstruction_pairing(0j, 1 + 0j, count=10, trials=20, seed=1)
    assert rep.max_difference <= 1e-12
    assert rep.column_mismatch <= 1e-12


def test_solve_crude_accepts_within_deltas():
    lat = obstruction_lattice(0j, 1 + 0j, 1)
    p = InterpolationProblem(((0j, 1), (1 + 0j, 1)), (0.0, 1.0), tuple(lat))
    tight = solve_crude(p, (0.4, 0.4))
    assert tight.status != "solved"
    loose = solve_crude(p, (0.6, 0.6))
    assert loose.status == "solved"
    assert loose.deviations == pytest.approx((0.5, 0.5))


def test_solve_crude_zero_delta_matches_exact():
    p = InterpolationProblem(
        ((0j, 1), (1 + 0j, 1)), (1.0, 2.0), (1 + 0j, 2 + 0j)
    )
    rep = solve_crude(p, (0.0, 0.0))
    assert rep.status == "solved"


def test_solve_crude_rejects_multiplicities():
    p = InterpolationProblem(((0j, 2),), (1.0, 0.0), (1 + 0j, 2 + 0j))
    with pytest.raises(PreconditionError):
        solve_crude(p, (0.1, 0.1))


def test_adaptive_precision_on_hard_system():
    exps = tuple(map(complex, (1, 3, 7, 15, 31, 63, 127, 255)))
    nodes = tuple((complex(k), 1) for k in range(1, 9))
    b = tuple(complex(v) for v in np.random.default_rng(0).standard_normal(8))
    p = InterpolationProblem(nodes, b, exps)
    system = build_system(p)
    assert system.spread_digits > 12  # forces the high-precision path
    rep = solve(p)
    assert rep.status == "solved"
    assert rep.working_dps > 16
    for (mu, _), bk in zip(nodes, b):
        err = abs(evaluate_solution(p, rep, mu) - bk)
        assert err <= 1e-6 * max(abs(bk), 1.0)


def test_demonstrate_growth_failure_regime_guard():
    lam = ExponentSet(generators=(Generator("arithmetic", 1.0),))
    with pytest.raises(DomainError):
        demonstrate_growth_failure(lam, [1.0, 2.0], 0.5, 5, 3)


def test_demonstrate_growth_failure_vertical_lattice():
    lam = ExponentSet(generators=(Generator("arithmetic", 1j, index_range="nonzero"),))
    rep = demonstrate_growth_failure(lam, [1.0, 2.0, 3.0], 0.5, 8, 5, seed=2)
    # normalized vertical-exponent sums stay bounded while b_k grows with k
    assert rep.overall_max < 1.0
