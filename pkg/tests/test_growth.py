import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from expinterp.errors import DomainError, PreconditionError
from expinterp.geometry import ConvexCompact
from expinterp.growth import (
    ExpSum,
    GrowthMajorant,
    defeating_data,
    growth_bound_check,
    h_direct,
    phi,
    phi_star,
    tail_norm,
)


def test_h_direct_hand_examples():
    assert h_direct([1 + 0j], 2.0) == pytest.approx(1.0)
    assert h_direct([1j], 5.0) == pytest.approx(-1.0)
    assert h_direct([1 + 0j, 2 + 2j, 5 + 0j], 3.0) == pytest.approx(10.0)


def test_h_direct_domain():
    with pytest.raises(DomainError):
        h_direct([1 + 0j], 0.0)
    with pytest.raises(DomainError):
        h_direct([], 1.0)


@given(
    st.lists(
        st.builds(complex, st.floats(0.1, 20), st.floats(-20, 20)),
        min_size=1,
        max_size=20,
    ),
    st.floats(0.1, 10),
    st.floats(0.1, 10),
)
def test_h_direct_is_convex(prefix, x0, x1):
    mid = (x0 + x1) / 2
    lhs = h_direct(prefix, mid)
    rhs = (h_direct(prefix, x0) + h_direct(prefix, x1)) / 2
    assert lhs <= rhs + 1e-9 * (1 + abs(rhs))


def test_phi_single_point():
    gm = GrowthMajorant(((2.0, 3.0),))
    assert phi(gm, 2.0) == pytest.approx(3.0)
    assert phi(gm, 1.0) == math.inf


def test_phi_chord_and_lower_hull():
    gm = GrowthMajorant(((1.0, 1.0), (3.0, 5.0)))
    assert phi(gm, 2.0) == pytest.approx(3.0)
    gm2 = GrowthMajorant(((1.0, 2.0), (2.0, 2.0), (3.0, 5.0)))
    assert phi(gm2, 2.0) == pytest.approx(2.0)


def test_phi_star_examples():
    gm = GrowthMajorant(((2.0, 3.0),))
    assert phi_star(gm, 1.5) == pytest.approx(0.0)
    gm2 = GrowthMajorant(((1.0, 1.0), (3.0, 5.0)))
    assert phi_star(gm2, 1.0) == pytest.approx(0.0)


def test_phi_hull_slopes_nondecreasing():
    gm = GrowthMajorant(((1.0, 1.5), (2.0, 2.2), (3.0, 3.1), (4.0, 5.9)))
    hull = gm.hull
    slopes = [
        (v1 - v0) / (l1 - l0) for (l0, v0), (l1, v1) in zip(hull, hull[1:])
    ]
    assert all(b >= a - 1e-12 for a, b in zip(slopes, slopes[1:]))


@given(
    st.lists(
        st.builds(complex, st.floats(1e-3, 20), st.floats(-20, 20)),
        min_size=1,
        max_size=50,
    )
)
def test_conjugacy_identity(prefix):
    gm = GrowthMajorant.from_exponents(prefix)
    reduced = [
        complex(l, math.sqrt(max(v * v - l * l, 0.0))) for l, v in gm.support_points
    ]
    for x in np.linspace(0.05, 10, 25):
        assert phi_star(gm, float(x)) == pytest.approx(
            h_direct(reduced, float(x)), abs=1e-9
        )


def test_tail_norm_examples():
    u = ExpSum(((2 + 0j, 1 + 0j),))
    disc = ConvexCompact.disc(1.0)
    assert tail_norm(u, disc) == pytest.approx(2 * math.e, rel=1e-3)
    assert tail_norm(ExpSum(()), disc) == 0.0
    square = ConvexCompact.from_points([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j])
    u2 = ExpSum(((1 + 0j, 1 + 0j), (1 + 0j, 1j)))
    assert tail_norm(u2, square) == pytest.approx(2 * math.e)


def test_tail_norm_dominates_sup():
    rng = np.random.default_rng(3)
    u = ExpSum(
        tuple(
            (complex(c), complex(lam))
            for c, lam in zip(rng.standard_normal(5), [1, 1j, -2, 2j, 0.5 + 0.5j])
        )
    )
    k = ConvexCompact.disc(1.5)
    bound = tail_norm(u, k)
    for _ in range(100):
        z = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
        z *= 1.5 / math.sqrt(2)  # inside the disc
        assert abs(u(z)) <= bound * (1 + 1e-6)


def test_growth_bound_single_term_exact():
    u = ExpSum(((1 + 0j, 1 + 0j),))
    rep = growth_bound_check(u, 1.0, [1.0])
    x, lhs, bound, ok = rep.rows[0]
    assert ok
    assert lhs == pytest.approx(math.e, abs=1e-12)
    assert bound == pytest.approx(math.e, abs=1e-12)


def test_growth_bound_rejects_left_half_plane():
    u = ExpSum(((1 + 0j, -1 + 0j),))
    with pytest.raises(PreconditionError):
        growth_bound_check(u, 1.0, [1.0])


def test_growth_bound_empty_sum():
    rep = growth_bound_check(ExpSum(()), 1.0, [1.0, 2.0])
    assert rep.passed


def test_defeating_data_examples():
    b = defeating_data([1j], [1.0, 2.0, 3.0], 1.0)
    assert b == pytest.approx([math.exp(-1), 2 * math.exp(-1), 3 * math.exp(-1)])
    prefix = [complex(n) for n in range(1, 11)]
    b2 = defeating_data(prefix, [1.0, 2.0], 0.1)
    expect = [
        k * math.exp(max(0.1 * mu * n - n for n in range(1, 11)))
        for k, mu in ((1, 1.0), (2, 2.0))
    ]
    assert b2 == pytest.approx(expect)


def test_defeating_data_validation():
    with pytest.raises(DomainError):
        defeating_data([1 + 0j], [2.0, 1.0], 1.0)
    with pytest.raises(DomainError):
        defeating_data([1 + 0j], [1.0], 0.0)
