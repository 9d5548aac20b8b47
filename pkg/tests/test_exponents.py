import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expinterp.errors import (
    BoundedSetError,
    DomainError,
    ResourceLimitError,
    UnreachableDirectionError,
)
from expinterp.exponents import (
    ExponentSet,
    Generator,
    SparseSequence,
    canonical_product,
    condensation_index_estimate,
    limit_directions,
    sparse_subsequence,
)
from expinterp.geometry import Direction


def test_generator_validation():
    with pytest.raises(DomainError):
        Generator("arithmetic", 0)
    with pytest.raises(DomainError):
        Generator("geometric", 1.0, ratio=1.0)
    with pytest.raises(DomainError):
        Generator("weird", 1.0)


def test_arithmetic_enumeration():
    lam = ExponentSet(generators=(Generator("arithmetic", 1.0),))
    assert lam.enumerate_prefix(4) == [1, 2, 3, 4]


def test_nonzero_enumeration_is_modulus_ordered():
    lam = ExponentSet(generators=(Generator("arithmetic", 1j, index_range="nonzero"),))
    pts = lam.enumerate_prefix(4)
    assert sorted(pts, key=abs) == pts
    assert set(pts) == {1j, -1j, 2j, -2j}


def test_merged_enumeration_with_explicit():
    lam = ExponentSet(
        explicit=(0.5 + 0j,),
        generators=(Generator("arithmetic", 1.0), Generator("geometric", 1j, ratio=2.0)),
    )
    pts = lam.enumerate_prefix(5)
    assert pts[0] == 0.5
    assert all(abs(a) <= abs(b) + 1e-12 for a, b in zip(pts, pts[1:]))


def test_limit_directions_closed_form():
    lam = ExponentSet(generators=(Generator("arithmetic", 1j, index_range="nonzero"),))
    dirs = limit_directions(lam)
    assert sorted(d.angle for d in dirs) == pytest.approx([-math.pi / 2, math.pi / 2])

    lam2 = ExponentSet(generators=(Generator("geometric", 2 + 2j, ratio=3.0),))
    (d,) = limit_directions(lam2)
    assert d.angle == pytest.approx(math.pi / 4)


def test_limit_directions_bounded_set():
    with pytest.raises(BoundedSetError):
        limit_directions(ExponentSet(explicit=(1 + 0j, 2 + 0j)))


def test_sparse_subsequence_naturals():
    lam = ExponentSet(generators=(Generator("arithmetic", 1.0),))
    seq = sparse_subsequence(lam, (Direction(0.0),), 5)
    assert list(seq.points) == [1, 3, 7, 15, 31]


def test_sparse_subsequence_unreachable_direction():
    lam = ExponentSet(generators=(Generator("arithmetic", 1.0),))
    with pytest.raises(UnreachableDirectionError):
        sparse_subsequence(lam, (Direction(math.pi / 2),), 3)


def test_sparse_subsequence_contract_two_targets():
    lam = ExponentSet(
        generators=(Generator("arithmetic", 1.0), Generator("geometric", 1j, ratio=2.0))
    )
    seq = sparse_subsequence(lam, (Direction(0.0), Direction(math.pi / 2)), 8)
    pts = seq.points
    assert all(abs(b) > 2 * abs(a) for a, b in zip(pts, pts[1:]))
    for n, p in enumerate(pts, start=1):
        target = 1 + 0j if n % 2 == 1 else 1j
        assert abs(p / abs(p) - target) < 0.5**n


def test_sparse_sequence_invariant():
    SparseSequence((1 + 0j, 2 + 0j, 4 + 0j))  # exact doubling allowed
    with pytest.raises(DomainError):
        SparseSequence((1 + 0j, 1.5 + 0j))


def test_canonical_product_values():
    seq = SparseSequence.from_ratio(1.0, 3.0, 4)  # {3, 9, 27, 81}
    value, tail = canonical_product(seq, 0j, 4)
    assert value == 1
    assert tail == 0
    value2, _ = canonical_product(seq, 3.0, 4)
    assert value2 == 0
    # partial product with a tail bound covering the remaining factors
    value3, tail3 = canonical_product(seq, 1.0, 2)
    direct = (1 - 1 / 3) * (1 - 1 / 9)
    assert value3 == pytest.approx(direct)
    exact4 = direct * (1 - 1 / 27) * (1 - 1 / 81)
    assert abs(exact4 - value3) <= tail3


@given(st.floats(min_value=2.1, max_value=5.0), st.integers(min_value=3, max_value=10))
def test_condensation_estimate_nonnegative_and_small_for_sparse(ratio, n):
    seq = SparseSequence.from_ratio(1.0, ratio, n)
    est = condensation_index_estimate(seq, n)
    assert est >= 0


def test_condensation_direct_product_oracle():
    for n_terms in (10, 15, 20, 25):
        seq = SparseSequence.from_ratio(1.0, 2.0, n_terms)
        pts = seq.points[:n_terms]
        lam = pts[-1]
        prod = 1.0
        for other in pts[:-1]:
            prod *= abs(1 - lam / other)
        oracle = abs(math.log(1.0 / (prod / abs(lam)))) / abs(lam)
        est = condensation_index_estimate(seq, n_terms)
        assert est == pytest.approx(oracle, abs=1e-12)


def test_enumeration_cap():
    lam = ExponentSet(generators=(Generator("arithmetic", 1e11),))
    with pytest.raises(ResourceLimitError):
        lam.enumerate_prefix(1000)
