import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multiclaw import bounds
from multiclaw.bounds import PreconditionError


def test_bbht_bound_values():
    exact, relaxed = bounds.bbht_query_bound(100, 20)
    assert exact == 10.0
    assert relaxed == pytest.approx(10.0623, abs=1e-4)


@pytest.mark.parametrize("M, t", [(100, 25), (100, 0), (100, 100), (81, 17)])
def test_bbht_bound_preconditions(M, t):
    with pytest.raises(PreconditionError):
        bounds.bbht_query_bound(M, t)


def test_bbht_exact_below_relaxed_on_grid():
    for M in range(2, 10_001):
        for t in range(1, M):
            if 81 * t >= 17 * M:
                break
            exact, relaxed = bounds.bbht_query_bound(M, t)
            assert exact <= relaxed


def test_mtqs_bound_values():
    assert bounds.mtqs_query_bound(1000, 50) == 90.0
    assert bounds.mtqs_query_bound(64, 64) == pytest.approx(9 * math.sqrt(5))
    with pytest.raises(ValueError):
        bounds.mtqs_query_bound(64, 0)


def test_epsilon_frozen_value():
    # 4/2^18 + 2 exp(-(2^18)^(1/3) / 25)
    assert bounds.epsilon_bound(2, 2**18, 1) == pytest.approx(0.1546247, abs=1e-7)
    assert bounds.success_floor(2, 2**18, 1, 4) == pytest.approx(1 - 0.1546247 - 0.25, abs=1e-7)


def test_epsilon_vanishes():
    values = [bounds.epsilon_bound(3, 2.0**e, 2.0) for e in (40, 80, 160, 320)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-80


def test_image_size_bound():
    assert bounds.image_size_bound(1024, 1024) == pytest.approx(452.43, abs=0.005)
    assert bounds.image_size_bound(1, 50) == pytest.approx(0.5 - math.sqrt(math.log(50) / 2))
    with pytest.raises(PreconditionError):
        bounds.image_size_bound(11, 10)


def test_mcdiarmid():
    assert bounds.mcdiarmid_tail(100, 10) == pytest.approx(2 * math.exp(-2))
    assert bounds.mcdiarmid_tail(7, 0) == 2
    assert bounds.mcdiarmid_tail(100, 11) < bounds.mcdiarmid_tail(100, 10)
    assert bounds.mcdiarmid_tail(101, 10) > bounds.mcdiarmid_tail(100, 10)


def test_hypergeometric_frozen_value():
    assert bounds.hypergeometric_alpha(10, 100, 20) == pytest.approx(0.101898, abs=1e-6)
    assert bounds.hypergeometric_tail(10, 100, 20, 2) == pytest.approx(0.5425969, abs=1e-7)
    with pytest.raises(PreconditionError):
        bounds.hypergeometric_tail(10, 100, 20, 1.5)


@given(st.integers(0, 200).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, n), st.integers(0, n))),
    st.floats(2, 50))
def test_hypergeometric_symmetric_and_at_most_one(args, lam):
    n, n1, m = args
    a = bounds.hypergeometric_tail(n1, n, m, lam)
    assert a == bounds.hypergeometric_tail(m, n, n1, lam)
    assert 0 <= a <= 1


def test_exponent_values():
    assert bounds.theoretical_exponent(4, "mclaw") == Fraction(7, 15)
    assert bounds.theoretical_exponent(2, "mclaw") == bounds.theoretical_exponent(2, "bht") == Fraction(1, 3)
    assert bounds.theoretical_exponent(3, "recmcoll") == Fraction(4, 9)
    assert bounds.theoretical_exponent(5, "multigrover") == Fraction(1, 2)
    assert bounds.theoretical_exponent(3, "mcoll") == Fraction(3, 7)


@pytest.mark.parametrize("ell, alg", [(3, "bht"), (1, "mclaw"), (2, "sha3")])
def test_exponent_rejects_unsupported(ell, alg):
    with pytest.raises(ValueError):
        bounds.theoretical_exponent(ell, alg)


def test_exponent_trends():
    mclaw = [bounds.theoretical_exponent(ell, "mclaw") for ell in range(2, 30)]
    assert all(a < b for a, b in zip(mclaw, mclaw[1:]))
    assert all(e < Fraction(1, 2) for e in mclaw)
    for ell in range(3, 30):
        assert bounds.theoretical_exponent(ell, "recmcoll") > bounds.theoretical_exponent(ell, "mclaw")


def test_resource_estimates():
    est = bounds.grover_iteration_resources(10, 8, 16)
    assert (est.time_units, est.qubit_units) == (42, 138)
    est = bounds.grover_iteration_resources(7, 3, 1)
    assert (est.time_units, est.qubit_units) == (7, 10)
    with pytest.raises(ValueError):
        bounds.grover_iteration_resources(7, 3, 0)


def test_mclaw_qubit_estimate_is_first_list():
    assert bounds.mclaw_qubit_estimate(3, 128, 1) == pytest.approx(8)
    assert bounds.mclaw_qubit_estimate(2, 2**30, 2) == pytest.approx(2 * 2**10)


@given(st.integers(2, 10**6), st.integers(1, 10**6))
def test_evaluators_are_pure(M, t):
    if not (81 * t < 17 * M and t < M):
        return
    assert bounds.bbht_query_bound(M, t) == bounds.bbht_query_bound(M, t)
    assert bounds.epsilon_bound(3, M, 1.5) == bounds.epsilon_bound(3, M, 1.5)
