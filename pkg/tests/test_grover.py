import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiclaw.functions import FunctionTable, sample_random_function
from multiclaw.grover import (
    Backend,
    GroverState,
    MaskSearch,
    PaddedSearch,
    PreimageSearch,
    QueryLedger,
    QueryLimitReached,
    grover_success_probability,
    mtqs_search,
    run_bbht,
    run_grover_statevector,
    run_mtqs,
    sample_grover,
    sample_grover_analytic,
)


def test_success_probability_examples():
    assert grover_success_probability(4, 1, 1) == pytest.approx(1.0, abs=1e-15)
    assert grover_success_probability(64, 5, 0) == pytest.approx(5 / 64)
    assert all(grover_success_probability(32, 0, j) == 0 for j in range(10))
    assert grover_success_probability(8, 8, 3) == 1.0


def test_statevector_matches_formula_exactly():
    for t in range(0, 9):
        mask = np.zeros(64, bool)
        mask[:t] = True
        state = GroverState(64)
        for j in range(9):
            got = state.probabilities()[mask].sum()
            assert got == pytest.approx(grover_success_probability(64, t, j), abs=1e-9)
            state.iterate(mask)
            assert abs(state.norm_squared() - 1) < 1e-9


def test_single_iteration_on_four_points_hits():
    problem = MaskSearch.from_targets(4, [2])
    rng = np.random.default_rng(0)
    for backend in Backend:
        ledger = QueryLedger()
        hits = [sample_grover(problem, 1, ledger, rng, backend) for _ in range(200)]
        assert set(hits) == {2}
        assert ledger.total == 400


@pytest.mark.parametrize("j", range(6))
def test_statevector_hit_rate_within_three_sigma(j):
    M, t, shots = 64, 4, 10_000
    problem = MaskSearch.from_targets(M, range(t))
    rng = np.random.default_rng(j)
    ledger = QueryLedger()
    hits = sum(problem.is_target(run_grover_statevector(problem, j, ledger, rng)) for _ in range(shots))
    p = grover_success_probability(M, t, j)
    sigma = math.sqrt(shots * p * (1 - p))
    assert abs(hits - shots * p) <= 3 * sigma + 1e-9
    assert ledger.total == shots * (j + 1)


def test_analytic_never_hits_without_targets():
    problem = MaskSearch(np.zeros(16, bool))
    rng = np.random.default_rng(1)
    ledger = QueryLedger()
    assert not any(problem.is_target(sample_grover_analytic(problem, j, ledger, rng)) for j in range(20))


def test_statevector_size_guard():
    problem = MaskSearch.from_targets(32, [1])
    with pytest.raises(ValueError):
        run_grover_statevector(problem, 1, QueryLedger(), np.random.default_rng(), max_size=16)


def test_ledger_cap_fills_to_cap():
    ledger = QueryLedger(cap=10)
    ledger.charge(4)
    with pytest.raises(QueryLimitReached):
        ledger.charge(6)
    assert ledger.total == 10 and ledger.exhausted
    assert ledger.per_stage == {"main": 10}


def test_bbht_aborts_at_cap_without_targets():
    problem = MaskSearch(np.zeros(64, bool))
    ledger = QueryLedger(cap=100)
    with pytest.raises(QueryLimitReached):
        run_bbht(problem, ledger, np.random.default_rng(3))
    assert ledger.total == 100


def test_bbht_refuses_unbounded_hopeless_search():
    with pytest.raises(ValueError):
        run_bbht(MaskSearch(np.zeros(8, bool)), QueryLedger(), np.random.default_rng())


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 64).flatmap(lambda M: st.tuples(st.just(M), st.integers(1, M))),
    st.integers(0, 2**32 - 1),
    st.sampled_from(list(Backend)),
)
def test_bbht_returns_target(mt, seed, backend):
    M, t = mt
    rng = np.random.default_rng(seed)
    problem = MaskSearch.from_targets(M, rng.choice(M, t, replace=False))
    assert problem.is_target(run_bbht(problem, QueryLedger(), rng, backend))


def test_bbht_mean_queries_shrink_with_more_targets():
    M, trials = 1024, 2000
    rng = np.random.default_rng(11)
    stats = []
    for t in (4, 16, 64, 200):
        problem = MaskSearch.from_targets(M, range(t))
        totals = []
        for _ in range(trials):
            ledger = QueryLedger()
            run_bbht(problem, ledger, rng)
            totals.append(ledger.total)
        stats.append((np.mean(totals), np.std(totals) / math.sqrt(trials)))
    for (m1, s1), (m2, s2) in zip(stats, stats[1:]):
        assert m2 <= m1 + 2 * math.hypot(s1, s2)


def test_mtqs_doubles_accounting():
    f = FunctionTable.from_values(range(16))
    rng = np.random.default_rng(0)
    ledger = QueryLedger()
    x = run_mtqs(f, [3], ledger, rng)
    assert x == 3
    assert ledger.total % 2 == 0 and ledger.total >= 2


def test_mtqs_rejects_empty_targets():
    f = FunctionTable.from_values(range(16))
    with pytest.raises(ValueError):
        run_mtqs(f, [], QueryLedger(), np.random.default_rng())


def test_mtqs_statevector_agrees_with_identity():
    f = FunctionTable.from_values(range(16))
    rng = np.random.default_rng(4)
    for _ in range(20):
        assert run_mtqs(f, [7, 9], QueryLedger(), rng, Backend.STATEVECTOR) in (7, 9)


def test_padded_search_targets_first_block_only():
    inner = MaskSearch.from_targets(10, [2, 5])
    padded = PaddedSearch(inner, 5)
    assert padded.space_size == 50 and padded.target_count == 2
    assert np.flatnonzero(padded.target_mask()).tolist() == [2, 5]
    assert not padded.is_target(12)
    assert padded.unpad(2) == 2


def test_preimage_search_tracks_exclusions_and_removals():
    f = FunctionTable.from_values([0, 1, 1, 2, 1, 0], range_size=3)
    p = PreimageSearch(f, [1, 0])
    assert p.target_count == 5
    p.exclude(2)
    assert p.target_count == 4 and not p.is_target(2)
    p.remove_value(0)
    assert p.target_count == 2
    assert np.flatnonzero(p.target_mask()).tolist() == [1, 4]
    rng = np.random.default_rng(0)
    assert {p.sample_target(rng) for _ in range(50)} == {1, 4}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_preimage_search_mask_matches_brute_force(seed, dense):
    rng = np.random.default_rng(seed)
    f = sample_random_function(40, 12, rng)
    targets = None if dense else rng.choice(12, 4, replace=False).tolist()
    excluded = rng.choice(40, 5, replace=False).tolist()
    p = PreimageSearch(f, targets, exclude=excluded)
    tset = set(range(12)) if targets is None else set(targets)
    want = [x for x in range(40) if f(x) in tset and x not in excluded]
    assert np.flatnonzero(p.target_mask()).tolist() == want
    assert p.target_count == len(want)
    for _ in range(10):
        assert p.sample_target(rng) in want
        assert p.sample_nontarget(rng) not in want


def test_mtqs_search_counts_two_queries_per_step():
    problem = MaskSearch.from_targets(20, range(20))
    ledger = QueryLedger()
    # every inner point is a target, so the padded space has fraction 1/5
    mtqs_search(problem, ledger, np.random.default_rng(0))
    assert ledger.total % 2 == 0
