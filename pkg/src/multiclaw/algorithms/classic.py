"""Baseline collision finders: list-then-search (BHT) and repeated preimage search."""

from __future__ import annotations

import numpy as np

from multiclaw.algorithms.outcome import AlgorithmOutcome
from multiclaw.algorithms.params import snap_ceil
from multiclaw.functions import CollisionWitness, FunctionTable
from multiclaw.grover import (
    Backend,
    PreimageSearch,
    QueryLedger,
    QueryLimitReached,
    run_bbht,
)

__all__ = ["run_bht", "run_multi_grover"]


def run_bht(
    f: FunctionTable,
    k_list: int | None = None,
    backend: Backend | str = Backend.ANALYTIC,
    rng: int | np.random.Generator | None = None,
    *,
    cap: int | None = None,
) -> AlgorithmOutcome:
    """Query ``k_list`` random points, then search for a second preimage of one.

    ``k_list`` defaults to ``ceil(N**(1/3))``. The listed points are drawn
    uniformly without replacement, which is what makes the method work on
    random functions and not only on 2-to-1 ones.
    """
    rng = np.random.default_rng(rng)
    if k_list is None:
        k_list = max(1, snap_ceil(f.range_size ** (1 / 3)))
    if not 1 <= k_list <= f.domain_size:
        raise ValueError(f"list size {k_list} not in [1, {f.domain_size}]")
    ledger = QueryLedger(cap=cap)
    try:
        ledger.stage = "list"
        xs = rng.choice(f.domain_size, size=k_list, replace=False)
        ledger.charge(k_list)
        ys = f.values[xs]

        order = np.argsort(ys, kind="stable")
        sorted_ys = ys[order]
        dup = np.flatnonzero(sorted_ys[1:] == sorted_ys[:-1])
        if dup.size:
            a, b = xs[order[dup[0]]], xs[order[dup[0] + 1]]
            witness = CollisionWitness((int(a), int(b)), int(sorted_ys[dup[0]]))
            return AlgorithmOutcome.from_ledger("bht", witness, ledger, k_list)

        ledger.stage = "search"
        problem = PreimageSearch(f, ys.tolist(), exclude=xs.tolist())
        x = run_bbht(problem, ledger, rng, backend)
    except QueryLimitReached:
        return AlgorithmOutcome.from_ledger("bht", None, ledger, k_list)
    y = f(x)
    x0 = int(xs[np.flatnonzero(ys == y)[0]])
    return AlgorithmOutcome.from_ledger("bht", CollisionWitness((x0, x), y), ledger, k_list)


def run_multi_grover(
    f: FunctionTable,
    ell: int,
    backend: Backend | str = Backend.ANALYTIC,
    rng: int | np.random.Generator | None = None,
    *,
    cap: int | None = None,
) -> AlgorithmOutcome:
    """Pick a random ``x_1`` and search ``ell - 1`` times for fresh preimages of ``f(x_1)``."""
    rng = np.random.default_rng(rng)
    if ell < 2:
        raise ValueError("ell must be at least 2")
    ledger = QueryLedger(cap=cap)
    try:
        ledger.stage = "sample"
        x1 = int(rng.integers(f.domain_size))
        ledger.charge(1)
        y = f(x1)
        found = [x1]
        problem = PreimageSearch(f, [y], exclude=found)
        while len(found) < ell:
            ledger.stage = f"search{len(found) + 1}"
            x = run_bbht(problem, ledger, rng, backend)
            found.append(x)
            problem.exclude(x)
    except QueryLimitReached:
        return AlgorithmOutcome.from_ledger("multigrover", None, ledger, 1)
    return AlgorithmOutcome.from_ledger(
        "multigrover", CollisionWitness(tuple(found), y), ledger, len(found)
    )
