"""Recursive multicollision finder trading query count for small lists.

``collect(i)`` builds a list of ``ceil(t_{i-1})`` many ``(i-1)``-collisions
with distinct values by calling ``collect(i-1)`` repeatedly, then one
multi-target search extends a listed collision by a fresh input. With
``t_i = N**(1/3**i)`` no list grows beyond about ``N**(1/3)``.
"""

from __future__ import annotations

from itertools import chain

import numpy as np

from multiclaw.algorithms.outcome import AlgorithmOutcome
from multiclaw.algorithms.params import snap_ceil
from multiclaw.functions import CollisionWitness, FunctionTable
from multiclaw.grover import (
    Backend,
    PreimageSearch,
    QueryLedger,
    QueryLimitReached,
    mtqs_search,
)

__all__ = ["recmcoll_schedule", "run_recmcoll"]


def recmcoll_schedule(ell: int, N: float) -> list[float]:
    """``[t_1, ..., t_{ell-1}]`` with ``t_i = N**(1/3**i)``."""
    if ell < 2:
        raise ValueError("ell must be at least 2")
    return [N ** (1 / 3**i) for i in range(1, ell)]


def run_recmcoll(
    f: FunctionTable,
    ell: int,
    backend: Backend | str = Backend.ANALYTIC,
    rng: int | np.random.Generator | None = None,
    *,
    cap: int | None = None,
) -> AlgorithmOutcome:
    rng = np.random.default_rng(rng)
    N = f.range_size
    if f.domain_size < ell * N:
        raise ValueError(f"domain {f.domain_size} is below ell*N = {ell * N}")
    sizes = [snap_ceil(t) for t in recmcoll_schedule(ell, N)]
    ledger = QueryLedger(cap=cap)
    live = peak = 0

    def collect(i: int) -> tuple[tuple[int, ...], int]:
        nonlocal live, peak
        if i == 1:
            ledger.stage = "level1"
            x = int(rng.integers(f.domain_size))
            ledger.charge(1)
            return (x,), f(x)
        entries: dict[int, tuple[int, ...]] = {}
        while len(entries) < sizes[i - 2]:
            xs, y = collect(i - 1)
            if y in entries:
                # repeated value: resample so the search targets stay distinct
                continue
            entries[y] = xs
            live += 1
            peak = max(peak, live)
        ledger.stage = f"level{i}"
        problem = PreimageSearch(f, entries, exclude=chain.from_iterable(entries.values()))
        x = mtqs_search(problem, ledger, rng, backend)
        y = f(x)
        live -= len(entries)
        return entries[y] + (x,), y

    try:
        inputs, y = collect(ell)
    except QueryLimitReached:
        return AlgorithmOutcome.from_ledger("recmcoll", None, ledger, peak)
    return AlgorithmOutcome.from_ledger("recmcoll", CollisionWitness(inputs, y), ledger, peak)
