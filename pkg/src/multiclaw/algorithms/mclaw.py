"""The multiclaw finder and the multicollision finder built on it.

Stage ``i`` performs ``ceil(4 c_N N_i)`` multi-target searches over
``f_i``, each extending one ``(i-1)``-claw whose value ``y`` is still
listed. The extended claw moves to the stage-``i`` list and ``y`` leaves
the stage-``(i-1)`` list, so values within a list stay distinct. The run
aborts the moment the ledger reaches the query cap.
"""

from __future__ import annotations

from typing import Callable, Iterator, Sequence

import numpy as np

from multiclaw.algorithms.outcome import AlgorithmOutcome
from multiclaw.algorithms.params import MclawParams
from multiclaw.functions import (
    ClawWitness,
    CollisionWitness,
    FunctionTable,
    partition_domain,
    restrict_domain,
)
from multiclaw.grover import (
    Backend,
    PreimageSearch,
    QueryLedger,
    QueryLimitReached,
    mtqs_search,
)

__all__ = ["StageList", "run_mclaw", "run_mcollision_via_claw"]


class StageList:
    """Partial claws ``(x_1, ..., x_i; y)`` keyed by ``y``."""

    def __init__(self):
        self._entries: dict[int, tuple[int, ...]] = {}

    def add(self, inputs: tuple[int, ...], y: int) -> None:
        if y in self._entries:
            raise ValueError(f"value {y} already listed")
        self._entries[y] = inputs

    def pop(self, y: int) -> tuple[int, ...]:
        return self._entries.pop(y)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, y) -> bool:
        return y in self._entries

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], int]]:
        for y in sorted(self._entries):
            yield self._entries[y], y

    def y_values(self) -> list[int]:
        return sorted(self._entries)

    def first_inserted(self) -> tuple[tuple[int, ...], int]:
        y = next(iter(self._entries))
        return self._entries[y], y


InsertHook = Callable[[int, StageList, "StageList | None"], None]


def run_mclaw(
    functions: Sequence[FunctionTable],
    params: MclawParams,
    backend: Backend | str = Backend.ANALYTIC,
    rng: int | np.random.Generator | None = None,
    *,
    on_insert: InsertHook | None = None,
) -> AlgorithmOutcome:
    """Find an ``ell``-claw for ``functions`` or give up at ``params.qlimit`` queries.

    Domains larger than ``ceil(N/c_N)`` are cut to their prefix of that size
    first. ``on_insert(stage, current, previous)`` is called after every
    list insertion; ``previous`` is ``None`` in stage 1, where the previous
    list is the whole range.
    """
    rng = np.random.default_rng(rng)
    if len(functions) != params.ell:
        raise ValueError(f"expected {params.ell} functions, got {len(functions)}")
    size = params.domain_size
    tables = []
    for f in functions:
        if f.range_size != params.N:
            raise ValueError(f"function range {f.range_size} != N={params.N}")
        if f.domain_size < size:
            raise ValueError(f"domain {f.domain_size} smaller than ceil(N/c_N)={size}")
        tables.append(restrict_domain(f, size))

    ledger = QueryLedger(cap=params.qlimit)
    prev: StageList | None = None
    peak = 0
    try:
        for stage, (f, count) in enumerate(zip(tables, params.loop_counts), start=1):
            ledger.stage = f"stage{stage}"
            problem = PreimageSearch(f, None if prev is None else prev.y_values())
            current = StageList()
            # only binds when the schedule is not decreasing (N far too small):
            # a stage cannot consume more claws than the previous list holds
            count = min(count, params.N if prev is None else len(prev))
            for _ in range(count):
                x = mtqs_search(problem, ledger, rng, backend)
                y = f(x)
                partial = () if prev is None else prev.pop(y)
                current.add(partial + (x,), y)
                problem.remove_value(y)
                peak = max(peak, len(current) + (len(prev) if prev is not None else 0))
                if on_insert is not None:
                    on_insert(stage, current, prev)
            prev = current
    except QueryLimitReached:
        return AlgorithmOutcome.from_ledger("mclaw", None, ledger, peak)

    inputs, y = prev.first_inserted()
    return AlgorithmOutcome.from_ledger("mclaw", ClawWitness(inputs, y), ledger, peak)


def run_mcollision_via_claw(
    f: FunctionTable,
    params: MclawParams,
    backend: Backend | str = Backend.ANALYTIC,
    rng: int | np.random.Generator | None = None,
) -> AlgorithmOutcome:
    """Split the domain into ``ell`` parts and look for a claw across them.

    A claw of the restrictions to disjoint parts is a collision of ``f``;
    the reduction itself makes no queries.
    """
    size = params.domain_size
    if f.domain_size < params.ell * size:
        raise ValueError(
            f"domain {f.domain_size} is below ell*ceil(N/c_N) = {params.ell * size}"
        )
    parts = partition_domain(f.domain_size, params.ell)
    pieces = [f.slice(p.start, p.start + size) for p in parts]
    outcome = run_mclaw(pieces, params, backend, rng)
    outcome.algorithm = "mcoll"
    if outcome.result is not None:
        claw = outcome.result
        inputs = tuple(p.start + x for p, x in zip(parts, claw.inputs))
        outcome.result = CollisionWitness(inputs, claw.y)
    return outcome
