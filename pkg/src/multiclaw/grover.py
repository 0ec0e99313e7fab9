"""Query-model quantum search: Grover iterations, BBHT and multi-target search.

Two interchangeable backends produce measurement outcomes:

* ``statevector`` evolves all ``M`` amplitudes through ``-W S_0 W S_f``;
* ``analytic`` samples the outcome directly from the closed form
  ``sin^2((2j+1) theta)`` with ``sin(theta) = sqrt(t/M)``.

Both charge the same queries to a :class:`QueryLedger`: one per Grover
iteration plus one to verify the measured index classically. The
multi-target search (:func:`mtqs_search`) pads the space five-fold and
charges twice that, since its predicate evaluates ``f`` and uncomputes it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from multiclaw.functions import FunctionTable

__all__ = [
    "Backend",
    "QueryLimitReached",
    "QueryLedger",
    "SearchProblem",
    "MaskSearch",
    "PreimageSearch",
    "PaddedSearch",
    "GroverState",
    "BBHTSchedule",
    "MAX_STATEVECTOR_SIZE",
    "MTQS_PADDING",
    "MTQS_ORACLE_CALLS",
    "grover_success_probability",
    "run_grover_statevector",
    "sample_grover_analytic",
    "sample_grover",
    "run_bbht",
    "mtqs_search",
    "run_mtqs",
]

# largest search space the statevector backend will allocate
MAX_STATEVECTOR_SIZE = 2**22

MTQS_PADDING = 5
MTQS_ORACLE_CALLS = 2


class Backend(str, enum.Enum):
    STATEVECTOR = "statevector"
    ANALYTIC = "analytic"


class QueryLimitReached(RuntimeError):
    """The query cap was hit; the run must stop and report failure."""


@dataclass
class QueryLedger:
    """Running oracle-query count, split by stage, with an optional hard cap.

    Reaching the cap (not just exceeding it) aborts: the ledger is filled up
    to exactly ``cap`` and :class:`QueryLimitReached` is raised.
    """

    cap: int | None = None
    total: int = 0
    per_stage: dict[str, int] = field(default_factory=dict)
    stage: str = "main"

    def __post_init__(self):
        if self.cap is not None and self.cap < 1:
            raise ValueError("cap must be positive")

    def charge(self, n: int) -> None:
        if n < 0:
            raise ValueError("cannot charge a negative number of queries")
        if self.cap is not None and self.total + n >= self.cap:
            used = self.cap - self.total
            self.total = self.cap
            self.per_stage[self.stage] = self.per_stage.get(self.stage, 0) + used
            raise QueryLimitReached(f"query limit {self.cap} reached")
        self.total += n
        self.per_stage[self.stage] = self.per_stage.get(self.stage, 0) + n

    @property
    def exhausted(self) -> bool:
        return self.cap is not None and self.total >= self.cap


class SearchProblem:
    """A boolean predicate over ``range(space_size)``.

    Subclasses supply the target count and samplers the analytic backend
    needs; :meth:`target_mask` feeds the statevector backend.
    """

    space_size: int

    @property
    def target_count(self) -> int:
        raise NotImplementedError

    def is_target(self, i: int) -> bool:
        raise NotImplementedError

    def target_mask(self) -> np.ndarray:
        raise NotImplementedError

    def sample_target(self, rng: np.random.Generator) -> int:
        raise NotImplementedError

    def sample_nontarget(self, rng: np.random.Generator) -> int:
        if self.target_count >= self.space_size:
            raise ValueError("every point is a target")
        for _ in range(64):
            i = int(rng.integers(self.space_size))
            if not self.is_target(i):
                return i
        candidates = np.flatnonzero(~self.target_mask())
        return int(candidates[rng.integers(len(candidates))])


class MaskSearch(SearchProblem):
    def __init__(self, mask: Iterable[bool] | np.ndarray):
        self._mask = np.asarray(mask, dtype=bool)
        self._mask.flags.writeable = False
        self.space_size = int(self._mask.shape[0])
        self._targets = np.flatnonzero(self._mask)

    @classmethod
    def from_targets(cls, space_size: int, targets: Iterable[int]) -> MaskSearch:
        mask = np.zeros(space_size, dtype=bool)
        mask[list(targets)] = True
        return cls(mask)

    @property
    def target_count(self) -> int:
        return int(self._targets.shape[0])

    def is_target(self, i: int) -> bool:
        return bool(self._mask[i])

    def target_mask(self) -> np.ndarray:
        return self._mask

    def sample_target(self, rng) -> int:
        return int(self._targets[rng.integers(len(self._targets))])


class PreimageSearch(SearchProblem):
    """Find ``x`` with ``f(x)`` in a target set of range values.

    ``targets=None`` means the whole range. Inputs in ``exclude`` never count
    as targets. The target set can shrink in place via :meth:`remove_value`,
    which is how list-building algorithms consume matched values without
    rescanning the domain.
    """

    def __init__(
        self,
        f: FunctionTable,
        targets: Iterable[int] | None = None,
        exclude: Iterable[int] = (),
    ):
        self.f = f
        self.space_size = f.domain_size
        if targets is None:
            self._ymask = np.ones(f.range_size, dtype=bool)
        else:
            self._ymask = np.zeros(f.range_size, dtype=bool)
            idx = np.fromiter(targets, dtype=np.int64)
            if idx.size and (idx.min() < 0 or idx.max() >= f.range_size):
                raise ValueError("target values outside the range of f")
            self._ymask[idx] = True
        self._excluded: set[int] = set()
        self._excluded_by_value: dict[int, int] = {}
        self._mask_cache: np.ndarray | None = None

        # dense: the target set covers most of the range, sample by rejection
        self._dense = targets is None or self._ymask.mean() >= 0.5
        if self._dense:
            if targets is None:
                self._count = f.domain_size
            else:
                self._count = int(f.preimage_counts[self._ymask].sum())
        else:
            self._xs = np.flatnonzero(self._ymask[f.values])
            self._ys = f.values[self._xs]
            self._alive = np.ones(self._xs.shape[0], dtype=bool)
            self._count = int(self._xs.shape[0])
        for x in exclude:
            self.exclude(x)

    @property
    def target_count(self) -> int:
        return self._count

    def is_target(self, x: int) -> bool:
        return bool(self._ymask[self.f.values[x]]) and x not in self._excluded

    def target_mask(self) -> np.ndarray:
        if self._mask_cache is None:
            mask = self._ymask[self.f.values]
            if self._excluded:
                mask[list(self._excluded)] = False
            self._mask_cache = mask
        return self._mask_cache

    def exclude(self, x: int) -> None:
        x = int(x)
        if x in self._excluded:
            return
        y = self.f(x)
        self._excluded.add(x)
        self._excluded_by_value[y] = self._excluded_by_value.get(y, 0) + 1
        if not self._ymask[y]:
            return
        self._count -= 1
        if not self._dense:
            self._alive[self._xs == x] = False
        self._mask_cache = None

    def remove_value(self, y: int) -> None:
        """Drop ``y`` from the target set."""
        if not self._ymask[y]:
            return
        self._ymask[y] = False
        if self._dense:
            self._count -= int(self.f.preimage_counts[y]) - self._excluded_by_value.get(y, 0)
        else:
            hit = self._alive & (self._ys == y)
            self._count -= int(np.count_nonzero(hit))
            self._alive[hit] = False
            if self._count * 2 < self._alive.shape[0]:
                self._compact()
        self._mask_cache = None

    def target_values(self) -> np.ndarray:
        return np.flatnonzero(self._ymask)

    def _compact(self):
        keep = self._alive
        self._xs, self._ys = self._xs[keep], self._ys[keep]
        self._alive = np.ones(self._xs.shape[0], dtype=bool)

    def sample_target(self, rng) -> int:
        if self._count <= 0:
            raise ValueError("no targets to sample")
        if self._dense:
            while True:
                x = int(rng.integers(self.space_size))
                if self.is_target(x):
                    return x
        while True:
            i = int(rng.integers(self._alive.shape[0]))
            if self._alive[i]:
                return int(self._xs[i])


class PaddedSearch(SearchProblem):
    """``{0..factor-1} x inner``: targets are ``(0, x)`` with ``x`` an inner target.

    Index ``a * M + x`` encodes the pair ``(a, x)``. Padding keeps the target
    fraction at or below ``1/factor``.
    """

    def __init__(self, inner: SearchProblem, factor: int = MTQS_PADDING):
        self.inner = inner
        self.factor = factor
        self.space_size = factor * inner.space_size

    @property
    def target_count(self) -> int:
        return self.inner.target_count

    def unpad(self, i: int) -> int:
        return i % self.inner.space_size

    def is_target(self, i: int) -> bool:
        return i < self.inner.space_size and self.inner.is_target(i)

    def target_mask(self) -> np.ndarray:
        mask = np.zeros(self.space_size, dtype=bool)
        mask[: self.inner.space_size] = self.inner.target_mask()
        return mask

    def sample_target(self, rng) -> int:
        return self.inner.sample_target(rng)

    def sample_nontarget(self, rng) -> int:
        while True:
            i = int(rng.integers(self.space_size))
            if not self.is_target(i):
                return i


def grover_success_probability(M: int, t: int, j: int) -> float:
    """Probability that ``j`` Grover iterations then a measurement hit a target."""
    if not 0 <= t <= M:
        raise ValueError(f"need 0 <= t <= M, got t={t}, M={M}")
    if j < 0:
        raise ValueError("iteration count must be non-negative")
    if t == 0:
        return 0.0
    if t == M:
        return 1.0
    theta = math.asin(math.sqrt(t / M))
    p = math.sin((2 * j + 1) * theta) ** 2
    return min(1.0, max(0.0, p))


class GroverState:
    """Amplitudes over the search space, starting from the uniform state.

    The diffusion step reflects about the uniform superposition, which is
    ``-W S_0 W`` when ``M`` is a power of two and its natural extension
    otherwise.
    """

    def __init__(self, size: int):
        self.amplitudes = np.full(size, 1 / math.sqrt(size), dtype=np.complex128)

    def apply_oracle(self, mask: np.ndarray) -> None:
        self.amplitudes[mask] *= -1

    def apply_diffusion(self) -> None:
        mean = self.amplitudes.mean()
        np.subtract(2 * mean, self.amplitudes, out=self.amplitudes)

    def iterate(self, mask: np.ndarray) -> None:
        self.apply_oracle(mask)
        self.apply_diffusion()

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def run_grover_statevector(
    problem: SearchProblem,
    j: int,
    ledger: QueryLedger,
    rng: np.random.Generator,
    *,
    cost: int = 1,
    max_size: int = MAX_STATEVECTOR_SIZE,
) -> int:
    M = problem.space_size
    if M > max_size:
        raise ValueError(f"statevector of {M} amplitudes exceeds the {max_size} limit")
    ledger.charge(cost * (j + 1))
    mask = problem.target_mask()
    state = GroverState(M)
    for _ in range(j):
        state.iterate(mask)
        if abs(state.norm_squared() - 1) > 1e-9:
            raise ArithmeticError("statevector lost normalisation")
    probs = state.probabilities()
    return int(rng.choice(M, p=probs / probs.sum()))


def sample_grover_analytic(
    problem: SearchProblem,
    j: int,
    ledger: QueryLedger,
    rng: np.random.Generator,
    *,
    cost: int = 1,
) -> int:
    ledger.charge(cost * (j + 1))
    p = grover_success_probability(problem.space_size, problem.target_count, j)
    if p > 0 and rng.random() < p:
        return problem.sample_target(rng)
    return problem.sample_nontarget(rng)


def sample_grover(problem, j, ledger, rng, backend=Backend.ANALYTIC, *, cost=1) -> int:
    if Backend(backend) is Backend.STATEVECTOR:
        return run_grover_statevector(problem, j, ledger, rng, cost=cost)
    return sample_grover_analytic(problem, j, ledger, rng, cost=cost)


@dataclass
class BBHTSchedule:
    """Randomised iteration bound: draw ``j < m``, grow ``m`` by ``growth`` on failure."""

    m_max: float
    m: float = 1.0
    growth: float = 6 / 5

    def __post_init__(self):
        if self.growth <= 1:
            raise ValueError("growth factor must exceed 1")
        self.m = min(self.m, self.m_max)

    def draw(self, rng: np.random.Generator) -> int:
        return int(rng.integers(math.ceil(self.m)))

    def grow(self) -> None:
        self.m = min(self.growth * self.m, self.m_max)


def run_bbht(
    problem: SearchProblem,
    ledger: QueryLedger,
    rng: np.random.Generator,
    backend: Backend | str = Backend.ANALYTIC,
    *,
    cost: int = 1,
    growth: float = 6 / 5,
    initial_m: float = 1.0,
) -> int:
    """Search with an unknown number of targets; return a verified target.

    With no targets the loop only ends at the ledger cap, so an uncapped
    ledger is refused in that case.
    """
    if problem.target_count == 0 and ledger.cap is None:
        raise ValueError("search has no targets and the ledger has no cap")
    schedule = BBHTSchedule(m_max=math.sqrt(problem.space_size), m=initial_m, growth=growth)
    while True:
        j = schedule.draw(rng)
        i = sample_grover(problem, j, ledger, rng, backend, cost=cost)
        if problem.is_target(i):
            return i
        schedule.grow()


def mtqs_search(
    problem: SearchProblem,
    ledger: QueryLedger,
    rng: np.random.Generator,
    backend: Backend | str = Backend.ANALYTIC,
) -> int:
    padded = PaddedSearch(problem, MTQS_PADDING)
    i = run_bbht(padded, ledger, rng, backend, cost=MTQS_ORACLE_CALLS)
    return padded.unpad(i)


def run_mtqs(
    f: FunctionTable,
    targets: Iterable[int],
    ledger: QueryLedger,
    rng: np.random.Generator,
    backend: Backend | str = Backend.ANALYTIC,
    exclude: Iterable[int] = (),
) -> int:
    """Return some ``x`` with ``f(x)`` in ``targets``."""
    targets = list(targets)
    if not targets:
        raise ValueError("multi-target search needs a non-empty target set")
    return mtqs_search(PreimageSearch(f, targets, exclude), ledger, rng, backend)
