"""List-size schedule and query cap of the multiclaw finder."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

__all__ = [
    "ConfigurationWarning",
    "MclawParams",
    "list_size_schedule",
    "loop_counts",
    "query_limit",
    "log2_query_limit",
    "snap_ceil",
]


class ConfigurationWarning(UserWarning):
    """Parameters are outside the regime where the guarantees apply."""


def _snap(x: float) -> float:
    # powers like 128**(3/7) come back as 7.999999999999998
    r = round(x)
    if r != 0 and abs(x - r) <= 1e-9 * abs(r):
        return float(r)
    return x


def snap_ceil(x: float) -> int:
    return math.ceil(_snap(x))


def _stage_exponent(ell: int, i: int) -> float:
    return (2 ** (ell - i) - 1) / (2**ell - 1)


def list_size_schedule(ell: int, N: float, c_N: float = 1.0) -> list[float]:
    """``[N_0, N_1, ..., N_ell]``: ``N_0 = N/(4 c_N)``, ``N_i = N**((2**(ell-i)-1)/(2**ell-1))``."""
    if ell < 2 or N < 2 or c_N < 1:
        raise ValueError("need ell >= 2, N >= 2 and c_N >= 1")
    sched = [N / (4 * c_N)]
    sched.extend(_snap(N ** _stage_exponent(ell, i)) for i in range(1, ell + 1))
    return sched


def loop_counts(ell: int, N: float, c_N: float = 1.0) -> list[int]:
    """Number of searches in stages ``1..ell``: ``ceil(4 c_N N_i)``."""
    sched = list_size_schedule(ell, N, c_N)
    return [snap_ceil(4 * c_N * n) for n in sched[1:]]


def query_limit(k: int, ell: int, N: float, c_N: float = 1.0) -> int:
    if k < 2:
        raise ValueError("k must be at least 2")
    return snap_ceil(k * 169 * ell * c_N * N ** _stage_exponent(ell, 1))


def log2_query_limit(k: int, ell: int, log2_N: float, c_N: float = 1.0) -> float:
    """``log2`` of the query cap, for ranges too large to hold in a float."""
    return math.log2(k * 169 * ell * c_N) + log2_N * _stage_exponent(ell, 1)


@dataclass(frozen=True)
class MclawParams:
    ell: int
    N: int
    c_N: float = 1.0
    k: int = 4

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("ell must be at least 2")
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.c_N < 1:
            raise ValueError("c_N must be at least 1")
        if self.N < 2:
            raise ValueError("N must be at least 2")
        admissible = self.N ** (1 / (2**self.ell - 1)) / math.log2(self.N)
        if self.c_N > admissible:
            warnings.warn(
                f"c_N={self.c_N} exceeds N^(1/(2^ell-1))/log2 N = {admissible:.3g}",
                ConfigurationWarning,
                stacklevel=3,
            )
        sched = self.schedule
        if any(a <= b for a, b in zip(sched, sched[1:])):
            warnings.warn(
                f"list sizes {sched} are not strictly decreasing; N is too small",
                ConfigurationWarning,
                stacklevel=3,
            )

    @property
    def schedule(self) -> list[float]:
        return list_size_schedule(self.ell, self.N, self.c_N)

    @property
    def loop_counts(self) -> list[int]:
        return loop_counts(self.ell, self.N, self.c_N)

    @property
    def qlimit(self) -> int:
        return query_limit(self.k, self.ell, self.N, self.c_N)

    @property
    def domain_size(self) -> int:
        """Size each claw domain is restricted to, ``ceil(N / c_N)``."""
        return snap_ceil(self.N / self.c_N)
