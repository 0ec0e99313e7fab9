"""Closed-form bounds, tail inequalities and resource estimates.

Everything here is a pure function of its arguments. Exponents are returned
as :class:`fractions.Fraction` so fitted slopes are compared against exact
values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "PreconditionError",
    "BBHT_MAX_TARGET_FRACTION",
    "ResourceEstimate",
    "bbht_query_bound",
    "mtqs_query_bound",
    "epsilon_bound",
    "success_floor",
    "image_size_bound",
    "mcdiarmid_tail",
    "hypergeometric_alpha",
    "hypergeometric_tail",
    "theoretical_exponent",
    "grover_iteration_resources",
    "mclaw_qubit_estimate",
    "ALGORITHMS",
]

BBHT_MAX_TARGET_FRACTION = Fraction(17, 81)

ALGORITHMS = ("mclaw", "mcoll", "recmcoll", "multigrover", "bht")


class PreconditionError(ValueError):
    """Inputs fall outside the regime in which a bound is stated."""


@dataclass(frozen=True)
class ResourceEstimate:
    time_units: float
    qubit_units: float
    # big-O constants are taken as 1; only ratios between estimates mean anything
    unit_constants: bool = True

    def __post_init__(self):
        if self.time_units < 0 or self.qubit_units < 0:
            raise ValueError("resource estimates are non-negative")


def bbht_query_bound(M: int, t: int) -> tuple[float, float]:
    """Expected-query bound for BBHT and its relaxed ``4.5 sqrt(M/t)`` form."""
    if not 0 < t < M:
        raise PreconditionError(f"need 0 < t < M, got t={t}, M={M}")
    if Fraction(t, M) >= BBHT_MAX_TARGET_FRACTION:
        raise PreconditionError(f"target fraction {t}/{M} is not below 17/81")
    exact = 4 * M / math.sqrt((M - t) * t)
    relaxed = 4.5 * math.sqrt(M / t)
    return exact, relaxed


def mtqs_query_bound(X_size: int, preimage_count: int) -> float:
    if preimage_count < 1:
        raise ValueError("multi-target search needs at least one preimage")
    return 9 * math.sqrt(5 * X_size / preimage_count)


def epsilon_bound(ell: int, N: float, c_N: float) -> float:
    """Failure mass of the good event for the multiclaw finder.

    ``2*ell/N + ell * exp(-N**(1/(2**ell - 1)) / (25*c_N))``
    """
    return 2 * ell / N + ell * math.exp(-(N ** (1 / (2**ell - 1))) / (25 * c_N))


def success_floor(ell: int, N: float, c_N: float, k: int) -> float:
    """Guaranteed success probability ``1 - epsilon - 1/k`` (may be negative)."""
    return 1 - epsilon_bound(ell, N, c_N) - 1 / k


def image_size_bound(X_size: int, Y_size: int) -> float:
    """Image-size threshold exceeded with probability at least ``1 - 2/|Y|``."""
    if X_size > Y_size:
        raise PreconditionError("image bound requires |X| <= |Y|")
    return X_size / 2 - math.sqrt(X_size * math.log(Y_size) / 2)


def mcdiarmid_tail(M: int, lam: float) -> float:
    if M < 1 or lam < 0:
        raise ValueError("need M >= 1 and lambda >= 0")
    return 2 * math.exp(-2 * lam * lam / M)


def hypergeometric_alpha(n1: int, n: int, m: int) -> float:
    return max(1 / (n1 + 1) + 1 / (n - n1 + 1), 1 / (m + 1) + 1 / (n - m + 1))


def hypergeometric_tail(n1: int, n: int, m: int, lam: float) -> float:
    """Lower-tail bound ``Pr[K - E[K] < -lam]`` for ``K ~ Hypergeom(n1, n, m)``."""
    if lam < 2:
        raise PreconditionError("the hypergeometric tail bound needs lambda >= 2")
    if not (0 <= n1 <= n and 0 <= m <= n):
        raise ValueError("need 0 <= n1, m <= n")
    return math.exp(-2 * hypergeometric_alpha(n1, n, m) * (lam * lam - 1))


def theoretical_exponent(ell: int, algorithm: str) -> Fraction:
    """Exponent ``e`` such that the algorithm makes ``O(N**e)`` queries."""
    if ell < 2:
        raise ValueError("ell must be at least 2")
    if algorithm in ("mclaw", "mcoll"):
        return Fraction(2 ** (ell - 1) - 1, 2**ell - 1)
    if algorithm == "recmcoll":
        return Fraction(3 ** (ell - 1) - 1, 2 * 3 ** (ell - 1))
    if algorithm == "multigrover":
        return Fraction(1, 2)
    if algorithm == "bht":
        if ell != 2:
            raise ValueError("BHT only finds 2-collisions")
        return Fraction(1, 3)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def grover_iteration_resources(m_bits: int, n_bits: int, list_len: int) -> ResourceEstimate:
    """Cost of one Grover iteration testing ``f(x)`` against a sorted list.

    Time is ``m + n*ceil(log2 k)`` (coherent binary search), qubits
    ``m + k*n`` (index register plus the list).
    """
    if list_len < 1:
        raise ValueError("list_len must be >= 1")
    depth = math.ceil(math.log2(list_len)) if list_len > 1 else 0
    return ResourceEstimate(
        time_units=float(m_bits + n_bits * depth),
        qubit_units=float(m_bits + list_len * n_bits),
    )


def mclaw_qubit_estimate(ell: int, N: float, c_N: float = 1.0) -> float:
    """Peak list-register size of the multiclaw finder, in list entries.

    Stage 1 searches against the complement ``Y \\ L'_0`` (at most
    ``c_N*N_1`` entries); stage ``i >= 2`` holds ``L'_{i-1}``.
    """
    from multiclaw.algorithms.params import list_size_schedule

    sched = list_size_schedule(ell, N, c_N)
    later = [c_N * sched[i - 1] for i in range(2, ell + 1)]
    return max([c_N * sched[1], *later])
