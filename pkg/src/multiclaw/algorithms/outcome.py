from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from multiclaw.functions import ClawWitness, CollisionWitness
from multiclaw.grover import QueryLedger

Witness = Union[ClawWitness, CollisionWitness]


@dataclass
class AlgorithmOutcome:
    """Result of one run: a witness, or ``None`` if the query cap was hit."""

    algorithm: str
    result: Witness | None
    queries: int
    per_stage_queries: dict[str, int] = field(default_factory=dict)
    cap: int | None = None
    peak_list_size: int = 0

    @property
    def aborted(self) -> bool:
        return self.result is None

    @classmethod
    def from_ledger(cls, algorithm, result, ledger: QueryLedger, peak_list_size=0):
        return cls(
            algorithm=algorithm,
            result=result,
            queries=ledger.total,
            per_stage_queries=dict(ledger.per_stage),
            cap=ledger.cap,
            peak_list_size=peak_list_size,
        )

    def to_record(self, *, ell: int, N: int, c_N: float = 1.0, k: int | None = None,
                  seed: int | None = None) -> dict:
        return {
            "algorithm": self.algorithm,
            "ell": ell,
            "N": N,
            "c_N": c_N,
            "k": k,
            "seed": seed,
            "queries": self.queries,
            "per_stage": self.per_stage_queries,
            "aborted": self.aborted,
            "witness": None if self.result is None else self.result.to_dict(),
        }
