"""Simulated quantum multiclaw and multicollision finders with exact query accounting."""

from multiclaw.algorithms import (
    AlgorithmOutcome,
    MclawParams,
    run_bht,
    run_mclaw,
    run_mcollision_via_claw,
    run_multi_grover,
    run_recmcoll,
)
from multiclaw.functions import (
    ClawWitness,
    CollisionWitness,
    FunctionTable,
    image_size,
    sample_random_function,
    verify_claw,
    verify_collision,
)
from multiclaw.grover import Backend, QueryLedger, QueryLimitReached

__version__ = "0.1.0"

__all__ = [
    "AlgorithmOutcome",
    "Backend",
    "ClawWitness",
    "CollisionWitness",
    "FunctionTable",
    "MclawParams",
    "QueryLedger",
    "QueryLimitReached",
    "image_size",
    "run_bht",
    "run_mclaw",
    "run_mcollision_via_claw",
    "run_multi_grover",
    "run_recmcoll",
    "sample_random_function",
    "verify_claw",
    "verify_collision",
]
