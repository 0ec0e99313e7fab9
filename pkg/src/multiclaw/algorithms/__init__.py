from multiclaw.algorithms.classic import run_bht, run_multi_grover
from multiclaw.algorithms.mclaw import StageList, run_mclaw, run_mcollision_via_claw
from multiclaw.algorithms.outcome import AlgorithmOutcome
from multiclaw.algorithms.params import (
    ConfigurationWarning,
    MclawParams,
    list_size_schedule,
    log2_query_limit,
    loop_counts,
    query_limit,
)
from multiclaw.algorithms.recursive import recmcoll_schedule, run_recmcoll

__all__ = [
    "AlgorithmOutcome",
    "ConfigurationWarning",
    "MclawParams",
    "StageList",
    "list_size_schedule",
    "log2_query_limit",
    "loop_counts",
    "query_limit",
    "recmcoll_schedule",
    "run_bht",
    "run_mclaw",
    "run_mcollision_via_claw",
    "run_multi_grover",
    "run_recmcoll",
]
