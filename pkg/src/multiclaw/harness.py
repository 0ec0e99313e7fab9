"""Seeded trial batteries, log-log scaling fits and report files."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from statistics import mean, median
from typing import Iterable, Sequence

import numpy as np

from multiclaw import bounds
from multiclaw.algorithms import (
    ConfigurationWarning,
    MclawParams,
    run_bht,
    run_mclaw,
    run_mcollision_via_claw,
    run_multi_grover,
    run_recmcoll,
)
from multiclaw.algorithms.params import query_limit, snap_ceil
from multiclaw.functions import (
    ClawWitness,
    CollisionWitness,
    sample_random_function,
    verify_claw,
    verify_collision,
)
from multiclaw.grover import MAX_STATEVECTOR_SIZE, MTQS_PADDING, Backend

log = logging.getLogger(__name__)

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "ScalingFit",
    "trial_seed",
    "default_cap",
    "run_trial",
    "run_trials",
    "fit_loglog",
    "fit_scaling_exponent",
    "summarize",
    "emit_report",
    "write_csv",
    "read_csv",
    "CSV_COLUMNS",
]

CSV_COLUMNS = (
    "algorithm", "ell", "N", "c_N", "k", "seed", "queries",
    "aborted", "success", "peak_list_size", "per_stage",
)


@dataclass
class ExperimentConfig:
    algorithm: str = "mclaw"
    ell: int = 2
    n_values: list[int] = field(default_factory=lambda: [2**e for e in range(12, 23, 2)])
    c_N: float = 1.0
    k: int = 4
    trials: int = 200
    backend: str = "analytic"
    seed: int = 0
    # None: Qlimit_k for the multiclaw finders, default_cap() for the rest
    cap: int | None = None
    workers: int = 1

    def __post_init__(self):
        if self.algorithm not in bounds.ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError("N values must be strictly increasing")
        if self.algorithm == "bht" and self.ell != 2:
            raise ValueError("bht finds 2-collisions only")
        self.backend = Backend(self.backend).value

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known - {"log_n"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if "log_n" in data:
            data["n_values"] = [2**int(e) for e in data.pop("log_n")]
        return cls(**data)

    def search_space_size(self, N: int) -> int:
        """Largest space a single search of this battery sweeps."""
        claw_domain = snap_ceil(N / self.c_N)
        return {
            "mclaw": MTQS_PADDING * claw_domain,
            "mcoll": MTQS_PADDING * claw_domain,
            "recmcoll": MTQS_PADDING * self.ell * N,
            "multigrover": self.ell * N,
            "bht": 2 * N,
        }[self.algorithm]

    def validate_backend(self) -> None:
        if self.backend != Backend.STATEVECTOR.value:
            return
        worst = max(self.search_space_size(N) for N in self.n_values)
        if worst > MAX_STATEVECTOR_SIZE:
            raise ValueError(
                f"statevector backend cannot hold {worst} amplitudes "
                f"(limit {MAX_STATEVECTOR_SIZE}); use the analytic backend"
            )


@dataclass
class TrialRecord:
    algorithm: str
    ell: int
    N: int
    c_N: float
    k: int
    seed: int
    queries: int
    aborted: bool
    success: bool
    peak_list_size: int
    per_stage_queries: dict[str, int] = field(default_factory=dict)
    witness: dict | None = None

    def __post_init__(self):
        if self.success and self.aborted:
            raise ValueError("an aborted trial cannot succeed")


@dataclass
class ScalingFit:
    points: list[tuple[float, float]]
    slope: float
    intercept: float
    residual_rms: float

    def to_dict(self) -> dict:
        return asdict(self)


def trial_seed(base_seed: int, N: int, index: int) -> int:
    """Independent per-trial seed derived from ``(base_seed, N, index)``."""
    ss = np.random.SeedSequence([base_seed, N, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def default_cap(algorithm: str, ell: int, N: int, k: int = 4) -> int:
    """Query cap for finders without an intrinsic one.

    Mirrors the multiclaw cap, ``k * 169 * ell * N**e``, with ``e`` the
    algorithm's own exponent.
    """
    e = bounds.theoretical_exponent(ell, algorithm)
    return snap_ceil(k * 169 * ell * N ** float(e))


def run_trial(cfg: ExperimentConfig, N: int, index: int) -> TrialRecord:
    seed = trial_seed(cfg.seed, N, index)
    rng = np.random.default_rng(seed)
    alg, ell = cfg.algorithm, cfg.ell
    cap = cfg.cap if cfg.cap is not None else default_cap(alg, ell, N, cfg.k)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConfigurationWarning)
        if alg in ("mclaw", "mcoll"):
            params = MclawParams(ell, N, cfg.c_N, cfg.k)
        if alg == "mclaw":
            fs = [sample_random_function(params.domain_size, N, rng) for _ in range(ell)]
            out = run_mclaw(fs, params, cfg.backend, rng)
            ok = out.result is not None and verify_claw(fs, out.result)
        else:
            domain = {"mcoll": ell * snap_ceil(N / cfg.c_N), "bht": 2 * N}.get(alg, ell * N)
            f = sample_random_function(domain, N, rng)
            if alg == "mcoll":
                out = run_mcollision_via_claw(f, params, cfg.backend, rng)
            elif alg == "bht":
                out = run_bht(f, None, cfg.backend, rng, cap=cap)
            elif alg == "multigrover":
                out = run_multi_grover(f, ell, cfg.backend, rng, cap=cap)
            else:
                out = run_recmcoll(f, ell, cfg.backend, rng, cap=cap)
            ok = out.result is not None and verify_collision(f, out.result)
    if out.result is not None and not ok:
        log.error("witness failed verification: %s N=%d seed=%d", alg, N, seed)
    return TrialRecord(
        algorithm=alg,
        ell=ell,
        N=N,
        c_N=float(cfg.c_N),
        k=cfg.k,
        seed=seed,
        queries=out.queries,
        aborted=out.aborted,
        success=ok,
        peak_list_size=out.peak_list_size,
        per_stage_queries=out.per_stage_queries,
        witness=None if out.result is None else out.result.to_dict(),
    )


def _run_job(job):
    cfg, N, index = job
    return run_trial(cfg, N, index)


def run_trials(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Run ``cfg.trials`` trials at every ``N``; record order is independent of ``workers``."""
    cfg.validate_backend()
    jobs = [(cfg, N, i) for N in cfg.n_values for i in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (8 * cfg.workers))))
    records = []
    for N in cfg.n_values:
        log.info("%s ell=%d N=2^%g: %d trials", cfg.algorithm, cfg.ell, math.log2(N), cfg.trials)
        records.extend(run_trial(cfg, N, i) for i in range(cfg.trials))
    return records


def fit_loglog(ns: Sequence[float], values: Sequence[float]) -> ScalingFit:
    """Ordinary least squares of ``log2(value)`` on ``log2(n)``."""
    if len(ns) != len(values):
        raise ValueError("ns and values differ in length")
    if len(set(ns)) < 3:
        raise ValueError("a scaling fit needs at least 3 distinct sizes")
    x = np.log2(np.asarray(ns, dtype=float))
    y = np.log2(np.asarray(values, dtype=float))
    if not np.all(np.isfinite(y)):
        raise ValueError("values must be positive")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return ScalingFit(
        points=[(float(a), float(b)) for a, b in zip(x, y)],
        slope=float(slope),
        intercept=float(intercept),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )


def _group_by_n(records: Iterable[TrialRecord]) -> dict[int, list[TrialRecord]]:
    groups: dict[int, list[TrialRecord]] = {}
    for r in records:
        groups.setdefault(r.N, []).append(r)
    return dict(sorted(groups.items()))


def fit_scaling_exponent(
    records: Iterable[TrialRecord], *, metric: str = "queries", min_trials: int = 30
) -> ScalingFit:
    """Fit the growth of the median ``metric`` over non-aborted trials against N."""
    ns, medians = [], []
    for N, group in _group_by_n(records).items():
        kept = [getattr(r, metric) for r in group if not r.aborted]
        if len(kept) < min_trials:
            raise ValueError(f"only {len(kept)} completed trials at N={N}; need {min_trials}")
        ns.append(N)
        medians.append(median(kept))
    return fit_loglog(ns, medians)


def summarize(records: Sequence[TrialRecord], fit: ScalingFit | None) -> dict:
    per_n = []
    for N, group in _group_by_n(records).items():
        done = [r.queries for r in group if not r.aborted]
        r0 = group[0]
        row = {
            "N": N,
            "trials": len(group),
            "aborted": sum(r.aborted for r in group),
            "abort_rate": sum(r.aborted for r in group) / len(group),
            "success_rate": sum(r.success for r in group) / len(group),
            "median_queries": median(done) if done else None,
            "mean_queries": mean(done) if done else None,
            "max_queries": max(r.queries for r in group),
            "median_peak_list_size": median(r.peak_list_size for r in group),
        }
        if r0.algorithm in ("mclaw", "mcoll"):
            row["qlimit"] = query_limit(r0.k, r0.ell, N, r0.c_N)
            row["epsilon"] = bounds.epsilon_bound(r0.ell, N, r0.c_N)
            row["theoretical_success_floor"] = bounds.success_floor(r0.ell, N, r0.c_N, r0.k)
        per_n.append(row)

    summary: dict = {
        "algorithm": records[0].algorithm if records else None,
        "ell": records[0].ell if records else None,
        "c_N": records[0].c_N if records else None,
        "k": records[0].k if records else None,
        "trials": len(records),
        "fit": None if fit is None else fit.to_dict(),
        "measured_slope": None if fit is None else fit.slope,
        "theoretical_exponent": None,
        "theoretical_exponent_value": None,
        "fit_statistic": "median queries of non-aborted trials (means reported alongside)",
        "per_N": per_n,
    }
    if records:
        try:
            e = bounds.theoretical_exponent(records[0].ell, records[0].algorithm)
            summary["theoretical_exponent"] = str(e)
            summary["theoretical_exponent_value"] = float(e)
        except ValueError:
            pass
    return summary


def _bool(text: str) -> bool:
    return text.strip().lower() in ("1", "true", "yes")


def write_csv(records: Iterable[TrialRecord], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([
            r.algorithm, r.ell, r.N, repr(r.c_N), r.k, r.seed, r.queries,
            int(r.aborted), int(r.success), r.peak_list_size,
            json.dumps(r.per_stage_queries, separators=(",", ":")),
        ])


def read_csv(stream) -> list[TrialRecord]:
    out = []
    for row in csv.DictReader(stream):
        out.append(TrialRecord(
            algorithm=row["algorithm"],
            ell=int(row["ell"]),
            N=int(row["N"]),
            c_N=float(row["c_N"]),
            k=int(row["k"]),
            seed=int(row["seed"]),
            queries=int(row["queries"]),
            aborted=_bool(row["aborted"]),
            success=_bool(row["success"]),
            peak_list_size=int(row["peak_list_size"]),
            per_stage_queries=json.loads(row.get("per_stage") or "{}"),
        ))
    return out


def emit_report(
    records: Sequence[TrialRecord],
    fit: ScalingFit | None,
    csv_path: str | Path,
    summary_path: str | Path | None = None,
) -> tuple[Path, Path]:
    """Write one CSV row per trial and a JSON summary next to it."""
    csv_path = Path(csv_path)
    summary_path = Path(summary_path) if summary_path else csv_path.with_suffix(".summary.json")
    buf = io.StringIO()
    write_csv(records, buf)
    csv_path.write_text(buf.getvalue())
    summary_path.write_text(json.dumps(summarize(records, fit), indent=2) + "\n")
    return csv_path, summary_path


def records_to_json(records: Iterable[TrialRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=1)


def witness_from_dict(algorithm: str, data: dict | None):
    if data is None:
        return None
    cls = ClawWitness if algorithm == "mclaw" else CollisionWitness
    return cls(tuple(data["inputs"]), data["y"])
