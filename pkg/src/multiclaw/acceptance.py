"""End-to-end acceptance checks.

Each check returns a :class:`CheckResult`. Trial batteries are run once per
:class:`AcceptanceSuite` and shared between the checks that read them.
``quick=True`` shrinks trial counts and sizes for smoke runs; tolerances
are never changed.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import mean, median
from typing import Callable

import numpy as np
from scipy import stats

from multiclaw import bounds
from multiclaw.algorithms import list_size_schedule, query_limit
from multiclaw.functions import image_size, sample_random_function
from multiclaw.grover import (
    Backend,
    GroverState,
    MaskSearch,
    PreimageSearch,
    QueryLedger,
    mtqs_search,
    run_bbht,
    run_grover_statevector,
    sample_grover_analytic,
)
from multiclaw.harness import ExperimentConfig, TrialRecord, fit_scaling_exponent, run_trials

log = logging.getLogger(__name__)

SLACK = 1.10  # empirical means may exceed an expectation bound by 10%


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: str
    measured: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.key}: {self.title} -- {self.detail}"


BATTERIES = (
    "mclaw2", "mclaw3", "mclaw2_floor", "mclaw4_cmp",
    "recm2", "recm3", "recm4", "mg2", "mg4_cmp",
)


def _pow2(lo: int, hi: int, step: int = 2) -> list[int]:
    return [2**e for e in range(lo, hi + 1, step)]


class AcceptanceSuite:
    def __init__(self, *, quick: bool = False, seed: int = 20240501):
        self.quick = quick
        self.seed = seed
        self._batteries: dict[str, list[TrialRecord]] = {}

    # -- batteries -------------------------------------------------------

    def _trials(self, n: int) -> int:
        return max(30, n // 5) if self.quick else n

    def battery(self, name: str) -> list[TrialRecord]:
        if name not in self._batteries:
            cfg = self._battery_config(name)
            started = time.perf_counter()
            self._batteries[name] = run_trials(cfg)
            log.info("battery %s: %.1fs", name, time.perf_counter() - started)
        return self._batteries[name]

    def _battery_config(self, name: str) -> ExperimentConfig:
        q = self.quick
        specs = {  # name -> (algorithm, ell, N values, full trial count)
            "mclaw2": ("mclaw", 2, _pow2(12, 18 if q else 22), 200),
            "mclaw3": ("mclaw", 3, _pow2(12, 18 if q else 24), 200),
            "mclaw2_floor": ("mclaw", 2, [2**18], 500),
            "mclaw4_cmp": ("mclaw", 4, [2**20], 200),
            "recm2": ("recmcoll", 2, _pow2(12, 20), 200),
            "recm3": ("recmcoll", 3, _pow2(12, 20), 200),
            "recm4": ("recmcoll", 4, _pow2(12, 20), 200),
            "mg2": ("multigrover", 2, _pow2(10, 16), 200),
            "mg4_cmp": ("multigrover", 4, [2**20], 200),
        }
        alg, ell, ns, trials = specs[name]
        return ExperimentConfig(
            algorithm=alg, ell=ell, n_values=ns, c_N=1.0, k=4,
            trials=self._trials(trials), backend="analytic",
            seed=self.seed + sum(map(ord, name)),
        )

    # -- criteria -------------------------------------------------------

    def _slope_check(self, key, title, battery, target, tol, metric="queries"):
        fit = fit_scaling_exponent(self.battery(battery), metric=metric)
        ok = abs(fit.slope - float(target)) <= tol
        return CheckResult(
            key, title, ok,
            f"slope {fit.slope:.4f} vs {target} = {float(target):.4f} +- {tol}",
            {"slope": fit.slope, "target": float(target), "points": fit.points},
        )

    def c01_mclaw2_exponent(self):
        return self._slope_check("C1", "Mclaw ell=2 query exponent", "mclaw2", Fraction(1, 3), 0.05)

    def c02_mclaw3_exponent(self):
        return self._slope_check("C2", "Mclaw ell=3 query exponent", "mclaw3", Fraction(3, 7), 0.05)

    def c03_exponent_separation(self):
        s2 = fit_scaling_exponent(self.battery("mclaw2")).slope
        s3 = fit_scaling_exponent(self.battery("mclaw3")).slope
        gap = s3 - s2
        return CheckResult("C3", "ell=3 slope exceeds ell=2 slope", gap >= 0.05,
                           f"gap {gap:.4f} (need >= 0.05)", {"gap": gap})

    def c04_success_floor(self):
        recs = self.battery("mclaw2_floor")
        N = recs[0].N
        eps = bounds.epsilon_bound(2, N, 1.0)
        need = 1 - eps - 1 / 4 - 0.05
        rate = sum(r.success for r in recs) / len(recs)
        return CheckResult("C4", "Mclaw ell=2 success rate at N=2^18", rate >= need,
                           f"rate {rate:.3f} over {len(recs)} trials, need >= {need:.4f} (eps={eps:.4f})",
                           {"rate": rate, "epsilon": eps, "threshold": need})

    def c05_bbht_bound(self):
        trials = self._trials(1000)
        details, ok, measured = [], True, {}
        for M, t in [(100, 20), (1000, 100), (4096, 256)]:
            rng = np.random.default_rng([self.seed, M, t])
            problem = MaskSearch.from_targets(M, range(t))
            totals = []
            for _ in range(trials):
                ledger = QueryLedger()
                x = run_bbht(problem, ledger, rng, Backend.ANALYTIC)
                ok &= problem.is_target(x)
                totals.append(ledger.total)
            bound = bounds.bbht_query_bound(M, t)[0]
            m = mean(totals)
            ok &= m <= bound * SLACK
            measured[f"{M},{t}"] = {"mean": m, "bound": bound}
            details.append(f"({M},{t}) mean {m:.2f} <= {bound * SLACK:.2f}")
        return CheckResult("C5", "BBHT mean queries under the expectation bound", ok,
                           "; ".join(details), measured)

    def c06_mtqs_bound(self):
        trials = self._trials(1000)
        details, ok, measured = [], True, {}
        X = 1024
        for pre in (8, 32, 128):
            rng = np.random.default_rng([self.seed, pre])
            totals = []
            for _ in range(trials):
                f = sample_random_function(X, X, rng)
                targets = _targets_with_preimages(f, pre, rng)
                problem = PreimageSearch(f, targets)
                assert problem.target_count == pre
                ledger = QueryLedger()
                x = mtqs_search(problem, ledger, rng, Backend.ANALYTIC)
                ok &= f(x) in targets
                totals.append(ledger.total)
            bound = bounds.mtqs_query_bound(X, pre)
            m = mean(totals)
            ok &= m <= bound * SLACK
            measured[str(pre)] = {"mean": m, "bound": bound}
            details.append(f"|f^-1|={pre}: mean {m:.2f} <= {bound * SLACK:.2f}")
        return CheckResult("C6", "multi-target search mean queries under its bound", ok,
                           "; ".join(details), measured)

    def c07_backend_equivalence(self):
        shots = 10_000
        M = 64
        worst_p, ok = 1.0, True
        for t in (1, 2, 4):
            problem = MaskSearch.from_targets(M, range(t))
            for j in range(6):
                rng = np.random.default_rng([self.seed, t, j])
                hits = {}
                for name, sampler in (("sv", run_grover_statevector), ("an", sample_grover_analytic)):
                    ledger = QueryLedger()
                    hits[name] = sum(
                        problem.is_target(sampler(problem, j, ledger, rng)) for _ in range(shots)
                    )
                    ok &= ledger.total == shots * (j + 1)
                table = [[hits["sv"], shots - hits["sv"]], [hits["an"], shots - hits["an"]]]
                p = _two_sample_p(table)
                worst_p = min(worst_p, p)
                ok &= p > 0.01
        state = GroverState(4)
        state.iterate(np.array([False, False, True, False]))
        exact = float(state.probabilities()[2])
        ok &= abs(exact - 1) <= 1e-9
        return CheckResult("C7", "statevector and analytic backends agree", ok,
                           f"min p-value {worst_p:.4f} (need > 0.01); M=4 exact hit prob {exact:.12f}",
                           {"min_p": worst_p, "exact": exact})

    def c08_witness_soundness(self):
        for name in BATTERIES:
            self.battery(name)
        bad = sum(
            1 for recs in self._batteries.values() for r in recs if not r.aborted and not r.success
        )
        checked = sum(1 for recs in self._batteries.values() for r in recs if not r.aborted)
        return CheckResult("C8", "every returned witness verifies", bad == 0 and checked > 0,
                           f"{bad} failures among {checked} witnesses from {len(self._batteries)} batteries",
                           {"failures": bad, "checked": checked})

    def c09_cap_soundness(self):
        ok, details = True, []
        for N, recs in _by_n(self.battery("mclaw2")).items():
            eps = bounds.epsilon_bound(2, N, 1.0)
            frac = sum(r.aborted for r in recs) / len(recs)
            limit = query_limit(4, 2, N, 1.0)
            over = sum(r.queries > limit for r in recs)
            ok &= frac <= eps + 0.25 + 0.05 and over == 0
            details.append(f"2^{int(math.log2(N))}: abort {frac:.3f}")
        return CheckResult("C9", "abort fraction within the Markov bound, no run over Qlimit", ok,
                           ", ".join(details))

    def c10_image_size(self):
        n = self._trials(1000)
        rng = np.random.default_rng([self.seed, 10])
        threshold = bounds.image_size_bound(1024, 1024)
        below = sum(image_size(sample_random_function(1024, 1024, rng)) < threshold for _ in range(n))
        frac = below / n
        limit = 2 / 1024 + 0.01
        return CheckResult("C10", "image size of random functions", frac <= limit,
                           f"{below}/{n} below {threshold:.2f}; fraction {frac:.4f} <= {limit:.4f}",
                           {"fraction": frac, "threshold": threshold})

    def c11_recmcoll(self):
        s2 = fit_scaling_exponent(self.battery("recm2")).slope
        s3 = fit_scaling_exponent(self.battery("recm3")).slope
        ok = abs(s2 - 1 / 3) <= 0.05 and abs(s3 - 4 / 9) <= 0.06
        peaks = {}
        for ell in (2, 3, 4):
            peaks[ell] = fit_scaling_exponent(
                self.battery(f"recm{ell}"), metric="peak_list_size"
            ).slope
            ok &= peaks[ell] <= 1 / 3 + 0.05
        peak_txt = ", ".join(f"ell={e}: {s:.3f}" for e, s in peaks.items())
        return CheckResult(
            "C11", "recursive finder exponents and list growth", ok,
            f"slope ell=2 {s2:.4f} (1/3 +- 0.05), ell=3 {s3:.4f} (4/9 +- 0.06); "
            f"peak-list slopes {peak_txt} (<= {1/3 + 0.05:.4f})",
            {"slope2": s2, "slope3": s3, "peak_slopes": peaks},
        )

    def c12a_multigrover_exponent(self):
        return self._slope_check("C12a", "Multi-Grover ell=2 query exponent", "mg2", Fraction(1, 2), 0.05)

    def c12b_mclaw_beats_multigrover(self):
        mc = median(r.queries for r in self.battery("mclaw4_cmp") if not r.aborted)
        mg = median(r.queries for r in self.battery("mg4_cmp") if not r.aborted)
        return CheckResult("C12b", "Mclaw ell=4 median below Multi-Grover ell=4 at N=2^20", mc < mg,
                           f"Mclaw median {mc:g} vs Multi-Grover median {mg:g}",
                           {"mclaw_median": mc, "multigrover_median": mg})

    def c13_unit_values(self):
        got = {
            "bbht(100,20)": bounds.bbht_query_bound(100, 20)[0],
            "mtqs(1000,50)": bounds.mtqs_query_bound(1000, 50),
            "schedule(3,128,1)": tuple(list_size_schedule(3, 128, 1)),
            "qlimit(2,2,512,1)": query_limit(2, 2, 512, 1),
        }
        want = {
            "bbht(100,20)": 10.0,
            "mtqs(1000,50)": 90.0,
            "schedule(3,128,1)": (32.0, 8.0, 2.0, 1.0),
            "qlimit(2,2,512,1)": 5408,
        }
        ok = got == want
        return CheckResult("C13", "bound evaluator unit values", ok,
                           ", ".join(f"{k}={v}" for k, v in got.items()))

    def checks(self) -> list[Callable[[], CheckResult]]:
        return [
            self.c01_mclaw2_exponent, self.c02_mclaw3_exponent, self.c03_exponent_separation,
            self.c04_success_floor, self.c05_bbht_bound, self.c06_mtqs_bound,
            self.c07_backend_equivalence, self.c09_cap_soundness, self.c10_image_size,
            self.c11_recmcoll, self.c12a_multigrover_exponent, self.c12b_mclaw_beats_multigrover,
            self.c13_unit_values, self.c08_witness_soundness,
        ]

    def run_all(self, only: set[str] | None = None) -> list[CheckResult]:
        results = []
        for check in self.checks():
            key = check.__name__.split("_")[0].upper()
            if only and key not in only:
                continue
            results.append(check())
        return results


def _by_n(records):
    out: dict[int, list[TrialRecord]] = {}
    for r in records:
        out.setdefault(r.N, []).append(r)
    return out


def _two_sample_p(table) -> float:
    table = np.asarray(table)
    if (table[:, 1] == 0).all() or (table[:, 0] == 0).all():
        # both samples unanimous and identical
        return 1.0
    return float(stats.chi2_contingency(table, correction=False).pvalue)


def _targets_with_preimages(f, count: int, rng) -> list[int]:
    """Range values whose preimages number exactly ``count`` in total."""
    counts = f.preimage_counts
    while True:
        chosen, total = [], 0
        for y in rng.permutation(f.range_size):
            c = int(counts[y])
            if c and total + c <= count:
                chosen.append(int(y))
                total += c
                if total == count:
                    return chosen
