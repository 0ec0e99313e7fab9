"""Command line entry point: ``multiclaw {run,fit,bounds,accept}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

import yaml

from multiclaw import bounds
from multiclaw.algorithms import list_size_schedule, log2_query_limit, query_limit
from multiclaw.harness import (
    ExperimentConfig,
    emit_report,
    fit_scaling_exponent,
    read_csv,
    records_to_json,
    run_trials,
    summarize,
)

log = logging.getLogger("multiclaw")

# flag name -> ExperimentConfig field
_RUN_FIELDS = {
    "algorithm": "algorithm",
    "ell": "ell",
    "c_n": "c_N",
    "k": "k",
    "trials": "trials",
    "backend": "backend",
    "seed": "seed",
    "cap": "cap",
    "workers": "workers",
}


def load_config(path: str | Path) -> dict:
    """Read a JSON or YAML mapping of experiment settings."""
    data = yaml.safe_load(Path(path).read_text())
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping at top level")
    return data


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    data = load_config(args.config) if args.config else {}
    for flag, name in _RUN_FIELDS.items():
        value = getattr(args, flag)
        if value is not None:
            data[name] = value
    if any(v is not None for v in (args.log_n_min, args.log_n_max, args.log_n_step)):
        lo = args.log_n_min if args.log_n_min is not None else 12
        hi = args.log_n_max if args.log_n_max is not None else 22
        step = args.log_n_step if args.log_n_step is not None else 2
        data.pop("n_values", None)
        data["log_n"] = list(range(lo, hi + 1, step))
    return ExperimentConfig.from_dict(data)


def cmd_run(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    cfg.validate_backend()
    log.info("running %s", cfg)
    records = run_trials(cfg)
    try:
        fit = fit_scaling_exponent(records, min_trials=args.min_trials)
    except ValueError as exc:
        log.warning("no scaling fit: %s", exc)
        fit = None

    if args.format == "csv":
        out = Path(args.out or f"{cfg.algorithm}_ell{cfg.ell}.csv")
        _, summary_path = emit_report(records, fit, out)
        log.info("wrote %s and %s", out, summary_path)
    else:
        payload = {"config": asdict(cfg), "summary": summarize(records, fit),
                   "records": json.loads(records_to_json(records))}
        text = json.dumps(payload, indent=1) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    with open(args.csv, newline="") as fh:
        records = read_csv(fh)
    fit = fit_scaling_exponent(records, metric=args.metric, min_trials=args.min_trials)
    text = json.dumps(summarize(records, fit), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if hasattr(value, "__dataclass_fields__"):
        return asdict(value)
    return value


def cmd_bounds(args: argparse.Namespace) -> int:
    inputs = {k: v for k, v in vars(args).items()
              if k not in {"command", "evaluator", "func", "json", "verbose"}}
    value = args.func(args)
    if args.json:
        print(json.dumps({"evaluator": args.evaluator, "inputs": inputs, "value": _jsonable(value)}))
    else:
        print(_jsonable(value) if not isinstance(value, float) else repr(value))
    return 0


def _qlimit(a):
    if a.log2:
        return log2_query_limit(a.k, a.ell, a.N, a.c_n)
    return query_limit(a.k, a.ell, a.N, a.c_n)


_EVALUATORS = {
    "bbht": (("M", int), ("t", int)),
    "mtqs": (("X", int), ("preimages", int)),
    "epsilon": (("ell", int), ("N", float), ("c_n", float)),
    "floor": (("ell", int), ("N", float), ("c_n", float), ("k", int)),
    "image": (("X", int), ("Y", int)),
    "mcdiarmid": (("M", int), ("lam", float)),
    "hypergeometric": (("n1", int), ("n", int), ("m", int), ("lam", float)),
    "exponent": (("ell", int), ("algorithm", str)),
    "schedule": (("ell", int), ("N", float), ("c_n", float)),
    "qlimit": (("k", int), ("ell", int), ("N", float), ("c_n", float)),
    "resources": (("m", int), ("n", int), ("k", int)),
    "qubits": (("ell", int), ("N", float), ("c_n", float)),
}

_FUNCS = {
    "bbht": lambda a: bounds.bbht_query_bound(a.M, a.t),
    "mtqs": lambda a: bounds.mtqs_query_bound(a.X, a.preimages),
    "epsilon": lambda a: bounds.epsilon_bound(a.ell, a.N, a.c_n),
    "floor": lambda a: bounds.success_floor(a.ell, a.N, a.c_n, a.k),
    "image": lambda a: bounds.image_size_bound(a.X, a.Y),
    "mcdiarmid": lambda a: bounds.mcdiarmid_tail(a.M, a.lam),
    "hypergeometric": lambda a: bounds.hypergeometric_tail(a.n1, a.n, a.m, a.lam),
    "exponent": lambda a: bounds.theoretical_exponent(a.ell, a.algorithm),
    "schedule": lambda a: tuple(list_size_schedule(a.ell, a.N, a.c_n)),
    "qlimit": _qlimit,
    "resources": lambda a: bounds.grover_iteration_resources(a.m, a.n, a.k),
    "qubits": lambda a: bounds.mclaw_qubit_estimate(a.ell, a.N, a.c_n),
}


def cmd_accept(args: argparse.Namespace) -> int:
    from multiclaw.acceptance import AcceptanceSuite

    suite = AcceptanceSuite(quick=args.quick)
    only = {s.strip().upper() for s in args.only.split(",")} if args.only else None
    failed = 0
    for result in suite.run_all(only):
        print(result.line(), flush=True)
        failed += not result.passed
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multiclaw", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a trial battery and write CSV/JSON")
    run.add_argument("--config", help="JSON or YAML file; flags override its values")
    run.add_argument("--algorithm", choices=bounds.ALGORITHMS)
    run.add_argument("--ell", type=int)
    run.add_argument("--log-n-min", type=int)
    run.add_argument("--log-n-max", type=int)
    run.add_argument("--log-n-step", type=int)
    run.add_argument("--c-n", type=float)
    run.add_argument("--k", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--backend", choices=("statevector", "analytic"))
    run.add_argument("--seed", type=int)
    run.add_argument("--cap", type=int)
    run.add_argument("--workers", type=int)
    run.add_argument("--min-trials", type=int, default=30,
                     help="completed trials per N required for a fit")
    run.add_argument("--out")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.set_defaults(func=cmd_run)

    fit = sub.add_parser("fit", help="fit a scaling exponent from a CSV report")
    fit.add_argument("csv")
    fit.add_argument("--metric", choices=("queries", "peak_list_size"), default="queries")
    fit.add_argument("--min-trials", type=int, default=30)
    fit.add_argument("--out")
    fit.set_defaults(func=cmd_fit)

    bnd = sub.add_parser("bounds", help="evaluate a closed-form bound")
    bsub = bnd.add_subparsers(dest="evaluator", required=True)
    for name, params in _EVALUATORS.items():
        p = bsub.add_parser(name)
        for pname, ptype in params:
            p.add_argument(pname, type=ptype)
        if name == "qlimit":
            p.add_argument("--log2", action="store_true", help="N is given as log2 N; print log2 Qlimit")
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=_FUNCS[name], evaluator=name)

    acc = sub.add_parser("accept", help="run the acceptance checks")
    acc.add_argument("--quick", action="store_true", help="fewer trials and smaller N")
    acc.add_argument("--only", help="comma-separated check keys, e.g. C5,C13")
    acc.set_defaults(func=cmd_accept)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "bounds":
            return cmd_bounds(args)
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
