"""Command-line frontend.

Subcommands
-----------
``fetch-check``      verify local dataset files against the built-in manifest
``solve``            run one solver on one dataset and write its trace CSV
``experiment``       run a multi-solver benchmark from a config file
``oracle``           compute and cross-check the ground-truth optimum
``validate-schedule``  dry-run the batch-size schedule admissibility test

Exit codes: 0 success, 1 failed check, 2 bad arguments or config file,
3 data errors, 4 solver precondition failures (including an inadmissible
schedule without ``--override-schedule``), 5 degenerate ground truth.

Config files use INI syntax with sections ``[experiment]``, optional
``[generator]`` or ``[shift]``, and one ``[solver NAME]`` per solver; see
the README for the full schema.  Eigenvalue lists accept repeat notation:
``20, 0.5, 0.05*14``.
"""
from __future__ import annotations

import argparse
import configparser
import math
import re
import sys
from dataclasses import replace

import numpy as np

from .bench import (
    DEFAULT_LAMBDA_GRID,
    EXPERIMENT_KINDS,
    ExperimentConfig,
    GeneratorSpec,
    OracleDegeneracyError,
    SolverSetting,
    compute_w_star,
    run_experiment,
)
from .core import criticality_residual
from .data import (
    DATASET_MANIFEST,
    CovarianceSpec,
    DataFormatError,
    IIDStream,
    OnePassStream,
    ShiftStreamSpec,
    load_any,
    normalize_unit,
    shuffle,
)
from .epca import SUBPROBLEM_BACKENDS, decomp1_problem, decomp2_problem, epca_objective
from .schedules import SampleSchedule, validate_schedule
from .seeding import INIT, make_rng
from .solvers import (
    VARIANTS,
    RunTrace,
    SolverConfig,
    SolverPreconditionError,
    random_ball_point,
    run_variant,
)

__all__ = ["main", "build_parser", "ConfigError"]

_OSDCA_VARIANTS = ("osdca-full", "osdca-exact-g", "osdca-exact-dh")
_SCHEDULE_RE = re.compile(r"^k([0-9]+(?:\.[0-9]+)?)$")


class ConfigError(ValueError):
    """A config file or composite argument violates the schema."""


def _formatter(prog: str) -> argparse.HelpFormatter:
    # Fixed width keeps --help output identical across terminals.
    return argparse.HelpFormatter(prog, width=96)


# ---------------------------------------------------------------------------
# Shared argument helpers


def _parse_schedule(text: str, c: float, cap: int | None) -> SampleSchedule:
    match = _SCHEDULE_RE.match(text.strip())
    if match is None:
        raise ConfigError(
            f"schedule {text!r} not understood; use kP for batch sizes ceil(c*k^P), e.g. k2"
        )
    try:
        return SampleSchedule(c=c, p=float(match.group(1)), cap=cap)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _variant_beta(variant: str, decomposition: int) -> float:
    if variant == "osdca-exact-g":
        return 1.0
    alpha_bound = 1.0 if decomposition == 1 else 0.5
    return min(alpha_bound, 1.0)


def _check_schedule_or_fail(
    schedule: SampleSchedule, variant: str, decomposition: int, override: bool
) -> None:
    if variant not in _OSDCA_VARIANTS:
        return
    check = validate_schedule(schedule, _variant_beta(variant, decomposition))
    if not check.valid and not override:
        raise SolverPreconditionError(
            f"schedule {schedule.label()} rejected for {variant} "
            f"(decomposition {decomposition}): {check.reason}; "
            "pass --override-schedule to run it anyway"
        )


def _parse_eigenvalues(text: str) -> tuple[float, ...]:
    """Parse ``20, 0.5, 0.05*14`` into an eigenvalue tuple."""
    values: list[float] = []
    for raw in text.split(","):
        item = raw.strip()
        if not item:
            raise ConfigError(f"empty entry in eigenvalue list {text!r}")
        if "*" in item:
            value_part, _, count_part = item.partition("*")
            try:
                value = float(value_part)
                count = int(count_part)
            except ValueError as exc:
                raise ConfigError(f"bad eigenvalue entry {item!r}; use value*count") from exc
            if count < 1:
                raise ConfigError(f"repeat count must be >= 1 in {item!r}")
            values.extend([value] * count)
        else:
            try:
                values.append(float(item))
            except ValueError as exc:
                raise ConfigError(f"bad eigenvalue {item!r}") from exc
    if not values:
        raise ConfigError("eigenvalue list is empty")
    return tuple(values)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


# ---------------------------------------------------------------------------
# fetch-check


def _cmd_fetch_check(args) -> int:
    if args.name is None:
        print("name,dimension,train_rows,validation_rows")
        for name, (dim, train_rows, val_rows) in sorted(DATASET_MANIFEST.items()):
            print(f"{name},{dim},{train_rows},{val_rows}")
        return 0
    dim, train_rows, val_rows = DATASET_MANIFEST[args.name]
    if args.train is None and args.validation is None:
        print(f"{args.name}: expect dimension {dim}, {train_rows} train rows, {val_rows} validation rows")
        return 0
    ok = True
    for label, path, want_rows in (("train", args.train, train_rows), ("validation", args.validation, val_rows)):
        if path is None:
            continue
        dataset = load_any(path)
        problems = []
        if dataset.dimension != dim:
            problems.append(f"dimension {dataset.dimension} != {dim}")
        if len(dataset) != want_rows:
            problems.append(f"{len(dataset)} rows != {want_rows}")
        if problems:
            ok = False
            print(f"{args.name} {label} {path}: MISMATCH ({'; '.join(problems)})")
        else:
            print(f"{args.name} {label} {path}: ok ({len(dataset)} x {dataset.dimension})")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# solve


def _build_cli_problem(args, dataset):
    second_moment = None
    if args.solver == "osdca-exact-dh":
        second_moment = dataset.samples.T @ dataset.samples / len(dataset)
    if args.decomposition == 1:
        return decomp1_problem(
            dataset.dimension,
            lam=args.lam,
            second_moment=second_moment,
            assume_pd_second_moment=args.assume_pd,
        )
    smoothness = args.smoothness
    if smoothness is None:
        smoothness = max(float(np.max(np.sum(dataset.samples**2, axis=1))), 1e-12)
    return decomp2_problem(
        dataset.dimension,
        smoothness=smoothness,
        backend=args.backend,
        second_moment=second_moment,
    )


def _write_trace_csv(trace: RunTrace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("iter,samples,seconds,w_norm,objective\n")
        for r in trace.records:
            objective = "" if math.isnan(r.objective) else _fmt(r.objective)
            fh.write(f"{r.k},{r.samples},{_fmt(r.seconds)},{_fmt(r.w_norm)},{objective}\n")


def _cmd_solve(args) -> int:
    schedule = _parse_schedule(args.schedule, args.schedule_c, args.schedule_cap)
    _check_schedule_or_fail(schedule, args.solver, args.decomposition, args.override_schedule)
    if args.data is None:
        raise ConfigError("solve needs --data")
    dataset = load_any(args.data)
    if args.normalize:
        dataset = normalize_unit(dataset)
    problem = _build_cli_problem(args, dataset)
    ordered = dataset if args.no_shuffle else shuffle(dataset, args.seed)
    if args.solver == "dca":
        source = ordered.samples
    elif args.iid:
        source = IIDStream(ordered, args.seed)
    else:
        source = OnePassStream(ordered)
    if args.solver == "dca":
        max_iterations = 400 if args.max_iters is None else args.max_iters
        stop_tolerance = 1e-12 if args.stop_tol is None else args.stop_tol
    else:
        max_iterations = 1_000_000_000 if args.max_iters is None else args.max_iters
        stop_tolerance = 0.0 if args.stop_tol is None else args.stop_tol
    config = SolverConfig(
        variant=args.solver,
        schedule=schedule,
        max_iterations=max_iterations,
        stop_tolerance=stop_tolerance,
        stepsize=args.stepsize,
        stepsize_c=args.stepsize_c,
        seed=args.seed,
        sample_budget=args.budget,
        override_schedule=args.override_schedule,
        eval_every=args.eval_every,
    )
    evaluate = lambda w: epca_objective(w, dataset.samples)
    w0 = random_ball_point(problem.dimension, make_rng(args.seed, INIT))
    trace = run_variant(problem, w0, config, source, evaluate)
    report = criticality_residual(problem, trace.final_w, dataset.samples)
    trace_path = args.trace_out or f"{args.solver}-seed{args.seed}-trace.csv"
    _write_trace_csv(trace, trace_path)
    print(f"solver               {args.solver}")
    print(f"termination          {trace.termination}")
    print(f"iterations           {trace.records[-1].k}")
    print(f"samples consumed     {trace.samples_consumed}")
    print(f"terminal objective   {_fmt(trace.terminal_objective)}")
    print(f"criticality residual {_fmt(report.residual)}")
    print(f"trace written        {trace_path}")
    return 0


# ---------------------------------------------------------------------------
# experiment config files

_EXPERIMENT_KEYS = {
    "kind",
    "name",
    "runs",
    "seed",
    "workers",
    "cadence",
    "output-dir",
    "normalize",
    "train",
    "validation",
    "lambda-grid",
}
_GENERATOR_KEYS = {"eigenvalues", "basis-seed", "train-count", "validation-count", "seed", "normalize"}
_SHIFT_KEYS = {
    "eigenvalues-a",
    "basis-seed-a",
    "eigenvalues-b",
    "basis-seed-b",
    "switch",
    "total",
    "seed",
    "validation-count",
}
_SOLVER_KEYS = {
    "variant",
    "decomposition",
    "lambda",
    "smoothness",
    "backend",
    "schedule",
    "schedule-c",
    "schedule-cap",
    "override-schedule",
    "stepsize",
    "stepsize-c",
    "cadence",
    "stop-tolerance",
    "max-iterations",
    "sample-budget",
    "assume-pd",
    "inner-tolerance",
    "inner-max-iterations",
}

_BOOL_VALUES = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


def _section_get(section, name: str, key: str, cast, default):
    raw = section.get(key)
    if raw is None or raw.strip() == "":
        return default
    raw = raw.strip()
    if cast is bool:
        value = _BOOL_VALUES.get(raw.lower())
        if value is None:
            raise ConfigError(f"[{name}] {key}: expected true/false, got {raw!r}")
        return value
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"[{name}] {key}: {exc}") from exc


def _check_keys(section, name: str, allowed: set[str]) -> None:
    unknown = sorted(set(section.keys()) - allowed)
    if unknown:
        raise ConfigError(f"[{name}] has unknown key {unknown[0]!r}")


def _parse_solver_section(name: str, section) -> SolverSetting:
    _check_keys(section, f"solver {name}", _SOLVER_KEYS)
    variant = section.get("variant")
    if variant is None:
        raise ConfigError(f"[solver {name}] needs variant")
    variant = variant.strip()
    if variant not in VARIANTS:
        raise ConfigError(f"[solver {name}] unknown variant {variant!r}; expected one of {VARIANTS}")
    sec = f"solver {name}"
    schedule = None
    schedule_text = section.get("schedule")
    if schedule_text is not None and schedule_text.strip():
        schedule = _parse_schedule(
            schedule_text,
            _section_get(section, sec, "schedule-c", float, 1.0),
            _section_get(section, sec, "schedule-cap", int, None),
        )
    try:
        return SolverSetting(
            name=name,
            variant=variant,
            decomposition=_section_get(section, sec, "decomposition", int, 1),
            lam=_section_get(section, sec, "lambda", float, 1.0),
            smoothness=_section_get(section, sec, "smoothness", float, None),
            backend=_section_get(section, sec, "backend", str, "inner-dca"),
            schedule=schedule,
            override_schedule=_section_get(section, sec, "override-schedule", bool, False),
            stepsize=_section_get(section, sec, "stepsize", float, 0.005),
            stepsize_c=_section_get(section, sec, "stepsize-c", float, 8.0),
            cadence=_section_get(section, sec, "cadence", int, None),
            stop_tolerance=_section_get(section, sec, "stop-tolerance", float, None),
            max_iterations=_section_get(section, sec, "max-iterations", int, None),
            sample_budget=_section_get(section, sec, "sample-budget", int, None),
            assume_pd=_section_get(section, sec, "assume-pd", bool, False),
            inner_tolerance=_section_get(section, sec, "inner-tolerance", float, 1e-5),
            inner_max_iterations=_section_get(section, sec, "inner-max-iterations", int, 200),
        )
    except ValueError as exc:
        raise ConfigError(f"[solver {name}]: {exc}") from exc


def load_experiment_config(path) -> ExperimentConfig:
    """Parse an experiment config file into an :class:`ExperimentConfig`."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config file {path} is not valid INI: {exc}") from exc
    if not parser.has_section("experiment"):
        raise ConfigError("missing [experiment] section")
    for section_name in parser.sections():
        if section_name in ("experiment", "generator", "shift"):
            continue
        if not section_name.startswith("solver "):
            raise ConfigError(f"unknown section [{section_name}]")
    exp = parser["experiment"]
    _check_keys(exp, "experiment", _EXPERIMENT_KEYS)
    kind = exp.get("kind")
    if kind is None:
        raise ConfigError("[experiment] needs kind")
    kind = kind.strip()
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f"[experiment] unknown kind {kind!r}; expected one of {EXPERIMENT_KINDS}")

    generator = None
    if parser.has_section("generator"):
        gen = parser["generator"]
        _check_keys(gen, "generator", _GENERATOR_KEYS)
        eigen_text = gen.get("eigenvalues")
        if eigen_text is None:
            raise ConfigError("[generator] needs eigenvalues")
        try:
            covariance = CovarianceSpec(
                eigenvalues=_parse_eigenvalues(eigen_text),
                basis_seed=_section_get(gen, "generator", "basis-seed", int, 0),
            )
            generator = GeneratorSpec(
                covariance=covariance,
                train_count=_section_get(gen, "generator", "train-count", int, 10_000),
                validation_count=_section_get(gen, "generator", "validation-count", int, 10_000),
                seed=_section_get(gen, "generator", "seed", int, 0),
                normalize=_section_get(gen, "generator", "normalize", bool, True),
            )
        except ValueError as exc:
            raise ConfigError(f"[generator]: {exc}") from exc

    shift = None
    if parser.has_section("shift"):
        sh = parser["shift"]
        _check_keys(sh, "shift", _SHIFT_KEYS)
        for key in ("eigenvalues-a", "eigenvalues-b", "switch", "total"):
            if sh.get(key) is None:
                raise ConfigError(f"[shift] needs {key}")
        try:
            shift = ShiftStreamSpec(
                covariance_a=CovarianceSpec(
                    eigenvalues=_parse_eigenvalues(sh["eigenvalues-a"]),
                    basis_seed=_section_get(sh, "shift", "basis-seed-a", int, 0),
                ),
                covariance_b=CovarianceSpec(
                    eigenvalues=_parse_eigenvalues(sh["eigenvalues-b"]),
                    basis_seed=_section_get(sh, "shift", "basis-seed-b", int, 1),
                ),
                switch_index=_section_get(sh, "shift", "switch", int, 0),
                total=_section_get(sh, "shift", "total", int, 0),
                seed=_section_get(sh, "shift", "seed", int, 0),
                validation_count=_section_get(sh, "shift", "validation-count", int, 10_000),
            )
        except ValueError as exc:
            raise ConfigError(f"[shift]: {exc}") from exc

    solvers = []
    for section_name in parser.sections():
        if section_name.startswith("solver "):
            solver_name = section_name[len("solver ") :].strip()
            if not solver_name:
                raise ConfigError(f"section [{section_name}] needs a solver name")
            solvers.append(_parse_solver_section(solver_name, parser[section_name]))

    grid_text = exp.get("lambda-grid")
    if grid_text is not None and grid_text.strip():
        try:
            lambda_grid = tuple(float(v.strip()) for v in grid_text.split(","))
        except ValueError as exc:
            raise ConfigError(f"[experiment] lambda-grid: {exc}") from exc
    else:
        lambda_grid = DEFAULT_LAMBDA_GRID

    try:
        return ExperimentConfig(
            experiment=kind,
            train_path=_section_get(exp, "experiment", "train", str, None),
            validation_path=_section_get(exp, "experiment", "validation", str, None),
            generator=generator,
            shift=shift,
            solvers=tuple(solvers),
            n_runs=_section_get(exp, "experiment", "runs", int, 20),
            master_seed=_section_get(exp, "experiment", "seed", int, 0),
            cadence=_section_get(exp, "experiment", "cadence", int, None),
            output_dir=_section_get(exp, "experiment", "output-dir", str, "results"),
            workers=_section_get(exp, "experiment", "workers", int, 1),
            normalize=_section_get(exp, "experiment", "normalize", bool, True),
            lambda_grid=lambda_grid,
            name=_section_get(exp, "experiment", "name", str, ""),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _cmd_experiment(args) -> int:
    config = load_experiment_config(args.config)
    updates = {}
    if args.output_dir is not None:
        updates["output_dir"] = args.output_dir
    if args.runs is not None:
        updates["n_runs"] = args.runs
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.workers is not None:
        updates["workers"] = args.workers
    if updates:
        try:
            config = replace(config, **updates)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    result = run_experiment(config)
    print(f"experiment {result.name} ({result.experiment}), {config.n_runs} runs")
    if result.w_star_pre is not None:
        print(
            f"ground truth pre-change:  F* = {_fmt(result.w_star_pre.f_star)} "
            f"(eigen cosine {result.w_star_pre.cosine:.9f})"
        )
        print(
            f"ground truth post-change: F* = {_fmt(result.w_star.f_star)} "
            f"(eigen cosine {result.w_star.cosine:.9f})"
        )
    else:
        print(
            f"ground truth: F* = {_fmt(result.w_star.f_star)} "
            f"(eigen cosine {result.w_star.cosine:.9f})"
        )
    print(f"{'solver':28s} {'terminal mean':>14s} {'terminal std':>14s} {'mean seconds':>13s}")
    for curve in result.curves:
        print(
            f"{curve.solver:28s} {curve.terminal_mean:14.6e} "
            f"{curve.terminal_std:14.6e} {curve.terminal_seconds:13.4f}"
        )
    print(f"artifacts: {result.csv_path} {result.svg_path}")
    return 0


# ---------------------------------------------------------------------------
# oracle


def _cmd_oracle(args) -> int:
    dataset = load_any(args.data)
    if args.normalize:
        dataset = normalize_unit(dataset)
    report = compute_w_star(dataset, seed=args.seed)
    print(f"samples              {len(dataset)} x {dataset.dimension}")
    print(f"top eigenvalue       {_fmt(report.eigen_value)}")
    print(f"eigen gap            {_fmt(report.eigen_gap)}")
    print(f"F*                   {_fmt(report.f_star)}")
    print(f"eigen cosine         {report.cosine:.12f}")
    print(f"cross-check gap      {_fmt(report.objective_gap)}")
    print(f"degenerate           {'yes' if report.degenerate else 'no'}")
    if report.degenerate:
        return 5
    return 0


# ---------------------------------------------------------------------------
# validate-schedule


def _cmd_validate_schedule(args) -> int:
    schedule = _parse_schedule(args.schedule, args.schedule_c, args.schedule_cap)
    beta = _variant_beta(args.variant, args.decomposition)
    check = validate_schedule(schedule, beta)
    if check.valid:
        print(f"valid: {schedule.label()} admissible for {args.variant} (decomposition {args.decomposition})")
        return 0
    print(f"invalid: {check.reason}")
    return 4


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcstream",
        description="Streaming difference-of-convex solvers with an expected-PCA benchmark harness.",
        epilog=(
            "exit codes: 0 success, 1 failed check, 2 bad arguments or config, "
            "3 data errors, 4 solver precondition failures, 5 degenerate ground truth"
        ),
        formatter_class=_formatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    fetch = sub.add_parser(
        "fetch-check",
        help="verify local dataset files against the built-in manifest",
        description=(
            "Check that locally downloaded dataset files match the expected dimension and "
            "row counts.  Without --name, print the manifest.  Downloads are never performed."
        ),
        formatter_class=_formatter,
    )
    fetch.add_argument("--name", choices=sorted(DATASET_MANIFEST), help="manifest entry to check against")
    fetch.add_argument("--train", metavar="PATH", help="training split file")
    fetch.add_argument("--validation", metavar="PATH", help="validation split file")
    fetch.set_defaults(func=_cmd_fetch_check)

    solve = sub.add_parser(
        "solve",
        help="run one solver on one dataset and write its trace CSV",
        description=(
            "Run a single solver on a dataset file, print the terminal objective and the "
            "criticality residual, and write the iteration trace as CSV."
        ),
        formatter_class=_formatter,
    )
    solve.add_argument("--solver", required=True, choices=VARIANTS, help="solver variant")
    solve.add_argument("--data", metavar="PATH", help="dataset file (text or binary cache)")
    solve.add_argument("--decomposition", type=int, choices=(1, 2), default=1, help="objective split (default 1)")
    solve.add_argument("--lambda", dest="lam", type=float, default=1.0, help="first-split weight (default 1)")
    solve.add_argument(
        "--smoothness",
        type=float,
        default=None,
        help="second-split weight; default: largest squared sample norm",
    )
    solve.add_argument(
        "--backend",
        choices=SUBPROBLEM_BACKENDS,
        default="inner-dca",
        help="second-split subproblem solver (default inner-dca)",
    )
    solve.add_argument("--schedule", default="k2", help="batch-size growth, kP for ceil(c*k^P) (default k2)")
    solve.add_argument("--schedule-c", type=float, default=1.0, help="batch-size factor c (default 1)")
    solve.add_argument("--schedule-cap", type=int, default=None, help="cap batch sizes at this value")
    solve.add_argument(
        "--override-schedule",
        action="store_true",
        help="run even if the schedule fails the admissibility test",
    )
    solve.add_argument("--assume-pd", action="store_true", help="admit lambda 0 (second moment asserted positive definite)")
    solve.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    solve.add_argument("--iid", action="store_true", help="resample with replacement instead of one pass")
    solve.add_argument("--no-shuffle", action="store_true", help="keep file row order")
    solve.add_argument("--no-normalize", dest="normalize", action="store_false", help="skip unit normalization")
    solve.add_argument("--budget", type=int, default=None, help="total sample budget")
    solve.add_argument("--max-iters", type=int, default=None, help="iteration cap (default: 400 for dca, unlimited otherwise)")
    solve.add_argument(
        "--stop-tol",
        type=float,
        default=None,
        help="stop when the iterate moves less than this (default: 1e-12 for dca, off otherwise)",
    )
    solve.add_argument("--stepsize", type=float, default=0.005, help="constant subgradient stepsize (default 0.005)")
    solve.add_argument("--stepsize-c", type=float, default=8.0, help="diminishing stepsize numerator (default 8)")
    solve.add_argument("--eval-every", type=int, default=1, help="record the objective every N iterations (default 1)")
    solve.add_argument("--trace-out", metavar="PATH", help="trace CSV path (default SOLVER-seedN-trace.csv)")
    solve.set_defaults(func=_cmd_solve)

    experiment = sub.add_parser(
        "experiment",
        help="run a multi-solver benchmark from a config file",
        description=(
            "Run every solver in the config file across seeded runs, write the curve CSV and "
            "SVG into the output directory, and print a terminal summary table."
        ),
        formatter_class=_formatter,
    )
    experiment.add_argument("--config", required=True, metavar="PATH", help="experiment config file")
    experiment.add_argument("--output-dir", metavar="DIR", help="override the config's output directory")
    experiment.add_argument("--runs", type=int, help="override the number of runs")
    experiment.add_argument("--seed", type=int, help="override the master seed")
    experiment.add_argument("--workers", type=int, help="override the worker count")
    experiment.set_defaults(func=_cmd_experiment)

    oracle = sub.add_parser(
        "oracle",
        help="compute and cross-check the ground-truth optimum of a dataset",
        description=(
            "Compute the best full-batch solution of a dataset and cross-check it against the "
            "power-iteration eigenpair.  Exits 5 when the top eigenpair is degenerate."
        ),
        formatter_class=_formatter,
    )
    oracle.add_argument("--data", required=True, metavar="PATH", help="dataset file")
    oracle.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    oracle.add_argument("--no-normalize", dest="normalize", action="store_false", help="skip unit normalization")
    oracle.set_defaults(func=_cmd_oracle)

    validate = sub.add_parser(
        "validate-schedule",
        help="dry-run the batch-size schedule admissibility test",
        description=(
            "Check whether a batch-size schedule satisfies the summability condition required "
            "by the streaming solvers.  Exits 4 when it does not."
        ),
        formatter_class=_formatter,
    )
    validate.add_argument("--schedule", required=True, help="batch-size growth, kP for ceil(c*k^P)")
    validate.add_argument("--schedule-c", type=float, default=1.0, help="batch-size factor c (default 1)")
    validate.add_argument(
        "--variant",
        choices=_OSDCA_VARIANTS,
        default="osdca-full",
        help="solver variant the schedule is meant for (default osdca-full)",
    )
    validate.add_argument("--decomposition", type=int, choices=(1, 2), default=1, help="objective split (default 1)")
    validate.add_argument("--schedule-cap", type=int, default=None, help="cap batch sizes at this value")
    validate.set_defaults(func=_cmd_validate_schedule)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except OracleDegeneracyError as exc:
        print(f"ground-truth error: {exc}", file=sys.stderr)
        return 5
    except SolverPreconditionError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 4
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
