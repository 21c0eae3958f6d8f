"""Experiment orchestration: multi-run suboptimality benchmarks.

An experiment binds a dataset (files, a Gaussian generator, or a
covariance-shift stream) to a list of solver settings, runs every solver
``n_runs`` times with per-run seeds derived from the master seed, and
reports suboptimality F(w) - F(w*) against a ground truth w* computed on
the validation set.  All solvers are scored with the same validation
objective (the negative half mean squared projection) regardless of which
internal decomposition they iterate on, so curves are directly comparable.

Artifacts: one CSV (schema
``experiment,solver,run,iter,samples,seconds,objective,suboptimality``)
and one SVG (log-scale suboptimality versus mean wall-clock seconds) per
experiment.  Reruns with the same master seed reproduce the CSV byte for
byte except for the ``seconds`` column; :func:`canonicalize_csv` strips
that column for bitwise comparisons.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .core import DcProblem, Vector
from .data import (
    CovarianceSpec,
    Dataset,
    OnePassStream,
    ShiftStreamSpec,
    gen_gaussian,
    gen_shift_stream,
    load_any,
    normalize_unit,
    shuffle,
)
from .epca import decomp1_problem, decomp2_problem, epca_objective, top_eigvec_oracle
from .schedules import SampleSchedule
from .seeding import DATA, INIT, ORACLE, child_seed, make_rng
from .solvers import (
    VARIANTS,
    RunTrace,
    SolverConfig,
    random_ball_point,
    run_variant,
)

__all__ = [
    "EXPERIMENT_KINDS",
    "DEFAULT_LAMBDA_GRID",
    "OracleDegeneracyError",
    "WStarReport",
    "compute_w_star",
    "GeneratorSpec",
    "SolverSetting",
    "ExperimentConfig",
    "CurvePoint",
    "SuboptimalityCurve",
    "GapSummary",
    "summarize_gap",
    "ExperimentResult",
    "run_experiment",
    "emit_csv",
    "canonicalize_csv",
    "emit_svg",
]

EXPERIMENT_KINDS = (
    "compare-solvers",
    "lambda-sweep",
    "subproblem-backends",
    "adaptivity",
)

# Weights for the regularization sweep; 0 is the extreme case that needs
# a positive-definite second moment to remain meaningful.
DEFAULT_LAMBDA_GRID = (0.0, 0.01, 0.1, 1.0, 5.0, 20.0)

# Floor applied to suboptimality on log plots only (runs that hit F*
# exactly would otherwise fall off the axis).
_LOG_PLOT_FLOOR = 1e-16

_CSV_HEADER = "experiment,solver,run,iter,samples,seconds,objective,suboptimality"


class OracleDegeneracyError(RuntimeError):
    """The ground-truth eigenpair is ill-separated; suboptimality curves
    against a single w* would be meaningless."""


# ---------------------------------------------------------------------------
# Ground truth


@dataclass(frozen=True)
class WStarReport:
    """Ground truth for one validation set, with its cross-check.

    ``w_star``/``f_star`` come from the best of several full-batch DCA
    runs; ``eigen_value``/``cosine``/``objective_gap`` record the
    agreement with the independent power-iteration oracle.
    """

    w_star: Vector
    f_star: float
    cosine: float
    eigen_value: float
    eigen_gap: float
    degenerate: bool
    objective_gap: float

    @property
    def agreement(self) -> bool:
        return self.cosine >= 1.0 - 1e-6 and self.objective_gap <= 1e-8


def compute_w_star(
    validation,
    seed: int = 0,
    tolerance: float = 1e-10,
    max_iterations: int = 2000,
    starts: int = 5,
) -> WStarReport:
    """Ground-truth optimum of the validation empirical objective.

    Runs full-batch DCA (first decomposition, weight 1) from ``starts``
    seeded ball points, keeps the best final objective, and cross-checks
    direction and value against the power-iteration eigen oracle.  A
    degenerate top eigenpair is reported in the ``degenerate`` flag, not
    raised; F* stays well defined even then.
    """
    samples = validation.samples if isinstance(validation, Dataset) else np.asarray(validation, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise ValueError(f"validation needs a nonempty (n, m) sample array, got shape {samples.shape}")
    dim = samples.shape[1]
    problem = decomp1_problem(dim, lam=1.0)
    config = SolverConfig(
        variant="dca",
        stop_tolerance=tolerance,
        max_iterations=max_iterations,
        seed=seed,
    )
    best_w: Vector | None = None
    best_f = math.inf
    for s in range(starts):
        w0 = random_ball_point(dim, make_rng(seed, ORACLE, s))
        trace = run_variant(problem, w0, config, samples)
        f = epca_objective(trace.final_w, samples)
        if f < best_f:
            best_f = f
            best_w = trace.final_w
    eigen = top_eigvec_oracle(samples)
    norm = float(np.linalg.norm(best_w))
    cosine = abs(float(best_w @ eigen.vector)) / norm if norm > 0 else 0.0
    return WStarReport(
        w_star=best_w,
        f_star=best_f,
        cosine=cosine,
        eigen_value=eigen.value,
        eigen_gap=eigen.gap,
        degenerate=eigen.degenerate,
        objective_gap=abs(best_f + eigen.value / 2.0),
    )


# ---------------------------------------------------------------------------
# Configuration


@dataclass(frozen=True)
class GeneratorSpec:
    """Synthetic i.i.d. Gaussian data with a planted covariance spectrum."""

    covariance: CovarianceSpec
    train_count: int
    validation_count: int
    seed: int = 0
    normalize: bool = True

    def __post_init__(self):
        if self.train_count < 1 or self.validation_count < 1:
            raise ValueError(
                f"generator counts must be >= 1, got train={self.train_count} "
                f"validation={self.validation_count}"
            )

    def materialize(self) -> tuple[Dataset, Dataset]:
        train = gen_gaussian(
            self.covariance, self.train_count, make_rng(self.seed, DATA, 0), self.normalize
        )
        validation = gen_gaussian(
            self.covariance, self.validation_count, make_rng(self.seed, DATA, 1), self.normalize
        )
        return train, validation


@dataclass(frozen=True)
class SolverSetting:
    """One solver entry of an experiment.

    ``schedule`` defaults per decomposition (quadratic growth for the
    first, cubic for the second, matching each decomposition's growth
    requirement).  ``cadence`` defaults to every iteration for batch
    solvers and every 100 iterations for the subgradient baselines.
    ``smoothness`` of the second decomposition defaults to the largest
    squared sample norm seen in the bound data (1 for unit-normalized
    samples).  ``assume_pd`` admits weight 0 on the caller's assertion
    that the data second moment is positive definite.
    """

    name: str
    variant: str
    decomposition: int = 1
    lam: float = 1.0
    smoothness: float | None = None
    backend: str = "inner-dca"
    schedule: SampleSchedule | None = None
    override_schedule: bool = False
    stepsize: float = 0.005
    stepsize_c: float = 8.0
    cadence: int | None = None
    stop_tolerance: float | None = None
    max_iterations: int | None = None
    sample_budget: int | None = None
    assume_pd: bool = False
    inner_tolerance: float = 1e-5
    inner_max_iterations: int = 200

    def __post_init__(self):
        if not self.name:
            raise ValueError("solver setting needs a nonempty name")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown solver variant {self.variant!r}; expected one of {VARIANTS}")
        if self.decomposition not in (1, 2):
            raise ValueError(f"decomposition must be 1 or 2, got {self.decomposition}")
        if self.cadence is not None and self.cadence < 1:
            raise ValueError(f"cadence must be >= 1 when set, got {self.cadence}")

    def resolved_schedule(self) -> SampleSchedule:
        if self.schedule is not None:
            return self.schedule
        return SampleSchedule(1, 2.0) if self.decomposition == 1 else SampleSchedule(1, 3.0)

    def resolved_cadence(self, config_cadence: int | None) -> int:
        if self.cadence is not None:
            return self.cadence
        if config_cadence is not None:
            return config_cadence
        return 100 if self.variant.startswith("pss") else 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to run one experiment.

    Exactly one dataset binding applies: ``train_path``/``validation_path``
    or ``generator`` for the three i.i.d. experiment kinds, ``shift`` for
    the adaptivity kind.  An empty ``solvers`` tuple selects the kind's
    standard lineup.  Every run derives its seeds from
    ``(master_seed, run index)`` only, so solver lists and worker counts
    never change the data any run sees.
    """

    experiment: str
    train_path: str | None = None
    validation_path: str | None = None
    generator: GeneratorSpec | None = None
    shift: ShiftStreamSpec | None = None
    solvers: tuple[SolverSetting, ...] = ()
    n_runs: int = 20
    master_seed: int = 0
    cadence: int | None = None
    output_dir: str = "results"
    workers: int = 1
    normalize: bool = True
    lambda_grid: tuple[float, ...] = DEFAULT_LAMBDA_GRID
    name: str = ""

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_KINDS:
            raise ValueError(
                f"unknown experiment kind {self.experiment!r}; expected one of {EXPERIMENT_KINDS}"
            )
        if self.n_runs < 1:
            raise ValueError(f"n_runs must be >= 1, got {self.n_runs}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.cadence is not None and self.cadence < 1:
            raise ValueError(f"cadence must be >= 1 when set, got {self.cadence}")
        if self.experiment == "adaptivity":
            if self.shift is None:
                raise ValueError("adaptivity experiments need a shift-stream spec")
        else:
            have_paths = self.train_path is not None and self.validation_path is not None
            if not have_paths and self.generator is None:
                raise ValueError(
                    f"{self.experiment} experiments need train/validation paths or a generator spec"
                )
        if not self.lambda_grid:
            raise ValueError("lambda grid must be nonempty")

    @property
    def experiment_name(self) -> str:
        return self.name or self.experiment


def _default_solvers(config: ExperimentConfig) -> tuple[SolverSetting, ...]:
    kind = config.experiment
    if kind == "compare-solvers":
        return (
            SolverSetting(name="osdca-1", variant="osdca-exact-g", decomposition=1, lam=1.0),
            SolverSetting(name="osdca-2", variant="osdca-full", decomposition=2),
            SolverSetting(name="pss-constant", variant="pss-constant"),
            SolverSetting(name="pss-diminishing", variant="pss-diminishing"),
        )
    if kind == "lambda-sweep":
        return tuple(
            SolverSetting(
                name=f"lambda={lam:g}",
                variant="osdca-exact-g",
                decomposition=1,
                lam=lam,
                assume_pd=(lam == 0.0),
            )
            for lam in config.lambda_grid
        )
    if kind == "subproblem-backends":
        return (
            SolverSetting(
                name="osdca-2-inner-dca",
                variant="osdca-full",
                decomposition=2,
                backend="inner-dca",
            ),
            SolverSetting(
                name="osdca-2-projected-gradient",
                variant="osdca-full",
                decomposition=2,
                backend="projected-gradient",
            ),
        )
    return (SolverSetting(name="osdca-1", variant="osdca-exact-g", decomposition=1, lam=1.0),)


# ---------------------------------------------------------------------------
# Curves


@dataclass(frozen=True)
class CurvePoint:
    """One aligned point of a curve: mean wall clock (ns), cumulative
    samples, mean suboptimality, and the per-run suboptimality values."""

    wall_clock_ns: int
    samples: int
    mean_suboptimality: float
    per_run: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class SuboptimalityCurve:
    """Aligned multi-run suboptimality trace for one solver.

    Rows of the 2-D arrays are runs; columns are recorded iterations
    (identical ``iters``/``samples`` across runs by construction).
    Suboptimality is measured against ``f_star``; the adaptivity
    experiment switches to the post-change ground truth once cumulative
    samples pass ``switch_samples`` (``f_star_pre`` holds the pre-change
    value).  Values stay above -1e-9 because w* is the validation optimum
    up to solver tolerance.
    """

    experiment: str
    solver: str
    f_star: float
    w_star_cosine: float
    iters: np.ndarray
    samples: np.ndarray
    seconds: np.ndarray
    objectives: np.ndarray
    suboptimality: np.ndarray
    f_star_pre: float | None = None
    switch_samples: int | None = None

    @property
    def n_runs(self) -> int:
        return self.objectives.shape[0]

    @property
    def mean_suboptimality(self) -> np.ndarray:
        return self.suboptimality.mean(axis=0)

    @property
    def mean_seconds(self) -> np.ndarray:
        return self.seconds.mean(axis=0)

    @property
    def points(self) -> tuple[CurvePoint, ...]:
        mean_sub = self.mean_suboptimality
        mean_ns = self.mean_seconds * 1e9
        return tuple(
            CurvePoint(
                wall_clock_ns=int(round(mean_ns[p])),
                samples=int(self.samples[p]),
                mean_suboptimality=float(mean_sub[p]),
                per_run=tuple(float(v) for v in self.suboptimality[:, p]),
            )
            for p in range(self.samples.shape[0])
        )

    @property
    def terminal_mean(self) -> float:
        return float(self.mean_suboptimality[-1])

    @property
    def terminal_std(self) -> float:
        return float(self.suboptimality[:, -1].std())

    @property
    def terminal_seconds(self) -> float:
        return float(self.mean_seconds[-1])


def _build_curve(
    experiment: str,
    solver: str,
    traces: Sequence[RunTrace],
    f_star: float,
    cosine: float,
    f_star_pre: float | None = None,
    switch_samples: int | None = None,
) -> SuboptimalityCurve:
    first = traces[0]
    iters = np.array([r.k for r in first.records], dtype=np.int64)
    samples = np.array([r.samples for r in first.records], dtype=np.int64)
    for t in traces[1:]:
        t_iters = [r.k for r in t.records]
        t_samples = [r.samples for r in t.records]
        if list(iters) != t_iters or list(samples) != t_samples:
            raise RuntimeError(
                f"runs of solver {solver!r} recorded misaligned traces; "
                "curves need identical iteration/sample grids across runs"
            )
    objectives = np.array([[r.objective for r in t.records] for t in traces], dtype=np.float64)
    if np.isnan(objectives).any():
        raise RuntimeError(f"solver {solver!r} produced unevaluated records; cadence misconfigured")
    seconds = np.array([[r.seconds for r in t.records] for t in traces], dtype=np.float64)
    if switch_samples is None:
        suboptimality = objectives - f_star
    else:
        pre = f_star_pre if f_star_pre is not None else f_star
        row_star = np.where(samples <= switch_samples, pre, f_star)
        suboptimality = objectives - row_star[None, :]
    return SuboptimalityCurve(
        experiment=experiment,
        solver=solver,
        f_star=f_star,
        w_star_cosine=cosine,
        iters=iters,
        samples=samples,
        seconds=seconds,
        objectives=objectives,
        suboptimality=suboptimality,
        f_star_pre=f_star_pre,
        switch_samples=switch_samples,
    )


@dataclass(frozen=True)
class GapSummary:
    """Terminal comparison of two curves from the same experiment.

    ``terminal_gap`` is the mean terminal suboptimality of ``solver_b``
    minus that of ``solver_a``; ``time_ratio`` divides their mean wall
    clocks at the terminal point (how many times longer b ran than a).
    """

    experiment: str
    solver_a: str
    solver_b: str
    terminal_a: float
    terminal_b: float
    terminal_gap: float
    seconds_a: float
    seconds_b: float
    time_ratio: float


def summarize_gap(curve_a: SuboptimalityCurve, curve_b: SuboptimalityCurve) -> GapSummary:
    if curve_a.experiment != curve_b.experiment:
        raise ValueError(
            f"curves come from different experiments: {curve_a.experiment!r} vs {curve_b.experiment!r}"
        )
    seconds_a = curve_a.terminal_seconds
    seconds_b = curve_b.terminal_seconds
    if seconds_a == seconds_b:
        ratio = 1.0
    elif seconds_a == 0.0:
        ratio = math.inf
    else:
        ratio = seconds_b / seconds_a
    return GapSummary(
        experiment=curve_a.experiment,
        solver_a=curve_a.solver,
        solver_b=curve_b.solver,
        terminal_a=curve_a.terminal_mean,
        terminal_b=curve_b.terminal_mean,
        terminal_gap=curve_b.terminal_mean - curve_a.terminal_mean,
        seconds_a=seconds_a,
        seconds_b=seconds_b,
        time_ratio=ratio,
    )


# ---------------------------------------------------------------------------
# Execution


def _empirical_second_moment(samples: np.ndarray) -> np.ndarray:
    return samples.T @ samples / samples.shape[0]


def _build_problem(
    setting: SolverSetting,
    train: Dataset | None,
    probe_arrays: Sequence[np.ndarray],
) -> DcProblem:
    second_moment = None
    if setting.variant == "osdca-exact-dh":
        if train is None:
            raise ValueError(
                "the exact second-component selector needs a fixed training set; "
                "shift streams have none"
            )
        second_moment = _empirical_second_moment(train.samples)
    dim = probe_arrays[0].shape[1]
    if setting.decomposition == 1:
        return decomp1_problem(
            dim,
            lam=setting.lam,
            second_moment=second_moment,
            assume_pd_second_moment=setting.assume_pd,
            name=setting.name,
        )
    smoothness = setting.smoothness
    if smoothness is None:
        largest = max(float(np.max(np.sum(a * a, axis=1))) for a in probe_arrays)
        smoothness = max(largest, 1e-12)
    return decomp2_problem(
        dim,
        smoothness=smoothness,
        backend=setting.backend,
        inner_tolerance=setting.inner_tolerance,
        inner_max_iterations=setting.inner_max_iterations,
        second_moment=second_moment,
        name=setting.name,
    )


def _solver_config(setting: SolverSetting, cadence: int, run_seed: int) -> SolverConfig:
    if setting.variant == "dca":
        stop = 1e-12 if setting.stop_tolerance is None else setting.stop_tolerance
        max_iterations = 400 if setting.max_iterations is None else setting.max_iterations
    else:
        stop = 0.0 if setting.stop_tolerance is None else setting.stop_tolerance
        max_iterations = 1_000_000_000 if setting.max_iterations is None else setting.max_iterations
    return SolverConfig(
        variant=setting.variant,
        schedule=setting.resolved_schedule(),
        max_iterations=max_iterations,
        stop_tolerance=stop,
        stepsize=setting.stepsize,
        stepsize_c=setting.stepsize_c,
        seed=run_seed,
        sample_budget=setting.sample_budget,
        override_schedule=setting.override_schedule,
        eval_every=cadence,
    )


def _map_runs(fn: Callable[[int], RunTrace], n_runs: int, workers: int) -> list[RunTrace]:
    if workers <= 1 or n_runs == 1:
        return [fn(run) for run in range(n_runs)]
    results: list[RunTrace | None] = [None] * n_runs
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {run: pool.submit(fn, run) for run in range(n_runs)}
        for run, future in futures.items():
            results[run] = future.result()
    return results  # type: ignore[return-value]


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    name: str
    experiment: str
    curves: tuple[SuboptimalityCurve, ...]
    w_star: WStarReport
    w_star_pre: WStarReport | None
    csv_path: str
    svg_path: str


def _require_sound_ground_truth(report: WStarReport, which: str) -> None:
    if report.degenerate:
        raise OracleDegeneracyError(
            f"the top eigenpair of the {which} validation set is degenerate "
            f"(gap {report.eigen_gap:.3g}); suboptimality against a single w* is meaningless"
        )
    if not report.agreement:
        raise RuntimeError(
            f"ground-truth cross-check failed on the {which} validation set: "
            f"cosine {report.cosine:.12f}, objective gap {report.objective_gap:.3g}"
        )


def _run_static_experiment(config: ExperimentConfig, settings: Sequence[SolverSetting]):
    """The three i.i.d. kinds: fixed train/validation, per-run shuffles."""
    if config.train_path is not None:
        train = load_any(config.train_path)
        validation = load_any(config.validation_path, dimension_hint=train.dimension)
        if config.normalize:
            train = normalize_unit(train)
            validation = normalize_unit(validation)
    else:
        train, validation = config.generator.materialize()
    if train.dimension != validation.dimension:
        raise ValueError(
            f"train/validation dimensions differ: {train.dimension} vs {validation.dimension}"
        )
    report = compute_w_star(validation, seed=config.master_seed)
    _require_sound_ground_truth(report, "designated")
    val_samples = validation.samples

    def evaluate(w: Vector) -> float:
        return epca_objective(w, val_samples)

    curves = []
    for setting in settings:
        problem = _build_problem(setting, train, (train.samples, val_samples))
        cadence = setting.resolved_cadence(config.cadence)

        def one_run(run: int, setting=setting, problem=problem, cadence=cadence) -> RunTrace:
            run_seed = child_seed(config.master_seed, run)
            shuffled = shuffle(train, run_seed)
            w0 = random_ball_point(problem.dimension, make_rng(run_seed, INIT))
            solver_config = _solver_config(setting, cadence, run_seed)
            if setting.variant == "dca":
                return run_variant(problem, w0, solver_config, shuffled.samples, evaluate)
            return run_variant(problem, w0, solver_config, OnePassStream(shuffled), evaluate)

        traces = _map_runs(one_run, config.n_runs, config.workers)
        curves.append(
            _build_curve(
                config.experiment_name,
                setting.name,
                traces,
                f_star=report.f_star,
                cosine=report.cosine,
            )
        )
    return curves, report, None


def _run_adaptivity_experiment(config: ExperimentConfig, settings: Sequence[SolverSetting]):
    """Covariance-shift kind: per-run streams, fixed two-phase validation."""
    spec = config.shift
    _, val_a, val_b = gen_shift_stream(spec)
    report_a = compute_w_star(val_a, seed=config.master_seed)
    report_b = compute_w_star(val_b, seed=config.master_seed)
    _require_sound_ground_truth(report_a, "pre-change")
    _require_sound_ground_truth(report_b, "post-change")

    curves = []
    for setting in settings:
        if setting.variant == "dca":
            raise ValueError("the adaptivity experiment streams data; full-batch DCA does not apply")
        problem = _build_problem(setting, None, (val_a.samples, val_b.samples))
        cadence = setting.resolved_cadence(config.cadence)

        def one_run(run: int, setting=setting, problem=problem, cadence=cadence) -> RunTrace:
            run_seed = child_seed(config.master_seed, run)
            stream, _, _ = gen_shift_stream(replace(spec, seed=run_seed))
            w0 = random_ball_point(problem.dimension, make_rng(run_seed, INIT))
            solver_config = _solver_config(setting, cadence, run_seed)

            def evaluate(w: Vector) -> float:
                phase_b = stream.drawn > spec.switch_index
                return epca_objective(w, (val_b if phase_b else val_a).samples)

            return run_variant(problem, w0, solver_config, stream, evaluate)

        traces = _map_runs(one_run, config.n_runs, config.workers)
        curves.append(
            _build_curve(
                config.experiment_name,
                setting.name,
                traces,
                f_star=report_b.f_star,
                cosine=report_b.cosine,
                f_star_pre=report_a.f_star,
                switch_samples=spec.switch_index,
            )
        )
    return curves, report_b, report_a


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every configured solver ``n_runs`` times and write artifacts.

    Returns the curves plus the ground-truth report(s); writes
    ``<name>.csv`` and ``<name>.svg`` under ``config.output_dir``.
    Raises :class:`OracleDegeneracyError` when the validation spectrum
    has no usable top eigenpair.
    """
    settings = config.solvers or _default_solvers(config)
    names = [s.name for s in settings]
    if len(set(names)) != len(names):
        raise ValueError(f"solver names must be unique, got {names}")
    if config.experiment == "adaptivity":
        curves, report, report_pre = _run_adaptivity_experiment(config, settings)
    else:
        curves, report, report_pre = _run_static_experiment(config, settings)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{config.experiment_name}.csv"
    svg_path = out / f"{config.experiment_name}.svg"
    emit_csv(curves, csv_path)
    emit_svg(curves, svg_path)
    return ExperimentResult(
        name=config.experiment_name,
        experiment=config.experiment,
        curves=tuple(curves),
        w_star=report,
        w_star_pre=report_pre,
        csv_path=str(csv_path),
        svg_path=str(svg_path),
    )


# ---------------------------------------------------------------------------
# Artifacts


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def emit_csv(curves: Sequence[SuboptimalityCurve], path) -> None:
    """Write aligned per-run rows; 17 significant digits, UTF-8, LF."""
    if not curves:
        raise ValueError("emit_csv needs at least one curve")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_CSV_HEADER + "\n")
        for curve in curves:
            for run in range(curve.n_runs):
                for p in range(curve.samples.shape[0]):
                    fh.write(
                        ",".join(
                            (
                                curve.experiment,
                                curve.solver,
                                str(run),
                                str(int(curve.iters[p])),
                                str(int(curve.samples[p])),
                                _fmt(curve.seconds[run, p]),
                                _fmt(curve.objectives[run, p]),
                                _fmt(curve.suboptimality[run, p]),
                            )
                        )
                        + "\n"
                    )


def canonicalize_csv(text: str) -> str:
    """Drop the wall-clock column so reruns compare byte for byte.

    Wall clock is the one machine-dependent column; everything else is a
    pure function of the experiment configuration and master seed.
    """
    lines = text.split("\n")
    header = lines[0].split(",")
    try:
        drop = header.index("seconds")
    except ValueError as exc:
        raise ValueError("not a curve CSV: no seconds column") from exc
    out = []
    for line in lines:
        if not line:
            out.append(line)
            continue
        cells = line.split(",")
        out.append(",".join(cells[:drop] + cells[drop + 1 :]))
    return "\n".join(out)


def emit_svg(curves: Sequence[SuboptimalityCurve], path, title: str | None = None) -> None:
    """Render mean suboptimality (log scale) against mean wall clock.

    One series per solver; a dashed vertical marker shows where the
    stream's distribution switch falls on the time axis.  Text is
    rendered as paths so the file has no external assets.
    """
    if not curves:
        raise ValueError("emit_svg needs at least one curve")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with plt.rc_context({"svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        switch_seconds = None
        for curve in curves:
            ys = np.clip(curve.mean_suboptimality, _LOG_PLOT_FLOOR, None)
            ax.semilogy(curve.mean_seconds, ys, marker=".", markersize=3, label=curve.solver)
            if curve.switch_samples is not None and switch_seconds is None:
                past = np.flatnonzero(curve.samples >= curve.switch_samples)
                if past.size:
                    switch_seconds = float(curve.mean_seconds[past[0]])
        if switch_seconds is not None:
            ax.axvline(switch_seconds, linestyle="--", color="gray", linewidth=1, label="switch")
        ax.set_xlabel("wall-clock seconds (mean over runs)")
        ax.set_ylabel("suboptimality on validation")
        ax.set_title(title or curves[0].experiment)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg")
        plt.close(fig)
