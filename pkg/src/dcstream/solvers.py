"""DC solvers: deterministic DCA, online stochastic DCA, and projected
stochastic subgradient baselines.

All stochastic variants consume a sample stream object exposing
``draw(n) -> (k, m) array`` (possibly shorter near exhaustion; empty when
dry).  At iteration k they draw a fresh batch of schedule size n_k, form a
second-component subgradient t, and minimize a strongly convex model of
the first component minus <t, w> over the feasible set:

* ``run_osdca_full``      t = batch average of per-sample subgradients,
                          model = batch average of the first component;
* ``run_osdca_exact_g``   same t, but the exact first component is
                          minimized (its own subproblem solver);
* ``run_osdca_exact_dh``  t = exact expected-second-component selector,
                          model = batch average of the first component.

Traces record rows at the evaluation cadence (and always the final
iterate); wall-clock covers solver arithmetic only, never the evaluation
callback.  With a fixed (config, stream, w0) every quantity except
wall-clock is bit-reproducible; compare traces via ``RunTrace.canonical``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional, Protocol

import numpy as np

from .core import Batch, DcProblem, Vector, as_vector
from .schedules import SampleSchedule, validate_schedule

__all__ = [
    "VARIANTS",
    "SolverPreconditionError",
    "SolverConfig",
    "IterationRecord",
    "RunTrace",
    "SampleStream",
    "random_ball_point",
    "run_dca",
    "run_osdca_full",
    "run_osdca_exact_g",
    "run_osdca_exact_dh",
    "run_pss",
    "run_variant",
]

VARIANTS = (
    "dca",
    "osdca-full",
    "osdca-exact-g",
    "osdca-exact-dh",
    "pss-constant",
    "pss-diminishing",
)

TERMINATIONS = (
    "budget-exhausted",
    "data-exhausted",
    "displacement-below-tolerance",
    "max-iterations",
)


class SolverPreconditionError(ValueError):
    """A solver precondition (schedule, feasibility, oracle) failed."""


class SampleStream(Protocol):
    def draw(self, n: int) -> Batch: ...


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by every solver variant.

    ``schedule`` drives the stochastic DCA batch sizes and is ignored by
    DCA and the subgradient baselines.  ``stop_tolerance`` is the DCA
    displacement test (0 disables it).  ``sample_budget`` bounds total
    stream consumption.  ``override_schedule`` admits schedules that fail
    the summability check (finite-data or capped experiments); the trace
    keeps a record of the override.
    """

    variant: str
    schedule: SampleSchedule | None = None
    max_iterations: int = 1_000_000_000
    stop_tolerance: float = 0.0
    stepsize: float = 0.005
    stepsize_c: float = 8.0
    seed: int = 0
    sample_budget: int | None = None
    override_schedule: bool = False
    eval_every: int = 1

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown solver variant {self.variant!r}; expected one of {VARIANTS}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.stop_tolerance < 0:
            raise ValueError(f"stop_tolerance must be >= 0, got {self.stop_tolerance}")
        if self.stepsize <= 0 or self.stepsize_c <= 0:
            raise ValueError("stepsizes must be positive")
        if self.sample_budget is not None and self.sample_budget < 1:
            raise ValueError(f"sample_budget must be >= 1 when set, got {self.sample_budget}")
        if self.eval_every < 1:
            raise ValueError(f"eval_every must be >= 1, got {self.eval_every}")


@dataclass(frozen=True)
class IterationRecord:
    k: int
    samples: int  # cumulative samples consumed
    seconds: float  # cumulative solver wall-clock
    w_norm: float
    objective: float  # nan when the iterate was not evaluated


@dataclass
class RunTrace:
    """Outcome of one solver run."""

    variant: str
    records: list[IterationRecord]
    final_w: Vector
    termination: str
    samples_consumed: int
    schedule_override: bool = False
    subproblem_tolerance: float | None = None
    seed: int = 0

    def canonical(self):
        """Trace contents with wall-clock removed, for bitwise comparison.

        NaN objectives (unevaluated rows) map to None so equal traces
        compare equal.
        """
        rows = tuple(
            (r.k, r.samples, r.w_norm, None if math.isnan(r.objective) else r.objective)
            for r in self.records
        )
        return (
            self.variant,
            self.termination,
            self.samples_consumed,
            rows,
            self.final_w.tobytes(),
        )

    @property
    def terminal_objective(self) -> float:
        for r in reversed(self.records):
            if not math.isnan(r.objective):
                return r.objective
        return math.nan


def random_ball_point(dimension: int, rng: np.random.Generator, radius: float = 1.0) -> Vector:
    """Uniform draw from the Euclidean ball: Gaussian direction, radius U^(1/m)."""
    direction = rng.standard_normal(dimension)
    n = float(np.linalg.norm(direction))
    while n == 0.0:
        direction = rng.standard_normal(dimension)
        n = float(np.linalg.norm(direction))
    r = radius * float(rng.uniform()) ** (1.0 / dimension)
    return direction * (r / n)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SolverPreconditionError(message)


def _check_common(problem: DcProblem, w0: Vector, config: SolverConfig) -> Vector:
    w0 = as_vector(w0, problem.dimension)
    _require(problem.feasible_set.contains(w0), "starting point lies outside the feasible set")
    return w0


def _check_strong_convexity(problem: DcProblem) -> None:
    sc = problem.strong_convexity
    _require(
        sc.total > 0 or sc.assumed_positive,
        "stochastic DCA requires a positive combined strong-convexity modulus "
        f"(got {sc.total:g}); pass an instance with positive weight or one whose "
        "positivity is explicitly assumed",
    )


def _check_schedule(problem: DcProblem, config: SolverConfig, beta: float) -> bool:
    """Validate the schedule; return True when an override was used."""
    _require(config.schedule is not None, f"variant {config.variant!r} requires a sample schedule")
    result = validate_schedule(config.schedule, beta)
    if result.valid:
        return False
    _require(
        config.override_schedule,
        f"schedule {config.schedule.label()} rejected for beta={beta:g}: {result.reason}",
    )
    return True


class _Recorder:
    """Collects cadence rows and keeps evaluation out of the solver clock."""

    def __init__(self, evaluate: Optional[Callable[[Vector], float]], eval_every: int):
        self.evaluate = evaluate
        self.eval_every = eval_every
        self.records: list[IterationRecord] = []
        self.elapsed_s = 0.0

    def note(self, k: int, samples: int, w: Vector, final: bool = False) -> None:
        due = final or (k % self.eval_every == 0)
        if not due:
            return
        if final and self.records and self.records[-1].k == k:
            return
        objective = math.nan
        if self.evaluate is not None:
            objective = float(self.evaluate(w))
        self.records.append(
            IterationRecord(
                k=k,
                samples=samples,
                seconds=self.elapsed_s,
                w_norm=float(np.linalg.norm(w)),
                objective=objective,
            )
        )


def run_dca(
    problem: DcProblem,
    w0: Vector,
    config: SolverConfig,
    data: Batch,
    evaluate: Optional[Callable[[Vector], float]] = None,
) -> RunTrace:
    """Deterministic DCA on the empirical objective over ``data``.

    Each iteration selects the averaged second-component subgradient at
    the current iterate and minimizes the empirical first component minus
    the induced linear term.  The empirical objective never increases.
    Stops on displacement below ``config.stop_tolerance`` (when positive)
    or on ``config.max_iterations``.
    """
    data = np.asarray(data, dtype=np.float64)
    _require(data.ndim == 2 and data.shape[0] > 0, "deterministic DCA requires a nonempty dataset")
    w = _check_common(problem, w0, config)
    rec = _Recorder(evaluate, config.eval_every)
    rec.note(0, 0, w)
    termination = "max-iterations"
    sub_tol = None
    for k in range(1, config.max_iterations + 1):
        t0 = time.perf_counter()
        y = problem.tau_mean(w, data)
        sub = problem.solve_sampled_subproblem(y, data, w)
        w_next = sub.w
        displacement = float(np.linalg.norm(w_next - w))
        rec.elapsed_s += time.perf_counter() - t0
        sub_tol = sub.tolerance
        w = w_next
        rec.note(k, 0, w)
        if config.stop_tolerance > 0 and displacement <= config.stop_tolerance:
            termination = "displacement-below-tolerance"
            break
    rec.note(k, 0, w, final=True)
    return RunTrace(
        variant="dca",
        records=rec.records,
        final_w=w,
        termination=termination,
        samples_consumed=0,
        subproblem_tolerance=sub_tol,
        seed=config.seed,
    )


def _run_osdca(
    problem: DcProblem,
    w0: Vector,
    config: SolverConfig,
    stream: SampleStream,
    evaluate: Optional[Callable[[Vector], float]],
    variant: str,
    beta: float,
    select_t: Callable[[Vector, Batch], Vector],
    solve_model: Callable[[Vector, Batch, Vector], tuple[Vector, float | None]],
) -> RunTrace:
    w = _check_common(problem, w0, config)
    _check_strong_convexity(problem)
    override = _check_schedule(problem, config, beta)
    rec = _Recorder(evaluate, config.eval_every)
    rec.note(0, 0, w)
    consumed = 0
    termination = "max-iterations"
    sub_tol = None
    k = 0
    while k < config.max_iterations:
        k += 1
        request = config.schedule.size(k)
        if config.sample_budget is not None:
            left = config.sample_budget - consumed
            if left <= 0:
                k -= 1
                termination = "budget-exhausted"
                break
            request = min(request, left)
        batch = np.asarray(stream.draw(request), dtype=np.float64)
        if batch.shape[0] == 0:
            k -= 1
            termination = "data-exhausted"
            break
        consumed += batch.shape[0]
        t0 = time.perf_counter()
        t = select_t(w, batch)
        w, tol = solve_model(t, batch, w)
        rec.elapsed_s += time.perf_counter() - t0
        if tol is not None:
            sub_tol = tol
        rec.note(k, consumed, w)
        if batch.shape[0] < request:
            termination = "data-exhausted"
            break
        if config.sample_budget is not None and consumed >= config.sample_budget:
            termination = "budget-exhausted"
            break
    if k > 0:
        rec.note(k, consumed, w, final=True)
    return RunTrace(
        variant=variant,
        records=rec.records,
        final_w=w,
        termination=termination,
        samples_consumed=consumed,
        schedule_override=override,
        subproblem_tolerance=sub_tol,
        seed=config.seed,
    )


def run_osdca_full(
    problem: DcProblem,
    w0: Vector,
    config: SolverConfig,
    stream: SampleStream,
    evaluate: Optional[Callable[[Vector], float]] = None,
) -> RunTrace:
    """Online stochastic DCA with sampled first component and sampled t."""

    def solve_model(t: Vector, batch: Batch, w: Vector):
        try:
            sub = problem.solve_sampled_subproblem(t, batch, w)
        except ValueError as exc:
            raise SolverPreconditionError(str(exc)) from exc
        return sub.w, sub.tolerance

    return _run_osdca(
        problem,
        w0,
        config,
        stream,
        evaluate,
        variant="osdca-full",
        beta=min(problem.alpha_bound, 1.0),
        select_t=lambda w, batch: problem.tau_mean(w, batch),
        solve_model=solve_model,
    )


def run_osdca_exact_g(
    problem: DcProblem,
    w0: Vector,
    config: SolverConfig,
    stream: SampleStream,
    evaluate: Optional[Callable[[Vector], float]] = None,
) -> RunTrace:
    """Online stochastic DCA minimizing the exact first component."""
    _require(
        problem.exact_g is not None,
        "variant osdca-exact-g requires the problem's exact first component",
    )

    def solve_model(t: Vector, batch: Batch, w: Vector):
        return as_vector(problem.exact_g.solve(t), problem.dimension), None

    return _run_osdca(
        problem,
        w0,
        config,
        stream,
        evaluate,
        variant="osdca-exact-g",
        beta=1.0,
        select_t=lambda w, batch: problem.tau_mean(w, batch),
        solve_model=solve_model,
    )


def run_osdca_exact_dh(
    problem: DcProblem,
    w0: Vector,
    config: SolverConfig,
    stream: SampleStream,
    evaluate: Optional[Callable[[Vector], float]] = None,
) -> RunTrace:
    """Online stochastic DCA with an exact expected-second-component selector."""
    _require(
        problem.exact_dh is not None,
        "variant osdca-exact-dh requires the problem's exact second-component selector",
    )

    def solve_model(t: Vector, batch: Batch, w: Vector):
        try:
            sub = problem.solve_sampled_subproblem(t, batch, w)
        except ValueError as exc:
            raise SolverPreconditionError(str(exc)) from exc
        return sub.w, sub.tolerance

    return _run_osdca(
        problem,
        w0,
        config,
        stream,
        evaluate,
        variant="osdca-exact-dh",
        beta=min(problem.alpha_bound, 1.0),
        select_t=lambda w, batch: as_vector(problem.exact_dh(w), problem.dimension),
        solve_model=solve_model,
    )


def run_pss(
    problem: DcProblem,
    w0: Vector,
    config: SolverConfig,
    stream: SampleStream,
    evaluate: Optional[Callable[[Vector], float]] = None,
) -> RunTrace:
    """Projected stochastic subgradient with one fresh sample per step.

    Steps are constant (``config.stepsize``) for variant ``pss-constant``
    and ``config.stepsize_c / k`` for ``pss-diminishing``.
    """
    _require(
        config.variant in ("pss-constant", "pss-diminishing"),
        f"run_pss handles the pss-* variants, got {config.variant!r}",
    )
    _require(
        problem.per_sample_obj_grad is not None,
        "projected subgradient requires the problem's per-sample objective subgradient",
    )
    w = _check_common(problem, w0, config)
    project = problem.feasible_set.project
    grad = problem.per_sample_obj_grad
    rec = _Recorder(evaluate, config.eval_every)
    rec.note(0, 0, w)
    consumed = 0
    termination = "max-iterations"
    k = 0
    while k < config.max_iterations:
        k += 1
        if config.sample_budget is not None and consumed >= config.sample_budget:
            k -= 1
            termination = "budget-exhausted"
            break
        batch = np.asarray(stream.draw(1), dtype=np.float64)
        if batch.shape[0] == 0:
            k -= 1
            termination = "data-exhausted"
            break
        consumed += 1
        t0 = time.perf_counter()
        step = config.stepsize if config.variant == "pss-constant" else config.stepsize_c / k
        w = project(w - step * grad(w, batch[0]))
        rec.elapsed_s += time.perf_counter() - t0
        rec.note(k, consumed, w)
    if k > 0:
        rec.note(k, consumed, w, final=True)
    return RunTrace(
        variant=config.variant,
        records=rec.records,
        final_w=w,
        termination=termination,
        samples_consumed=consumed,
        seed=config.seed,
    )


def run_variant(
    problem: DcProblem,
    w0: Vector,
    config: SolverConfig,
    stream_or_data,
    evaluate: Optional[Callable[[Vector], float]] = None,
) -> RunTrace:
    """Dispatch to the solver matching ``config.variant``."""
    if config.variant == "dca":
        return run_dca(problem, w0, config, stream_or_data, evaluate)
    if config.variant == "osdca-full":
        return run_osdca_full(problem, w0, config, stream_or_data, evaluate)
    if config.variant == "osdca-exact-g":
        return run_osdca_exact_g(problem, w0, config, stream_or_data, evaluate)
    if config.variant == "osdca-exact-dh":
        return run_osdca_exact_dh(problem, w0, config, stream_or_data, evaluate)
    return run_pss(problem, w0, config, stream_or_data, evaluate)
