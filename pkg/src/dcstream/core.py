"""Core types for difference-of-convex (DC) problems.

A problem minimizes F(w) = E[g(w, Z)] - E[h(w, Z)] over a compact convex
feasible set, with both components convex in w for every sample z.  The
solvers only ever touch a problem through the oracle bundle defined here:
per-sample values, a subgradient selector for the second component, and a
solver for the strongly convex sampled subproblem.

Per-sample reductions (means of values or of subgradient vectors) go
through numpy reductions, which use pairwise (tree) summation; sums over
up to ~5e5 terms are reproducible and permutation-stable to ~1e-12.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, TypeAlias

import numpy as np
from numpy.typing import NDArray

Vector: TypeAlias = NDArray[np.float64]
# (n, m) array whose rows are samples.
Batch: TypeAlias = NDArray[np.float64]

__all__ = [
    "Vector",
    "Batch",
    "as_vector",
    "FeasibleSet",
    "EuclideanBall",
    "StrongConvexity",
    "SubproblemResult",
    "ExactFirstComponent",
    "DcProblem",
    "empirical_objective",
    "CriticalityReport",
    "criticality_residual",
]


def as_vector(x, dimension: int | None = None) -> Vector:
    """Validate and return ``x`` as a finite 1-D float64 vector."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if dimension is not None and v.shape[0] != dimension:
        raise ValueError(f"expected dimension {dimension}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


class FeasibleSet:
    """Compact convex feasible set with projection and membership tests.

    Subclasses implement ``project``, ``contains`` and
    ``project_tangent``; the solvers rely on nothing else.
    """

    dimension: int

    def project(self, x: Vector) -> Vector:
        raise NotImplementedError

    def contains(self, x: Vector, tolerance: float = 1e-10) -> bool:
        raise NotImplementedError

    def project_tangent(self, w: Vector, d: Vector) -> Vector:
        """Project ``d`` onto the tangent cone of the set at ``w``.

        Equivalently, remove from ``d`` its nearest normal-cone component,
        so the returned norm is the distance from ``d`` to the normal cone.
        """
        raise NotImplementedError


class EuclideanBall(FeasibleSet):
    """Closed Euclidean ball {x : ||x - center|| <= radius}."""

    def __init__(self, dimension: int, radius: float = 1.0, center: Vector | None = None):
        if dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {dimension}")
        if not (radius > 0 and np.isfinite(radius)):
            raise ValueError(f"radius must be positive and finite, got {radius}")
        self.dimension = dimension
        self.radius = float(radius)
        if center is None:
            self.center = np.zeros(dimension)
        else:
            self.center = as_vector(center, dimension)

    def project(self, x: Vector) -> Vector:
        x = as_vector(x, self.dimension)
        d = x - self.center
        n = float(np.linalg.norm(d))
        if n <= self.radius:
            return x
        y = self.center + d * (self.radius / n)
        # Rescale until membership holds under this same norm evaluation,
        # which makes project(project(x)) == project(x) exact.
        while float(np.linalg.norm(y - self.center)) > self.radius:
            m = float(np.linalg.norm(y - self.center))
            y = self.center + (y - self.center) * (self.radius / m)
        return y

    def contains(self, x: Vector, tolerance: float = 1e-10) -> bool:
        x = as_vector(x, self.dimension)
        return float(np.linalg.norm(x - self.center)) <= self.radius + tolerance

    def project_tangent(self, w: Vector, d: Vector, tolerance: float = 1e-10) -> Vector:
        w = as_vector(w, self.dimension)
        d = as_vector(d, self.dimension)
        r = float(np.linalg.norm(w - self.center))
        if r < self.radius - tolerance:
            return d.copy()  # interior point: normal cone is {0}
        u = (w - self.center) / r
        outward = float(u @ d)
        if outward <= 0.0:
            return d.copy()
        return d - outward * u


@dataclass(frozen=True)
class StrongConvexity:
    """Certified strong-convexity moduli of a DC instance.

    ``rho_second`` bounds the modulus of the expected second component;
    ``inf_rho_first`` bounds the per-sample first-component modulus
    uniformly over samples.  Stochastic solvers require the sum positive.
    ``assumed_positive`` marks instances (e.g. the zero-regularization
    ablation) whose positivity rests on a data assumption such as a
    positive-definite second moment rather than on the certified moduli.
    """

    rho_second: float
    inf_rho_first: float
    assumed_positive: bool = False

    def __post_init__(self):
        if self.rho_second < 0 or self.inf_rho_first < 0:
            raise ValueError("strong convexity moduli must be nonnegative")

    @property
    def total(self) -> float:
        return self.rho_second + self.inf_rho_first


@dataclass(frozen=True)
class SubproblemResult:
    """Outcome of one strongly convex subproblem solve."""

    w: Vector
    iterations: int
    residual: float
    converged: bool
    tolerance: float


@dataclass(frozen=True)
class ExactFirstComponent:
    """Exact first component G with a linearly perturbed minimizer.

    ``value``: w -> G(w).
    ``solve``: t -> argmin over the feasible set of G(w) - <t, w>.
    """

    value: Callable[[Vector], float]
    solve: Callable[[Vector], Vector]


@dataclass(frozen=True)
class DcProblem:
    """Oracle bundle for one DC instance.

    ``solve_sampled_subproblem(t, batch, w_start)`` minimizes the batch
    average of the first component minus <t, w> over the feasible set;
    with the full dataset as batch it doubles as the empirical subproblem
    solver used by deterministic DCA.

    ``alpha_bound`` is the certified complexity exponent of the first
    component family (supremum of usable exponents; 1.0 when the sampled
    first component is exact).  Schedule validation for the sampled-G
    solvers uses it.
    """

    dimension: int
    sample_dimension: int
    feasible_set: FeasibleSet
    per_sample_g: Callable[[Vector, Vector], float]
    per_sample_h: Callable[[Vector, Vector], float]
    per_sample_tau: Callable[[Vector, Vector], Vector]
    solve_sampled_subproblem: Callable[[Vector, Batch, Vector], SubproblemResult]
    strong_convexity: StrongConvexity
    alpha_bound: float = 1.0
    exact_g: Optional[ExactFirstComponent] = None
    exact_dh: Optional[Callable[[Vector], Vector]] = None
    per_sample_g_grad: Optional[Callable[[Vector, Vector], Vector]] = None
    per_sample_obj_grad: Optional[Callable[[Vector, Vector], Vector]] = None
    # Optional vectorized companions of the per-sample oracles. Each takes
    # (w, batch) and returns the batch mean directly.
    batch_g_mean: Optional[Callable[[Vector, Batch], float]] = None
    batch_h_mean: Optional[Callable[[Vector, Batch], float]] = None
    batch_tau_mean: Optional[Callable[[Vector, Batch], Vector]] = None
    batch_g_grad_mean: Optional[Callable[[Vector, Batch], Vector]] = None
    name: str = ""

    def g_mean(self, w: Vector, batch: Batch) -> float:
        if self.batch_g_mean is not None:
            return float(self.batch_g_mean(w, batch))
        vals = np.array([self.per_sample_g(w, z) for z in batch])
        return float(np.mean(vals))

    def h_mean(self, w: Vector, batch: Batch) -> float:
        if self.batch_h_mean is not None:
            return float(self.batch_h_mean(w, batch))
        vals = np.array([self.per_sample_h(w, z) for z in batch])
        return float(np.mean(vals))

    def tau_mean(self, w: Vector, batch: Batch) -> Vector:
        if self.batch_tau_mean is not None:
            t = np.asarray(self.batch_tau_mean(w, batch), dtype=np.float64)
        else:
            t = np.mean([self.per_sample_tau(w, z) for z in batch], axis=0)
        if t.shape != (self.dimension,):
            raise ValueError(
                f"second-component subgradient has shape {t.shape}, expected ({self.dimension},)"
            )
        return t

    def g_grad_mean(self, w: Vector, batch: Batch) -> Vector:
        if self.batch_g_grad_mean is not None:
            return np.asarray(self.batch_g_grad_mean(w, batch), dtype=np.float64)
        if self.per_sample_g_grad is None:
            raise ValueError("problem lacks a first-component subgradient oracle")
        return np.mean([self.per_sample_g_grad(w, z) for z in batch], axis=0)


def empirical_objective(problem: DcProblem, w: Vector, samples: Batch) -> float:
    """Empirical objective (mean g) - (mean h) of ``w`` over ``samples``."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise ValueError(f"samples must be a nonempty (n, m) array, got shape {samples.shape}")
    w = as_vector(w, problem.dimension)
    return problem.g_mean(w, samples) - problem.h_mean(w, samples)


@dataclass(frozen=True)
class CriticalityReport:
    """Diagnostic for approximate criticality of ``w`` on a sample set.

    ``first_side`` is the chosen empirical first-component subgradient
    augmented by its best normal-cone completion; ``second_side`` is the
    averaged second-component subgradient.  ``residual`` is the Euclidean
    distance between the two, i.e. the norm of the tangent-cone projection
    of their difference.  Zero residual certifies empirical criticality.
    """

    residual: float
    first_side: Vector
    second_side: Vector
    boundary: bool


def criticality_residual(problem: DcProblem, w: Vector, samples: Batch) -> CriticalityReport:
    """Measure how far ``w`` is from empirical criticality on ``samples``."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise ValueError(f"samples must be a nonempty (n, m) array, got shape {samples.shape}")
    w = as_vector(w, problem.dimension)
    if not problem.feasible_set.contains(w):
        raise ValueError("criticality residual requires a feasible point")
    t_second = problem.tau_mean(w, samples)
    t_first = problem.g_grad_mean(w, samples)
    diff = t_second - t_first
    tangential = problem.feasible_set.project_tangent(w, diff)
    normal_part = diff - tangential
    first_side = t_first + normal_part
    residual = float(np.linalg.norm(tangential))
    boundary = bool(np.linalg.norm(normal_part) > 0.0)
    return CriticalityReport(
        residual=residual,
        first_side=first_side,
        second_side=t_second,
        boundary=boundary,
    )
