"""Expected-PCA as a stochastic DC program.

The task is to minimize F(w) = -0.5 * E <w, Z>^2 over the unit ball; the
minimizers are the top eigenvectors of the second moment E[Z Z^T] (up to
sign), with optimal value -lambda_max / 2.

Two DC decompositions of the per-sample objective are provided:

* decomposition 1 (regularized): g(w, z) = (lam/2) ||w||^2,
  h(w, z) = (lam/2) ||w||^2 + 0.5 <w, z>^2.  The first component ignores
  the sample, so the sampled subproblem is exact and has the closed-form
  solution ``epca1_update``.
* decomposition 2 (smoothness-matched): g(w, z) = (L/2) ||w||^2
  - 0.5 <w, z>^2, h(w, z) = (L/2) ||w||^2 + 0.5 <w, z>^2, requiring
  L >= ||z||^2 so g stays convex.  The sampled subproblem is solved
  iteratively (``epca2_subproblem``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import seeding
from .core import (
    Batch,
    DcProblem,
    EuclideanBall,
    ExactFirstComponent,
    StrongConvexity,
    SubproblemResult,
    Vector,
    as_vector,
)

__all__ = [
    "epca_objective",
    "epca1_t",
    "epca1_update",
    "epca2_t",
    "epca2_subproblem",
    "EigenReport",
    "top_eigvec_oracle",
    "decomp1_problem",
    "decomp2_problem",
    "SUBPROBLEM_BACKENDS",
]

SUBPROBLEM_BACKENDS = ("inner-dca", "projected-gradient")

_ORACLE_SEED = 20260819  # fixed start for the deterministic power iteration


def _as_batch(batch) -> Batch:
    b = np.asarray(batch, dtype=np.float64)
    if b.ndim != 2:
        raise ValueError(f"batch must be a 2-D (n, m) array, got shape {b.shape}")
    return b


def epca_objective(w: Vector, samples: Batch) -> float:
    """Empirical objective -0.5 * mean <w, z>^2 over the sample rows."""
    samples = _as_batch(samples)
    w = as_vector(w, samples.shape[1])
    proj = samples @ w
    return -0.5 * float(np.mean(proj * proj))


def _second_moment_apply(samples: Batch, w: Vector) -> Vector:
    """mean_i <w, z_i> z_i without forming the second-moment matrix."""
    return samples.T @ (samples @ w) / samples.shape[0]


def epca1_t(w: Vector, batch: Batch, lam: float) -> Vector:
    """Second-component subgradient lam*w + mean <w, z> z (decomposition 1)."""
    batch = _as_batch(batch)
    if batch.shape[0] == 0:
        raise ValueError("batch must contain at least one sample")
    w = as_vector(w, batch.shape[1])
    return lam * w + _second_moment_apply(batch, w)


def epca1_update(t: Vector, lam: float) -> Vector:
    """Minimizer of (lam/2) ||w||^2 - <t, w> over the unit ball.

    Returns t/lam when that point lies in the ball, otherwise the unit
    vector along t.  For lam = 0 the problem is linear; the minimizer is
    the unit vector along t (and 0 for t = 0, where every feasible point
    is optimal).
    """
    t = as_vector(t)
    if lam < 0 or not np.isfinite(lam):
        raise ValueError(f"regularization weight must be nonnegative and finite, got {lam}")
    n = float(np.linalg.norm(t))
    if n == 0.0:
        return np.zeros_like(t)
    if n <= lam:
        return t / lam
    w = t / n
    # keep the result inside the ball as measured by the same norm code
    m = float(np.linalg.norm(w))
    while m > 1.0:
        w = w / m
        m = float(np.linalg.norm(w))
    return w


def epca2_t(w: Vector, batch: Batch, smoothness: float) -> Vector:
    """Second-component subgradient L*w + mean <w, z> z (decomposition 2)."""
    return epca1_t(w, batch, smoothness)


def _check_smoothness(smoothness: float, batch: Batch) -> None:
    if batch.shape[0] == 0:
        return
    max_sq = float(np.max(np.einsum("ij,ij->i", batch, batch)))
    if smoothness < max_sq * (1.0 - 1e-12):
        raise ValueError(
            f"smoothness weight {smoothness:g} is below the largest squared sample "
            f"norm {max_sq:g}; the sampled first component would not be convex"
        )


def _subproblem_value(w: Vector, t: Vector, batch: Batch, smoothness: float) -> float:
    quad = 0.5 * smoothness * float(w @ w)
    if batch.shape[0] > 0:
        proj = batch @ w
        quad -= 0.5 * float(np.mean(proj * proj))
    return quad - float(t @ w)


def epca2_subproblem(
    t: Vector,
    batch: Batch,
    smoothness: float,
    w_start: Vector,
    backend: str = "inner-dca",
    tolerance: float = 1e-5,
    max_iterations: int = 200,
) -> SubproblemResult:
    """Minimize (L/2)||w||^2 - 0.5 * mean <w, z>^2 - <t, w> over the unit ball.

    The ``inner-dca`` backend relinearizes the concave sample term: with
    u^0 = w_start it iterates y = mean <u, z> z + t followed by
    u <- epca1_update(y, L), stopping when the displacement drops below
    ``tolerance``.  The ``projected-gradient`` backend takes steps of
    length 1/L on the full objective and projects back onto the ball; its
    stopping rule is the projected-gradient residual against the same
    ``tolerance``.  An empty batch drops the sample term, reducing the
    solve to the closed-form update.
    """
    batch = _as_batch(batch) if np.asarray(batch).size else np.zeros((0, len(t)))
    t = as_vector(t)
    if not (smoothness > 0 and np.isfinite(smoothness)):
        raise ValueError(f"smoothness weight must be positive and finite, got {smoothness}")
    _check_smoothness(smoothness, batch)
    w = as_vector(w_start, t.shape[0])
    if batch.shape[0] == 0:
        sol = epca1_update(t, smoothness)
        return SubproblemResult(w=sol, iterations=0, residual=0.0, converged=True, tolerance=tolerance)
    if backend == "inner-dca":
        for it in range(1, max_iterations + 1):
            y = _second_moment_apply(batch, w) + t
            w_next = epca1_update(y, smoothness)
            displacement = float(np.linalg.norm(w_next - w))
            w = w_next
            if displacement < tolerance:
                return SubproblemResult(
                    w=w, iterations=it, residual=displacement, converged=True, tolerance=tolerance
                )
        return SubproblemResult(
            w=w, iterations=max_iterations, residual=displacement, converged=False, tolerance=tolerance
        )
    if backend == "projected-gradient":
        ball = EuclideanBall(t.shape[0])
        step = 1.0 / smoothness
        for it in range(1, max_iterations + 1):
            grad = smoothness * w - _second_moment_apply(batch, w) - t
            w_next = ball.project(w - step * grad)
            residual = float(np.linalg.norm(w_next - w)) * smoothness
            w = w_next
            if residual < tolerance:
                return SubproblemResult(
                    w=w, iterations=it, residual=residual, converged=True, tolerance=tolerance
                )
        return SubproblemResult(
            w=w, iterations=max_iterations, residual=residual, converged=False, tolerance=tolerance
        )
    raise ValueError(f"unknown subproblem backend {backend!r}; expected one of {SUBPROBLEM_BACKENDS}")


@dataclass(frozen=True)
class EigenReport:
    """Top eigenpair of an empirical second moment, with a gap estimate."""

    value: float
    vector: Vector
    second_value: float
    gap: float
    degenerate: bool
    iterations: int

    @property
    def objective(self) -> float:
        """Optimal expected-PCA value -value/2."""
        return -0.5 * self.value


def top_eigvec_oracle(
    samples: Batch,
    tolerance: float = 1e-12,
    max_iterations: int = 200_000,
    gap_floor: float = 1e-9,
) -> EigenReport:
    """Power iteration on the empirical second moment of ``samples``.

    Runs matrix-free with a fixed seeded start, declares convergence when
    the eigen-residual ||M v - value * v|| falls below
    ``tolerance * max(value, 1)``, then estimates the second eigenvalue by
    deflated power iteration.  The report is flagged degenerate when the
    spectral gap is below ``gap_floor`` or either iteration stalls.
    """
    samples = _as_batch(samples)
    if samples.shape[0] == 0:
        raise ValueError("oracle requires at least one sample")
    m = samples.shape[1]
    rng = seeding.make_rng(_ORACLE_SEED, seeding.ORACLE)
    v = rng.standard_normal(m)
    v /= np.linalg.norm(v)

    def apply(x: Vector) -> Vector:
        return _second_moment_apply(samples, x)

    value = 0.0
    stalled = False
    iterations = max_iterations
    for it in range(1, max_iterations + 1):
        mv = apply(v)
        value = float(v @ mv)
        residual = float(np.linalg.norm(mv - value * v))
        if residual <= tolerance * max(abs(value), 1.0):
            iterations = it
            break
        norm_mv = float(np.linalg.norm(mv))
        if norm_mv == 0.0:
            # zero second moment: every direction is optimal
            return EigenReport(
                value=0.0, vector=v, second_value=0.0, gap=0.0, degenerate=True, iterations=it
            )
        v = mv / norm_mv
    else:
        stalled = True

    u = rng.standard_normal(m)
    u -= (v @ u) * v
    norm_u = float(np.linalg.norm(u))
    second = 0.0
    if norm_u > 0.0 and m > 1:
        u /= norm_u
        for _ in range(1, max_iterations + 1):
            mu = apply(u) - value * (v @ u) * v
            second = float(u @ mu)
            residual = float(np.linalg.norm(mu - second * u))
            if residual <= max(tolerance, 1e-10) * max(abs(second), 1.0):
                break
            norm_mu = float(np.linalg.norm(mu))
            if norm_mu == 0.0:
                second = 0.0
                break
            u = mu / norm_mu
        else:
            stalled = True
    gap = value - second
    degenerate = bool(stalled or gap < gap_floor)
    return EigenReport(
        value=value,
        vector=v,
        second_value=second,
        gap=gap,
        degenerate=degenerate,
        iterations=iterations,
    )


def _ball(dimension: int) -> EuclideanBall:
    return EuclideanBall(dimension, radius=1.0)


def decomp1_problem(
    dimension: int,
    lam: float = 1.0,
    second_moment: np.ndarray | None = None,
    assume_pd_second_moment: bool = False,
    name: str = "",
) -> DcProblem:
    """Expected-PCA instance under decomposition 1 with weight ``lam``.

    ``second_moment``, when supplied, enables the exact second-component
    subgradient selector w -> lam*w + M w.  ``assume_pd_second_moment``
    admits lam = 0 to the stochastic solvers on the caller's assertion
    that the data second moment is positive definite (the ablation case).
    """
    if lam < 0 or not np.isfinite(lam):
        raise ValueError(f"regularization weight must be nonnegative and finite, got {lam}")
    if second_moment is not None:
        second_moment = np.asarray(second_moment, dtype=np.float64)
        if second_moment.shape != (dimension, dimension):
            raise ValueError(
                f"second moment must have shape ({dimension}, {dimension}), "
                f"got {second_moment.shape}"
            )

    def solve_sampled(t: Vector, batch: Batch, w_start: Vector) -> SubproblemResult:
        w = epca1_update(t, lam)
        return SubproblemResult(w=w, iterations=1, residual=0.0, converged=True, tolerance=0.0)

    exact_dh = None
    if second_moment is not None:
        exact_dh = lambda w: lam * w + second_moment @ w

    return DcProblem(
        dimension=dimension,
        sample_dimension=dimension,
        feasible_set=_ball(dimension),
        per_sample_g=lambda w, z: 0.5 * lam * float(w @ w),
        per_sample_h=lambda w, z: 0.5 * lam * float(w @ w) + 0.5 * float(w @ z) ** 2,
        per_sample_tau=lambda w, z: lam * w + float(w @ z) * z,
        solve_sampled_subproblem=solve_sampled,
        strong_convexity=StrongConvexity(
            rho_second=lam,
            inf_rho_first=lam,
            assumed_positive=assume_pd_second_moment,
        ),
        alpha_bound=1.0,
        exact_g=ExactFirstComponent(
            value=lambda w: 0.5 * lam * float(w @ w),
            solve=lambda t: epca1_update(t, lam),
        ),
        exact_dh=exact_dh,
        per_sample_g_grad=lambda w, z: lam * w,
        per_sample_obj_grad=lambda w, z: -float(w @ z) * z,
        batch_g_mean=lambda w, batch: 0.5 * lam * float(w @ w),
        batch_h_mean=lambda w, batch: 0.5 * lam * float(w @ w)
        + 0.5 * float(np.mean((batch @ w) ** 2)),
        batch_tau_mean=lambda w, batch: epca1_t(w, batch, lam),
        batch_g_grad_mean=lambda w, batch: lam * w,
        name=name or f"epca-decomp1(lam={lam:g})",
    )


def decomp2_problem(
    dimension: int,
    smoothness: float = 1.0,
    backend: str = "inner-dca",
    inner_tolerance: float = 1e-5,
    inner_max_iterations: int = 200,
    second_moment: np.ndarray | None = None,
    name: str = "",
) -> DcProblem:
    """Expected-PCA instance under decomposition 2 with weight ``smoothness``.

    The sampled subproblem keeps the concave sample term and is solved by
    the configured backend.  Sample batches are validated against the
    convexity requirement L >= max ||z||^2 at solve time.
    """
    if not (smoothness > 0 and np.isfinite(smoothness)):
        raise ValueError(f"smoothness weight must be positive and finite, got {smoothness}")
    if backend not in SUBPROBLEM_BACKENDS:
        raise ValueError(f"unknown subproblem backend {backend!r}; expected one of {SUBPROBLEM_BACKENDS}")
    if second_moment is not None:
        second_moment = np.asarray(second_moment, dtype=np.float64)
        if second_moment.shape != (dimension, dimension):
            raise ValueError(
                f"second moment must have shape ({dimension}, {dimension}), "
                f"got {second_moment.shape}"
            )

    def solve_sampled(t: Vector, batch: Batch, w_start: Vector) -> SubproblemResult:
        return epca2_subproblem(
            t,
            batch,
            smoothness,
            w_start,
            backend=backend,
            tolerance=inner_tolerance,
            max_iterations=inner_max_iterations,
        )

    exact_dh = None
    if second_moment is not None:
        exact_dh = lambda w: smoothness * w + second_moment @ w

    return DcProblem(
        dimension=dimension,
        sample_dimension=dimension,
        feasible_set=_ball(dimension),
        per_sample_g=lambda w, z: 0.5 * smoothness * float(w @ w) - 0.5 * float(w @ z) ** 2,
        per_sample_h=lambda w, z: 0.5 * smoothness * float(w @ w) + 0.5 * float(w @ z) ** 2,
        per_sample_tau=lambda w, z: smoothness * w + float(w @ z) * z,
        solve_sampled_subproblem=solve_sampled,
        strong_convexity=StrongConvexity(rho_second=smoothness, inf_rho_first=0.0),
        alpha_bound=0.5,
        exact_g=None,
        exact_dh=exact_dh,
        per_sample_g_grad=lambda w, z: smoothness * w - float(w @ z) * z,
        per_sample_obj_grad=lambda w, z: -float(w @ z) * z,
        batch_g_mean=lambda w, batch: 0.5 * smoothness * float(w @ w)
        - 0.5 * float(np.mean((batch @ w) ** 2)),
        batch_h_mean=lambda w, batch: 0.5 * smoothness * float(w @ w)
        + 0.5 * float(np.mean((batch @ w) ** 2)),
        batch_tau_mean=lambda w, batch: epca2_t(w, batch, smoothness),
        batch_g_grad_mean=lambda w, batch: smoothness * w - _second_moment_apply(batch, w),
        name=name or f"epca-decomp2(L={smoothness:g},{backend})",
    )
