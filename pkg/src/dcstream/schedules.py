"""Per-iteration sample-size schedules and their admissibility checks.

The stochastic solvers draw n_k fresh samples at iteration k.  Almost-sure
convergence requires the series sum_k n_k^(-beta) to be finite, where beta
is the complexity exponent certified for the scheme (1 when the first
component is exact, the Rademacher exponent alpha otherwise).  For the
power rule n_k = ceil(c * k^p) the series is finite exactly when
p * beta > 1.

This module also evaluates the uniform-deviation constants behind the
exponents: E sup_w |G_k(w) - G(w)| <= N_g * n_k^(-alpha) in three regimes
of the per-sample first component (Hoelder in the decision variable,
Hoelder in the sample, finitely supported samples).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SampleSchedule",
    "ScheduleOverflowError",
    "ScheduleValidation",
    "validate_schedule",
    "RademacherBound",
    "rademacher_holder_in_w",
    "rademacher_holder_in_z",
    "rademacher_discrete",
]

_SATURATION = float(2**53)  # largest integer range exactly covered by float64


class ScheduleOverflowError(OverflowError):
    """A requested batch size exceeded the exactly representable range."""


@dataclass(frozen=True)
class SampleSchedule:
    """Power-law batch-size rule n_k = ceil(c * k^p), k = 1, 2, ...

    ``cap``, when set, clips every batch at a fixed maximum; capped
    schedules never satisfy the summability condition and are only
    meant for finite-data experiments.
    """

    c: int = 1
    p: float = 2.0
    cap: int | None = None

    def __post_init__(self):
        if self.c < 1:
            raise ValueError(f"schedule constant c must be a positive integer, got {self.c}")
        if not (self.p > 0 and math.isfinite(self.p)):
            raise ValueError(f"schedule exponent p must be positive and finite, got {self.p}")
        if self.cap is not None and self.cap < 1:
            raise ValueError(f"schedule cap must be >= 1 when set, got {self.cap}")

    def size(self, k: int) -> int:
        """Batch size at iteration ``k`` (1-indexed)."""
        if k < 1:
            raise ValueError(f"iteration index must be >= 1, got {k}")
        raw = float(self.c) * float(k) ** self.p
        if raw > _SATURATION:
            raise ScheduleOverflowError(
                f"batch size c*k^p = {raw:g} at k={k} exceeds 2^53; "
                "refusing inexact integer arithmetic"
            )
        n = math.ceil(raw)
        if self.cap is not None:
            n = min(n, self.cap)
        return max(n, 1)

    def label(self) -> str:
        c = f"{self.c}*" if self.c != 1 else ""
        cap = f",cap={self.cap}" if self.cap is not None else ""
        return f"{c}k^{self.p:g}{cap}"


@dataclass(frozen=True)
class ScheduleValidation:
    """Outcome of the summability check for one (schedule, beta) pair."""

    valid: bool
    capped: bool
    reason: str


def validate_schedule(schedule: SampleSchedule, beta: float) -> ScheduleValidation:
    """Check sum_k n_k^(-beta) < infinity for a power-law schedule.

    ``beta`` is the certified complexity exponent in (0, 1].  Capped
    schedules are reported invalid with the ``capped`` flag set, since a
    bounded batch size makes the series diverge regardless of p.
    """
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if schedule.cap is not None:
        return ScheduleValidation(
            valid=False,
            capped=True,
            reason=f"capped at {schedule.cap}: bounded batches make "
            f"sum n_k^(-{beta:g}) diverge",
        )
    product = schedule.p * beta
    if product > 1.0:
        return ScheduleValidation(
            valid=True,
            capped=False,
            reason=f"p*beta = {product:g} > 1: sum n_k^(-{beta:g}) is finite",
        )
    return ScheduleValidation(
        valid=False,
        capped=False,
        reason=f"p*beta = {product:g} <= 1: sum n_k^(-{beta:g}) diverges",
    )


@dataclass(frozen=True)
class RademacherBound:
    """Uniform-deviation constant: E sup_w |G_k(w) - G(w)| <= n_g * k^(-alpha)."""

    n_g: float
    alpha: float

    def __post_init__(self):
        if not (self.n_g > 0 and math.isfinite(self.n_g)):
            raise ValueError(f"deviation constant must be positive and finite, got {self.n_g}")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"exponent alpha must lie in (0, 1], got {self.alpha}")

    @property
    def min_growth_exponent(self) -> float:
        """Smallest schedule exponent p with p * alpha > 1 (open bound)."""
        return 1.0 / self.alpha

    @property
    def impractical(self) -> bool:
        """True when the required batch growth exceeds degree 10.

        Tiny exponents (e.g. the sample-Hoelder case in high dimension)
        force schedules like n_k = k^100 that exhaust any finite dataset
        within a few iterations.
        """
        return self.alpha < 0.1


def rademacher_holder_in_w(
    m_bound: float, l_const: float, gamma: float, diameter: float, dimension: int, alpha: float
) -> RademacherBound:
    """Deviation constant when g(., z) is uniformly Hoelder in w.

    For |g(w, z)| <= m_bound, |g(w, z) - g(v, z)| <= l_const * ||w - v||^gamma
    with gamma in (0, 1], a feasible-set diameter ``diameter`` and decision
    dimension ``dimension``, any exponent alpha in (0, 1/2) is admissible
    with constant

        n_g = l_const * diameter^gamma * dimension^(gamma/2)
              + m_bound * sqrt(dimension) / sqrt(gamma * (1 - 2*alpha) * e).
    """
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    if not (0.0 < alpha < 0.5):
        raise ValueError(f"alpha must lie in (0, 0.5), got {alpha}")
    if m_bound <= 0 or l_const <= 0 or diameter <= 0:
        raise ValueError("m_bound, l_const and diameter must be positive")
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    n_g = l_const * diameter**gamma * dimension ** (gamma / 2.0) + (
        m_bound * math.sqrt(dimension)
    ) / math.sqrt(gamma * (1.0 - 2.0 * alpha) * math.e)
    return RademacherBound(n_g=n_g, alpha=alpha)


def rademacher_holder_in_z(
    m_bound: float, l_const: float, gamma: float, diameter: float, sample_dimension: int
) -> RademacherBound:
    """Deviation constant when g(w, .) is uniformly Hoelder in the sample.

    For |g(w, z)| <= m_bound and |g(w, z) - g(w, y)| <= l_const * ||z - y||^gamma
    over a sample domain of diameter ``diameter`` in dimension
    ``sample_dimension``, the certified pair is

        n_g = m_bound + l_const * diameter^gamma * n^(gamma/2),
        alpha = gamma / (2*gamma + n),  n = sample_dimension.

    The exponent decays with the sample dimension; the ``impractical``
    flag on the result marks the regime where the induced schedule is
    unusable.
    """
    if gamma <= 0 or not math.isfinite(gamma):
        raise ValueError(f"gamma must be positive and finite, got {gamma}")
    if m_bound <= 0 or l_const <= 0 or diameter <= 0:
        raise ValueError("m_bound, l_const and diameter must be positive")
    if sample_dimension < 1:
        raise ValueError(f"sample dimension must be >= 1, got {sample_dimension}")
    n = float(sample_dimension)
    n_g = m_bound + l_const * diameter**gamma * n ** (gamma / 2.0)
    alpha = gamma / (2.0 * gamma + n)
    return RademacherBound(n_g=n_g, alpha=alpha)


def rademacher_discrete(m_bound: float, support_size: int, k: int) -> float:
    """Deviation bound m_bound * sqrt(support_size / k) at batch size k.

    Applies when the sample distribution has finite support of size
    ``support_size`` and |g(w, z)| <= m_bound; the certified exponent is
    alpha = 1/2 with constant m_bound * sqrt(support_size).
    """
    if m_bound <= 0 or not math.isfinite(m_bound):
        raise ValueError(f"m_bound must be positive and finite, got {m_bound}")
    if support_size < 1:
        raise ValueError(f"support size must be >= 1, got {support_size}")
    if k < 1:
        raise ValueError(f"batch size must be >= 1, got {k}")
    return m_bound * math.sqrt(support_size / k)
