"""Approximation-quality metrics between a sharp spin observable and a binary POVM.

Two families are implemented: statistical deviations of outcome probabilities
(worst case over states, sphere average, and the scaled distance for the
unbiased case) and the root-mean-square noise built from the first and second
moment operators of a +-1 valued observable.  Everything is closed form;
Monte Carlo estimators with fixed seeds are provided as independent checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import BinaryObservable, BlochVector
from .errors import BiasedObservable, InvalidState, NegativeRadicand

_UNBIASED_TOL = 1e-9


def _require_sharp(sharp_p: BinaryObservable) -> None:
    if not sharp_p.is_sharp:
        raise ValueError("reference observable must be sharp (alpha=1, unit vector)")


def worst_case_deviation(sharp_p: BinaryObservable, A: BinaryObservable) -> float:
    """Largest outcome-probability deviation over all states.

    Equals ``norm(p-a)/2 + |1-alpha|/2``; the supremum is attained at the
    pure state sign(1-alpha) * (p-a)/norm(p-a).
    """
    _require_sharp(sharp_p)
    return 0.5 * (sharp_p.vec - A.vec).norm() + 0.5 * abs(1.0 - A.alpha)


def average_deviation(sharp_p: BinaryObservable, A: BinaryObservable) -> float:
    """Outcome-probability deviation averaged over the pure-state sphere.

    Piecewise closed form from the 1-D integral of |c + norm(d) t| over
    t in [-1, 1] with c = (1-alpha)/2 and d = (p-a)/2:

    * ``norm(p-a)/4 + (1-alpha)^2 / (4 norm(p-a))`` when norm(p-a) >= |1-alpha|
    * ``|1-alpha|/2`` otherwise (in particular at a = p)

    The two branches agree at the crossover, so the function is continuous.
    """
    _require_sharp(sharp_p)
    gap = (sharp_p.vec - A.vec).norm()
    bias = abs(1.0 - A.alpha)
    if gap <= bias:
        return 0.5 * bias
    return 0.25 * gap + bias * bias / (4.0 * gap)


def statistical_distance(sharp_p: BinaryObservable, A: BinaryObservable) -> float:
    """Scaled probability deviation ``norm(p-a)/2`` for unbiased approximations.

    Defined only for alpha = 1 (within 1e-9), where worst-case and average
    deviations coincide up to a constant factor.
    """
    _require_sharp(sharp_p)
    if abs(A.alpha - 1.0) > _UNBIASED_TOL:
        raise BiasedObservable(f"alpha={A.alpha}, statistical distance needs alpha=1")
    return 0.5 * (sharp_p.vec - A.vec).norm()


def _rms_radicand(sharp_p: BinaryObservable, A: BinaryObservable, p_dot_r: float) -> float:
    a = A.vec
    gap_sq = (sharp_p.vec - a).norm_sq()
    return 1.0 - a.norm_sq() + gap_sq + 2.0 * (1.0 - A.alpha) * p_dot_r


def rms_noise(
    sharp_p: BinaryObservable, A: BinaryObservable, state_r: BlochVector
) -> float:
    """Root-mean-square noise of measuring A in place of the sharp observable.

    For a +-1 valued binary observable the moment operators are
    ``A[1] = 2A - I`` and ``A[2] = I``, which collapses the defining trace to
    ``sqrt(1 - norm(a)^2 + norm(p-a)^2 + 2 (1-alpha) p.r)``.  At alpha = 1
    the value is state independent.
    """
    _require_sharp(sharp_p)
    if state_r.norm() > 1.0 + 1e-12:
        raise InvalidState(f"norm(r)={state_r.norm()} exceeds 1")
    radicand = _rms_radicand(sharp_p, A, sharp_p.vec.dot(state_r))
    if radicand < -1e-12:
        raise NegativeRadicand(f"radicand={radicand}")
    return math.sqrt(max(0.0, radicand))


def rms_distance(sharp_p: BinaryObservable, A: BinaryObservable) -> float:
    """Worst-case rms noise over all input states.

    For alpha = 1 this is the state-independent ``sqrt(2 (1 - a.p))``;
    in general the supremum is attained at r = sign(1-alpha) p, giving
    ``sqrt(1 - norm(a)^2 + norm(p-a)^2 + 2 |1-alpha|)``.
    """
    _require_sharp(sharp_p)
    radicand = _rms_radicand(sharp_p, A, 0.0) + 2.0 * abs(1.0 - A.alpha)
    return math.sqrt(max(0.0, radicand))


def rms_decomposition(
    sharp_p: BinaryObservable, A: BinaryObservable
) -> tuple[float, float]:
    """Split of the squared rms distance into accuracy and intrinsic unsharpness.

    Returns ``(norm(p-a)^2, 1 - norm(a)^2)`` for an unbiased A; the parts sum
    to rms_distance squared, and the first part equals four times the squared
    statistical distance.
    """
    _require_sharp(sharp_p)
    if abs(A.alpha - 1.0) > _UNBIASED_TOL:
        raise BiasedObservable(f"alpha={A.alpha}, decomposition needs alpha=1")
    return (sharp_p.vec - A.vec).norm_sq(), 1.0 - A.vec.norm_sq()


@dataclass(frozen=True)
class DeviationReport:
    """Bundle of the probability-deviation metrics for one (sharp, POVM) pair."""

    worst: float
    average: float
    statistical: Optional[float]


def deviation_report(sharp_p: BinaryObservable, A: BinaryObservable) -> DeviationReport:
    stat = None
    if abs(A.alpha - 1.0) <= _UNBIASED_TOL:
        stat = statistical_distance(sharp_p, A)
    return DeviationReport(
        worst=worst_case_deviation(sharp_p, A),
        average=average_deviation(sharp_p, A),
        statistical=stat,
    )


@dataclass(frozen=True)
class RmsReport:
    """Rms noise at one state together with the worst case over states."""

    per_state: float
    distance: float


def rms_report(
    sharp_p: BinaryObservable, A: BinaryObservable, state_r: BlochVector
) -> RmsReport:
    return RmsReport(
        per_state=rms_noise(sharp_p, A, state_r),
        distance=rms_distance(sharp_p, A),
    )


def _uniform_sphere(n_samples: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=(n_samples, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v


def monte_carlo_average_deviation(
    sharp_p: BinaryObservable,
    A: BinaryObservable,
    n_samples: int = 1_000_000,
    seed: int = 42,
) -> tuple[float, float]:
    """Sphere-average of the probability deviation by seeded Monte Carlo.

    Returns (mean, standard error).  The integrand is evaluated literally as
    the difference of the two outcome probabilities on random pure states, so
    this estimator is independent of the closed form in average_deviation.
    """
    _require_sharp(sharp_p)
    rng = np.random.default_rng(seed)
    r = _uniform_sphere(n_samples, rng)
    prob_sharp = 0.5 * (1.0 + r @ sharp_p.vec.as_array())
    prob_approx = 0.5 * (A.alpha + r @ A.vec.as_array())
    vals = np.abs(prob_sharp - prob_approx)
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(n_samples))
    return mean, stderr


def monte_carlo_worst_deviation(
    sharp_p: BinaryObservable,
    A: BinaryObservable,
    n_samples: int = 100_000,
    seed: int = 42,
) -> float:
    """Largest probability deviation seen over seeded random pure states.

    Approaches the closed form in worst_case_deviation from below.
    """
    _require_sharp(sharp_p)
    rng = np.random.default_rng(seed)
    r = _uniform_sphere(n_samples, rng)
    prob_sharp = 0.5 * (1.0 + r @ sharp_p.vec.as_array())
    prob_approx = 0.5 * (A.alpha + r @ A.vec.as_array())
    return float(np.abs(prob_sharp - prob_approx).max())
