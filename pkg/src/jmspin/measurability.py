"""Joint measurability of two binary qubit observables.

Two decision routes are provided and kept independent of each other:

* ``busch_margin`` evaluates the closed-form criterion
  ``norm(a-b) + norm(a+b) <= 2``, exact (necessary and sufficient) for
  unbiased pairs and necessary in general.
* ``joint_feasibility`` is a numeric oracle for arbitrary valid pairs.  It
  searches for a four-effect joint POVM directly, by maximizing the smallest
  positivity slack over the free parameters left after the marginal
  constraints are imposed.  It never consults the closed-form criterion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._feasibility_core import newton_polish, slack_vector, solve_max_min
from .algebra import BinaryObservable, BlochVector, HermitianOp
from .errors import NotJointlyMeasurable, SolverDidNotConverge

#: default feasibility tolerance; slack is solver-accurate, not machine-epsilon
DEFAULT_FEASIBILITY_TOL = 1e-9

#: |slack| below this is reported as boundary-indeterminate by the CLI when
#: the numeric oracle alone must decide (biased pairs)
INDETERMINATE_BAND = 1e-6

_N_RANDOM_STARTS = 4
_ITER_BUDGET = 2000
_DIAM_TOL = 1e-11
_CLAMP_BAND = 2e-10  # on constraint slack = 2x eigenvalue
_POLISH_THRESHOLDS = (1e-4, 1e-6, 1e-8)


def busch_margin(a: BlochVector, b: BlochVector) -> float:
    """Margin ``2 - norm(a-b) - norm(a+b)`` of the unbiased compatibility criterion.

    Nonnegative iff the unbiased (alpha = beta = 1) pair with effect vectors
    a, b is jointly measurable.  Callers must keep norm(a), norm(b) <= 1.
    """
    return 2.0 - (a - b).norm() - (a + b).norm()


def jm_ellipsoid_contains(a: BlochVector, b: BlochVector) -> bool:
    """Whether b lies in the compatibility ellipsoid of a.

    The set ``{b : norm(b-a) + norm(b+a) <= 2}`` is the ellipsoid with foci
    +-a, major semi-axis 1 along a, and minor semi-axis sqrt(1 - norm(a)^2).
    This membership view is what the boundary solver projects onto.
    """
    return busch_margin(a, b) >= 0.0


@dataclass(frozen=True)
class JointPovm4:
    """Four effects of a joint measurement, outcomes (+,+), (+,-), (-,+), (-,-).

    A valid instance is positive (each min eigenvalue >= -1e-10), sums to the
    identity to 1e-12, and reproduces both marginals to 1e-10:
    first = g_pp + g_pm, second = g_pp + g_mp.
    """

    g_pp: HermitianOp
    g_pm: HermitianOp
    g_mp: HermitianOp
    g_mm: HermitianOp

    def effects(self) -> tuple[HermitianOp, HermitianOp, HermitianOp, HermitianOp]:
        return (self.g_pp, self.g_pm, self.g_mp, self.g_mm)

    def total(self) -> HermitianOp:
        return self.g_pp + self.g_pm + self.g_mp + self.g_mm

    def first_marginal(self) -> HermitianOp:
        return self.g_pp + self.g_pm

    def second_marginal(self) -> HermitianOp:
        return self.g_pp + self.g_mp

    def min_eigenvalue(self) -> float:
        return min(g.min_eigenvalue() for g in self.effects())


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the numeric joint-measurability oracle.

    ``slack`` is the maximized smallest constraint slack (twice the smallest
    effect eigenvalue at the optimum); feasible means slack >= -tol.  The
    witness is present only for feasible results.
    """

    feasible: bool
    slack: float
    witness: Optional[JointPovm4]


def _povm_from_params(
    gamma: float, g: BlochVector, A: BinaryObservable, B: BinaryObservable
) -> JointPovm4:
    return JointPovm4(
        g_pp=HermitianOp(gamma, g),
        g_pm=HermitianOp(A.alpha - gamma, A.vec - g),
        g_mp=HermitianOp(B.alpha - gamma, B.vec - g),
        g_mm=HermitianOp(2.0 - A.alpha - B.alpha + gamma, g - A.vec - B.vec),
    )


def _clamp_params(
    gamma: float, g: BlochVector, A: BinaryObservable, B: BinaryObservable
) -> tuple[float, BlochVector]:
    """Zero out tiny negative effect eigenvalues by minimal moves of (gamma, g).

    Each constraint slack is linear along its own normal, so a move of
    |slack|/2 restores it exactly while preserving the marginals (all four
    effects are rebuilt from the same parameters).  Only slacks within the
    clamp band are repaired; anything more negative indicates a pair that is
    feasible only up to tolerance and is left as is.
    """
    a, b, s = A.vec, B.vec, A.vec + B.vec
    for _ in range(10):
        slacks = (
            gamma - g.norm(),
            (A.alpha - gamma) - (a - g).norm(),
            (B.alpha - gamma) - (b - g).norm(),
            (2.0 - A.alpha - B.alpha + gamma) - (s - g).norm(),
        )
        worst = min(range(4), key=lambda i: slacks[i])
        sv = slacks[worst]
        if sv >= 0.0 or sv < -_CLAMP_BAND:
            break
        t = -0.5 * sv
        if worst == 0:
            n = g.norm()
            if n < 1e-300:
                gamma += 2.0 * t
            else:
                gamma += t
                g = g - g * (t / n)
        elif worst == 1:
            d = a - g
            n = d.norm()
            if n < 1e-300:
                gamma -= 2.0 * t
            else:
                gamma -= t
                g = g + d * (t / n)
        elif worst == 2:
            d = b - g
            n = d.norm()
            if n < 1e-300:
                gamma -= 2.0 * t
            else:
                gamma -= t
                g = g + d * (t / n)
        else:
            d = s - g
            n = d.norm()
            if n < 1e-300:
                gamma += 2.0 * t
            else:
                gamma += t
                g = g - d * (t / n)
    return gamma, g


def joint_feasibility(
    A: BinaryObservable,
    B: BinaryObservable,
    tol: float = DEFAULT_FEASIBILITY_TOL,
    *,
    seed: int = 42,
) -> FeasibilityResult:
    """Numeric joint-measurability oracle for two valid binary observables.

    Any joint POVM with the required marginals is determined by one free
    effect ``G = (gamma*I + g.sigma)/2``; the other three follow by
    subtraction.  Positivity of all four is the concave max-min problem

        maximize  min( gamma - |g|, (alpha-gamma) - |a-g|,
                       (beta-gamma) - |b-g|, (2-alpha-beta+gamma) - |a+b-g| )

    over (gamma, g) in R^4, solved by multi-start Nelder-Mead descent with a
    fixed start order (origin, a/2, b/2, (a+b)/4, then four seeded random
    points; iteration budget 2000 per start, final stop at simplex diameter
    below 1e-11) followed by an active-set Newton polish that is accepted
    only when the exact objective improves.  Ties keep the first maximizer
    found, so results are reproducible whether starts run sequentially or
    concurrently.

    Reports feasible iff the maximized slack is >= -tol and then carries the
    maximizing witness (tiny negative eigenvalues clamped to zero).

    Raises SolverDidNotConverge if no start reaches the stopping rule within
    its iteration budget.
    """
    a, b = A.vec, B.vec
    rng = random.Random(seed)
    starts = np.empty((4 + _N_RANDOM_STARTS, 3))
    starts[0] = (0.0, 0.0, 0.0)
    starts[1] = (0.5 * a.x, 0.5 * a.y, 0.5 * a.z)
    starts[2] = (0.5 * b.x, 0.5 * b.y, 0.5 * b.z)
    starts[3] = (0.25 * (a.x + b.x), 0.25 * (a.y + b.y), 0.25 * (a.z + b.z))
    for i in range(4, 4 + _N_RANDOM_STARTS):
        starts[i] = (
            rng.uniform(-0.5, 0.5),
            rng.uniform(-0.5, 0.5),
            rng.uniform(-0.5, 0.5),
        )

    args = (A.alpha, B.alpha, a.x, a.y, a.z, b.x, b.y, b.z)
    phi, best, any_conv = solve_max_min(*args, starts, _ITER_BUDGET, _DIAM_TOL)
    if not any_conv:
        raise SolverDidNotConverge(
            f"no feasibility start converged within {_ITER_BUDGET} iterations"
        )

    point = (float(best[0]), float(best[1]), float(best[2]), float(best[3]))
    for thresh in _POLISH_THRESHOLDS:
        ok, p0, p1, p2, p3 = newton_polish(*point, *args, thresh)
        if ok:
            val = float(slack_vector(p0, p1, p2, p3, *args).min())
            if val > phi:
                phi = val
                point = (p0, p1, p2, p3)

    feasible = phi >= -tol
    witness = None
    if feasible:
        gamma = point[0]
        g = BlochVector(point[1], point[2], point[3])
        gamma, g = _clamp_params(gamma, g, A, B)
        witness = _povm_from_params(gamma, g, A, B)
    return FeasibilityResult(feasible=feasible, slack=float(phi), witness=witness)


def construct_joint_povm(
    A: BinaryObservable,
    B: BinaryObservable,
    tol: float = DEFAULT_FEASIBILITY_TOL,
    *,
    seed: int = 42,
) -> JointPovm4:
    """Explicit joint POVM for a jointly measurable pair.

    Runs the feasibility oracle and returns its clamped witness.  Raises
    NotJointlyMeasurable when the oracle reports the pair infeasible.
    """
    result = joint_feasibility(A, B, tol, seed=seed)
    if not result.feasible or result.witness is None:
        raise NotJointlyMeasurable(f"slack {result.slack:.3e} below -{tol:.1e}")
    return result.witness
