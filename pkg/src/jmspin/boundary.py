"""Optimal trade-off boundary between jointly measurable approximations.

For a fixed approximation distance d1 to the first sharp observable, the
boundary solver finds the smallest distance d2 to the second one over all
jointly measurable unbiased pairs.  The statistical metric needs a 1-D
numeric search (angular position of the first effect vector, with an exact
inner projection onto the compatibility ellipsoid); the rms metric has a
closed-form optimum where both parties measure the same unit direction.

Optima are sought in the plane of p and q.  The planar restriction and the
restriction to alpha = beta = 1 are both backed by out-of-plane and biased
spot checks in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Literal, Optional

from .algebra import BlochVector, ProblemInstance
from .errors import DistanceOutOfRange
from .optim import golden_section

Metric = Literal["statistical", "rms"]
METRICS: tuple[str, ...] = ("statistical", "rms")

#: golden-section bracket width on the outer angle, radians
_OUTER_TOL = 1e-10
#: number of sub-interval starts for the outer search
_OUTER_SEEDS = 5
#: below this minor-axis size the compatibility ellipsoid is treated as a segment
_SEGMENT_MINOR_AXIS = 1e-7
#: tie band when comparing outer-search candidates
_TIE_TOL = 1e-12


def _check_metric(metric: str) -> None:
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")


def saturation_distance(instance: ProblemInstance, metric: Metric) -> float:
    """Smallest d1 whose boundary partner distance is exactly zero.

    Beyond this value the second observable can be kept sharp: statistical
    ``sin(theta)/2``, rms ``sqrt(2 (1 - cos(theta)))``.
    """
    _check_metric(metric)
    if metric == "statistical":
        return 0.5 * math.sin(instance.theta)
    return 2.0 * math.sin(0.5 * instance.theta)


@dataclass(frozen=True)
class TradeoffPoint:
    """One point of the trade-off boundary with its optimizing pair."""

    d1: float
    d2: float
    a_opt: BlochVector
    b_opt: BlochVector
    metric: str
    theta: float


@dataclass(frozen=True)
class SymmetricOptimum:
    """Closed-form optimal pair on the d1 = d2 diagonal of the statistical metric."""

    lam: float
    a: BlochVector
    b: BlochVector
    d_sym: float


@dataclass(frozen=True)
class RmsOptimum:
    """Optimal common measurement direction for a given rms distance to p."""

    omega: float
    direction: BlochVector


def symmetric_optimum(instance: ProblemInstance) -> SymmetricOptimum:
    """Optimal symmetric pair: mix of the normalized sum and difference of p and q.

    a = lam u+ + (1-lam) u- and b mirrors a across the u+ axis, with
    ``lam = (1 + cos(theta/2) - sin(theta/2)) / 2``.  The pair sits exactly on
    the compatibility boundary: norm(a-b) + norm(a+b) = 2(1-lam) + 2 lam = 2.
    """
    u_plus = (instance.p + instance.q).normalized()
    u_minus = (instance.p - instance.q).normalized()
    half = 0.5 * instance.theta
    lam = 0.5 * (1.0 + math.cos(half) - math.sin(half))
    a = lam * u_plus + (1.0 - lam) * u_minus
    b = lam * u_plus - (1.0 - lam) * u_minus
    d_sym = 0.5 * (instance.p - a).norm()
    return SymmetricOptimum(lam=lam, a=a, b=b, d_sym=d_sym)


def rms_optimal_direction(instance: ProblemInstance, d1: float) -> RmsOptimum:
    """Common direction realizing rms distance d1 from p, tilted toward q.

    The angle between the direction and p is ``omega = arccos(1 - d1^2/2)``;
    for boundary use the direction's tilt is clamped to [0, theta].
    """
    if d1 < 0.0 or d1 > 2.0:
        raise DistanceOutOfRange(f"rms distance {d1} outside [0, 2]")
    omega = math.acos(max(-1.0, min(1.0, 1.0 - 0.5 * d1 * d1)))
    tilt = min(omega, instance.theta)
    e1, e2 = instance.plane_basis()
    direction = math.cos(tilt) * e1 + math.sin(tilt) * e2
    return RmsOptimum(omega=omega, direction=direction)


def ellipsoid_distance(
    a: BlochVector, point: BlochVector
) -> tuple[float, BlochVector]:
    """Distance from a point to the compatibility ellipsoid of a, with the projection.

    The ellipsoid has foci +-a: semi-axis 1 along a and sqrt(1 - norm(a)^2)
    transverse.  Interior points return (0, point).  Exterior points are
    projected by bisection on the Lagrange multiplier of the nearest-point
    conditions, in the plane spanned by a and the point; the bracket is
    narrowed well below the 1e-12 requirement to keep the projected point
    accurate even for slim ellipsoids.  Degenerate cases fall back to the
    unit ball (a = 0) and the point-to-segment distance (unit a).
    """
    m = a.norm()
    if m < 1e-13:
        r = point.norm()
        if r <= 1.0:
            return 0.0, point
        return r - 1.0, point * (1.0 / r)

    axis = a * (1.0 / m)
    x = point.dot(axis)
    perp = point - x * axis
    y = perp.norm()
    minor_sq = max(0.0, 1.0 - m * m)
    minor = math.sqrt(minor_sq)

    if minor < _SEGMENT_MINOR_AXIS:
        t = max(-1.0, min(1.0, x))
        nearest = t * axis
        return math.hypot(x - t, y), nearest

    if x * x + (y * y) / minor_sq <= 1.0:
        return 0.0, point

    if y < 1e-18:
        sign = 1.0 if x >= 0.0 else -1.0
        return abs(x) - 1.0, sign * axis

    def overshoot(t: float) -> float:
        u = x / (1.0 + t)
        v = minor * y / (minor_sq + t)
        return u * u + v * v

    hi = 1.0
    while overshoot(hi) > 1.0:
        hi *= 2.0
        if hi > 1e18:
            break
    lo = 0.0
    while hi - lo > 1e-15 * (1.0 + hi):
        mid = 0.5 * (lo + hi)
        if overshoot(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    xe = x / (1.0 + t)
    ye = minor_sq * y / (minor_sq + t)
    nearest = xe * axis + (ye / y) * perp
    dist = math.hypot(x - xe, y - ye)
    return dist, nearest


def _angle_to_sum_axis(instance: ProblemInstance, v: BlochVector) -> float:
    axis = (instance.p + instance.q).normalized()
    c = max(-1.0, min(1.0, v.dot(axis) / v.norm())) if v.norm() > 0 else 1.0
    return math.acos(c)


def _statistical_tradeoff(
    instance: ProblemInstance, d1: float, warm_psi: Optional[float]
) -> tuple[TradeoffPoint, float]:
    p = instance.p
    q = instance.q
    _, e2 = instance.plane_basis()

    if d1 < 1e-15:
        dist, b = ellipsoid_distance(p, q)
        return (
            TradeoffPoint(0.0, 0.5 * dist, p, b, "statistical", instance.theta),
            0.0,
        )

    # a sweeps the in-plane circle norm(p - a) = 2 d1; the effect cone
    # norm(a) <= 1 restricts the tilt angle psi to [0, arccos(d1)]
    psi_max = math.acos(min(1.0, d1))

    def a_of(psi: float) -> BlochVector:
        return (1.0 - 2.0 * d1 * math.cos(psi)) * p + (2.0 * d1 * math.sin(psi)) * e2

    def objective(psi: float) -> float:
        return ellipsoid_distance(a_of(psi), q)[0]

    brackets = []
    width = psi_max / _OUTER_SEEDS
    for k in range(_OUTER_SEEDS):
        brackets.append((k * width, (k + 1) * width))
    if warm_psi is not None:
        lo = max(0.0, warm_psi - width)
        hi = min(psi_max, warm_psi + width)
        if hi > lo:
            brackets.append((lo, hi))

    candidates = []
    for lo, hi in brackets:
        psi, val = golden_section(objective, lo, hi, tol=_OUTER_TOL)
        candidates.append((psi, val))

    best_val = min(val for _, val in candidates)
    tied = [c for c in candidates if c[1] <= best_val + _TIE_TOL]
    if len(tied) > 1:
        # tie break: smallest angle between the optimizer and the p+q axis
        tied.sort(key=lambda c: _angle_to_sum_axis(instance, a_of(c[0])))
    psi_opt, _ = tied[0]

    a_opt = a_of(psi_opt)
    dist, b_opt = ellipsoid_distance(a_opt, q)
    point = TradeoffPoint(
        d1, 0.5 * dist, a_opt, b_opt, "statistical", instance.theta
    )
    return point, psi_opt


def _rms_tradeoff(instance: ProblemInstance, d1: float) -> TradeoffPoint:
    omega = math.acos(max(-1.0, min(1.0, 1.0 - 0.5 * d1 * d1)))
    e1, e2 = instance.plane_basis()
    direction = math.cos(omega) * e1 + math.sin(omega) * e2
    d2 = 2.0 * math.sin(0.5 * max(0.0, instance.theta - omega))
    return TradeoffPoint(d1, d2, direction, direction, "rms", instance.theta)


def min_partner_distance(
    instance: ProblemInstance,
    d1: float,
    metric: Metric,
    *,
    warm_psi: Optional[float] = None,
) -> TradeoffPoint:
    """Smallest partner distance d2 over jointly measurable unbiased pairs at fixed d1.

    Statistical metric: golden-section search over the angular position of a
    on the circle norm(p-a) = 2 d1 in the p-q plane, started from five
    sub-intervals (plus an optional warm hint); the inner step is the exact
    distance from q to the compatibility ellipsoid of a.  Near-ties are
    broken toward the candidate closest to the p+q axis, then by start
    order.  Rms metric: closed-form common-direction optimum.

    d1 must lie in [0, saturation]; see saturation_distance.
    """
    _check_metric(metric)
    sat = saturation_distance(instance, metric)
    if d1 < -1e-12 or d1 > sat + 1e-9:
        raise DistanceOutOfRange(f"d1={d1} outside [0, {sat}] for metric {metric}")
    d1 = min(max(d1, 0.0), sat)
    if metric == "statistical":
        point, _ = _statistical_tradeoff(instance, d1, warm_psi)
        return point
    return _rms_tradeoff(instance, d1)


def boundary_curve(
    instance: ProblemInstance, metric: Metric, n_points: int
) -> List[TradeoffPoint]:
    """Trade-off boundary sampled at n_points uniform d1 values in [0, saturation].

    Each statistical solve is warm-started from the previous optimum; points
    are returned with d1 ascending.  The solver is deterministic, so chunked
    or sequential evaluation yields identical curves.
    """
    _check_metric(metric)
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    sat = saturation_distance(instance, metric)
    points: List[TradeoffPoint] = []
    warm: Optional[float] = None
    for k in range(n_points):
        d1 = sat * k / (n_points - 1)
        if metric == "statistical":
            point, warm = _statistical_tradeoff(instance, d1, warm)
        else:
            point = _rms_tradeoff(instance, d1)
        points.append(point)
    return points


def region_membership(
    instance: ProblemInstance, d1: float, d2: float, metric: Metric
) -> bool:
    """Whether jointly measurable approximations exist at the distance pair (d1, d2).

    True iff d2 is at or above the boundary value at d1 (tolerance 1e-7), or
    d1 is past saturation where the partner can stay sharp.
    """
    _check_metric(metric)
    if d1 < 0.0 or d2 < 0.0:
        return False
    sat = saturation_distance(instance, metric)
    if d1 >= sat - 1e-12:
        return True
    boundary = min_partner_distance(instance, d1, metric).d2
    return d2 >= boundary - 1e-7
