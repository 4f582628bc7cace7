"""Pauli-coordinate algebra for qubit effects, states, and sharp spin observables.

A 2x2 Hermitian operator is stored as a (scalar, vector) pair in the halved
convention ``M = (m0*I + m.sigma)/2``, so traces, eigenvalues, and positivity
are exact closed forms and no numerical linear algebra is needed.  A complex
matrix view exists only for debugging and cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidState, NotUnitVector, OutOfEffectCone

#: tolerance for internal cone / unit-norm invariants
CONE_TOL = 1e-12
#: tolerance for user-facing direction inputs (parsing slack)
DIRECTION_TOL = 1e-9
#: tolerance on the state-ball membership check
STATE_TOL = 1e-12


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector: a spin direction, an effect vector, or a state polarization."""

    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def norm_sq(self) -> float:
        return self.x * self.x + self.y * self.y + self.z * self.z

    def dot(self, other: BlochVector) -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def normalized(self) -> BlochVector:
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return BlochVector(self.x / n, self.y / n, self.z / n)

    def __add__(self, other: BlochVector) -> BlochVector:
        return BlochVector(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: BlochVector) -> BlochVector:
        return BlochVector(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> BlochVector:
        return BlochVector(-self.x, -self.y, -self.z)

    def __mul__(self, t: float) -> BlochVector:
        return BlochVector(self.x * t, self.y * t, self.z * t)

    __rmul__ = __mul__

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_iterable(cls, seq) -> BlochVector:
        x, y, z = (float(v) for v in seq)
        return cls(x, y, z)


ZERO = BlochVector(0.0, 0.0, 0.0)

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class HermitianOp:
    """2x2 Hermitian operator ``M = (scalar*I + vec.sigma)/2``."""

    scalar: float
    vec: BlochVector

    @property
    def trace(self) -> float:
        return self.scalar

    def eigenvalues(self) -> tuple[float, float]:
        """Return (smallest, largest) eigenvalue, exact for 2x2 operators."""
        n = self.vec.norm()
        return 0.5 * (self.scalar - n), 0.5 * (self.scalar + n)

    def min_eigenvalue(self) -> float:
        return 0.5 * (self.scalar - self.vec.norm())

    def max_eigenvalue(self) -> float:
        return 0.5 * (self.scalar + self.vec.norm())

    def to_matrix(self) -> np.ndarray:
        """Complex 2x2 matrix view; for debugging and cross-checks only."""
        v = self.vec
        return 0.5 * (
            self.scalar * np.eye(2, dtype=complex)
            + v.x * _SIGMA_X
            + v.y * _SIGMA_Y
            + v.z * _SIGMA_Z
        )

    def __add__(self, other: HermitianOp) -> HermitianOp:
        return HermitianOp(self.scalar + other.scalar, self.vec + other.vec)

    def __sub__(self, other: HermitianOp) -> HermitianOp:
        return HermitianOp(self.scalar - other.scalar, self.vec - other.vec)

    def __neg__(self) -> HermitianOp:
        return HermitianOp(-self.scalar, -self.vec)

    @staticmethod
    def identity() -> HermitianOp:
        return HermitianOp(2.0, ZERO)

    @staticmethod
    def zero() -> HermitianOp:
        return HermitianOp(0.0, ZERO)


def min_eigenvalue(op: HermitianOp) -> float:
    """Smallest eigenvalue of a 2x2 Hermitian operator, ``(m0 - norm(m))/2``."""
    return op.min_eigenvalue()


@dataclass(frozen=True)
class BinaryObservable:
    """Two-outcome POVM with positive effect ``A = (alpha*I + vec.sigma)/2``.

    Validity of ``0 <= A <= I`` is the cone condition
    ``norm(vec) <= alpha <= 2 - norm(vec)``, checked on construction.
    Sharp observables are the special case alpha = 1 with a unit vector.
    """

    alpha: float
    vec: BlochVector

    def __post_init__(self):
        n = self.vec.norm()
        if self.alpha < n - CONE_TOL or self.alpha > 2.0 - n + CONE_TOL:
            raise OutOfEffectCone(
                f"alpha={self.alpha} outside [{n}, {2.0 - n}] for norm(a)={n}"
            )

    @property
    def is_sharp(self) -> bool:
        return (
            abs(self.alpha - 1.0) <= CONE_TOL
            and abs(self.vec.norm() - 1.0) <= CONE_TOL
        )

    def effect(self) -> HermitianOp:
        """The positive-outcome effect operator."""
        return HermitianOp(self.alpha, self.vec)

    def complement(self) -> BinaryObservable:
        """The observable with outcomes swapped; its effect is ``I - A``."""
        return BinaryObservable(2.0 - self.alpha, -self.vec)


def effect_from_parameters(alpha: float, a: BlochVector) -> BinaryObservable:
    """Validated two-outcome observable from cone parameters (alpha, a).

    Raises OutOfEffectCone when alpha lies outside
    ``[norm(a) - 1e-12, 2 - norm(a) + 1e-12]``.
    """
    return BinaryObservable(float(alpha), a)


def sharp_spin(direction: BlochVector) -> BinaryObservable:
    """Sharp spin observable along a unit direction; its effect is a rank-1 projection.

    The input may be off unit norm by up to 1e-9 and is renormalized so the
    internal 1e-12 sharpness invariant holds exactly.
    """
    n = direction.norm()
    if abs(n - 1.0) > DIRECTION_TOL:
        raise NotUnitVector(f"norm(direction)={n}, expected 1 within {DIRECTION_TOL}")
    return BinaryObservable(1.0, direction * (1.0 / n))


def outcome_probability(obs: BinaryObservable, state_r: BlochVector) -> float:
    """Probability of the positive outcome on the state with polarization r.

    Equals ``tr(rho A) = (alpha + a.r)/2`` for ``rho = (I + r.sigma)/2``;
    clamped into [0, 1] against float dust.
    """
    if state_r.norm() > 1.0 + STATE_TOL:
        raise InvalidState(f"norm(r)={state_r.norm()} exceeds 1")
    p = 0.5 * (obs.alpha + obs.vec.dot(state_r))
    return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class ProblemInstance:
    """Two sharp spin directions p, q separated by angle theta (radians).

    theta is restricted to (0, pi/2]; theta = 0 is rejected because the
    symmetric-optimum construction divides by norm(p - q).
    """

    theta: float
    p: BlochVector
    q: BlochVector

    def __post_init__(self):
        if not (0.0 < self.theta <= 0.5 * math.pi + 1e-12):
            raise ValueError(f"theta={self.theta} outside (0, pi/2]")
        for name, v in (("p", self.p), ("q", self.q)):
            if abs(v.norm() - 1.0) > DIRECTION_TOL:
                raise NotUnitVector(f"norm({name})={v.norm()}, expected 1")
        if abs(self.p.dot(self.q) - math.cos(self.theta)) > 1e-12:
            raise ValueError("p.q does not match cos(theta)")

    @classmethod
    def from_angle(cls, theta: float) -> ProblemInstance:
        """Canonical planar instance: p and q in the x-y plane, symmetric about y."""
        h = 0.5 * theta
        p = BlochVector(math.sin(h), math.cos(h), 0.0)
        q = BlochVector(-math.sin(h), math.cos(h), 0.0)
        return cls(theta, p, q)

    @classmethod
    def from_vectors(cls, p: BlochVector, q: BlochVector) -> ProblemInstance:
        p = p.normalized()
        q = q.normalized()
        theta = math.acos(min(1.0, max(-1.0, p.dot(q))))
        return cls(theta, p, q)

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)

    def plane_basis(self) -> tuple[BlochVector, BlochVector]:
        """Orthonormal in-plane basis (p, e2) with q = cos(theta) p + sin(theta) e2."""
        e2 = self.q - self.p * self.q.dot(self.p)
        return self.p, e2.normalized()
