"""Exception types raised across the library."""


class JmspinError(Exception):
    """Base class for all library errors."""


class OutOfEffectCone(JmspinError):
    """Effect parameters violate the positivity cone ``norm(a) <= alpha <= 2 - norm(a)``."""


class NotUnitVector(JmspinError):
    """A direction that must be a unit vector is not one."""


class InvalidState(JmspinError):
    """A state vector lies outside the unit ball."""


class BiasedObservable(JmspinError):
    """An operation restricted to unbiased observables (alpha = 1) got a biased one."""


class NegativeRadicand(JmspinError):
    """The rms-noise radicand came out negative beyond tolerance; inputs are inconsistent."""


class NotJointlyMeasurable(JmspinError):
    """Joint POVM construction was requested for an incompatible pair."""


class SolverDidNotConverge(JmspinError):
    """A numeric solver exhausted its iteration budget without converging."""


class DistanceOutOfRange(JmspinError):
    """A requested distance lies outside the admissible range."""
