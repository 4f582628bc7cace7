"""Shared helpers for the test suite: random samplers and brute-force oracles.

The oracles here recompute quantities by independent means (dense grids,
matrix diagonalization, direct enumeration) and never call the code paths
they are used to check.
"""

from __future__ import annotations

import math

import numpy as np

from jmspin.algebra import BinaryObservable, BlochVector


def ball_vector(rng: np.random.Generator, radius: float = 1.0) -> BlochVector:
    """Uniform random vector in the ball of the given radius."""
    v = rng.normal(size=3)
    v *= radius * rng.random() ** (1.0 / 3.0) / np.linalg.norm(v)
    return BlochVector(v[0], v[1], v[2])


def unit_vector(rng: np.random.Generator) -> BlochVector:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return BlochVector(v[0], v[1], v[2])


def random_unbiased(rng: np.random.Generator) -> BinaryObservable:
    return BinaryObservable(1.0, ball_vector(rng))


def random_biased(rng: np.random.Generator) -> BinaryObservable:
    a = ball_vector(rng)
    n = a.norm()
    alpha = rng.uniform(n, 2.0 - n)
    return BinaryObservable(alpha, a)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random rotation matrix from a QR decomposition."""
    m = rng.normal(size=(3, 3))
    q, r = np.linalg.qr(m)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def rotate(rot: np.ndarray, v: BlochVector) -> BlochVector:
    w = rot @ v.as_array()
    return BlochVector(w[0], w[1], w[2])


def fibonacci_sphere(n: int) -> np.ndarray:
    """Deterministic near-uniform unit vectors, shape (n, 3)."""
    k = np.arange(n, dtype=float)
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    z = 1.0 - (2.0 * k + 1.0) / n
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = 2.0 * math.pi * k / golden
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def brute_statistical_d2(
    theta: float, d1: float, n_psi: int = 1601, n_t: int = 1201
) -> float:
    """Dense-grid minimum of the statistical partner distance at fixed d1.

    Works in plane coordinates p = (1, 0), q = (cos theta, sin theta).  The
    candidate first vector sweeps the circle norm(p - a) = 2 d1 restricted to
    the unit disk; for each candidate the distance from q to the
    compatibility ellipsoid (foci +-a) is minimized over a dense boundary
    grid, with zero when q is inside.  Entirely grid-based: independent of
    the projection and golden-section code under test.
    """
    qx, qy = math.cos(theta), math.sin(theta)
    psi_max = math.acos(min(1.0, d1))
    psis = np.linspace(0.0, psi_max, n_psi)
    a_x = 1.0 - 2.0 * d1 * np.cos(psis)
    a_y = 2.0 * d1 * np.sin(psis)
    m = np.hypot(a_x, a_y)
    m = np.minimum(m, 1.0)

    # coordinates of q in each candidate's (axis, transverse) frame
    with np.errstate(invalid="ignore", divide="ignore"):
        ux = np.where(m > 0, a_x / np.maximum(m, 1e-300), 1.0)
        uy = np.where(m > 0, a_y / np.maximum(m, 1e-300), 0.0)
    x = qx * ux + qy * uy
    y = np.abs(-qx * uy + qy * ux)
    minor = np.sqrt(np.maximum(0.0, 1.0 - m * m))

    t = np.linspace(0.0, math.pi, n_t)
    ct, st = np.cos(t), np.sin(t)
    dist_sq = (x[:, None] - ct[None, :]) ** 2 + (
        y[:, None] - minor[:, None] * st[None, :]
    ) ** 2
    dist = np.sqrt(dist_sq.min(axis=1))

    inside = np.zeros(len(x), dtype=bool)
    fat = minor > 1e-12
    inside[fat] = x[fat] ** 2 + (y[fat] / minor[fat]) ** 2 <= 1.0
    inside[~fat] = (np.abs(x[~fat]) <= 1.0) & (y[~fat] <= 1e-12)
    dist = np.where(inside, 0.0, dist)
    return 0.5 * float(dist.min())


def brute_rms_d2(theta: float, d1: float, step: float = 1e-4) -> float:
    """Grid minimum of the rms partner distance over common unit directions.

    Unbiased unit-vector pairs are jointly measurable only when equal (or
    opposite), so the search space is the tilt angle of the shared direction
    in the p-q plane; a tilt phi is admissible when its distance to p,
    2 sin(phi/2), does not exceed d1.
    """
    n = int(theta / step) + 1
    phis = np.linspace(0.0, theta, n)
    d1_of = 2.0 * np.sin(0.5 * phis)
    d2_of = 2.0 * np.sin(0.5 * (theta - phis))
    ok = d1_of <= d1 + 1e-12
    return float(d2_of[ok].min())
