"""Jitted numeric core of the joint-measurability oracle.

The free joint-effect parameters (gamma, g) leave four positivity slacks,
each of the form ``sign*gamma + const - norm(center - g)``; the oracle
maximizes their minimum.  This module provides:

* ``solve_max_min``: multi-start Nelder-Mead descent over (gamma, g) with a
  per-start chain of shrinking restart steps (final stop: simplex diameter
  below the requested tolerance) and an exact 1-D gamma polish after every
  stage.
* ``newton_polish``: active-set KKT Newton refinement of a near-optimal
  point; quadratically accurate when the guessed active set is right.
  Callers must accept its output only when the exact objective improves.

Everything here is deterministic: no RNG, fixed iteration order.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

#: per-start restart chain: initial simplex steps and stage stopping diameters
_STAGE_STEPS = (0.25, 1e-5, 1e-8)
_STAGE_DIAMS = (1e-6, 1e-9, -1.0)  # -1 marks "use the caller's final tolerance"


@njit(cache=True)
def slack_vector(gamma, gx, gy, gz, alpha, beta, ax, ay, az, bx, by, bz):
    """The four positivity slacks (twice the effect eigenvalue floor each)."""
    s = np.empty(4)
    s[0] = gamma - math.sqrt(gx * gx + gy * gy + gz * gz)
    s[1] = (alpha - gamma) - math.sqrt((ax - gx) ** 2 + (ay - gy) ** 2 + (az - gz) ** 2)
    s[2] = (beta - gamma) - math.sqrt((bx - gx) ** 2 + (by - gy) ** 2 + (bz - gz) ** 2)
    sx, sy, sz = ax + bx, ay + by, az + bz
    s[3] = (2.0 - alpha - beta + gamma) - math.sqrt(
        (sx - gx) ** 2 + (sy - gy) ** 2 + (sz - gz) ** 2
    )
    return s


@njit(cache=True)
def _solve_pivoted(J, rhs):
    """Gaussian elimination with partial pivoting; returns (ok, solution)."""
    n = J.shape[0]
    A = J.copy()
    x = rhs.copy()
    for col in range(n):
        piv = col
        big = abs(A[col, col])
        for r in range(col + 1, n):
            v = abs(A[r, col])
            if v > big:
                big = v
                piv = r
        if big < 1e-13:
            return False, x
        if piv != col:
            for c in range(col, n):
                tmp = A[col, c]
                A[col, c] = A[piv, c]
                A[piv, c] = tmp
            tmp = x[col]
            x[col] = x[piv]
            x[piv] = tmp
        inv = 1.0 / A[col, col]
        for r in range(col + 1, n):
            f = A[r, col] * inv
            if f != 0.0:
                for c in range(col, n):
                    A[r, c] -= f * A[col, c]
                x[r] -= f * x[col]
    for col in range(n - 1, -1, -1):
        acc = x[col]
        for c in range(col + 1, n):
            acc -= A[col, c] * x[c]
        x[col] = acc / A[col, col]
    return True, x


@njit(cache=True)
def newton_polish(gamma, gx, gy, gz, alpha, beta, ax, ay, az, bx, by, bz, thresh):
    """Refine a near-maximizer by Newton steps on the active-set KKT system.

    Constraints within ``thresh`` of the current minimum slack are treated
    as active; the square system couples the point, the level value, and the
    multipliers.  Bails out (ok=False) on degenerate geometry, a singular
    system, or an implausibly large step.
    """
    centers = np.empty((4, 3))
    centers[0, 0] = 0.0
    centers[0, 1] = 0.0
    centers[0, 2] = 0.0
    centers[1, 0] = ax
    centers[1, 1] = ay
    centers[1, 2] = az
    centers[2, 0] = bx
    centers[2, 1] = by
    centers[2, 2] = bz
    centers[3, 0] = ax + bx
    centers[3, 1] = ay + by
    centers[3, 2] = az + bz
    signs = np.array([1.0, -1.0, -1.0, 1.0])
    consts = np.array([0.0, alpha, beta, 2.0 - alpha - beta])

    s = slack_vector(gamma, gx, gy, gz, alpha, beta, ax, ay, az, bx, by, bz)
    t = s.min()
    active = np.empty(4, dtype=np.int64)
    m = 0
    for i in range(4):
        if s[i] - t <= thresh:
            active[m] = i
            m += 1
    if m < 2:
        return False, gamma, gx, gy, gz

    lam = np.full(m, 1.0 / m)
    x = np.array([gamma, gx, gy, gz])
    for _ in range(30):
        n_un = 5 + m
        J = np.zeros((n_un, n_un))
        F = np.zeros(n_un)
        grads = np.empty((m, 4))
        hess = np.zeros((m, 4, 4))
        for k in range(m):
            i = active[k]
            vx = centers[i, 0] - x[1]
            vy = centers[i, 1] - x[2]
            vz = centers[i, 2] - x[3]
            r = math.sqrt(vx * vx + vy * vy + vz * vz)
            if r < 1e-9:
                return False, gamma, gx, gy, gz
            sk = signs[i] * x[0] + consts[i] - r
            ux, uy, uz = vx / r, vy / r, vz / r
            grads[k, 0] = signs[i]
            grads[k, 1] = ux
            grads[k, 2] = uy
            grads[k, 3] = uz
            u0 = np.array([ux, uy, uz])
            for p in range(3):
                for q in range(3):
                    eye = 1.0 if p == q else 0.0
                    hess[k, 1 + p, 1 + q] = -(eye - u0[p] * u0[q]) / r
            F[k] = sk - t
        for k in range(m):
            for j in range(4):
                J[k, j] = grads[k, j]
            J[k, 4] = -1.0
        for j in range(4):
            acc = 0.0
            for k in range(m):
                acc += lam[k] * grads[k, j]
            F[m + j] = acc
            for jj in range(4):
                hsum = 0.0
                for k in range(m):
                    hsum += lam[k] * hess[k, j, jj]
                J[m + j, jj] = hsum
            for k in range(m):
                J[m + j, 5 + k] = grads[k, j]
        F[m + 4] = lam.sum() - 1.0
        for k in range(m):
            J[m + 4, 5 + k] = 1.0

        ok, du = _solve_pivoted(J, -F)
        if not ok:
            return False, gamma, gx, gy, gz
        stepn = 0.0
        for j in range(5):
            d = abs(du[j])
            if d > stepn:
                stepn = d
        if not np.isfinite(stepn) or stepn > 0.25:
            return False, gamma, gx, gy, gz
        x[0] += du[0]
        x[1] += du[1]
        x[2] += du[2]
        x[3] += du[3]
        t += du[4]
        for k in range(m):
            lam[k] += du[5 + k]
        if stepn < 1e-14:
            break
    return True, x[0], x[1], x[2], x[3]


@njit(cache=True)
def solve_max_min(alpha, beta, ax, ay, az, bx, by, bz, starts, budget, diam_tol):
    """Maximize the minimum slack over (gamma, g) from the given g starts.

    Runs the restart chain per start in order; returns (best value,
    best point, any start converged).  Ties keep the first maximizer.
    """
    sx, sy, sz = ax + bx, ay + by, az + bz
    rest = 2.0 - alpha - beta

    def phi(g0, g1, g2, g3):
        m = g0 - math.sqrt(g1 * g1 + g2 * g2 + g3 * g3)
        dx, dy, dz = ax - g1, ay - g2, az - g3
        t = (alpha - g0) - math.sqrt(dx * dx + dy * dy + dz * dz)
        if t < m:
            m = t
        dx, dy, dz = bx - g1, by - g2, bz - g3
        t = (beta - g0) - math.sqrt(dx * dx + dy * dy + dz * dz)
        if t < m:
            m = t
        dx, dy, dz = sx - g1, sy - g2, sz - g3
        t = (rest + g0) - math.sqrt(dx * dx + dy * dy + dz * dz)
        if t < m:
            m = t
        return m

    def crossing(g1, g2, g3):
        # exact gamma maximizer at fixed g: two slacks rise with gamma, two fall
        low = -math.sqrt(g1 * g1 + g2 * g2 + g3 * g3)
        t = rest - math.sqrt((sx - g1) ** 2 + (sy - g2) ** 2 + (sz - g3) ** 2)
        if t < low:
            low = t
        up = alpha - math.sqrt((ax - g1) ** 2 + (ay - g2) ** 2 + (az - g3) ** 2)
        t = beta - math.sqrt((bx - g1) ** 2 + (by - g2) ** 2 + (bz - g3) ** 2)
        if t < up:
            up = t
        return 0.5 * (up - low), 0.5 * (up + low)

    def nm(x0, step, dtol, max_iter):
        # minimize -phi with the standard reflect/expand/contract/shrink rules
        verts = np.empty((5, 4))
        fv = np.empty(5)
        for i in range(5):
            for j in range(4):
                verts[i, j] = x0[j]
            if i > 0:
                verts[i, i - 1] += step
            fv[i] = -phi(verts[i, 0], verts[i, 1], verts[i, 2], verts[i, 3])
        it = 0
        converged = False
        while it < max_iter:
            order = np.argsort(fv)
            v2 = np.empty((5, 4))
            f2 = np.empty(5)
            for i in range(5):
                v2[i] = verts[order[i]]
                f2[i] = fv[order[i]]
            verts = v2
            fv = f2
            diam = 0.0
            for i in range(1, 5):
                for j in range(4):
                    d = abs(verts[i, j] - verts[0, j])
                    if d > diam:
                        diam = d
            if diam < dtol:
                converged = True
                break
            it += 1
            cen = np.zeros(4)
            for i in range(4):
                for j in range(4):
                    cen[j] += verts[i, j]
            for j in range(4):
                cen[j] *= 0.25
            refl = np.empty(4)
            for j in range(4):
                refl[j] = 2.0 * cen[j] - verts[4, j]
            fr = -phi(refl[0], refl[1], refl[2], refl[3])
            if fv[0] <= fr < fv[3]:
                verts[4] = refl
                fv[4] = fr
            elif fr < fv[0]:
                expa = np.empty(4)
                for j in range(4):
                    expa[j] = cen[j] + 2.0 * (cen[j] - verts[4, j])
                fe = -phi(expa[0], expa[1], expa[2], expa[3])
                if fe < fr:
                    verts[4] = expa
                    fv[4] = fe
                else:
                    verts[4] = refl
                    fv[4] = fr
            else:
                cont = np.empty(4)
                for j in range(4):
                    cont[j] = cen[j] + 0.5 * (verts[4, j] - cen[j])
                fc = -phi(cont[0], cont[1], cont[2], cont[3])
                if fc < fv[4]:
                    verts[4] = cont
                    fv[4] = fc
                else:
                    for i in range(1, 5):
                        for j in range(4):
                            verts[i, j] = verts[0, j] + 0.5 * (verts[i, j] - verts[0, j])
                        fv[i] = -phi(verts[i, 0], verts[i, 1], verts[i, 2], verts[i, 3])
        order = np.argsort(fv)
        best = order[0]
        return verts[best], fv[best], it, converged

    best_phi = -1.0e300
    best = np.zeros(4)
    any_conv = False
    n_stages = len(_STAGE_STEPS)
    for s in range(starts.shape[0]):
        g1, g2, g3 = starts[s, 0], starts[s, 1], starts[s, 2]
        g0, _ = crossing(g1, g2, g3)
        x = np.array([g0, g1, g2, g3])
        used = 0
        val = -1.0e300
        conv_last = False
        for stage in range(n_stages):
            if used >= budget:
                conv_last = False
                break
            dtol = _STAGE_DIAMS[stage]
            if dtol < 0.0:
                dtol = diam_tol
            xr, fxr, it, conv = nm(x, _STAGE_STEPS[stage], dtol, budget - used)
            used += it
            conv_last = conv
            gs, ps = crossing(xr[1], xr[2], xr[3])
            if ps >= -fxr:
                x = np.array([gs, xr[1], xr[2], xr[3]])
                val = ps
            else:
                x = xr
                val = -fxr
        if conv_last:
            any_conv = True
        if val > best_phi:
            best_phi = val
            for j in range(4):
                best[j] = x[j]
    return best_phi, best, any_conv
