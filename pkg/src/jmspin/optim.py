"""Derivative-free minimizers used by the feasibility and boundary solvers.

Both routines are deterministic: same inputs, same iterates.  They operate on
plain Python floats/tuples because the callers evaluate cheap closed-form
objectives in hot loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_section(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Minimize a unimodal scalar function on [lo, hi] by golden-section search.

    Returns the better interior probe (x, f(x)) once the bracket width drops
    below tol.  Endpoint minima are handled by the shrinking bracket.
    """
    a, b = float(lo), float(hi)
    width = b - a
    if width <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = a + _INV_PHI2 * width
    d = a + _INV_PHI * width
    fc = f(c)
    fd = f(d)
    for _ in range(max_iter):
        if fc < fd:
            b, d, fd = d, c, fc
            width = b - a
            c = a + _INV_PHI2 * width
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            width = b - a
            d = a + _INV_PHI * width
            fd = f(d)
        if width <= tol:
            break
    x = c if fc < fd else d
    fx = fc if fc < fd else fd
    return x, fx


@dataclass
class SimplexResult:
    x: tuple[float, ...]
    fx: float
    iterations: int
    converged: bool


def nelder_mead(
    f: Callable[[Sequence[float]], float],
    x0: Sequence[float],
    step: float = 0.25,
    diam_tol: float = 1e-11,
    max_iter: int = 2000,
) -> SimplexResult:
    """Minimize f by the Nelder-Mead simplex method.

    The initial simplex is x0 plus one vertex per coordinate offset by
    ``step``.  Converged means the simplex diameter (infinity norm against
    the best vertex) fell below ``diam_tol`` within the iteration budget.
    Standard coefficients: reflection 1, expansion 2, contraction 0.5,
    shrink 0.5.
    """
    n = len(x0)
    base = tuple(float(v) for v in x0)
    verts = [base]
    for i in range(n):
        v = list(base)
        v[i] += step
        verts.append(tuple(v))
    fvals = [f(v) for v in verts]

    iterations = 0
    converged = False
    while iterations < max_iter:
        order = sorted(range(n + 1), key=fvals.__getitem__)
        verts = [verts[i] for i in order]
        fvals = [fvals[i] for i in order]

        best = verts[0]
        diam = 0.0
        for v in verts[1:]:
            for bi, vi in zip(best, v):
                d = abs(vi - bi)
                if d > diam:
                    diam = d
        if diam < diam_tol:
            converged = True
            break

        iterations += 1
        worst = verts[-1]
        centroid = tuple(
            sum(v[i] for v in verts[:-1]) / n for i in range(n)
        )

        reflect = tuple(c + (c - w) for c, w in zip(centroid, worst))
        fr = f(reflect)
        if fvals[0] <= fr < fvals[-2]:
            verts[-1], fvals[-1] = reflect, fr
            continue

        if fr < fvals[0]:
            expand = tuple(c + 2.0 * (c - w) for c, w in zip(centroid, worst))
            fe = f(expand)
            if fe < fr:
                verts[-1], fvals[-1] = expand, fe
            else:
                verts[-1], fvals[-1] = reflect, fr
            continue

        contract = tuple(c + 0.5 * (w - c) for c, w in zip(centroid, worst))
        fc = f(contract)
        if fc < fvals[-1]:
            verts[-1], fvals[-1] = contract, fc
            continue

        best = verts[0]
        verts = [best] + [
            tuple(b + 0.5 * (vi - b) for b, vi in zip(best, v)) for v in verts[1:]
        ]
        fvals = [fvals[0]] + [f(v) for v in verts[1:]]

    order = sorted(range(n + 1), key=fvals.__getitem__)
    return SimplexResult(
        x=verts[order[0]],
        fx=fvals[order[0]],
        iterations=iterations,
        converged=converged,
    )
