"""Quadrature for integrands carrying a power singularity at the origin.

Every integrand here has the form ``g(x) * x**p`` on a half line ``[0, upper]``
with ``p > -1`` and ``g`` bounded and continuous away from a finite set of
break points.  The segment touching the origin is handled with algebraic
weights (QAWS / Gauss-Jacobi); the rest uses ordinary adaptive or
Gauss-Legendre rules.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate, special

from .errors import QuadratureNonConvergence

DEFAULT_TOL = 1e-9

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _quad(func, a, b, tol, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(func, a, b, epsabs=tol, epsrel=1e-10, limit=400, full_output=1, **kw)
    val, err = res[0], res[1]
    if len(res) > 3 and err > max(10 * tol, 1e-7 * abs(val)):
        raise QuadratureNonConvergence(
            f"quadrature on [{a}, {b}] stalled: value {val:.6g}, error estimate {err:.3g} ({res[3]})"
        )
    return val


def _split_points(points, lo, hi):
    if not points:
        return [lo, hi]
    inner = sorted(x for x in points if lo < x < hi)
    return [lo, *inner, hi]


def power_integral(g, p, upper, *, delta=None, points=(), tol=DEFAULT_TOL):
    """Return ``int_0^upper g(x) x**p dx``.

    ``delta`` is the width of the algebraically weighted segment at the origin
    (defaults to 1% of ``upper``, or 1.0 for an infinite range).  ``points``
    lists discontinuities of ``g``.
    """
    if p <= -1:
        raise ValueError("power exponent must exceed -1 for integrability")
    if delta is None:
        delta = 1.0 if math.isinf(upper) else 0.01 * upper
    delta = min(delta, upper)
    pts = list(points)
    head_edges = _split_points(pts, 0.0, delta)
    total = _quad(lambda x: g(x), 0.0, head_edges[1], tol, weight="alg", wvar=(p, 0.0))
    for a, b in zip(head_edges[1:-1], head_edges[2:]):
        total += _quad(lambda x: g(x) * x**p, a, b, tol)
    if upper > delta:
        f = lambda x: g(x) * x**p
        if math.isinf(upper):
            edges = _split_points(pts, delta, max([delta, *pts]) + 1.0)
            for a, b in zip(edges[:-1], edges[1:]):
                total += _quad(f, a, b, tol)
            total += _quad(f, edges[-1], math.inf, tol)
        else:
            edges = _split_points(pts, delta, upper)
            for a, b in zip(edges[:-1], edges[1:]):
                total += _quad(f, a, b, tol)
    return total


def _effective_upper(f, start, rel=1e-18):
    """A finite cutoff past which ``|f|`` is negligible, or ``inf`` for slow tails.

    QAWF handles algebraic tails well but misjudges its error on integrands
    that die off like a Gaussian, so those are truncated instead.
    """
    x = max(start, 1.0)
    grid = x * 2.0 ** np.arange(0, 12)
    vals = np.abs([f(v) for v in grid])
    peak = vals.max()
    if peak == 0.0:
        return x
    for k in range(len(grid) - 2):
        if vals[k] <= rel * peak and vals[k + 1] <= vals[k] * 1e-3:
            return float(grid[k + 1])
    return math.inf


def cosine_power_integral(g, p, upper, t, *, points=(), tol=DEFAULT_TOL):
    """Return ``int_0^upper g(x) x**p cos(t x) dx`` for a single real ``t``."""
    t = abs(float(t))
    if t == 0.0:
        return power_integral(g, p, upper, points=points, tol=tol)
    c = min(1.0 / t, upper)
    total = _quad(lambda x: g(x) * math.cos(t * x), 0.0, c, tol, weight="alg", wvar=(p, 0.0))
    if upper <= c:
        return total
    f = lambda x: g(x) * x**p
    if math.isinf(upper):
        upper = _effective_upper(f, max([c, *points]))
    if math.isinf(upper):
        edges = _split_points(list(points), c, max([c, *points]))
        for a, b in zip(edges[:-1], edges[1:]):
            if b > a:
                total += _quad(f, a, b, tol, weight="cos", wvar=t)
        # QAWF reports its own error; it needs a finite lower limit only.
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(f, edges[-1], math.inf, weight="cos", wvar=t, limlst=200)[:2]
        if err > max(10 * tol, 1e-7 * abs(val)):
            raise QuadratureNonConvergence(f"oscillatory tail at t={t}: error estimate {err:.3g}")
        return total + val
    edges = _split_points(list(points), c, upper)
    for a, b in zip(edges[:-1], edges[1:]):
        total += _quad(f, a, b, tol, weight="cos", wvar=t)
    return total


def cell_masses(g, p, edges, *, breaks=(), jacobi_nodes=24):
    """Integrate ``g(x) x**p`` over each cell ``[edges[i], edges[i+1]]``.

    ``edges`` must be nonnegative and increasing.  A cell starting at the
    origin is integrated with Gauss-Jacobi nodes carrying the ``x**p`` weight,
    which preserves the singular mass.  Cells containing a point of ``breaks``
    are split there.  ``g`` must accept numpy arrays.
    """
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    safe = np.where(nodes > 0, nodes, 1.0)
    vals = np.asarray(g(nodes), dtype=float) * np.where(nodes > 0, safe**p, 0.0)
    masses = half * (vals @ _GL_W)
    if a.size and a[0] == 0.0:
        masses[0] = jacobi_power_integral(g, p, b[0], n=jacobi_nodes)
    for x in breaks:
        idx = np.nonzero((a < x) & (x < b))[0]
        for i in idx:
            masses[i] = _split_cell(g, p, a[i], x, b[i], jacobi_nodes)
    return masses


def _split_cell(g, p, a, x, b, n):
    total = 0.0
    for lo, hi in ((a, x), (x, b)):
        if lo == 0.0:
            total += jacobi_power_integral(g, p, hi, n=n)
        else:
            nodes = 0.5 * (hi + lo) + 0.5 * (hi - lo) * _GL_X
            total += 0.5 * (hi - lo) * float(np.dot(np.asarray(g(nodes), dtype=float) * nodes**p, _GL_W))
    return total


def jacobi_power_integral(g, p, b, *, n=24):
    """``int_0^b g(x) x**p dx`` with an n-point Gauss-Jacobi rule."""
    x, w = special.roots_jacobi(n, 0.0, p)
    lam = 0.5 * b * (1.0 + x)
    return float((0.5 * b) ** (p + 1) * np.dot(w, np.asarray(g(lam), dtype=float)))
