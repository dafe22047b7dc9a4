"""Limit constants of the second-order scattering of a long-memory input.

Notation: ``w(lam) = |psi_hat(lam)|**2 |lam|**(beta-1)``, normalized to unit
mass, and ``rho(t) = int exp(i t lam) w(lam) dlam``.  Then

    sigma2  = C_G(0) int |psi_hat|**2 |lam|**(beta-1) dlam
    gamma_l = (1/2pi) int rho(t)**l dt  (= l-fold self-convolution of w at 0)
    kappa_m = sqrt(sigma2 * sum_{l=2,4..2m} gamma_l C_abs(l)**2)

where ``C_abs`` are the Hermite coefficients of ``|.|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .errors import BetaOutOfRange, EvenOrderRequired, TailTruncationError
from .hermite import abs_coefficient
from .spectral import SpectralModel

GAMMA_RTOL = 1e-8
_START_CELLS = 2**10
_MAX_CELLS = 2**18


def sigma_squared(model, wavelet):
    """``C_G(0) int |psi_hat|**2 |lam|**(beta-1) dlam``."""
    c0 = model.c0
    if c0 == 0.0:
        return 0.0
    return c0 * wavelet.weighted_integral(_exponent(model))


def _exponent(model):
    return model.exponent if isinstance(model, SpectralModel) else float(model) - 1.0


def _cell_step(wavelet, cells):
    """Spacing with ``cells`` cells per side; breaks of a box wavelet land on edges."""
    if wavelet.kind == "box":
        unit = math.gcd(*(int(round(1e6 * b)) for b in (wavelet.lo, wavelet.hi) if b > 0)) / 1e6
        per_unit = max(1, round(cells * unit / wavelet.hi))
        return unit / per_unit, int(math.ceil(wavelet.hi / (unit / per_unit) - 1e-9))
    return wavelet.freq_support / cells, cells


def _gamma_at(wavelet, p, ells, cells):
    h, K = _cell_step(wavelet, cells)
    edges = h * np.arange(K + 1)
    g = wavelet.ft_abs2
    half = quadrature.cell_masses(g, p, edges, breaks=wavelet.breaks)
    # cells [kh, (k+1)h] for k = -K..K-1, mass placed at the cell centre
    m = np.concatenate((half[::-1], half))
    m = m / m.sum()
    out = {}
    for ell in ells:
        nfft = 1 << int(math.ceil(math.log2(ell * m.size + 1)))
        # trapezoid of rho**ell over one full period of the discretized rho
        conv = np.fft.irfft(np.fft.rfft(m, nfft) ** ell, nfft)
        # ell cell centres sum to zero at this index
        out[ell] = float(conv[ell * K - ell // 2]) / h
    return out


def gamma_table(model, wavelet, ells, *, rtol=GAMMA_RTOL):
    """``{l: gamma_l}`` for even ``l``, refined until stable to ``rtol``.

    The weight is replaced by cell masses on a uniform grid, so ``rho`` becomes
    periodic and the trapezoid rule over one period is exact for it.  The grid
    is refined by halving; successive Richardson-extrapolated values must
    agree to ``rtol``.  Failure to converge within the cell cap means the
    time window ``2 pi / h`` never captured ``rho**l``, and raises
    ``TailTruncationError``.
    """
    ells = sorted(set(int(e) for e in ells))
    for e in ells:
        if e < 2 or e % 2:
            raise EvenOrderRequired(f"gamma is defined here for even orders >= 2, got {e}")
    p = _exponent(model)
    cells = _START_CELLS
    prev = _gamma_at(wavelet, p, ells, cells)
    prev_rich = None
    while cells < _MAX_CELLS:
        cells *= 2
        cur = _gamma_at(wavelet, p, ells, cells)
        rich = {e: (4 * cur[e] - prev[e]) / 3 for e in ells}
        if all(abs(cur[e] - prev[e]) <= rtol * abs(cur[e]) for e in ells):
            return cur
        if prev_rich is not None and all(abs(rich[e] - prev_rich[e]) <= rtol * abs(rich[e]) for e in ells):
            return rich
        prev, prev_rich = cur, rich
    raise TailTruncationError(f"gamma_l not stable to {rtol} with {cells} cells per side")


def gamma_ell(model, wavelet, ell):
    return gamma_table(model, wavelet, [ell])[ell]


@dataclass(frozen=True)
class LimitConstants:
    sigma2: float
    gammas: dict  # order -> gamma
    kappa: float
    truncation: int
    truncation_tail: float
    metadata: dict = field(default_factory=dict)

    @property
    def kappa2(self):
        return self.kappa**2

    def to_dict(self):
        return {
            "sigma2": self.sigma2,
            "gammas": [self.gammas[k] for k in sorted(self.gammas)],
            "gamma_orders": sorted(self.gammas),
            "kappa": self.kappa,
            "truncation": self.truncation,
            "truncation_tail": self.truncation_tail,
            **self.metadata,
        }


def abs_coeffs(L):
    return np.array([abs_coefficient(l) for l in range(L + 1)])


def kappa(constants_or_sigma2, gammas=None, m=None, coeffs=None):
    """Return ``(kappa_m, tail_bound)``.

    Accepts a ``LimitConstants`` (then ``m`` defaults to its truncation) or
    ``sigma2`` plus a ``{l: gamma_l}`` table.  ``tail_bound`` bounds the
    omitted part of ``kappa**2`` by ``sigma2 gamma_2m (1 - sum_{l<=2m} C_l**2)``.
    """
    if isinstance(constants_or_sigma2, LimitConstants):
        sigma2, gammas = constants_or_sigma2.sigma2, constants_or_sigma2.gammas
        m = constants_or_sigma2.truncation if m is None else m
    else:
        sigma2 = constants_or_sigma2
        m = max(gammas) // 2 if m is None else m
    if m < 1:
        raise ValueError("truncation m must be at least 1")
    c = abs_coeffs(2 * m) if coeffs is None else np.asarray(coeffs, dtype=float)
    k2 = sigma2 * sum(gammas[l] * c[l] ** 2 for l in range(2, 2 * m + 1, 2))
    tail = sigma2 * gammas[2 * m] * max(0.0, 1.0 - float(np.sum(c[: 2 * m + 1] ** 2)))
    return math.sqrt(k2), tail


def limit_constants(model, wavelet, m=8):
    ells = list(range(2, 2 * m + 1, 2))
    s2 = sigma_squared(model, wavelet)
    gam = gamma_table(model, wavelet, ells)
    k, tail = kappa(s2, gam, m)
    meta = {"beta": getattr(model, "beta", None), "wavelet": wavelet.to_dict(), "gamma_rtol": GAMMA_RTOL}
    if getattr(model, "short_range", False):
        meta["note"] = "short-range input: formal values only, the double scaling limit does not apply"
    return LimitConstants(s2, gam, k, m, tail, meta)


def limit_covariance(kappa_value, wavelet, t1, t2):
    """``kappa**2 int exp(i lam (t1 - t2)) |psi_hat(lam)|**2 dlam``."""
    d = abs(float(t1) - float(t2))
    upper = wavelet.freq_support if wavelet.kind in ("box", "daubechies") else math.inf
    val = 2.0 * quadrature.cosine_power_integral(wavelet.ft_abs2, 0.0, upper, d, points=wavelet.breaks)
    return kappa_value**2 * val


def limit_covariance_matrix(kappa_value, wavelet, t_points):
    t = np.asarray(t_points, dtype=float)
    out = np.empty((t.size, t.size))
    for a in range(t.size):
        for b in range(a, t.size):
            out[a, b] = out[b, a] = limit_covariance(kappa_value, wavelet, t[a], t[b])
    return out


def _check_beta(beta):
    if not 0.0 < beta < 1.0:
        raise BetaOutOfRange(f"beta must lie strictly in (0, 1), got {beta}")


def coupling_window(beta):
    """Open interval ``(1, 1/(1-beta))`` of admissible ratios ``j2/j1``."""
    _check_beta(beta)
    return 1.0, 1.0 / (1.0 - beta)


@dataclass(frozen=True)
class Rates:
    """Envelope shapes (constants omitted) of the error and variance bounds."""

    beta: float

    @property
    def regime(self):
        b = self.beta
        return "low" if b < 0.5 else ("critical" if b == 0.5 else "high")

    def dtilde_terms(self, j1, j2):
        """Terms of the bound on ``E[D~^2]``, as a dict of name -> value."""
        b = self.beta
        if self.regime == "low":
            return {"2^(-b j1 - b j2)": 2.0 ** (-b * j1 - b * j2), "2^((1-2b) j1 - j2)": 2.0 ** ((1 - 2 * b) * j1 - j2)}
        if self.regime == "critical":
            return {"j1 2^(-j2)": j1 * 2.0**-j2, "2^(-j1/2 - j2/2)": 2.0 ** (-0.5 * j1 - 0.5 * j2), "2^(-j2)": 2.0**-j2}
        return {
            "2^(-j2)": 2.0**-j2,
            "2^(-b j1 - b j2)": 2.0 ** (-b * j1 - b * j2),
            "2^((1-2b) j1 - j2)": 2.0 ** ((1 - 2 * b) * j1 - j2),
        }

    def dtilde_bound(self, j1, j2):
        return sum(self.dtilde_terms(j1, j2).values())

    def dtilde_dominant(self, j1, j2):
        return max(self.dtilde_terms(j1, j2).values())

    def var_T(self, j1):
        """Shape of ``Var(T_j1)``: ``2^(-2 b j1)``, ``j1 2^(-j1)`` or ``2^(-j1)``."""
        if self.regime == "low":
            return 2.0 ** (-2 * self.beta * j1)
        if self.regime == "critical":
            return j1 * 2.0**-j1
        return 2.0**-j1

    def var_T_slope(self):
        """Asymptotic log2-slope of ``Var(T_j1)`` (the log factor at 1/2 is ignored)."""
        return -2 * self.beta if self.regime == "low" else -1.0

    def var_S(self, j1):
        return 2.0 ** (-self.beta * j1)

    def normalized_D(self, j1, j2):
        """Envelope of ``2^(j1(b-1)) 2^j2 E[D^2]``."""
        b = self.beta
        return j1 * 2.0 ** (j1 * (b - 1)) + 2.0 ** (-j1 + j2 * (1 - b)) + 2.0 ** (-j1 * b)


def predicted_rates(beta):
    _check_beta(beta)
    return Rates(beta)


def prelimit_variance(model, wavelet, j1, j2, m=8, cells=2**15):
    """Exact ``Var`` of the rescaled ``(|G * psi_j1| * psi_j2)(t)`` for a Gaussian input.

    Uses the Hermite expansion of ``|.|`` through order ``2m``: the order-``l``
    term is ``C_abs(l)**2`` times the ``l``-fold convolution of the filtered
    spectrum, tested against ``|psi_hat(2**j2 lam)|**2``.  This is the finite-scale
    value that the simulated variance should match; its gap to
    ``kappa**2 ||psi_hat||**2`` shrinks with ``j2 - j1``.
    """
    from .spectral import convolve_density, filtered_density

    beta = model.beta
    fd = filtered_density(model, wavelet, j1)
    s2 = fd.total_mass()
    h = 8.0 * fd.support / cells
    lam = h * np.arange(-cells // 2, cells // 2 + 1)
    w = wavelet.ft_abs2(2.0**j2 * lam)
    total = 0.0
    for ell in range(2, 2 * m + 1, 2):
        fl = convolve_density(fd, ell, lam, check=False) / s2**ell
        total += abs_coefficient(ell) ** 2 * float(np.sum(fl * w)) * h
    return s2 * total * 2.0 ** (j1 * (beta - 1.0) + j2)


def gamma_from_scaled_convolution(model, wavelet, ell, j1=10, cells=2**16):
    """Independent route to ``gamma_l``: ``2**-j1 f**(*l)(0) / sigma**(2l)``.

    ``f`` is the input spectrum filtered at scale ``j1`` and ``sigma**2`` its
    total mass, so the ``l``-fold convolution at the origin is taken on the
    actual filtered density instead of the limiting weight.  The two agree as
    ``j1`` grows.
    """
    from .spectral import convolve_density, filtered_density

    fd = filtered_density(model, wavelet, j1)
    s2 = fd.total_mass()
    h = 4.0 * fd.support / cells
    grid = h * np.arange(-cells // 2, cells // 2 + 1)
    conv = convolve_density(fd, ell, grid, check=False)
    return float(2.0**-j1 * conv[cells // 2] / s2**ell)
