"""Wavelet transform by FFT and first/second-order scattering.

All convolutions are circular on the sampled grid.  A sample ``x_m`` stands
for ``X(m dt)`` and the continuous convolution ``int X(s) psi_j(t - s) ds`` is
approximated by ``sum_m x_m psi_j(t - m dt) dt``; in the frequency domain
this is multiplication of the DFT by ``psi_hat(2**j lam_k)`` with
``lam_k = 2 pi k / (n dt)``, the ``dt`` factor being absorbed by the DFT
normalization.  Output within ``margin_samples`` of either end is affected by
wrap-around and should be discarded (see ``valid_slice``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CouplingViolation, LengthError, OutOfExtent, ResolutionError
from .paths import SampledPath, is_power_of_two

MARGIN_SCALES = 4
RESOLUTION_FACTOR = 8


def check_resolution(j, dt):
    if 2.0**j < RESOLUTION_FACTOR * dt * (1 - 1e-12):
        raise ResolutionError(f"scale 2**{j} is below {RESOLUTION_FACTOR} grid steps (dt={dt:g})")


def margin_samples(dt, *scales):
    """Samples discarded at each end: ``4 * 2**max(j)`` time units."""
    return int(math.ceil(MARGIN_SCALES * 2.0 ** max(scales) / dt))


def valid_slice(n, dt, *scales):
    m = margin_samples(dt, *scales)
    if 2 * m >= n:
        raise OutOfExtent(f"path of {n} samples is shorter than the two {m}-sample margins")
    return slice(m, n - m)


def default_dt(model):
    """Largest ``dt = 2**-k <= 1`` whose Nyquist frequency covers the band."""
    dens = model.density if hasattr(model, "density") else model
    band = dens.cutoff if dens.cutoff is not None else dens.support
    k = max(0, math.ceil(math.log2(band / math.pi) - 1e-12))
    return 2.0**-k


@lru_cache(maxsize=64)
def multiplier(wavelet, n, dt, j):
    """Read-only array ``psi_hat(2**j lam_k)`` on the rfft frequencies."""
    lam = 2.0 * math.pi * np.fft.rfftfreq(n, dt)
    m = wavelet.ft(2.0**j * lam)
    if np.iscomplexobj(m) and np.max(np.abs(m.imag)) == 0:
        m = m.real
    m = np.ascontiguousarray(m)
    m.setflags(write=False)
    return m


def filter_spectrum(xhat, n, dt, wavelet, j):
    """Inverse FFT of ``xhat`` times the scale-``j`` multiplier."""
    return np.fft.irfft(xhat * multiplier(wavelet, n, dt, j), n)


def cwt_array(x, dt, wavelet, j):
    n = x.shape[-1]
    if not is_power_of_two(n):
        raise LengthError(f"path length {n} is not a power of two")
    check_resolution(j, dt)
    return filter_spectrum(np.fft.rfft(x), n, dt, wavelet, j)


def cwt(path, wavelet, j):
    """``X * psi_j`` on the path's grid (circular; see ``valid_slice``)."""
    path.require_fft_length()
    return path.derive(cwt_array(path.values, path.dt, wavelet, j), f"cwt:j={j}")


def first_order(path, wavelet, j1):
    """``U[j1]X = |X * psi_j1|``."""
    out = cwt(path, wavelet, j1)
    return out.derive(np.abs(out.values), "modulus")


def second_order(path, wavelet, j1, j2):
    """``U[j1,j2]X = ||X * psi_j1| * psi_j2|``; the modulus acts on the same grid."""
    check_resolution(j2, path.dt)
    u1 = first_order(path, wavelet, j1)
    out = cwt(u1, wavelet, j2)
    return out.derive(np.abs(out.values), "modulus")


def normalization_factor(beta, j1, j2):
    """``2**(j1 (beta - 1) / 2) * 2**(j2 / 2)``."""
    return 2.0 ** (0.5 * j1 * (beta - 1.0) + 0.5 * j2)


def round_half_up(x):
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class ScatteringConfig:
    """Scale selection for a second-order transform.

    Either ``j2`` is fixed, or ``ratio`` couples it to ``j1`` through
    ``j2 = round(ratio * j1)`` (ties rounded up).  A ratio outside the
    window ``(1, 1/(1 - beta))`` is rejected unless ``counterexample`` is set.
    """

    wavelet: object
    beta: float
    j1: int | None = None
    j2: int | None = None
    ratio: float | None = None
    counterexample: bool = False

    def __post_init__(self):
        if (self.j2 is None) == (self.ratio is None):
            raise ValueError("give exactly one of j2 and ratio")
        if self.ratio is not None and not self.counterexample:
            from .limits import coupling_window

            lo, hi = coupling_window(self.beta)
            if not lo < self.ratio < hi:
                raise CouplingViolation(
                    f"ratio {self.ratio} is outside the coupling window ({lo}, {hi:.6g}); "
                    "set counterexample mode to run it anyway"
                )

    def scales(self, j1=None):
        """``(j1, j2, rounding)`` where rounding is ``"exact"``, ``"up"`` or ``"down"``."""
        j1 = self.j1 if j1 is None else j1
        if j1 is None:
            raise ValueError("j1 is not set")
        if self.ratio is None:
            return j1, self.j2, "exact"
        raw = self.ratio * j1
        j2 = round_half_up(raw)
        if abs(j2 - raw) < 1e-12:
            direction = "exact"
        else:
            direction = "up" if j2 > raw else "down"
        return j1, j2, direction


@dataclass(frozen=True)
class RescaledSample:
    values: np.ndarray
    indices: np.ndarray
    offsets: np.ndarray  # requested minus sampled time, in grid steps
    factor: float
    j1: int
    j2: int
    rounding: str


def sample_indices(n, dt, j2, t_points, *scales):
    """Nearest-grid indices of the times ``2**j2 t`` (t = 0 at the path centre)."""
    t = np.atleast_1d(np.asarray(t_points, dtype=float))
    exact = n // 2 + (2.0**j2) * t / dt
    idx = np.rint(exact).astype(np.int64)
    sl = valid_slice(n, dt, *scales)
    if np.any(idx < sl.start) or np.any(idx >= sl.stop):
        raise OutOfExtent(
            f"times 2**{j2} * t reach index range [{idx.min()}, {idx.max()}], "
            f"outside the valid region [{sl.start}, {sl.stop})"
        )
    return idx, exact - idx


def rescaled_second_order(path, cfg, t_points, *, j1=None):
    """``2**(j1(beta-1)/2) 2**(j2/2) U[j1,j2]X(2**j2 t)`` at each ``t``."""
    j1, j2, rounding = cfg.scales(j1)
    idx, off = sample_indices(path.n, path.dt, j2, t_points, j1, j2)
    u = second_order(path, cfg.wavelet, j1, j2).values
    fac = normalization_factor(cfg.beta, j1, j2)
    return RescaledSample(fac * u[idx], idx, off, fac, j1, j2, rounding)


def diff_paths(sub, path, wavelet, j1, j2):
    """``D = (|S + T| - |S|) * psi_j2`` and ``D~ = (sign(S) T) * psi_j2``."""
    from .hermite import decompose_ST

    check_resolution(j2, path.dt)
    S, T = decompose_ST(sub, path, wavelet, j1)
    s, t = S.values, T.values
    d = cwt_array(np.abs(s + t) - np.abs(s), path.dt, wavelet, j2)
    dt_ = cwt_array(np.sign(s) * t, path.dt, wavelet, j2)
    return path.derive(d, f"D:j1={j1},j2={j2}"), path.derive(dt_, f"Dtilde:j1={j1},j2={j2}")
