"""Spectral synthesis of stationary Gaussian paths.

The positive half line is cut into cells ``[k dl, (k+1) dl)`` with
``dl = 2 pi / (n dt)``.  Each cell gets the exact spectral mass ``m_k`` (the
cell at the origin is integrated with a power-law weight, so the singular
mass is kept) and one complex Gaussian coefficient placed at the cell
midpoint.  The sampled path is

    G(m dt) = 2 Re sum_k sqrt(m_k / 2) (xi_k + i eta_k) exp(i lam_k m dt),

which has variance ``sum_k 2 m_k = int f`` and covariance
``sum_k 2 m_k cos(lam_k tau)``.  Summing over ``k`` and ``-k`` with conjugate
coefficients is the same thing as taking twice the real part, so paths are
real by construction.
"""
from __future__ import annotations

import hashlib
import json
import math
import warnings
from functools import lru_cache

import numpy as np

from .errors import AliasingError, InsufficientReplicates, LengthError
from .paths import SampledPath, is_power_of_two
from .spectral import SpectralModel, covariance_from_density


def rng_for(seed, replicate=0):
    """Counter-based stream keyed by ``(seed, replicate)``."""
    ss = np.random.SeedSequence(seed, spawn_key=(int(replicate),))
    return np.random.Generator(np.random.Philox(ss))


def model_id(model):
    """Short stable hash of a model's serialized form."""
    blob = json.dumps(model.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _density(model):
    return model.density if isinstance(model, SpectralModel) else model


def _check_band(model, dt):
    dens = _density(model)
    band = dens.cutoff if dens.cutoff is not None else dens.support
    nyq = math.pi / dt
    if band > nyq * (1 + 1e-12):
        raise AliasingError(f"band limit {band:g} exceeds the Nyquist frequency pi/dt = {nyq:g}")


@lru_cache(maxsize=32)
def _amplitudes(model, n, dt):
    dens = _density(model)
    dl = 2.0 * math.pi / (n * dt)
    edges = dl * np.arange(n // 2 + 1)
    masses = np.clip(dens.half_cell_masses(edges), 0.0, None)
    amp = np.sqrt(0.5 * masses)
    amp.setflags(write=False)
    return amp


@lru_cache(maxsize=32)
def _phase(n):
    ph = np.exp(1j * math.pi * np.arange(n) / n)
    ph.setflags(write=False)
    return ph


def synthesize(model, n, dt, rng):
    """One path as a bare array (no validation); used by the batch runners."""
    amp = _amplitudes(model, n, dt)
    half = n // 2
    z = rng.standard_normal((2, half))
    c = np.zeros(n, dtype=complex)
    c[:half] = amp * (z[0] + 1j * z[1])
    return 2.0 * (_phase(n) * (n * np.fft.ifft(c))).real


def simulate_gaussian(model, n, dt=1.0, seed=None, *, replicate=0, method="spectral"):
    """Sampled path of the zero-mean Gaussian process with density ``model``.

    ``method="circulant"`` switches to exact circulant embedding of the
    covariance computed by quadrature (slow for long paths; meant as a
    cross-check).
    """
    if not is_power_of_two(n):
        raise LengthError(f"path length {n} is not a power of two")
    _check_band(model, dt)
    rng = rng_for(seed, replicate)
    if method == "spectral":
        vals = synthesize(model, n, dt, rng)
    elif method == "circulant":
        vals = _circulant(model, n, dt, rng)
    else:
        raise ValueError(f"unknown simulation method {method!r}")
    mid = model_id(model) if hasattr(model, "to_dict") else ""
    return SampledPath(vals, dt, seed, mid, (f"simulate:{method}:rep{replicate}",))


@lru_cache(maxsize=8)
def _circulant_eigenvalues(model, n, dt):
    lags = dt * np.arange(n + 1)
    r = covariance_from_density(model, lags)
    row = np.concatenate((r, r[-2:0:-1]))
    eig = np.fft.fft(row).real
    if eig.min() < -1e-8 * eig.max():
        warnings.warn(f"circulant embedding has negative eigenvalues (min {eig.min():.3g}); clipped")
    eig = np.clip(eig, 0.0, None)
    eig.setflags(write=False)
    return eig


def _circulant(model, n, dt, rng):
    eig = _circulant_eigenvalues(model, n, dt)
    m = eig.size
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    out = np.fft.fft(np.sqrt(eig / m) * z)
    return out.real[:n]


def dominance_probability(model, subordinator, wavelet, j1, n_points, replicates, seed, *, n=2**14, dt=None):
    """Estimate ``P(|S_j1(t)| < |T_j1(t)|)`` over replicates and ``n_points`` interior times.

    Returns ``(p_hat, standard_error, count)``.  The binomial standard error
    treats the ``replicates * n_points`` indicators as independent; time
    points are spread across the valid region to keep them weakly dependent.
    """
    from .hermite import decompose_ST
    from .scattering import default_dt, valid_slice

    if replicates < 1:
        raise InsufficientReplicates("replicates must be at least 1")
    if n_points < 1:
        raise ValueError("n_points must be at least 1")
    unit = model.normalized() if isinstance(model, SpectralModel) else model
    dt = default_dt(unit) if dt is None else dt
    subordinator.require_rank_one()
    sl = valid_slice(n, dt, j1)
    idx = np.linspace(sl.start, sl.stop - 1, n_points).round().astype(int)
    hits = np.empty(replicates)
    for rep in range(replicates):
        g = simulate_gaussian(unit, n, dt, seed, replicate=rep)
        S, T = decompose_ST(subordinator, g, wavelet, j1)
        hits[rep] = np.count_nonzero(np.abs(S.values[idx]) < np.abs(T.values[idx]))
    total = replicates * n_points
    p = float(np.sum(hits)) / total
    return p, math.sqrt(max(p * (1 - p), 0.0) / total), total
