import math

import numpy as np
import pytest
from scipy import integrate

from lrdscat.errors import GridTooCoarse
from lrdscat.spectral import (
    Envelope,
    SpectralModel,
    convolve_density,
    covariance_from_density,
    default_lambda_grid,
    eval_density,
    filtered_density,
)
from lrdscat.wavelets import Wavelet, eval_wavelet_ft


def test_density_values():
    m = SpectralModel(0.1, Envelope(), cutoff=36.0)
    assert eval_density(m, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert eval_density(m, 40.0) == 0.0
    assert eval_density(m, -1.0) == eval_density(m, 1.0)
    m2 = SpectralModel(0.5, Envelope(), cutoff=10.0)
    assert eval_density(m2, 4.0) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("beta", [0.0, 1.0, 1.5, -0.2])
def test_beta_out_of_range(beta):
    with pytest.raises(ValueError, match="beta"):
        SpectralModel(beta, Envelope(), cutoff=1.0)


def test_constant_envelope_needs_cutoff():
    with pytest.raises(ValueError, match="integrable"):
        SpectralModel(0.5, Envelope())


def test_model_round_trip():
    m = SpectralModel(0.3, Envelope("gaussian", 2.0, 1.5), cutoff=None)
    assert SpectralModel.from_dict(m.to_dict()) == m
    assert m.normalized().total_mass == pytest.approx(1.0, rel=1e-9)


def test_mexican_hat_ft():
    w = Wavelet()
    assert eval_wavelet_ft(w, 0.0) == 0.0
    assert eval_wavelet_ft(w, 1.0) == pytest.approx(math.exp(-0.5), abs=1e-12)
    assert eval_wavelet_ft(w, -1.0) == eval_wavelet_ft(w, 1.0)


def test_covariance_of_half_box(half_box):
    r = covariance_from_density(half_box, [0.0, math.pi, 2.5])
    assert r[0] == pytest.approx(1.0, abs=1e-12)
    assert abs(r[1]) < 1e-10
    assert r[2] == pytest.approx(math.sin(2.5) / 2.5, abs=1e-10)


def test_covariance_at_zero_matches_independent_quadrature(lrd03):
    # substitute lam = u**(1/beta) to remove the singularity at the origin
    b = lrd03.beta
    val, _ = integrate.quad(lambda u: (1.0 / b), 0.0, math.pi**b)
    assert covariance_from_density(lrd03, [0.0])[0] == pytest.approx(2 * val, abs=1e-8)


def test_self_convolution_half_box(half_box):
    grid = default_lambda_grid(half_box, n=2**12)
    f2 = convolve_density(half_box, 2, grid)
    mid = grid.size // 2
    assert f2[mid] == pytest.approx(0.5, rel=1e-3)
    at2 = np.argmin(np.abs(grid - 2.0))
    assert f2[at2] == pytest.approx(0.0, abs=2e-3)
    assert np.sum(f2) * (grid[1] - grid[0]) == pytest.approx(1.0, rel=1e-9)


def test_two_fold_convolution_slope_near_origin(lrd03):
    # f*f behaves like |lam|**(2 beta - 1) near 0
    grid = default_lambda_grid(lrd03, n=2**16)
    f2 = convolve_density(lrd03, 2, grid)
    sel = (grid > 0.01) & (grid < 0.1)
    slope = np.polyfit(np.log(grid[sel]), np.log(f2[sel]), 1)[0]
    assert slope == pytest.approx(2 * lrd03.beta - 1, abs=0.05)


def test_coarse_grid_is_detected(lrd03):
    grid = 0.5 * np.arange(-64, 65)  # about six cells across the band
    with pytest.raises(GridTooCoarse):
        convolve_density(lrd03, 3, grid)


def test_filtered_density_mass_matches_quadrature(lrd03):
    w = Wavelet()
    fd = filtered_density(lrd03, w, 2)
    b = lrd03.beta
    ref, _ = integrate.quad(lambda x: 2 * x ** (b - 1) * w.ft_abs2(np.array([4 * x]))[0], 0, math.pi, limit=200)
    assert fd.total_mass() == pytest.approx(ref, rel=1e-7)


def test_daubechies_ft_has_unit_energy():
    w = Wavelet.from_name("db8")
    # Plancherel: int |psi_hat|^2 = 2 pi ||psi||^2 = 2 pi for an orthonormal wavelet
    assert w.norm2 == pytest.approx(2 * math.pi, rel=1e-3)
    assert abs(w.ft(np.array([1e-4]))[0]) < 1e-6


def test_unresolved_narrow_density_is_detected():
    m = SpectralModel(0.3, Envelope("gaussian", 1.0, 0.05))
    with pytest.raises(GridTooCoarse):
        convolve_density(m, 2, 0.02 * np.arange(-2000, 2001))
    convolve_density(m, 2, 0.0005 * np.arange(-4000, 4001))
