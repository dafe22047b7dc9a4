import math

import numpy as np
import pytest
from scipy import integrate, special

from lrdscat import limits
from lrdscat.errors import BetaOutOfRange, EvenOrderRequired
from lrdscat.spectral import Envelope, SpectralModel
from lrdscat.wavelets import Wavelet

MEXHAT = Wavelet()
RECT = Wavelet("box", power=0.25, lo=0.0, hi=1.0)
M05 = SpectralModel(0.5, Envelope(), cutoff=math.pi)


def test_sigma2_closed_forms():
    assert limits.sigma_squared(M05, MEXHAT) == pytest.approx(special.gamma(2.25), abs=1e-6)
    band = Wavelet("box", power=0.0, lo=1.0, hi=2.0)
    assert limits.sigma_squared(M05, band) == pytest.approx(2 * (2**0.5 - 1) / 0.5, abs=1e-8)
    flat = SpectralModel(0.5, Envelope("gaussian", 0.0, 1.0), degenerate=True)
    assert limits.sigma_squared(flat, MEXHAT) == 0.0


def test_rectangle_gammas_against_sinc_powers():
    g = limits.gamma_table(M05, RECT, [2, 4, 6])
    assert g[2] == pytest.approx(0.5, abs=1e-4)
    # (1/2pi) int (sin t / t)^4 dt = 1/3 and (1/2pi) int (sin t / t)^6 dt = 11/40
    assert g[4] == pytest.approx(1 / 3, abs=1e-6)
    assert g[6] == pytest.approx(11 / 40, abs=1e-6)


def test_gamma_of_mexhat_against_time_domain_integral():
    # rho(t) as a cosine transform, then (1/2pi) int rho^2 dt by quadrature
    p = M05.exponent
    mass = MEXHAT.weighted_integral(p)

    def rho(t):
        f = lambda x: MEXHAT.ft_abs2(np.array([x]))[0] * x**p * math.cos(t * x)
        return 2 * integrate.quad(f, 0, 40, limit=400)[0] / mass

    val = integrate.quad(lambda t: rho(t) ** 2, 0, 60, limit=200)[0] / math.pi
    assert limits.gamma_ell(M05, MEXHAT, 2) == pytest.approx(val, rel=1e-5)


def test_gamma_monotone_and_nonnegative():
    g = limits.gamma_table(M05, MEXHAT, range(2, 17, 2))
    vals = [g[l] for l in range(2, 17, 2)]
    assert all(v >= 0 for v in vals)
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_odd_order_rejected():
    with pytest.raises(EvenOrderRequired):
        limits.gamma_table(M05, MEXHAT, [3])


def test_kappa_truncation():
    lc = limits.limit_constants(M05, RECT, m=8)
    k1, _ = limits.kappa(lc.sigma2, lc.gammas, 1)
    assert k1**2 == pytest.approx(lc.sigma2 * lc.gammas[2] / math.pi, rel=1e-12)
    ks = [limits.kappa(lc.sigma2, lc.gammas, m)[0] for m in range(1, 9)]
    assert all(a <= b for a, b in zip(ks, ks[1:]))
    assert ks[5] == pytest.approx(ks[7], rel=2e-3)
    assert lc.truncation_tail >= 0


def test_limit_covariance():
    k = 0.3
    v = limits.limit_covariance(k, MEXHAT, 1.0, 1.0)
    assert v == pytest.approx(k**2 * MEXHAT.norm2, rel=1e-9)
    assert limits.limit_covariance(k, MEXHAT, 0.0, 2.0) == limits.limit_covariance(k, MEXHAT, 2.0, 0.0)
    assert abs(limits.limit_covariance(k, MEXHAT, 0.0, 10.0)) < 0.01 * v
    c = limits.limit_covariance_matrix(k, MEXHAT, [-1, 0, 1])
    assert np.allclose(c, c.T) and np.linalg.eigvalsh(c).min() > 0


def test_coupling_window():
    assert limits.coupling_window(0.1) == pytest.approx((1.0, 1 / 0.9))
    assert limits.coupling_window(0.5) == (1.0, 2.0)
    with pytest.raises(BetaOutOfRange):
        limits.coupling_window(0.0)


def test_rate_envelopes():
    r = limits.predicted_rates(0.3)
    assert math.log2(r.dtilde_dominant(10, 11)) == pytest.approx(-6.3, abs=1e-12)
    assert "j1 2^(-j2)" in limits.predicted_rates(0.5).dtilde_terms(4, 5)
    assert limits.predicted_rates(0.7).var_T(6) == 2.0**-6
    assert r.var_T_slope() == pytest.approx(-0.6)


def test_scaled_convolution_cross_check():
    g = limits.gamma_table(M05, MEXHAT, [2, 4])
    for ell in (2, 4):
        assert limits.gamma_from_scaled_convolution(M05, MEXHAT, ell, j1=10) == pytest.approx(g[ell], rel=0.05)


def test_prelimit_variance_depends_on_scale_gap_only():
    m = SpectralModel(0.3, Envelope(), cutoff=math.pi).normalized()
    a = limits.prelimit_variance(m, MEXHAT, 4, 6)
    b = limits.prelimit_variance(m, MEXHAT, 8, 10)
    assert a == pytest.approx(b, rel=1e-6)
    lc = limits.limit_constants(m, MEXHAT)
    target = lc.kappa**2 * MEXHAT.norm2
    gaps = [abs(limits.prelimit_variance(m, MEXHAT, 6, 6 + d) - target) for d in (1, 2, 3, 4)]
    assert all(x > y for x, y in zip(gaps, gaps[1:])) and gaps[-1] < 0.02 * target
