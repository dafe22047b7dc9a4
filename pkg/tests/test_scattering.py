import math

import numpy as np
import pytest

from lrdscat import hermite as H
from lrdscat.errors import CouplingViolation, OutOfExtent, ResolutionError
from lrdscat.paths import SampledPath
from lrdscat.scattering import (
    ScatteringConfig,
    cwt,
    default_dt,
    diff_paths,
    first_order,
    normalization_factor,
    rescaled_second_order,
    second_order,
    valid_slice,
)
from lrdscat.simulate import simulate_gaussian
from lrdscat.spectral import Envelope, SpectralModel
from lrdscat.wavelets import Wavelet

W = Wavelet()


def _noise(n=2**10, seed=0, dt=1.0):
    return SampledPath(np.random.default_rng(seed).standard_normal(n), dt)


def test_constant_and_zero_paths():
    assert np.max(np.abs(cwt(SampledPath(np.full(1024, 3.0)), W, 4).values)) < 1e-10
    assert np.all(second_order(SampledPath(np.zeros(1024)), W, 3, 4).values == 0.0)


def test_linearity():
    x, y = _noise(seed=1), _noise(seed=2)
    lhs = cwt(SampledPath(2.0 * x.values - 3.0 * y.values), W, 4).values
    rhs = 2.0 * cwt(x, W, 4).values - 3.0 * cwt(y, W, 4).values
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_impulse_response_matches_time_domain_wavelet():
    n, dt, j, t0 = 2**10, 1.0, 4, 512
    x = np.zeros(n)
    x[t0] = 1.0 / dt
    out = cwt(SampledPath(x, dt), W, j).values
    s = 2.0**j
    t = dt * (np.arange(n) - t0)
    ref = W.time_domain(t / s) / s
    assert np.max(np.abs(out - ref)) < 1e-6


def test_modulus_homogeneity_and_sign():
    x = _noise(seed=3)
    assert np.allclose(first_order(SampledPath(-2.5 * x.values), W, 3).values, 2.5 * first_order(x, W, 3).values)
    assert np.allclose(second_order(SampledPath(-2.5 * x.values), W, 3, 4).values,
                       2.5 * second_order(x, W, 3, 4).values)


def test_second_order_on_lrd_input_is_stationary():
    m = SpectralModel(0.1, Envelope(), cutoff=36.0).normalized()
    w = Wavelet.from_name("db8")
    a, b = [], []
    for r in range(40):
        g = simulate_gaussian(m, 2**14, 1 / 16, 4, replicate=r)
        u = second_order(g, w, 3, 4).values
        sl = valid_slice(g.n, g.dt, 3, 4)
        v = u[sl]
        assert np.all(v >= 0) and np.all(np.isfinite(v))
        half = v.size // 2
        a.append(v[:half].mean())
        b.append(v[half:].mean())
    d = np.array(a) - np.array(b)
    assert abs(d.mean()) < 4 * d.std(ddof=1) / math.sqrt(d.size)


def test_normalization_factor():
    # the j1 exponent is j1 (beta - 1) / 2, so j1 = 0 leaves the factor at 1
    assert normalization_factor(0.5, 0, 0) == 1.0
    assert normalization_factor(0.5, 1, 0) == pytest.approx(2**-0.25)
    assert normalization_factor(0.3, 10, 12) == pytest.approx(2 ** (-3.5 + 6))


def test_coupling_and_rounding():
    cfg = ScatteringConfig(W, 0.3, ratio=1.2)
    assert cfg.scales(4) == (4, 5, "up")
    assert cfg.scales(10) == (10, 12, "exact")
    assert cfg.scales(6) == (6, 7, "down")
    with pytest.raises(CouplingViolation):
        ScatteringConfig(W, 0.3, ratio=0.9)
    with pytest.raises(CouplingViolation):
        ScatteringConfig(W, 0.3, ratio=2.5)
    assert ScatteringConfig(W, 0.3, ratio=2.5, counterexample=True).scales(2) == (2, 5, "exact")


def test_guards():
    with pytest.raises(ResolutionError):
        cwt(_noise(), W, 2)
    with pytest.raises(OutOfExtent):
        valid_slice(2**10, 1.0, 8)
    m = SpectralModel(0.1, Envelope(), cutoff=36.0)
    assert default_dt(m) == 1 / 16


def test_rescaled_sample_records_offsets():
    g = simulate_gaussian(SpectralModel(0.3, Envelope(), cutoff=math.pi).normalized(), 2**14, 1.0, 0)
    rs = rescaled_second_order(g, ScatteringConfig(W, 0.3, ratio=1.2), [-0.5, 0.0, 0.5], j1=4)
    assert rs.j2 == 5 and rs.rounding == "up"
    assert np.all(rs.values >= 0) and rs.indices[1] == g.n // 2


def test_difference_paths():
    g = simulate_gaussian(SpectralModel(0.3, Envelope(), cutoff=math.pi).normalized(), 2**12, 1.0, 1)
    d, dt_ = diff_paths(H.identity(), g, W, 3, 4)
    assert np.all(d.values == 0.0) and np.all(dt_.values == 0.0)


def test_prefilter_identity_where_s_dominates():
    rng = np.random.default_rng(5)
    s, t = rng.standard_normal(10_000), 0.3 * rng.standard_normal(10_000)
    dom = np.abs(s) >= np.abs(t)
    # equal up to the rounding of s + t
    assert np.allclose((np.abs(s + t) - np.abs(s))[dom], (np.sign(s) * t)[dom], rtol=0, atol=1e-14)


def test_centering_does_not_change_the_filtered_path(lrd03):
    g = simulate_gaussian(lrd03.normalized(), 2**12, 1.0, 9)
    sub = H.subordinator_from_cdf(H.LaplaceCDF())
    x = H.apply(sub, g)
    raw = first_order(x, Wavelet(), 4).values
    centred = first_order(x.derive(x.values - sub.coeffs[0], "centred"), Wavelet(), 4).values
    assert np.max(np.abs(raw - centred)) < 1e-12 * np.max(raw)
    S, T = H.decompose_ST(sub, g, Wavelet(), 4)
    assert np.allclose(S.values + T.values, cwt(x, Wavelet(), 4).values, atol=1e-12)
