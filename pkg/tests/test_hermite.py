import math
import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import hermite_e

from lrdscat import hermite as H
from lrdscat.errors import NonInvertibleCDF, RankViolation
from lrdscat.paths import SampledPath


def test_polynomial_values():
    assert H.hermite_poly(0, 3.7) == 1.0
    assert H.hermite_poly(2, 1.0) == 0.0
    assert H.hermite_poly(3, 2.0) == 2.0


@given(st.integers(0, 15), st.floats(-5, 5))
@settings(max_examples=60, deadline=None)
def test_recurrence_matches_numpy_hermite_e(ell, z):
    coef = np.zeros(ell + 1)
    coef[ell] = 1.0
    ref = hermite_e.hermeval(z, coef)
    assert H.hermite_poly(ell, z) == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_orthonormality_to_order_20():
    x, w = hermite_e.hermegauss(60)
    w = w / math.sqrt(2 * math.pi)
    P = H.normalized_hermite(20, x)
    gram = (P * w) @ P.T
    assert np.max(np.abs(gram - np.eye(21))) < 1e-10


def test_abs_coefficients_closed_form():
    c = H.absolute().coeffs
    assert c[0] == pytest.approx(math.sqrt(2 / math.pi), abs=1e-8)
    assert abs(c[1]) < 1e-12
    assert c[2] == pytest.approx(math.sqrt(1 / math.pi), abs=1e-8)
    for ell in range(0, 21):
        assert c[ell] == pytest.approx(H.abs_coefficient(ell), abs=1e-8)


def test_hermite_sum_coefficients():
    c = H.hermite_sum({1: 1, 2: 1, 3: 1}).coeffs
    ref = np.zeros(c.size)
    ref[1:4] = [1.0, math.sqrt(2), math.sqrt(6)]
    assert np.max(np.abs(c - ref)) < 1e-10


def test_sign_first_coefficient():
    assert H.sign().c(1) == pytest.approx(math.sqrt(2 / math.pi), abs=1e-8)


def test_ranks():
    assert H.absolute().rank == 2
    assert H.absolute(0.1).rank == 1
    assert H.absolute(-0.1).rank == 1
    assert H.identity().rank == 1


def test_rank_one_required():
    with pytest.raises(RankViolation):
        H.hermite_sum({2: 1.0}).require_rank_one()


def test_named_marginals():
    lap = H.subordinator_from_cdf(H.LaplaceCDF())
    gum = H.subordinator_from_cdf(H.GumbelCDF())
    assert lap(np.array([0.0]))[0] == pytest.approx(0.0, abs=1e-14)
    assert gum(np.array([0.0]))[0] == pytest.approx(-math.log(math.log(2)), abs=1e-12)
    z = H.special.ndtri(0.25)
    assert lap(np.array([z]))[0] == pytest.approx(math.log(0.5), abs=1e-12)
    assert lap.rank == 1 and gum.rank == 1


def test_inverse_round_trip():
    lap = H.subordinator_from_cdf(H.LaplaceCDF(0.5, 2.0))
    z = np.linspace(-3, 3, 41)
    assert np.max(np.abs(lap.inverse(lap(z)) - z)) < 1e-10


def test_empirical_cdf_rejects_constant_sample():
    with pytest.raises(NonInvertibleCDF):
        H.EmpiricalCDF.from_sample(np.ones(2000))


def test_apply_and_decompose():
    p = SampledPath(np.array([-1.0, 2.0, -3.0, 0.5]))
    assert np.array_equal(H.apply(H.absolute(), p).values, [1.0, 2.0, 3.0, 0.5])
    assert np.array_equal(H.apply(H.identity(), p).values, p.values)


def test_identity_has_no_remainder():
    from lrdscat.wavelets import Wavelet

    rng = np.random.default_rng(1)
    p = SampledPath(rng.standard_normal(256))
    S, T = H.decompose_ST(H.identity(), p, Wavelet(), 3)
    assert np.all(T.values == 0.0)


def test_figure4_polynomial_has_zero_mean():
    rng = np.random.default_rng(2)
    z = rng.standard_normal(200_000)
    x = H.hermite_sum({1: 1, 2: 1, 3: 1})(z)
    # Var = 1 + 2 + 6
    assert abs(x.mean()) < 4 * 3.0 / math.sqrt(z.size)


def test_subordinator_pickles_with_cached_coefficients():
    a = H.subordinator_from_cdf(H.LaplaceCDF())
    a.coeffs
    b = pickle.loads(pickle.dumps(a))
    assert b._coeffs == a._coeffs
    assert H.from_dict(a.to_dict()).coeffs == pytest.approx(a.coeffs, abs=1e-12)
