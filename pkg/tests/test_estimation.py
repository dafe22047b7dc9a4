import math

import numpy as np
import pytest
from scipy import stats

from lrdscat import estimation as E
from lrdscat import hermite as H
from lrdscat.errors import NonInvertibleCDF, ParseError, SampleTooSmall, ShapeError
from lrdscat.simulate import rng_for, synthesize
from lrdscat.spectral import Envelope, SpectralModel


def _paths(beta, segs=16, n=4096, seed=5):
    # cut from one long path: a whole synthesized path is exactly periodic,
    # which recorded data never is and which biases the raw periodogram
    m = SpectralModel(beta, Envelope(), cutoff=math.pi).normalized()
    return synthesize(m, 16 * segs * n, 1.0, rng_for(seed, 0))[: segs * n].reshape(segs, n)


def test_load_csv_columns_and_single_column(tmp_path):
    p = tmp_path / "wide.csv"
    np.savetxt(p, np.arange(12.0).reshape(4, 3), delimiter=",", header="a,b,c", comments="")
    d = E.load_csv(p)
    assert d.segments.shape == (3, 4) and d.segments[1, 2] == 7.0
    q = tmp_path / "tall.csv"
    np.savetxt(q, np.arange(12.0), delimiter=",")
    assert E.load_csv(q, segment_length=4).segments.shape == (3, 4)
    with pytest.raises(ShapeError):
        E.load_csv(q, segment_length=5)


def test_parse_error_reports_row(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x\n" + "".join(f"{i}.0\n" for i in range(5)) + "oops\n1.0\n")
    with pytest.raises(ParseError) as exc:
        E.load_csv(p)
    assert exc.value.row == 7


def test_ragged_rows_rejected(tmp_path):
    p = tmp_path / "ragged.csv"
    p.write_text("1,2\n3,4\n5\n")
    with pytest.raises(ParseError):
        E.load_csv(p)


def test_small_samples_rejected():
    with pytest.raises(SampleTooSmall):
        E.fit_subordinator(np.zeros(999) + np.arange(999))
    with pytest.raises(SampleTooSmall):
        E.estimate_hurst(E.SignalDataset(np.zeros((2, 100))))


def test_heavily_tied_sample_has_no_inverse():
    x = np.concatenate([np.zeros(500), np.random.default_rng(0).standard_normal(1500)])
    with pytest.raises(NonInvertibleCDF):
        E.fit_subordinator(x)


def test_hurst_round_trip_beta_half():
    est = E.estimate_hurst(E.SignalDataset(_paths(0.5)))
    assert abs(est.beta - 0.5) < 0.1
    assert est.ci[0] < est.beta < est.ci[1]
    assert not est.short_range


def test_hurst_small_beta():
    est = E.estimate_hurst(E.SignalDataset(_paths(0.1)))
    assert 0.02 < est.beta < 0.25


def test_white_noise_flagged_short_range():
    x = np.random.default_rng(2).standard_normal((16, 4096))
    assert E.estimate_hurst(E.SignalDataset(x)).short_range


def test_affine_invariance():
    x = _paths(0.5, segs=4)
    a = E.estimate_hurst(E.SignalDataset(x), n_boot=0).beta
    b = E.estimate_hurst(E.SignalDataset(3.7 * x - 11.0), n_boot=0).beta
    assert a == pytest.approx(b, abs=1e-12)


def test_gaussianize_removes_heavy_tails():
    z = _paths(0.5, segs=8)
    lap = np.asarray(H.subordinator_from_cdf(H.LaplaceCDF())(z))
    data = E.SignalDataset(lap)
    assert stats.kurtosis(data.pooled()) > 2.0
    sub = E.fit_subordinator(data)
    g = E.gaussianize(data, sub)
    assert abs(stats.kurtosis(g.pooled())) < 0.1
    back = np.asarray(sub(g.segments))
    assert np.max(np.abs(back - lap)) < 1e-6 * np.max(np.abs(lap))


def test_correlation_estimate_starts_at_one():
    ac = E.correlation_estimate(E.SignalDataset(_paths(0.5, segs=4)), 10)
    assert ac[0] == 1.0 and np.all(np.diff(ac[:3]) < 0)
