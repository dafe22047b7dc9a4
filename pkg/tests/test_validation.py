import math

import numpy as np
import pytest

from lrdscat import hermite as H
from lrdscat import validation as V
from lrdscat.errors import CouplingViolation, InsufficientReplicates
from lrdscat.wavelets import Wavelet

LAPLACE = H.subordinator_from_cdf(H.LaplaceCDF())


def _campaign(model, sub, **kw):
    base = dict(j1_grid=(3, 4, 5), ratio=1.2, replicates=40, n=2**12, dt=1.0, seed=3)
    base.update(kw)
    return V.Campaign(model, Wavelet(), subordinator=sub, **base)


def test_too_few_replicates(lrd03):
    with pytest.raises(InsufficientReplicates):
        _campaign(lrd03, LAPLACE, replicates=29)


def test_grid_must_increase(lrd03):
    with pytest.raises(ValueError):
        _campaign(lrd03, LAPLACE, j1_grid=(4, 3))


def test_ratio_below_one_is_a_coupling_violation(lrd03):
    c = _campaign(lrd03, LAPLACE, j1_grid=(4, 5), ratio=0.9)
    with pytest.raises(CouplingViolation):
        V.theorem_convergence(c)


def test_identity_subordinator_is_degenerate(lrd03):
    rep = V.assumption5_ratio(_campaign(lrd03, H.identity()))
    assert rep.fits["degenerate"] and all(r["ED2"] == 0.0 and r["exact"] for r in rep.rows)
    rep = V.prop31_decay(_campaign(lrd03, H.identity()))
    assert rep.fits["degenerate"]


def test_folded_normal_target(lrd03):
    rep = V.theorem_convergence(_campaign(lrd03, LAPLACE))
    s = rep.fits["scale"]
    assert rep.fits["target_mean"] == pytest.approx(s * math.sqrt(2 / math.pi))
    assert rep.fits["target_second_moment"] == pytest.approx(s * s)
    assert all(r["mean"] > 0 for r in rep.rows)


def test_worker_count_does_not_change_results(lrd03):
    c1 = _campaign(lrd03, LAPLACE, workers=1)
    c2 = _campaign(lrd03, LAPLACE, workers=2)
    a = V.run_replicates(V._rep_diffs, c1)
    b = V.run_replicates(V._rep_diffs, c2)
    assert a.tobytes() == b.tobytes()


def test_standard_error_shrinks_with_replicates(lrd03):
    small = V.variance_scaling(_campaign(lrd03, H.hermite_sum({"1": 1.0, "2": 1.0}), replicates=60))
    big = V.variance_scaling(_campaign(lrd03, H.hermite_sum({"1": 1.0, "2": 1.0}), replicates=240))
    ratio = np.mean([a["varS_se"] / b["varS_se"] for a, b in zip(small.rows, big.rows)])
    assert 1.5 < ratio < 2.7  # sqrt(4) = 2


def test_empirical_covariance_is_psd(lrd03):
    rep = V.fdd_convergence(_campaign(lrd03, None, t_points=(-1.0, 0.0, 1.0)))
    assert all(r["cov_symmetric_psd"] for r in rep.rows)
    assert all(0 <= r["ks"] <= 1 for r in rep.rows)


def test_trend_helpers():
    assert V.decays([5, 4, 3, 2])
    assert V.decays([5, 4, 4.1, 2], ses=[0.1] * 4)
    assert not V.decays([5, 4, 6, 2], ses=[0.1] * 4)
    assert not V.decays([1, 2, 3])
    assert V.count_increases([1, 2, 1, 2]) == (2, True)


def test_pairwise_mean_matches_numpy():
    a = np.random.default_rng(0).standard_normal((101, 3, 2))
    assert np.allclose(V.pairwise_mean(a), a.mean(axis=0), rtol=0, atol=1e-14)
    m, se = V.mean_se(a)
    assert np.allclose(se, a.std(axis=0, ddof=1) / math.sqrt(101))


def test_report_csv_round_trip(tmp_path, lrd03):
    rep = V.variance_scaling(_campaign(lrd03, H.hermite_sum({"1": 1.0, "2": 1.0})))
    p = tmp_path / "r.csv"
    rep.write_csv(p)
    lines = [l for l in p.read_text().splitlines() if not l.startswith("#")]
    assert lines[0].split(",")[0] == "j1" and len(lines) == 1 + len(rep.rows)
    assert "np.float64" not in p.read_text()
