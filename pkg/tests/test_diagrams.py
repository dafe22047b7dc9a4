import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.polynomial import hermite_e

from lrdscat import diagrams as D
from lrdscat.errors import NotRegular, SizeLimit


def test_small_counts():
    assert D.count_diagrams((1, 1)) == 1
    assert D.count_diagrams((2, 2)) == 2
    assert D.count_diagrams((1, 1, 1)) == 0
    assert D.count_diagrams((2, 3)) == 0
    assert len(D.enumerate_diagrams((2, 2, 2))) == D.count_diagrams((2, 2, 2)) == 8


def test_tally_of_3344_has_the_expected_regular_split():
    t = D.tally((3, 3, 4, 4))
    assert t["total"] == D.count_diagrams((3, 3, 4, 4))
    assert t["regular"] + t["non_regular"] == t["total"]
    regular = [d for d in D.enumerate_diagrams((3, 3, 4, 4)) if d.regular]
    splits = {tuple((s.levels, s.edges) for s in D.regular_split(d)) for d in regular}
    assert (((0, 1), 3), ((2, 3), 4)) in splits
    # 3! pairings between the H3 levels times 4! between the H4 levels
    assert sum(1 for d in regular if d.count(0, 1) == 3) == math.factorial(3) * math.factorial(4)


@pytest.mark.parametrize("ell", range(1, 7))
def test_two_level_moment_is_exact(ell):
    rho = Fraction(3, 7)
    assert D.hermite_moment((ell, ell), [[1, rho], [rho, 1]], check=False) == math.factorial(ell) * rho**ell


def test_isserlis_fourth_moment():
    rho = Fraction(1, 3)
    cov = [[1, rho, rho, rho], [rho, 1, rho, rho], [rho, rho, 1, rho], [rho, rho, rho, 1]]
    assert D.hermite_moment((1, 1, 1, 1), cov, check=False) == 3 * rho**2


def test_enumeration_and_recursion_agree():
    cov = np.array([[1, 0.3, -0.2], [0.3, 1, 0.5], [-0.2, 0.5, 1]])
    total = sum(d.value(cov) for d in D.enumerate_diagrams((2, 3, 3)))
    assert D.hermite_moment((2, 3, 3), cov) == pytest.approx(total, rel=1e-12)


def test_non_regular_split_raises():
    bad = next(d for d in D.enumerate_diagrams((2, 2, 2)) if not d.regular)
    with pytest.raises(NotRegular):
        D.regular_split(bad)


def test_size_limit():
    with pytest.raises(SizeLimit):
        D.count_diagrams((6, 6, 6, 6))


def test_invalid_covariance_rejected():
    with pytest.raises(ValueError):
        D.hermite_moment((1, 1), [[1, 2], [2, 1]])


@pytest.mark.parametrize("order", [(2, 2), (1, 2, 1), (2, 2, 2), (3, 3, 2), (2, 2, 2, 2)])
def test_against_monte_carlo(order):
    cov = np.array([[1.0, 0.5, 0.3, 0.1], [0.5, 1.0, 0.4, 0.2], [0.3, 0.4, 1.0, 0.6], [0.1, 0.2, 0.6, 1.0]])
    p = len(order)
    c = cov[:p, :p]
    rng = np.random.default_rng(11)
    z = rng.standard_normal((10**6, p)) @ np.linalg.cholesky(c).T
    prod = np.ones(len(z))
    for i, q in enumerate(order):
        prod *= hermite_e.hermeval(z[:, i], [0] * q + [1])
    se = prod.std() / math.sqrt(len(prod))
    assert abs(prod.mean() - D.hermite_moment(order, c)) < 4 * se
