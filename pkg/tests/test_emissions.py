import math

import numpy as np
import pytest

import mshmm
from mshmm import emission_table, log_gaussian_pdf
from mshmm.errors import DataError, DimensionError, NotPositiveDefiniteError

from conftest import random_model

# ln(1/sqrt(2*pi)) and -ln(2*pi), frozen reference values
LOG_STD_NORMAL_PEAK = -0.9189385332046727
LOG_2D_UNIT_PEAK = -1.8378770664093453


def _explicit_2x2_log_pdf(y, m, c):
    """Direct evaluation through the explicit 2x2 inverse and determinant."""
    det = c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0]
    inv = np.array([[c[1, 1], -c[0, 1]], [-c[1, 0], c[0, 0]]]) / det
    d = y - m
    return -0.5 * (2 * math.log(2 * math.pi) + math.log(det) + d @ inv @ d)


def test_standard_normal_at_mean():
    assert log_gaussian_pdf([0.0], [0.0], [[1.0]]) == pytest.approx(
        LOG_STD_NORMAL_PEAK, abs=1e-12)


def test_identity_2d_at_mean():
    assert log_gaussian_pdf([1.0, -2.0], [1.0, -2.0], np.eye(2)) == pytest.approx(
        LOG_2D_UNIT_PEAK, abs=1e-12)


def test_matches_explicit_2x2(rng):
    for _ in range(50):
        a = rng.normal(0, 1, (2, 2))
        cov = a @ a.T + 0.3 * np.eye(2)
        y = rng.normal(0, 3, 2)
        m = rng.normal(0, 3, 2)
        expected = _explicit_2x2_log_pdf(y, m, cov)
        got = log_gaussian_pdf(y, m, cov)
        assert abs(got - expected) <= 1e-12 * abs(expected)


def test_diagonal_mode_matches_full_on_diagonal_cov(rng):
    for _ in range(25):
        var = rng.uniform(0.2, 3.0, 3)
        cov = np.diag(var)
        y = rng.normal(0, 2, 3)
        m = rng.normal(0, 2, 3)
        full = log_gaussian_pdf(y, m, cov, mode="full")
        diag = log_gaussian_pdf(y, m, cov, mode="diagonal")
        assert abs(full - diag) <= 1e-12 * max(1.0, abs(full))


def test_diagonal_mode_ignores_offdiagonal_entries(rng):
    cov = np.array([[2.0, 0.9], [0.9, 1.0]])
    y, m = np.array([0.3, -0.2]), np.zeros(2)
    diag_only = log_gaussian_pdf(y, m, np.diag(np.diagonal(cov)), mode="diagonal")
    assert log_gaussian_pdf(y, m, cov, mode="diagonal") == diag_only


def test_maximized_at_mean(rng):
    mean = rng.normal(0, 1, 2)
    a = rng.normal(0, 1, (2, 2))
    cov = a @ a.T + 0.5 * np.eye(2)
    peak = log_gaussian_pdf(mean, mean, cov)
    for _ in range(100):
        assert log_gaussian_pdf(mean + rng.normal(0, 1, 2), mean, cov) <= peak


def test_table_matches_pdf_without_absorbing(rng):
    model = random_model(rng, 3, 2)
    obs = rng.normal(0, 2, (4, 2))
    table = emission_table(model, obs)
    for t in range(4):
        for i in range(3):
            expected = math.exp(log_gaussian_pdf(
                obs[t], model.means[i], model.covariances[i]))
            assert table.densities[t, i] == pytest.approx(expected, rel=1e-14)
    np.testing.assert_array_equal(table.densities, np.exp(table.log_densities))


def test_absorbing_dead_rows_are_one_hot(rng):
    model = random_model(rng, 3, 2, absorbing=True)
    obs = np.array([[1.0, 2.0], [0.0, 0.0], [0.0, 0.0]])
    alive = np.array([True, False, False])
    table = emission_table(model, obs, alive)
    np.testing.assert_array_equal(table.densities[1], [0.0, 0.0, 1.0])
    np.testing.assert_array_equal(table.densities[2], [0.0, 0.0, 1.0])
    assert table.log_densities[1, 2] == 0.0
    assert np.all(np.isneginf(table.log_densities[1, :2]))


def test_absorbing_alive_rows_zero_on_death_state(rng):
    model = random_model(rng, 3, 2, absorbing=True)
    obs = rng.normal(1.0, 1.0, (3, 2))
    table = emission_table(model, obs)
    np.testing.assert_array_equal(table.densities[:, 2], 0.0)
    assert np.all(table.densities[:, :2] > 0.0)


def test_dead_rows_require_absorbing_state(rng):
    model = random_model(rng, 2, 2)
    obs = np.array([[1.0, 1.0], [0.0, 0.0]])
    with pytest.raises(DataError, match="absorbing"):
        emission_table(model, obs, np.array([True, False]))


def test_singular_covariance_names_state(rng):
    covs = np.stack([np.eye(2), np.zeros((2, 2))])
    model = mshmm.HmmModel([0.5, 0.5], np.full((2, 2), 0.5),
                           np.zeros((2, 2)), covs)
    with pytest.raises(NotPositiveDefiniteError, match="state 2"):
        emission_table(model, rng.normal(0, 1, (3, 2)))


def test_dimension_mismatch(rng):
    model = random_model(rng, 2, 2)
    with pytest.raises(DimensionError):
        emission_table(model, rng.normal(0, 1, (3, 4)))
    with pytest.raises(DimensionError):
        log_gaussian_pdf([0.0], [0.0, 0.0], np.eye(2))
