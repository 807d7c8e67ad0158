import numpy as np
import pytest
from scipy import stats
from scipy.special import logsumexp

from core.density import (
    component_log_densities,
    component_log_density,
    log_joint,
    log_likelihood,
    map_labels,
    posterior_from_log_joint,
    posterior_responsibilities,
    sigma_from_factors,
    woodbury_inverse_logdet,
)
from core.errors import InvalidInputError, InvalidParameterError
from core.model import ConstraintCode, Dataset, Responsibilities
from tests.helpers import random_dataset, random_params


def _dense_log_joint(data, params):
    out = np.empty((data.n, params.G))
    for g, comp in enumerate(params.components):
        reg = stats.norm.logpdf(data.y, loc=comp.intercept + data.x @ comp.slope, scale=np.sqrt(comp.noise_var))
        cov = stats.multivariate_normal.logpdf(data.x, mean=comp.mean, cov=comp.covariance())
        out[:, g] = np.log(comp.weight) + reg + cov
    return out


def test_woodbury_matches_dense_inverse_and_logdet():
    rng = np.random.default_rng(0)
    for _ in range(200):
        p = int(rng.integers(1, 9))
        q = int(rng.integers(1, p + 1))
        L = rng.normal(size=(p, q))
        psi = rng.uniform(0.05, 3.0, size=p)
        sigma = sigma_from_factors(L, psi)
        inv, logdet = woodbury_inverse_logdet(L, psi)
        dense_inv = np.linalg.inv(sigma)
        sign, dense_logdet = np.linalg.slogdet(sigma)
        assert sign > 0
        assert np.linalg.norm(inv - dense_inv) <= 1e-8 * np.linalg.norm(dense_inv)
        assert abs(logdet - dense_logdet) <= 1e-8 * max(1.0, abs(dense_logdet))


def test_woodbury_rejects_bad_uniquenesses():
    with pytest.raises(InvalidParameterError):
        woodbury_inverse_logdet(np.ones((2, 1)), np.array([1.0, 0.0]))
    with pytest.raises(InvalidParameterError):
        woodbury_inverse_logdet(np.ones((3, 1)), np.array([1.0, 1.0]))


def test_component_log_density_matches_scipy():
    params = random_params("UUUU", 1, 4, 2, seed=5)
    comp = params.components[0]
    x = np.array([0.3, -1.2, 2.0, 0.5])
    y = 1.7
    expected = stats.norm.logpdf(y, comp.intercept + x @ comp.slope, np.sqrt(comp.noise_var))
    expected += stats.multivariate_normal.logpdf(x, comp.mean, comp.covariance())
    assert component_log_density(x, y, comp) == pytest.approx(expected, rel=1e-10, abs=1e-10)
    with pytest.raises(InvalidInputError):
        component_log_density(x[:3], y, comp)


def test_posterior_matches_dense_bayes():
    rng = np.random.default_rng(11)
    codes = ConstraintCode.all_codes()
    for case in range(50):
        code = codes[case % 16]
        p = int(rng.integers(1, 6))
        q = int(rng.integers(1, p + 1))
        G = int(rng.integers(1, 5))
        params = random_params(code, G, p, q, seed=case)
        data = random_dataset(30, p, seed=100 + case)
        dense = _dense_log_joint(data, params)
        expected = np.exp(dense - logsumexp(dense, axis=1, keepdims=True))
        resp = posterior_responsibilities(data, params)
        assert np.max(np.abs(resp.z - expected)) < 1e-10
        assert log_likelihood(data, params) == pytest.approx(float(np.sum(logsumexp(dense, axis=1))), rel=1e-10)


def test_labeled_rows_are_pinned():
    params = random_params("UUUU", 3, 2, 1, seed=7)
    labels = np.array([0, 3, 0, 1, 2, 0])
    data = random_dataset(6, 2, seed=8, labels=labels)
    resp = posterior_responsibilities(data, params)
    assert resp.z[1].tolist() == [0.0, 0.0, 1.0]
    assert resp.z[3].tolist() == [1.0, 0.0, 0.0]
    assert resp.z[4].tolist() == [0.0, 1.0, 0.0]
    assert np.allclose(resp.z.sum(axis=1), 1.0)
    lj = log_joint(data, params)
    expected = logsumexp(lj, axis=1)
    expected[[1, 3, 4]] = lj[[1, 3, 4], [2, 0, 1]]
    assert log_likelihood(data, params, respect_labels=True) == pytest.approx(float(expected.sum()))
    assert log_likelihood(data, params) == pytest.approx(float(logsumexp(lj, axis=1).sum()))


def test_single_component_loglik_is_sum_of_log_densities():
    params = random_params("CCCC", 1, 3, 1, seed=9)
    data = random_dataset(20, 3, seed=10)
    assert log_likelihood(data, params) == pytest.approx(float(component_log_densities(data, params).sum()))


def test_dimension_mismatch_is_an_input_error():
    params = random_params("UUUU", 2, 3, 1)
    with pytest.raises(InvalidInputError):
        log_joint(random_dataset(5, 4), params)


def test_map_labels_break_ties_to_lowest_index():
    resp = Responsibilities(np.array([[0.5, 0.5], [0.2, 0.8], [1.0, 0.0]]))
    assert map_labels(resp).tolist() == [1, 2, 1]


def test_far_rows_do_not_underflow():
    params = random_params("UUUU", 2, 2, 1, seed=12)
    data = Dataset(x=np.array([[1e3, -1e3]]), y=np.array([5e3]))
    resp = posterior_responsibilities(data, params)
    assert np.all(np.isfinite(resp.z))
    assert resp.z.sum() == pytest.approx(1.0)


def test_loglik_ignores_row_order_and_doubles_on_duplication():
    params = random_params("UCUC", 3, 4, 2, seed=12)
    data = random_dataset(50, 4, seed=13)
    base = log_likelihood(data, params)
    order = np.random.default_rng(14).permutation(data.n)
    shuffled = Dataset(x=data.x[order], y=data.y[order])
    doubled = Dataset(x=np.vstack([data.x, data.x]), y=np.concatenate([data.y, data.y]))
    assert log_likelihood(shuffled, params) == pytest.approx(base, rel=1e-12)
    assert log_likelihood(doubled, params) == pytest.approx(2.0 * base, rel=1e-12)


def test_posterior_ignores_per_row_shifts():
    params = random_params("UUUU", 3, 3, 1, seed=15)
    data = random_dataset(40, 3, seed=16)
    lj = log_joint(data, params)
    shift = np.random.default_rng(17).normal(scale=500.0, size=(data.n, 1))
    before = posterior_from_log_joint(lj, data).z
    after = posterior_from_log_joint(lj + shift, data).z
    assert np.allclose(before, after, atol=1e-10)


def test_map_labels_survive_monotone_rescaling():
    z = np.random.default_rng(18).dirichlet(np.ones(4), size=30)
    cubed = z ** 3
    rescaled = Responsibilities(cubed / cubed.sum(axis=1, keepdims=True))
    assert np.array_equal(map_labels(Responsibilities(z)), map_labels(rescaled))
