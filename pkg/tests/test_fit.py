import json

import numpy as np
import pytest

from core.errors import DegenerateComponentError, InvalidInputError
from core.model import ConstraintCode, Dataset
from skills.aecm.config import FitConfig
from skills.aecm.fitter import FitResult, fit, is_monotone
from skills.initialization.partitions import kmeans_partition
from skills.selection.criteria import ari
from skills.simulate.examples import example1_spec
from skills.simulate.sampler import sample_dataset
from tests.helpers import random_groups_spec


def _monotone(result):
    return is_monotone(result.loglik_trace, slack=1e-6)


def _assert_constraints(result):
    comps = result.params.components
    code = result.code
    for comp in comps[1:]:
        if code.sigma_equal:
            assert comp.noise_var == comps[0].noise_var
        if code.lambda_equal:
            assert np.array_equal(comp.loadings, comps[0].loadings)
        if code.psi_equal:
            assert np.array_equal(comp.uniquenesses, comps[0].uniquenesses)
    if code.psi_isotropic:
        for comp in comps:
            assert np.all(comp.uniquenesses == comp.uniquenesses[0])


def test_two_groups_recovered(two_groups):
    data, truth = two_groups
    start = kmeans_partition(data, 2, restarts=5, seed=0)
    result = fit(data, ConstraintCode.parse("UUUU"), 2, 1, init_z=start)
    assert result.converged
    assert _monotone(result)
    assert ari(result.map_labels, truth) == pytest.approx(1.0)
    assert result.iterations == len(result.loglik_trace) - 1
    # weights 1, means 6, regression 8, noise 2, loadings 6, uniquenesses 6
    assert result.eta == 29
    assert result.bic == pytest.approx(2 * result.final_loglik - result.eta * np.log(data.n))


@pytest.mark.parametrize("code", [str(c) for c in ConstraintCode.all_codes()])
@pytest.mark.parametrize("G", [1, 2])
def test_every_code_is_monotone_and_constrained(two_groups, code, G):
    data, _ = two_groups
    start = kmeans_partition(data, G, restarts=3, seed=1)
    result = fit(data, ConstraintCode.parse(code), G, 1, init_z=start, config=FitConfig(max_outer_iters=200))
    assert _monotone(result)
    assert np.all(np.isfinite(result.loglik_trace))
    assert np.allclose(result.responsibilities.z.sum(axis=1), 1.0)
    _assert_constraints(result)


@pytest.fixture(scope="module")
def random_groups():
    return {seed: sample_dataset(random_groups_spec(seed=seed)) for seed in (0, 1)}


@pytest.mark.parametrize("code", [str(c) for c in ConstraintCode.all_codes()])
@pytest.mark.parametrize("G", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2])
@pytest.mark.parametrize("seed", [0, pytest.param(1, marks=pytest.mark.slow)])
def test_loglik_never_drops_on_five_covariates(random_groups, seed, code, G, q):
    data, _ = random_groups[seed]
    start = kmeans_partition(data, G, restarts=3, seed=seed)
    result = fit(data, ConstraintCode.parse(code), G, q, init_z=start, config=FitConfig(max_outer_iters=300))
    steps = np.diff(result.loglik_trace)
    assert steps.size == 0 or steps.min() >= -1e-6
    _assert_constraints(result)


@pytest.mark.parametrize("seed", range(5))
def test_shared_loadings_three_groups_stays_monotone(seed):
    data, _ = sample_dataset(random_groups_spec(seed=seed))
    start = kmeans_partition(data, 3, restarts=3, seed=seed)
    result = fit(data, ConstraintCode.parse("UCUU"), 3, 1, init_z=start, config=FitConfig(max_outer_iters=300))
    assert _monotone(result)


def test_fit_result_json_round_trip(two_groups):
    data, _ = two_groups
    result = fit(data, ConstraintCode.parse("UCUC"), 2, 1, init_z=kmeans_partition(data, 2, seed=2))
    back = FitResult.from_dict(json.loads(json.dumps(result.to_dict())))
    assert back.code == result.code
    assert back.final_loglik == result.final_loglik
    assert np.array_equal(back.map_labels, result.map_labels)
    assert np.array_equal(back.responsibilities.z, result.responsibilities.z)
    assert np.array_equal(back.loglik_trace, result.loglik_trace)
    slim = result.to_dict(include_responsibilities=False)
    assert "responsibilities" not in slim
    assert FitResult.from_dict(slim).responsibilities.G == 2
    with pytest.raises(InvalidInputError):
        FitResult.from_dict({**slim, "kind": "cwfa-search"})


def test_classification_with_all_rows_labeled(two_groups):
    data, truth = two_groups
    labeled = data.with_labels(truth)
    result = fit(labeled, ConstraintCode.parse("UUUU"), 2, 1, init_z=truth)
    assert np.array_equal(result.map_labels, truth)
    z = result.responsibilities.z
    assert np.array_equal(z, np.eye(2)[truth - 1])
    for g in (1, 2):
        rows = truth == g
        design = np.column_stack([np.ones(rows.sum()), data.x[rows]])
        coef, *_ = np.linalg.lstsq(design, data.y[rows], rcond=None)
        comp = result.params.components[g - 1]
        assert comp.intercept == pytest.approx(coef[0], abs=1e-8)
        assert np.allclose(comp.slope, coef[1:], atol=1e-8)
        assert comp.weight == pytest.approx(rows.mean())


def test_partial_labels_stay_pinned(two_groups):
    data, truth = two_groups
    labels = np.where(np.arange(data.n) % 3 == 0, truth, 0)
    partial = data.with_labels(labels)
    start = kmeans_partition(partial, 2, seed=4)
    result = fit(partial, ConstraintCode.parse("CUCU"), 2, 1, init_z=start)
    mask = labels > 0
    assert np.array_equal(result.map_labels[mask], labels[mask])
    assert np.all(result.responsibilities.z[mask].max(axis=1) == 1.0)


def test_warm_start_does_not_lose_likelihood(two_groups):
    data, _ = two_groups
    first = fit(data, ConstraintCode.parse("CCCC"), 2, 1, init_z=kmeans_partition(data, 2, seed=0))
    second = fit(data, ConstraintCode.parse("UUUU"), 2, 1, warm_start=first.params)
    assert second.start == "warm-start"
    assert second.loglik_trace[0] == pytest.approx(first.final_loglik, rel=1e-10)
    assert second.final_loglik >= first.final_loglik - 1e-6


def test_single_component(two_groups):
    data, _ = two_groups
    result = fit(data, ConstraintCode.parse("UUUU"), 1, 2, init_z=np.ones(data.n, dtype=int))
    assert result.converged
    assert result.final_loglik >= result.loglik_trace[0] - 1e-6
    assert np.all(result.map_labels == 1)


def test_invalid_requests(two_groups):
    data, truth = two_groups
    code = ConstraintCode.parse("UUUU")
    with pytest.raises(InvalidInputError):
        fit(data, code, 2, 4, init_z=truth)
    with pytest.raises(InvalidInputError):
        fit(data, code, 0, 1, init_z=truth)
    with pytest.raises(InvalidInputError):
        fit(data, code, 2, 1, init_z=truth[:-1])
    with pytest.raises(InvalidInputError):
        fit(data, code, 2, 1, init_z=truth + 1)
    with pytest.raises(InvalidInputError):
        fit(data, code, 2, 1)
    labeled = data.with_labels(truth)
    with pytest.raises(InvalidInputError):
        fit(labeled, code, 2, 1, init_z=3 - truth)


def test_degenerate_start_reports_component_and_iteration(two_groups):
    data, _ = two_groups
    start = np.ones(data.n, dtype=int)
    start[0] = 2
    with pytest.raises(DegenerateComponentError) as info:
        fit(data, ConstraintCode.parse("UUUU"), 2, 1, init_z=start)
    assert info.value.component == 2
    assert info.value.iteration == 0
    assert info.value.exit_code == 3


def test_far_outlier_row_is_handled():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(60, 2))
    x[0] = [1e4, -1e4]
    y = 1.0 + x @ np.array([0.5, 0.5]) + rng.normal(scale=0.1, size=60)
    result = fit(Dataset(x=x, y=y), ConstraintCode.parse("CCCC"), 1, 1, init_z=np.ones(60, dtype=int))
    assert np.isfinite(result.final_loglik)


@pytest.mark.slow
def test_example1_uucu_gives_perfect_classification():
    data, truth = sample_dataset(example1_spec(seed=1))
    start = kmeans_partition(data, 2, restarts=10, seed=0)
    result = fit(data, ConstraintCode.parse("UUCU"), 2, 2, init_z=start)
    assert result.converged
    assert ari(result.map_labels, truth) == pytest.approx(1.0)
    assert _monotone(result)
