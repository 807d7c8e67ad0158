import json

import numpy as np
import pytest

from core.errors import InvalidInputError, InvalidParameterError
from core.model import ComponentParams, ConstraintCode, CWFAParams, Dataset, Responsibilities
from tests.helpers import random_params


def test_constraint_code_parse_and_order():
    code = ConstraintCode.parse(" uucu ")
    assert str(code) == "UUCU"
    assert code.sigma_equal is False and code.psi_equal is True
    assert code.constrained_count == 1
    codes = ConstraintCode.all_codes()
    assert len(codes) == len(set(codes)) == 16
    assert str(codes[0]) == "UUUU" and str(codes[-1]) == "CCCC"
    assert [str(c) for c in codes[:4]] == ["UUUU", "UUUC", "UUCU", "UUCC"]


@pytest.mark.parametrize("text", ["", "UUC", "UUCX", "CCCCC", None])
def test_constraint_code_rejects_bad_tokens(text):
    with pytest.raises(InvalidInputError):
        ConstraintCode.parse(text)


def test_component_params_are_read_only_and_validated():
    comp = random_params("UUUU", 1, 3, 1).components[0]
    with pytest.raises(ValueError):
        comp.mean[0] = 1.0
    with pytest.raises(InvalidParameterError):
        ComponentParams(1.0, 0.0, [0.0, 0.0], -1.0, [0.0, 0.0], [[1.0], [1.0]], [1.0, 1.0])
    with pytest.raises(InvalidParameterError):
        ComponentParams(1.0, 0.0, [0.0, 0.0], 1.0, [0.0, 0.0], [[1.0], [1.0]], [1.0, 0.0])
    with pytest.raises(InvalidParameterError):
        ComponentParams(1.0, 0.0, [0.0], 1.0, [0.0, 0.0], [[1.0], [1.0]], [1.0, 1.0])


def test_params_enforce_code_constraints():
    params = random_params("UUUU", 2, 3, 1, seed=1)
    a, b = params.components
    with pytest.raises(InvalidParameterError):
        params.relaxed(ConstraintCode.parse("CUUU"))
    with pytest.raises(InvalidParameterError):
        params.relaxed(ConstraintCode.parse("UUUC"))
    heavy = ComponentParams(0.7, a.intercept, a.slope, a.noise_var, a.mean, a.loadings, a.uniquenesses)
    with pytest.raises(InvalidParameterError):
        CWFAParams(code=params.code, components=(heavy, b), p=3, q=1)
    with pytest.raises(InvalidParameterError):
        CWFAParams(code=params.code, components=(a, b), p=3, q=4)


def test_params_relaxed_keeps_values():
    params = random_params("CCCC", 3, 4, 2, seed=2)
    relaxed = params.relaxed(ConstraintCode.parse("UUUU"))
    assert str(relaxed.code) == "UUUU"
    for g in range(3):
        assert np.array_equal(relaxed.covariance(g), params.covariance(g))
        b0, b1 = relaxed.regression(g)
        assert b0 == params.components[g].intercept
        assert np.array_equal(b1, params.components[g].slope)


def test_params_json_round_trip_is_bit_identical():
    params = random_params("UCUC", 3, 5, 2, seed=4)
    text = json.dumps(params.to_dict())
    back = CWFAParams.from_dict(json.loads(text))
    assert back.code == params.code and back.G == 3
    for c_old, c_new in zip(params.components, back.components):
        assert c_old.weight == c_new.weight
        assert c_old.noise_var == c_new.noise_var
        assert np.array_equal(c_old.loadings, c_new.loadings)
        assert np.array_equal(c_old.uniquenesses, c_new.uniquenesses)
        assert np.array_equal(c_old.mean, c_new.mean)


def test_params_from_dict_rejects_other_versions():
    document = random_params("CCCC", 1, 2, 1).to_dict()
    document["format_version"] = 2
    with pytest.raises(InvalidInputError):
        CWFAParams.from_dict(document)
    document["format_version"] = 1
    del document["components"][0]["mean"]
    with pytest.raises(InvalidInputError):
        CWFAParams.from_dict(document)


def test_dataset_validation_and_labels():
    x = np.arange(12.0).reshape(6, 2)
    data = Dataset(x=x, y=np.ones(6), labels=[0, 1, 2, 0, 0, 1])
    assert (data.n, data.p) == (6, 2)
    assert data.x_names == ("x1", "x2")
    assert data.labeled_mask.tolist() == [False, True, True, False, False, True]
    assert data.has_labels
    data.check_labels(2)
    with pytest.raises(InvalidInputError, match="label 2 outside 1..1") as info:
        data.check_labels(1)
    assert info.value.context == {"G": 1, "max_label": 2}
    assert data.max_label == 2
    assert Dataset(x=x, y=np.ones(6)).max_label == 0
    with pytest.raises(InvalidInputError):
        Dataset(x=x, y=np.ones(5))
    with pytest.raises(InvalidInputError):
        Dataset(x=x, y=np.ones(6), labels=[0, -1, 0, 0, 0, 0])
    with pytest.raises(InvalidInputError):
        Dataset(x=np.full((2, 2), np.nan), y=np.ones(2))
    subset = data.take([1, 2])
    assert subset.labels.tolist() == [1, 2]
    assert not data.with_labels(None).has_labels


def test_responsibilities():
    resp = Responsibilities.from_partition([1, 2, 2, 3], 3)
    assert resp.counts.tolist() == [1.0, 2.0, 1.0]
    assert (resp.n, resp.G) == (4, 3)
    with pytest.raises(InvalidInputError):
        Responsibilities(np.array([[0.5, 0.6]]))
    with pytest.raises(InvalidInputError):
        Responsibilities.from_partition([0, 1], 2)
