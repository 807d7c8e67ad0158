import math

import pytest

from utils.validators import parse_code_tokens, parse_int_set, parse_label_value, validate_labels


def test_parse_int_set():
    assert parse_int_set("2,3") == [2, 3]
    assert parse_int_set("2-5") == [2, 3, 4, 5]
    assert parse_int_set("1, 3-4, 3") == [1, 3, 4]
    assert parse_int_set([3, 1, 3]) == [1, 3]
    for bad in ("", "5-2", "two", "0"):
        with pytest.raises(ValueError):
            parse_int_set(bad)


def test_parse_code_tokens():
    assert parse_code_tokens("uucu, CCCC,UUCU") == ["UUCU", "CCCC"]
    assert parse_code_tokens("All") == ["ALL"]
    for bad in ("", "UUC", "UUCU,ABCD"):
        with pytest.raises(ValueError):
            parse_code_tokens(bad)


@pytest.mark.parametrize(
    "raw, expected",
    [("3", 3), (" 2 ", 2), ("1.0", 1), (4, 4), (2.0, 2), ("", 0), ("NA", 0), ("?", 0), (None, 0), (math.nan, 0)],
)
def test_parse_label_value(raw, expected):
    assert parse_label_value(raw) == expected


@pytest.mark.parametrize("raw", ["1.5", "setosa", "-1", 0, 2.5])
def test_parse_label_value_rejects(raw):
    with pytest.raises(ValueError):
        parse_label_value(raw)


def test_validate_labels():
    validate_labels([0, 1, 2, 0], 2)
    with pytest.raises(ValueError, match="label 3 outside 1..2"):
        validate_labels([0, 3, 1], 2)
