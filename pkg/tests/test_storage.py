import numpy as np
import pytest

from core.errors import InvalidInputError
from core.model import Dataset
from storage.file_adapter import FileAdapter, load_voles_csv
from tests.helpers import random_dataset


def test_json_documents(tmp_path):
    adapter = FileAdapter(tmp_path)
    saved = adapter.save_json("sub/doc.json", {"kind": "cwfa-truth", "format_version": 1, "b": 2, "a": [1.5]})
    assert saved.success
    assert saved.metadata["bytes"] > 0
    text = (tmp_path / "sub" / "doc.json").read_text()
    assert text.endswith("}\n")
    assert text.index('"a"') < text.index('"b"')
    assert adapter.load_json("sub/doc.json", kind="cwfa-truth")["a"] == [1.5]


def test_json_errors(tmp_path):
    adapter = FileAdapter(tmp_path)
    with pytest.raises(InvalidInputError):
        adapter.load_json("missing.json")
    (tmp_path / "broken.json").write_text("{not json")
    with pytest.raises(InvalidInputError) as info:
        adapter.load_json("broken.json")
    assert info.value.context["line"] == 1
    adapter.save_json("fit.json", {"kind": "cwfa-fit", "format_version": 1})
    with pytest.raises(InvalidInputError):
        adapter.load_json("fit.json", kind="cwfa-search")
    adapter.save_json("v2.json", {"kind": "cwfa-fit", "format_version": 2})
    with pytest.raises(InvalidInputError):
        adapter.load_json("v2.json")
    (tmp_path / "list.json").write_text("[1, 2]")
    with pytest.raises(InvalidInputError):
        adapter.load_json("list.json")


def test_absolute_paths_bypass_base_dir(tmp_path):
    adapter = FileAdapter("somewhere-else")
    target = tmp_path / "report.txt"
    assert adapter.resolve(target) == target
    assert adapter.save_text(target, "ok\n").success
    assert target.read_text() == "ok\n"


def test_failed_write_is_reported(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    result = FileAdapter(tmp_path).save_text("file/inner.txt", "x")
    assert not result.success
    assert result.error


def test_dataset_csv_round_trip(tmp_path):
    adapter = FileAdapter(tmp_path)
    data = random_dataset(12, 3, seed=4)
    labels = np.array([0, 1, 2] * 4)
    adapter.write_dataset_csv("d.csv", data, labels=labels)
    header = (tmp_path / "d.csv").read_text().splitlines()[0]
    assert header == "x1,x2,x3,y,label"
    back = adapter.read_dataset_csv("d.csv", label_col="label")
    assert back.x_names == ("x1", "x2", "x3")
    assert np.allclose(back.x, data.x, rtol=1e-14, atol=0)
    assert np.allclose(back.y, data.y, rtol=1e-14, atol=0)
    assert back.labels.tolist() == labels.tolist()
    unlabeled = adapter.read_dataset_csv("d.csv", exclude=["label"])
    assert not unlabeled.has_labels and unlabeled.p == 3
    with pytest.raises(InvalidInputError):
        adapter.write_dataset_csv("e.csv", data, labels=[1, 2])


def test_writes_are_byte_identical(tmp_path):
    adapter = FileAdapter(tmp_path)
    data = random_dataset(5, 2, seed=9)
    adapter.write_dataset_csv("a.csv", data, labels=[1, 0, 2, 0, 1])
    adapter.write_dataset_csv("b.csv", data, labels=[1, 0, 2, 0, 1])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert b"\r\n" not in (tmp_path / "a.csv").read_bytes()


def test_non_numeric_cell_is_located(tmp_path):
    (tmp_path / "bad.csv").write_text("x1,x2,y\n1,2,3\n4,oops,6\n")
    with pytest.raises(InvalidInputError) as info:
        FileAdapter(tmp_path).read_dataset_csv("bad.csv")
    assert info.value.context["row"] == 2
    assert info.value.context["column"] == "x2"
    assert "oops" in info.value.message


def test_missing_cells_and_columns(tmp_path):
    adapter = FileAdapter(tmp_path)
    (tmp_path / "gap.csv").write_text("x1,y\n1,\n")
    with pytest.raises(InvalidInputError) as info:
        adapter.read_dataset_csv("gap.csv")
    assert info.value.context["column"] == "y"
    (tmp_path / "noy.csv").write_text("x1,x2\n1,2\n")
    with pytest.raises(InvalidInputError):
        adapter.read_dataset_csv("noy.csv")
    with pytest.raises(InvalidInputError):
        adapter.read_dataset_csv("noy.csv", y_col="x2", label_col="group")
    with pytest.raises(InvalidInputError):
        adapter.read_dataset_csv("absent.csv")


def test_label_cells(tmp_path):
    adapter = FileAdapter(tmp_path)
    (tmp_path / "lab.csv").write_text("x1,y,label\n1,2,\n3,4,2\n5,6,1.0\n7,8,NA\n")
    data = adapter.read_dataset_csv("lab.csv", label_col="label")
    assert data.labels.tolist() == [0, 2, 1, 0]
    (tmp_path / "neg.csv").write_text("x1,y,label\n1,2,-1\n")
    with pytest.raises(InvalidInputError) as info:
        adapter.read_dataset_csv("neg.csv", label_col="label")
    assert info.value.context["row"] == 1


def test_load_voles_csv(tmp_path):
    rows = [
        "Species,Age,L2,L9,L7,B3,B4,H1",
        "persimilis,300,240,40,32,35,41,102",
        "ochrogaster,250,255,36,40,30,46,108",
        "persimilis,410,245,41,33,36,42,103",
    ]
    path = tmp_path / "voles.csv"
    path.write_text("\n".join(rows) + "\n")
    data, labels, names = load_voles_csv(path)
    assert names == ("ochrogaster", "persimilis")
    assert labels.tolist() == [2, 1, 2]
    assert data.x_names == ("L2", "L9", "L7", "B3", "B4", "H1")
    assert data.y.tolist() == [300.0, 250.0, 410.0]
    assert not data.has_labels
    (tmp_path / "short.csv").write_text("Species,Age\nx,1\n")
    with pytest.raises(InvalidInputError):
        load_voles_csv(tmp_path / "short.csv")


def test_dataset_names_are_written(tmp_path):
    data = Dataset(x=np.eye(2), y=np.array([1.0, 2.0]), x_names=("a", "b"), y_name="resp")
    adapter = FileAdapter(tmp_path)
    adapter.write_dataset_csv("named.csv", data)
    assert (tmp_path / "named.csv").read_text().splitlines()[0] == "a,b,resp"
    back = adapter.read_dataset_csv("named.csv", y_col="resp")
    assert back.x_names == ("a", "b")
