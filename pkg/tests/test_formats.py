import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pascs_qkd.formats import SCHEMA, FormatError, Table, dumps, loads, read_table, write_table

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def sample_table():
    return Table("demo", ["name", "x", "n", "ok"], [["a", 0.1234567891234, 3, True], ["b", -2.5e-12, 0, False]],
                 {"alpha": "1", "nodes": 121}, {"best": {"x": 1 / 3}, "count": 2})


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip(fmt):
    table = sample_table()
    back = loads(dumps(table, fmt))
    assert back.schema == SCHEMA and back.command == "demo"
    assert back.columns == table.columns
    assert back.rows[0] == ["a", 0.123456789, 3, True]
    assert back.rows[1] == ["b", -2.5e-12, 0, False]
    assert back.summary["best"]["x"] == 0.333333333
    assert back.config == table.config


@given(st.lists(finite, min_size=1, max_size=5))
def test_csv_floats_keep_nine_digits(values):
    table = Table("t", [f"c{i}" for i in range(len(values))], [values])
    back = loads(dumps(table, "csv"))
    for got, want in zip(back.rows[0], values):
        assert float(got) == float(f"{want:.9g}")


def test_dumps_is_deterministic_and_fixed_layout():
    text = dumps(sample_table(), "csv")
    assert text == dumps(sample_table(), "csv")
    lines = text.splitlines()
    assert lines[0] == f"# schema: {SCHEMA}"
    assert lines[1] == "# command: demo"
    assert lines[4] == "name,x,n,ok"


def test_nan_survives_csv():
    back = loads(dumps(Table("t", ["x"], [[float("nan")]]), "csv"))
    assert math.isnan(back.rows[0][0])


def test_file_round_trip(tmp_path):
    path = tmp_path / "out.json"
    write_table(sample_table(), path, "json")
    assert read_table(path).records()[0]["name"] == "a"
    assert read_table(path).column("n") == [3, 0]


def test_rejects_unknown_schema_and_format():
    with pytest.raises(FormatError):
        loads("# schema: other/9\nx\n1\n")
    with pytest.raises(FormatError):
        dumps(sample_table(), "xml")
