import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qmdiqkd import tables
from qmdiqkd.tables import (
    PAIRS,
    OutcomeTable,
    TableError,
    TableFormatError,
    TableValidationError,
    from_counts,
    ideal_bb84_table,
    joint_sender_table,
)

# Transcribed row by row (z = 0, 1, 2) for the columns in PAIRS order.
TABLE_I_ROWS = [
    [0.5, 0.5, 0.5, 0.5, 0, 1, 1, 0],
    [0.5, 0, 0, 0.5, 0.5, 0, 0, 0.5],
    [0, 0.5, 0.5, 0, 0.5, 0, 0, 0.5],
]


def test_ideal_table_entries():
    expected = np.array(TABLE_I_ROWS).T
    assert np.array_equal(ideal_bb84_table().array, expected)


def test_joint_sender_equals_ideal():
    assert joint_sender_table() == ideal_bb84_table()


def test_p_accessor():
    t = ideal_bb84_table()
    assert t.p(2, 0, 1) == 0.5
    assert t.p(0, 2, 3) == 1.0
    assert list(t[(3, 3)]) == [0, 0.5, 0.5]


def test_array_is_read_only():
    t = ideal_bb84_table()
    with pytest.raises(ValueError):
        t.array[0, 0] = 1.0


def test_validation_collects_every_issue():
    arr = ideal_bb84_table().array.copy()
    arr[0] = [0.7, 0.5, 0.0]
    arr[1] = [-0.1, 0.6, 0.5]
    with pytest.raises(TableValidationError) as info:
        OutcomeTable(arr)
    issues = info.value.issues
    assert any("0,0" in s and "sums" in s for s in issues)
    assert any("p(0|0,1)" in s for s in issues)
    assert tables.validate(arr) == issues
    assert tables.validate(ideal_bb84_table()) == []


def test_wrong_shape_reported():
    assert tables.validate(np.zeros((3, 3))) == ["shape (3, 3) != (8, 3)"]


def test_from_counts():
    counts = {pair: [2, 1, 1] for pair in PAIRS}
    t = from_counts(counts)
    assert t.p(0, 2, 2) == 0.5
    assert t.p(1, 0, 0) == 0.25


def test_from_counts_zero_column():
    counts = {pair: [1, 0, 0] for pair in PAIRS}
    counts[(3, 2)] = [0, 0, 0]
    with pytest.raises(TableError, match="3,2"):
        from_counts(counts)


def test_from_counts_missing_pair():
    with pytest.raises(TableError):
        from_counts({(0, 0): [1, 0, 0]})


def test_mix_is_entrywise():
    a = ideal_bb84_table()
    b = OutcomeTable(np.tile([1.0, 0.0, 0.0], (8, 1)))
    m = tables.mix([a, b], [0.25, 0.75])
    assert m.p(1, 0, 0) == pytest.approx(0.125)
    assert m.p(0, 2, 2) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        tables.mix([a, b], [0.5, 0.6])


def test_json_round_trip_exact():
    t = tables.mix([ideal_bb84_table(), OutcomeTable(np.full((8, 3), 1 / 3))], [0.3, 0.7])
    assert tables.loads(tables.dumps(t)) == t


def test_json_format_is_keyed_by_pair():
    raw = json.loads(tables.dumps(ideal_bb84_table()))
    assert raw["2,3"] == [1, 0, 0]
    assert set(raw) == {f"{x},{y}" for x, y in PAIRS}


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"0,0": [1, 0, 0]}',
        '{"a,b": [1, 0, 0]}',
        '{"0,0": ["1", 0, 0]}',
    ],
)
def test_loads_rejects_malformed(text):
    with pytest.raises(TableFormatError):
        tables.loads(text)


def test_loads_rejects_extra_pair():
    raw = json.loads(tables.dumps(ideal_bb84_table()))
    raw["0,2"] = [1, 0, 0]
    with pytest.raises(TableFormatError):
        tables.loads(json.dumps(raw))


def test_save_load_and_atomic_write(tmp_path):
    path = tmp_path / "t.json"
    tables.save(ideal_bb84_table(), path)
    assert tables.load(path) == ideal_bb84_table()
    assert [p.name for p in tmp_path.iterdir()] == ["t.json"]


def test_atomic_write_leaves_nothing_on_failure(tmp_path):
    with pytest.raises(OSError):
        tables.atomic_write_text(tmp_path / "missing" / "t.json", "x")
    assert list(tmp_path.iterdir()) == []


def test_csv_export():
    lines = tables.to_csv(ideal_bb84_table()).splitlines()
    assert lines[0] == "x,y,p0,p1,p2"
    assert lines[6] == "2,3,1,0,0"
    assert len(lines) == 9


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=5), st.integers(0, 2**32 - 1))
def test_mixture_of_valid_tables_is_valid(raw_weights, seed):
    if sum(raw_weights) == 0:
        return
    rng = np.random.default_rng(seed)
    parts = [OutcomeTable(rng.dirichlet(np.ones(3), size=8)) for _ in raw_weights]
    w = np.array(raw_weights) / sum(raw_weights)
    w[-1] = 1.0 - w[:-1].sum()
    if w[-1] < 0:
        return
    assert tables.validate(tables.mix(parts, w)) == []
