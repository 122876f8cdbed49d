import numpy as np
import pytest

from aag.table import DiscreteTable, table_from_rows, validate_attrs


def test_basic_shape_and_arities():
    t = table_from_rows([[0, 1], [1, 0], [0, 2]])
    assert t.n_rows == 3
    assert t.n_attrs == 2
    assert t.arities == (2, 3)


def test_codes_are_read_only():
    t = table_from_rows([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        t.codes[0, 0] = 5


def test_rejects_negative_codes():
    with pytest.raises(ValueError):
        table_from_rows([[0, -1]])


def test_rejects_empty():
    with pytest.raises(ValueError):
        DiscreteTable(np.empty((0, 3), dtype=np.int64))
    with pytest.raises(ValueError):
        DiscreteTable(np.empty((3, 0), dtype=np.int64))


def test_rejects_non_2d():
    with pytest.raises(ValueError):
        DiscreteTable(np.array([1, 2, 3]))


def test_symbol_names_length_checked():
    with pytest.raises(ValueError):
        DiscreteTable(np.array([[0, 1], [1, 0]]), symbol_names=[["a", "b"]])
    with pytest.raises(ValueError):
        DiscreteTable(np.array([[0, 1], [1, 0]]), symbol_names=[["a"], ["x", "y"]])


def test_take_rows_preserves_columns():
    t = table_from_rows([[0, 1], [1, 0], [0, 2]])
    sub = t.take_rows([2, 0])
    assert sub.n_rows == 2
    assert sub.codes.tolist() == [[0, 2], [0, 1]]


def test_validate_attrs_sorts_and_dedups():
    t = table_from_rows([[0, 1, 2], [1, 0, 0]])
    assert validate_attrs(t, [2, 0, 2]) == (0, 2)


def test_validate_attrs_rejects_bad_input():
    t = table_from_rows([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        validate_attrs(t, [])
    with pytest.raises(ValueError):
        validate_attrs(t, [2])
    with pytest.raises(ValueError):
        validate_attrs(t, [-1])
