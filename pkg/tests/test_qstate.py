import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qmdiqkd.qstate import (
    KET0,
    KET1,
    KET_MINUS,
    KET_PLUS,
    BellLabel,
    EncodingSet,
    as_state,
    bb84_encoding,
    bell_overlap_grid,
    bell_overlap_nonzero,
    bell_vector,
    inner_product,
    projection_probability,
    tensor,
)


def test_tensor_ordering():
    assert np.allclose(tensor(KET0, KET1), [0, 1, 0, 0])
    assert np.allclose(tensor(KET1, KET0), [0, 0, 1, 0])


def test_bell_vectors_orthonormal():
    vecs = [bell_vector(b) for b in BellLabel]
    gram = np.array([[inner_product(a, b) for b in vecs] for a in vecs])
    assert np.allclose(gram, np.eye(4))


def test_projection_probabilities_by_hand():
    # |0>|0> = (phi+ + phi-)/sqrt2
    assert projection_probability(BellLabel.PHI_PLUS, tensor(KET0, KET0)) == pytest.approx(0.5)
    assert projection_probability(BellLabel.PSI_PLUS, tensor(KET0, KET0)) == pytest.approx(0.0)
    # |+>|-> = (|00> - |01> + |10> - |11>)/2 -> only psi- and phi-
    state = tensor(KET_PLUS, KET_MINUS)
    assert projection_probability(BellLabel.PSI_MINUS, state) == pytest.approx(0.5)
    assert projection_probability(BellLabel.PHI_MINUS, state) == pytest.approx(0.5)


def test_inner_product_is_conjugate_linear_in_first_argument():
    a = np.array([1j, 0])
    assert inner_product(a, KET0) == pytest.approx(-1j)


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValueError):
        inner_product(KET0, tensor(KET0, KET0))


def test_as_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        as_state([1, 1])
    with pytest.raises(ValueError):
        as_state([1, 0, 0], dim=2)
    with pytest.raises(ValueError):
        as_state([math.nan, 1])


def test_bb84_overlap_grid_shape():
    grid = bell_overlap_grid([(0, 0), (2, 3)])
    assert grid[(0, 0)][BellLabel.PHI_PLUS]
    assert not grid[(0, 0)][BellLabel.PSI_MINUS]
    assert grid[(2, 3)][BellLabel.PHI_MINUS]
    assert not bell_overlap_nonzero(2, 3, BellLabel.PHI_PLUS)


def test_encoding_set_json_round_trip():
    enc = EncodingSet((KET0, KET1, KET_PLUS, np.array([1, 1j]) / math.sqrt(2)))
    back = EncodingSet.from_json(enc.to_json())
    for a, b in zip(enc.states, back.states):
        assert np.allclose(a, b)


def test_encoding_set_needs_four_states():
    with pytest.raises(ValueError):
        EncodingSet((KET0, KET1))
    with pytest.raises(ValueError):
        EncodingSet.from_json("[1, 2]")


def test_bb84_basis_overlaps():
    enc = bb84_encoding()
    assert abs(inner_product(enc[0], enc[1])) == pytest.approx(0.0)
    assert abs(inner_product(enc[0], enc[2])) ** 2 == pytest.approx(0.5)


angles = st.floats(0, 2 * math.pi, allow_nan=False)


@given(angles, angles, angles, angles)
def test_bell_probabilities_sum_to_one(t1, p1, t2, p2):
    a = np.array([math.cos(t1), math.sin(t1) * np.exp(1j * p1)])
    b = np.array([math.cos(t2), math.sin(t2) * np.exp(1j * p2)])
    state = tensor(a, b)
    total = sum(projection_probability(lbl, state) for lbl in BellLabel)
    assert total == pytest.approx(1.0, abs=1e-12)
