import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import seeds
from opwitness.channels import Depolarizing, Unitary, gate_channel, random_kraus_channel, random_unitary
from opwitness.choi import (
    SIDE_A,
    choi_from_matrix_units,
    choi_state,
    cjks_linearity_check,
    resource_state,
)
from opwitness.linalg import DimensionError, is_psd, partial_trace, partial_transpose


def test_resource_state_entries():
    r = resource_state(2, 2)
    assert np.isclose(np.trace(r), 1)
    assert np.isclose(r[0b0000, 0b0101], 0.25)
    assert np.isclose(r[0b0000, 0b0001], 0)


def test_cnot_choi_vector():
    rho = choi_state(gate_channel("cnot")).matrix
    expected = np.zeros(16)
    expected[[0b0000, 0b0101, 0b1011, 0b1110]] = 0.5
    np.testing.assert_allclose(rho, np.outer(expected, expected), atol=1e-15)


def test_identity_choi_is_product_across_doubled_cut():
    rho = choi_state(gate_channel("identity"))
    assert is_psd(partial_transpose(rho.matrix, rho.dims, SIDE_A), tol=1e-12)


def test_depolarizing_choi_is_maximally_mixed():
    np.testing.assert_allclose(choi_state(Depolarizing(4)).matrix, np.eye(16) / 16)


def test_undeclared_split_needs_input_dims():
    with pytest.raises(DimensionError):
        choi_state(Depolarizing(6))
    assert choi_state(Depolarizing(6), (2, 3)).dims == (2, 3, 2, 3)
    with pytest.raises(DimensionError):
        choi_state(Depolarizing(6), (2, 2))


@pytest.mark.parametrize("gate", ["cnot", "swap", "sqrt_swap", "bell"])
def test_kraus_and_matrix_unit_routes_agree_on_gates(gate):
    ch = gate_channel(gate)
    np.testing.assert_allclose(choi_state(ch).matrix, choi_from_matrix_units(ch).matrix, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 4))
def test_kraus_and_matrix_unit_routes_agree_on_random_channels(seed, n_ops):
    ch = random_kraus_channel(4, n_ops, np.random.default_rng(seed))
    np.testing.assert_allclose(choi_state(ch).matrix, choi_from_matrix_units(ch).matrix, atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 4))
def test_choi_state_invariants(seed, n_ops):
    ch = random_kraus_channel(4, n_ops, np.random.default_rng(seed))
    c = choi_state(ch)
    assert np.isclose(np.trace(c.matrix), 1)
    assert is_psd(c.matrix, tol=1e-12)
    # trace preservation: the reduced state on the reference copy is maximally mixed
    np.testing.assert_allclose(partial_trace(c.matrix, c.dims, [2, 3]), np.eye(4) / 4, atol=1e-13)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_unitary_choi_is_pure(seed):
    c = choi_state(Unitary(random_unitary(4, np.random.default_rng(seed)))).matrix
    np.testing.assert_allclose(c @ c, c, atol=1e-13)


@settings(max_examples=20, deadline=None)
@given(seeds, st.floats(0, 1))
def test_linearity_holds_for_random_mixtures(seed, w):
    rng = np.random.default_rng(seed)
    ch1 = random_kraus_channel(4, 2, rng)
    ch2 = Unitary(random_unitary(4, rng))
    assert cjks_linearity_check(ch1, ch2, w, trials=3, seed=seed)


def test_linearity_rejects_dimension_mismatch():
    with pytest.raises(DimensionError):
        cjks_linearity_check(Depolarizing(2), Depolarizing(4), 0.5)
