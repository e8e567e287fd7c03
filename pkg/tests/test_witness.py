import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density, random_hermitian, seeds
from opwitness.channels import gate_channel
from opwitness.choi import SIDE_A, choi_state
from opwitness.linalg import kron, partial_transpose
from opwitness.witness import (
    MU,
    NotDetectableError,
    build_witness,
    estimate_witness,
    evaluate,
    haar_states,
    mu_decompose,
    negative_eigs,
    parse_selector,
    pauli_coefficients,
    pauli_decompose,
    pauli_string_matrix,
    validate_on_separable,
)


@pytest.fixture(scope="module")
def cnot():
    rho = choi_state(gate_channel("cnot"))
    return rho, build_witness(rho)


def test_cnot_witness_properties(cnot):
    rho, w = cnot
    assert np.isclose(np.trace(w.matrix), 1)
    assert np.isclose(evaluate(w, rho.matrix), -0.5)
    assert w.provenance["negative_eigenvalues"] == pytest.approx([-0.5])
    assert w.bipartition == ((0, 2), (1, 3))


def test_witness_is_pt_of_rank_one_projector(cnot):
    _, w = cnot
    p = partial_transpose(w.matrix, w.dims, SIDE_A)
    vals = np.linalg.eigvalsh(p)
    np.testing.assert_allclose(vals, [0] * 15 + [1], atol=1e-12)


def test_separable_choi_not_detectable():
    with pytest.raises(NotDetectableError):
        build_witness(choi_state(gate_channel("identity")))


def test_selectors():
    rho = choi_state(gate_channel("sqrt_swap"))
    pairs = negative_eigs(rho)
    assert pairs[0][0] == pytest.approx(-np.sqrt(5) / 8)
    assert build_witness(rho, selector=1).eigenvalue == pytest.approx(pairs[1][0])
    space = build_witness(rho, selector="eigenspace:1")
    assert space.provenance["rank"] >= 1
    assert evaluate(space, rho.matrix) == pytest.approx(space.eigenvalue)
    with pytest.raises(IndexError):
        build_witness(rho, selector=99)
    assert parse_selector("most-negative") == "most_negative"
    assert parse_selector("2") == 2


def test_eigenspace_witness_matches_spectral_projector():
    # the SWAP Choi state is maximally entangled across A A~ : B B~, PT spectrum {-1/4 (x6), 1/4 (x10)}
    rho = choi_state(gate_channel("swap"))
    w = build_witness(rho, selector="eigenspace")
    assert w.provenance["rank"] == 6
    assert w.eigenvalue == pytest.approx(-0.25)
    # independent route: spectral projector from a plain eigensolver, in whatever basis it returns
    vals, vecs = np.linalg.eigh(partial_transpose(rho.matrix, rho.dims, SIDE_A))
    neg = vecs[:, vals < 0]
    expected = partial_transpose(neg @ neg.conj().T / neg.shape[1], rho.dims, SIDE_A)
    np.testing.assert_allclose(w.matrix, expected, atol=1e-12)


def test_validation_is_seeded(cnot):
    _, w = cnot
    a = validate_on_separable(w, 5000, seed=3)
    b = validate_on_separable(w, 5000, seed=3, workers=2)
    assert a.min_value == b.min_value
    assert a.min_value >= -1e-10


def test_validation_catches_non_witness():
    # -I is negative on everything
    from opwitness.witness import Witness

    bad = Witness(-np.eye(16) / 16, (2, 2, 2, 2), ((0, 2), (1, 3)), -1.0, {})
    assert validate_on_separable(bad, 100, seed=0).min_value < 0


def test_haar_states_are_normalized():
    s = haar_states(np.random.default_rng(0), 50, 4)
    np.testing.assert_allclose(np.linalg.norm(s, axis=1), 1)


def test_pauli_matrix_word_order():
    np.testing.assert_allclose(pauli_string_matrix("XZ"), kron(np.array([[0, 1], [1, 0]]), np.diag([1, -1])))


def test_mu_basis_is_twice_matrix_units():
    np.testing.assert_array_equal(MU[3], [[0, 2], [0, 0]])
    np.testing.assert_array_equal(MU[4], [[0, 0], [2, 0]])


def test_cnot_mu_expansion_has_sixteen_terms(cnot):
    _, w = cnot
    dec = mu_decompose(w)
    assert len([c for c in dec.coefficients.values() if abs(c) > 1e-12]) == 16
    np.testing.assert_allclose(dec.reconstruct(), w.matrix, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_pauli_round_trip_and_real_coefficients(seed):
    h = random_hermitian(np.random.default_rng(seed), 16)
    coeffs = pauli_coefficients(h)
    assert max(abs(c.imag) for c in coeffs.values()) < 1e-12
    np.testing.assert_allclose(pauli_decompose(h).reconstruct(), h, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(seeds, st.permutations(range(4)))
def test_mu_round_trip_and_hermitian_conjugation(seed, order):
    h = random_hermitian(np.random.default_rng(seed), 16)
    dec = mu_decompose(h, tuple(order))
    np.testing.assert_allclose(dec.reconstruct(), h, atol=1e-12)
    swap = {3: 4, 4: 3}
    for t, c in dec.coefficients.items():
        partner = tuple(swap.get(k, k) for k in t)
        assert dec.coefficients[partner] == pytest.approx(np.conj(c), abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(seeds, st.floats(0.1, 10))
def test_witness_scaling_preserves_sign(seed, c):
    rng = np.random.default_rng(seed)
    _, w = build_witness_pair()
    sigma = random_density(rng, 16)
    assert np.sign(evaluate(w.scaled(c), sigma)) == np.sign(evaluate(w, sigma))
    assert evaluate(w.scaled(c), sigma) == pytest.approx(c * evaluate(w, sigma))


def build_witness_pair():
    rho = choi_state(gate_channel("bell"))
    return rho, build_witness(rho)


def test_estimator_is_deterministic_and_unbiased():
    rho, w = build_witness_pair()
    noisy = 0.5 * rho.matrix + 0.5 * np.eye(16) / 16
    a = estimate_witness(w, noisy, 20_000, seed=11)
    b = estimate_witness(w, noisy, 20_000, seed=11)
    assert a == b
    assert abs(a.value - evaluate(w, noisy)) <= 5 * a.stderr
    assert estimate_witness(w, noisy, 20_000, seed=12) != a


def test_estimator_zero_variance_on_stabilizer_terms(cnot):
    # every Pauli term of W_CNOT has expectation +-1 on the CNOT Choi state
    rho, w = cnot
    est = estimate_witness(w, rho.matrix, 100, seed=0)
    assert est.stderr == 0
    assert est.value == pytest.approx(-0.5, abs=1e-12)


def test_estimator_rejects_bad_shots(cnot):
    rho, w = cnot
    with pytest.raises(ValueError):
        estimate_witness(w, rho.matrix, 0, seed=0)
