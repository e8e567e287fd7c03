import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complex_matrices, random_density, random_hermitian, seeds
from opwitness.linalg import (
    DimensionError,
    NotHermitianError,
    check_dims,
    eigenvalue_clusters,
    hermitian_eigen,
    is_psd,
    ket,
    kron,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    projector,
)

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def test_partial_transpose_of_bell_state_has_negative_half():
    vals = np.linalg.eigvalsh(partial_transpose(projector(BELL), (2, 2), [1]))
    np.testing.assert_allclose(vals, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_partial_transpose_full_is_transpose():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    np.testing.assert_allclose(partial_transpose(m, (2, 3, 2), [0, 1, 2]), m.T)
    np.testing.assert_allclose(partial_transpose(m, (2, 3, 2), []), m)


def test_partial_transpose_against_explicit_index_formula():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    out = partial_transpose(m, (2, 3), [0])
    for a in range(2):
        for b in range(3):
            for c in range(2):
                for d in range(3):
                    assert out[a * 3 + b, c * 3 + d] == m[c * 3 + b, a * 3 + d]


def test_partial_trace_of_product_state():
    rng = np.random.default_rng(2)
    a, b = random_density(rng, 2), random_density(rng, 3)
    np.testing.assert_allclose(partial_trace(kron(a, b), (2, 3), [0]), a, atol=1e-14)
    np.testing.assert_allclose(partial_trace(kron(a, b), (2, 3), [1]), b, atol=1e-14)


def test_permute_subsystems_swaps_kron_factors():
    rng = np.random.default_rng(3)
    a, b, c = (rng.standard_normal((d, d)) for d in (2, 3, 2))
    m = kron(kron(a, b), c)
    np.testing.assert_allclose(permute_subsystems(m, (2, 3, 2), (2, 0, 1)), kron(kron(c, a), b), atol=1e-13)


@pytest.mark.parametrize(
    "dims, subsystems, fragment",
    [((2, 2), [0], "rows"), ((2, 3), [0], "rows"), ((2, 2), [4], "subsystem index 4")],
)
def test_dimension_errors_name_the_problem(dims, subsystems, fragment):
    with pytest.raises(DimensionError, match=fragment):
        partial_transpose(np.eye(5 if fragment == "rows" else 4), dims, subsystems)


def test_check_dims_rejects_nonsquare():
    with pytest.raises(DimensionError):
        check_dims(np.zeros((4, 2)), (2, 2))


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eigen(np.array([[0, 1], [0, 0]], dtype=complex))


def test_degenerate_cluster_gets_canonical_basis_independent_of_rotation():
    rng = np.random.default_rng(4)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    m = q @ np.diag([-1.0, 2.0, 2.0, 5.0]) @ q.conj().T
    first = hermitian_eigen(m)
    # rebuild the same operator with a rotated basis inside the degenerate cluster
    u = np.eye(4, dtype=complex)
    u[1:3, 1:3] = np.array([[np.cos(0.7), -np.sin(0.7)], [np.sin(0.7), np.cos(0.7)]]) * np.exp(0.3j)
    m2 = (q @ u) @ np.diag([-1.0, 2.0, 2.0, 5.0]) @ (q @ u).conj().T
    second = hermitian_eigen((m2 + m2.conj().T) / 2)
    np.testing.assert_allclose(first.vectors, second.vectors, atol=1e-9)
    np.testing.assert_allclose(first.values, [-1, 2, 2, 5], atol=1e-12)


def test_phase_fix_makes_largest_component_real_positive():
    rng = np.random.default_rng(5)
    eig = hermitian_eigen(random_hermitian(rng, 6))
    for v in eig.vectors.T:
        k = int(np.argmax(np.abs(v)))
        assert abs(v[k].imag) < 1e-12 and v[k].real > 0


def test_eigenvalue_clusters():
    assert eigenvalue_clusters(np.array([-1.0, -1.0, 0.5])) == [(-1.0, 0, 2), (0.5, 2, 3)]


def test_ket_labels():
    np.testing.assert_array_equal(ket("01"), [0, 1, 0, 0])
    np.testing.assert_array_equal(ket("12", (2, 3)), [0, 0, 0, 0, 0, 1])


@settings(max_examples=60, deadline=None)
@given(complex_matrices(4), complex_matrices(4))
def test_partial_transpose_is_linear_and_involutive(a, b):
    dims = (2, 2)
    lhs = partial_transpose(2.5 * a - b, dims, [1])
    np.testing.assert_allclose(lhs, 2.5 * partial_transpose(a, dims, [1]) - partial_transpose(b, dims, [1]), atol=1e-12)
    np.testing.assert_allclose(partial_transpose(partial_transpose(a, dims, [0]), dims, [0]), a)


@settings(max_examples=60, deadline=None)
@given(complex_matrices(8))
def test_partial_transpose_preserves_trace_and_hermiticity(a):
    h = a + a.conj().T
    pt = partial_transpose(h, (2, 2, 2), [0, 2])
    assert np.isclose(np.trace(pt), np.trace(h))
    np.testing.assert_allclose(pt, pt.conj().T, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 3), st.integers(2, 3))
def test_product_states_stay_ppt(seed, da, db):
    rng = np.random.default_rng(seed)
    sigma = kron(random_density(rng, da), random_density(rng, db))
    assert is_psd(partial_transpose(sigma, (da, db), [0]), tol=1e-10)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_eigendecomposition_reconstructs(seed):
    m = random_hermitian(np.random.default_rng(seed), 8)
    eig = hermitian_eigen(m)
    np.testing.assert_allclose(eig.vectors @ np.diag(eig.values) @ eig.vectors.conj().T, m, atol=1e-10)
    np.testing.assert_allclose(eig.vectors.conj().T @ eig.vectors, np.eye(8), atol=1e-10)
    assert np.all(np.diff(eig.values) >= 0)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_partial_trace_preserves_trace(seed):
    rho = random_density(np.random.default_rng(seed), 12)
    for keep in ([0], [1], [2], [0, 2]):
        assert np.isclose(np.trace(partial_trace(rho, (2, 3, 2), keep)), 1.0)
