"""Witness operators from negative eigenvectors of partial transposes.

If ``rho^{T_S}`` has an eigenvector ``v`` with eigenvalue ``lam < 0``, then
``W = (|v><v|)^{T_S}`` satisfies ``Tr(W rho) = lam`` while
``Tr(W sigma) = <v| sigma^{T_S} |v> >= 0`` for every state ``sigma`` that is
separable across ``S : rest``. Summing projectors over a whole degenerate
eigenspace keeps both properties.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .choi import SIDE_A, ChoiState
from .config import get_tolerances
from .linalg import (
    DimensionError,
    as_matrix,
    check_dims,
    eigenvalue_clusters,
    hermitian_eigen,
    partial_transpose,
    permute_subsystems,
    projector,
)


class NotDetectableError(ValueError):
    """The state has no negative eigenvalue after partial transposition."""


@dataclass(frozen=True, eq=False)
class Witness:
    matrix: np.ndarray
    dims: tuple[int, ...]
    bipartition: tuple[tuple[int, ...], tuple[int, ...]]
    eigenvalue: float
    provenance: dict = field(default_factory=dict)

    def scaled(self, factor: float) -> "Witness":
        if factor <= 0:
            raise ValueError("witness rescaling factor must be positive")
        return Witness(self.matrix * factor, self.dims, self.bipartition, self.eigenvalue, dict(self.provenance))


Selector = Union[str, int]


def _state_and_dims(rho, dims) -> tuple[np.ndarray, tuple[int, ...], str]:
    if isinstance(rho, ChoiState):
        return rho.matrix, rho.dims, rho.source
    if dims is None:
        raise DimensionError("dims are required when passing a bare matrix")
    m = as_matrix(rho)
    return m, check_dims(m, dims), ""


def _complement(partition: Iterable[int], n: int) -> tuple[int, ...]:
    part = set(partition)
    return tuple(k for k in range(n) if k not in part)


def negative_eigs(rho, partition: Sequence[int] = SIDE_A, dims=None) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs of the partial transpose with eigenvalue below ``-neg_tol``, ascending."""
    m, dims, _ = _state_and_dims(rho, dims)
    eig = hermitian_eigen(partial_transpose(m, dims, partition))
    cut = -get_tolerances().neg_tol
    return [(float(lam), eig.vectors[:, k]) for k, lam in enumerate(eig.values) if lam < cut]


def parse_selector(text: str) -> Selector:
    """CLI form of a selector: ``most_negative``, ``eigenspace``, ``eigenspace:K`` or an integer."""
    text = text.strip().replace("-", "_")
    if text in ("most_negative", "eigenspace"):
        return text
    if text.startswith("eigenspace:"):
        int(text.split(":", 1)[1])
        return text
    return int(text)


def build_witness(
    rho,
    partition: Sequence[int] = SIDE_A,
    selector: Selector = "most_negative",
    dims=None,
    source: str | None = None,
) -> Witness:
    """Witness ``W = PT(P)`` for ``P`` built from negative PT eigenvectors of ``rho``.

    ``selector`` chooses ``P``:

    * ``"most_negative"``: projector on the first (canonical) eigenvector of the
      lowest eigenvalue;
    * ``k`` (int): projector on the k-th negative eigenpair in ascending order;
    * ``"eigenspace"`` / ``"eigenspace:k"``: normalized projector on the whole
      eigenspace of the lowest / k-th distinct negative eigenvalue.

    The result has unit trace and ``Tr(W rho)`` equal to the selected eigenvalue.
    """
    m, dims, src = _state_and_dims(rho, dims)
    partition = tuple(sorted(int(k) for k in partition))
    pairs = negative_eigs(m, partition, dims)
    if not pairs:
        raise NotDetectableError(
            f"no negative PT eigenvalue across partition {list(partition)}: not NPT-detectable"
        )
    values = np.array([lam for lam, _ in pairs])
    if selector == "most_negative":
        selector = 0
    if isinstance(selector, (int, np.integer)):
        k = int(selector)
        if not 0 <= k < len(pairs):
            raise IndexError(f"selector {k} out of range: {len(pairs)} negative eigenpairs")
        lam, v = pairs[k]
        proj = projector(v)
        detail = {"selector": k, "rank": 1}
    elif isinstance(selector, str) and selector.startswith("eigenspace"):
        level = int(selector.split(":", 1)[1]) if ":" in selector else 0
        clusters = eigenvalue_clusters(values)
        if not 0 <= level < len(clusters):
            raise IndexError(f"eigenspace {level} out of range: {len(clusters)} distinct negative eigenvalues")
        lam, start, stop = clusters[level]
        vecs = np.column_stack([pairs[i][1] for i in range(start, stop)])
        proj = vecs @ vecs.conj().T / (stop - start)
        detail = {"selector": f"eigenspace:{level}", "rank": stop - start}
    else:
        raise ValueError(f"unknown selector {selector!r}")
    w = partial_transpose(proj, dims, partition)
    w = (w + w.conj().T) / 2
    provenance = {
        "source": source if source is not None else src,
        "eigenvalue": float(lam),
        "multiplicity": int(np.sum(np.abs(values - lam) <= get_tolerances().degen_tol)),
        "negative_eigenvalues": [float(x) for x in values],
        **detail,
    }
    return Witness(w, dims, (partition, _complement(partition, len(dims))), float(lam), provenance)


def evaluate(w: Witness, rho) -> float:
    rho = as_matrix(rho)
    if rho.shape != w.matrix.shape:
        raise DimensionError(f"rows: state shape {rho.shape} != witness shape {w.matrix.shape}")
    value = np.trace(w.matrix @ rho)
    if abs(value.imag) > 1e-10:
        raise ValueError(f"Tr(W rho) has imaginary part {value.imag:.3e}; inputs are not Hermitian")
    return float(value.real)


# ---------------------------------------------------------------------------
# Sampling over product states
# ---------------------------------------------------------------------------


class SeparableCheck(NamedTuple):
    min_value: float
    state_a: np.ndarray  # minimizing pure state on the first side of the bipartition
    state_b: np.ndarray
    samples: int


def haar_states(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """``n`` Haar-random pure states in C^d, one per row."""
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _side_dims(w: Witness) -> tuple[int, int]:
    a, b = w.bipartition
    return int(np.prod([w.dims[k] for k in a])), int(np.prod([w.dims[k] for k in b]))


def _min_over_chunk(wp: np.ndarray, da: int, db: int, n: int, seed: np.random.SeedSequence):
    rng = np.random.default_rng(seed)
    a = haar_states(rng, n, da)
    b = haar_states(rng, n, db)
    psi = (a[:, :, None] * b[:, None, :]).reshape(n, da * db)
    vals = np.einsum("ni,ij,nj->n", psi.conj(), wp, psi).real
    k = int(np.argmin(vals))
    return float(vals[k]), a[k], b[k]


def validate_on_separable(
    w: Witness, samples: int, seed: int, chunk: int = 10_000, workers: int = 1
) -> SeparableCheck:
    """Minimum of ``Tr(W sigma)`` over Haar-random pure product states.

    Samples are drawn in fixed-size chunks, each with its own child seed, so
    the result does not depend on ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    a_side, b_side = w.bipartition
    wp = permute_subsystems(w.matrix, w.dims, list(a_side) + list(b_side))
    da, db = _side_dims(w)
    sizes = [min(chunk, samples - s) for s in range(0, samples, chunk)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, seeds))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda job: _min_over_chunk(wp, da, db, *job), jobs))
    else:
        results = [_min_over_chunk(wp, da, db, *job) for job in jobs]
    best = min(results, key=lambda r: r[0])
    return SeparableCheck(best[0], best[1], best[2], samples)


# ---------------------------------------------------------------------------
# Local decompositions
# ---------------------------------------------------------------------------

PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_I2, _X, _Y, _Z = PAULIS["I"], PAULIS["X"], PAULIS["Y"], PAULIS["Z"]
MU = {1: _I2 + _Z, 2: _I2 - _Z, 3: _X + 1j * _Y, 4: _X - 1j * _Y}

# mu_k = 2 |r><c| for these (row bit, column bit) pairs
_MU_UNIT = {1: (0, 0), 2: (1, 1), 3: (0, 1), 4: (1, 0)}
_UNIT_MU = {rc: k for k, rc in _MU_UNIT.items()}


def _n_qubits(matrix: np.ndarray) -> int:
    n = int(round(np.log2(matrix.shape[0])))
    if 2**n != matrix.shape[0]:
        raise DimensionError(f"rows: {matrix.shape[0]} is not a power of two")
    return n


def pauli_string_matrix(word: str) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for ch in word:
        out = np.kron(out, PAULIS[ch])
    return out


@dataclass(frozen=True)
class PauliDecomposition:
    coefficients: dict[str, float]
    n_qubits: int

    def reconstruct(self) -> np.ndarray:
        d = 2**self.n_qubits
        out = np.zeros((d, d), dtype=complex)
        for word, c in self.coefficients.items():
            out += c * pauli_string_matrix(word)
        return out

    def nonzero(self, tol: float = 1e-12) -> dict[str, float]:
        return {s: c for s, c in self.coefficients.items() if abs(c) > tol}


def pauli_coefficients(matrix) -> dict[str, complex]:
    """``Tr(P_s M) / 2^n`` for all Pauli words ``s``, in lexicographic IXYZ order."""
    m = as_matrix(matrix)
    n = _n_qubits(m)
    stack = np.stack([PAULIS[c] for c in "IXYZ"])  # (4, 2, 2)
    t = m.reshape((2,) * (2 * n))
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows, cols, outs = letters[:n], letters[n : 2 * n], "ABCDEFGHIJKLMN"[:n]
    # Tr(P M) = sum_{r,c} P[c, r] M[r, c]
    spec = rows + cols + "," + ",".join(f"{o}{c}{r}" for o, r, c in zip(outs, rows, cols)) + "->" + outs
    coeffs = np.einsum(spec, t, *([stack] * n)) / 2**n
    return {"".join(w): complex(coeffs[idx]) for w, idx in zip(
        itertools.product("IXYZ", repeat=n), itertools.product(range(4), repeat=n))}


def pauli_decompose(w: Witness | np.ndarray) -> PauliDecomposition:
    m = w.matrix if isinstance(w, Witness) else as_matrix(w)
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > get_tolerances().herm_tol:
        raise ValueError(f"Pauli decomposition needs a Hermitian operator (deviation {dev:.2e})")
    raw = pauli_coefficients(m)
    return PauliDecomposition({s: c.real for s, c in raw.items()}, _n_qubits(m))


@dataclass(frozen=True)
class MuDecomposition:
    """Coefficients on ``mu_i (x) mu_j (x) ...`` with slot ``s`` on subsystem ``slot_order[s]``."""

    coefficients: dict[tuple[int, ...], complex]
    slot_order: tuple[int, ...]

    def reconstruct(self) -> np.ndarray:
        n = len(self.slot_order)
        d = 2**n
        out = np.zeros((d, d), dtype=complex)
        for t, c in self.coefficients.items():
            term = np.array([[1.0 + 0j]])
            for k in t:
                term = np.kron(term, MU[k])
            out += c * term
        inverse = [self.slot_order.index(k) for k in range(n)]
        return permute_subsystems(out, (2,) * n, inverse)

    def support(self, tol: float = 1e-12, alpha_sign: bool = False):
        """Split nonzero terms into (positive, negative, non-real) tuple sets.

        With ``alpha_sign`` each coefficient is multiplied by ``(-1)^alpha``,
        alpha being the number of 3s and 4s in the tuple.
        """
        pos, neg, other = set(), set(), set()
        for t, c in self.coefficients.items():
            if abs(c) <= tol:
                continue
            if alpha_sign:
                c = c * (-1) ** sum(k in (3, 4) for k in t)
            if abs(c.imag) > tol:
                other.add(t)
            elif c.real > 0:
                pos.add(t)
            else:
                neg.add(t)
        return pos, neg, other


def mu_decompose(w: Witness | np.ndarray, slot_order: Sequence[int] | None = None) -> MuDecomposition:
    """Expand an operator on qubits in the ``mu`` basis.

    Each ``mu_k`` is twice a matrix unit, so a tensor product of n of them is
    ``2^n`` times a matrix unit and the coefficient is a matrix entry / ``2^n``.
    """
    m = w.matrix if isinstance(w, Witness) else as_matrix(w)
    n = _n_qubits(m)
    order = tuple(range(n)) if slot_order is None else tuple(slot_order)
    mp = permute_subsystems(m, (2,) * n, order)
    coeffs = {}
    for r, c in zip(*np.nonzero(np.abs(mp) > 1e-14)):
        rbits = [(int(r) >> (n - 1 - k)) & 1 for k in range(n)]
        cbits = [(int(c) >> (n - 1 - k)) & 1 for k in range(n)]
        t = tuple(_UNIT_MU[(rb, cb)] for rb, cb in zip(rbits, cbits))
        coeffs[t] = complex(mp[r, c]) / 2**n
    return MuDecomposition(coeffs, order)


# ---------------------------------------------------------------------------
# Shot-based estimation
# ---------------------------------------------------------------------------


class Estimate(NamedTuple):
    value: float
    stderr: float
    settings: int


def estimate_witness(w: Witness, rho, shots_per_setting: int, seed: int) -> Estimate:
    """Estimate ``Tr(W rho)`` from simulated +-1 measurements of each Pauli term.

    Every nonidentity Pauli word with a nonzero coefficient is one setting.
    Its outcomes are Bernoulli with ``P(+1) = (1 + <P>)/2``; the estimator is
    unbiased and the standard error propagates the per-setting sample
    variances. Settings with a deterministic outcome contribute no variance.
    """
    if shots_per_setting < 1:
        raise ValueError("shots_per_setting must be >= 1")
    rho = as_matrix(rho)
    if rho.shape != w.matrix.shape:
        raise DimensionError(f"rows: state shape {rho.shape} != witness shape {w.matrix.shape}")
    terms = pauli_decompose(w).nonzero()
    n = shots_per_setting
    identity = "I" * _n_qubits(w.matrix)
    value = terms.pop(identity, 0.0)
    words = sorted(terms)
    seeds = np.random.SeedSequence(seed).spawn(len(words))
    variance = 0.0
    for word, child in zip(words, seeds):
        expect = float(np.real(np.trace(pauli_string_matrix(word) @ rho)))
        p_plus = min(max((1 + expect) / 2, 0.0), 1.0)
        k = np.random.default_rng(child).binomial(n, p_plus)
        mean = 2 * k / n - 1
        sample_var = (1 - mean**2) * n / (n - 1) if n > 1 else 0.0
        value += terms[word] * mean
        variance += terms[word] ** 2 * sample_var / n
    return Estimate(float(value), float(np.sqrt(variance)), len(words))
