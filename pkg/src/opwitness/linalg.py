"""Dense complex matrix helpers on tensor-product spaces.

Matrices are plain ``numpy`` arrays of dtype complex128. A subsystem
factorization is a tuple of dimensions; subsystem 0 is the leftmost
(slowest-varying) tensor factor, so the basis label ``|a b c d>`` maps to
the flat index ``((a*db + b)*dc + c)*dd + d``.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .config import get_tolerances


class DimensionError(ValueError):
    """Matrix shape does not agree with a subsystem factorization."""


class NotHermitianError(ValueError):
    """Matrix deviates from Hermiticity by more than the configured tolerance."""

    def __init__(self, deviation: float, tol: float):
        super().__init__(f"matrix is not Hermitian: max |m - m^dagger| = {deviation:.3e} > {tol:.1e}")
        self.deviation = deviation


class Eigh(NamedTuple):
    values: np.ndarray  # ascending, real
    vectors: np.ndarray  # orthonormal columns


def as_matrix(m) -> np.ndarray:
    return np.asarray(m, dtype=complex)


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Iterable) -> np.ndarray:
    return reduce(np.kron, [as_matrix(m) for m in mats])


def dagger(m) -> np.ndarray:
    return as_matrix(m).conj().T


def mat_trace(m) -> complex:
    m = as_matrix(m)
    _require_square(m)
    return complex(np.trace(m))


def frobenius_distance(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def hermiticity_deviation(m) -> float:
    m = as_matrix(m)
    _require_square(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _require_square(m: np.ndarray) -> None:
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got {m.ndim} axes")
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix is not square: rows={m.shape[0]}, cols={m.shape[1]}")


def check_dims(m: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    """Validate ``dims`` against the square matrix ``m`` and return it as a tuple."""
    _require_square(m)
    dims = tuple(int(d) for d in dims)
    for axis, d in enumerate(dims):
        if d < 2:
            raise DimensionError(f"subsystem {axis} has dimension {d}; need >= 2")
    total = int(np.prod(dims)) if dims else 1
    if total != m.shape[0]:
        raise DimensionError(
            f"rows: matrix side {m.shape[0]} != product of dims {list(dims)} = {total}"
        )
    return dims


def _check_subsystems(subsystems: Iterable[int], n: int) -> list[int]:
    out = sorted(set(int(s) for s in subsystems))
    for s in out:
        if not 0 <= s < n:
            raise DimensionError(f"subsystem index {s} out of range for {n} subsystems")
    return out


def partial_transpose(m, dims: Sequence[int], subsystems: Iterable[int]) -> np.ndarray:
    """Transpose the row and column indices of the chosen subsystems."""
    m = as_matrix(m)
    dims = check_dims(m, dims)
    n = len(dims)
    t = m.reshape(dims + dims)
    for s in _check_subsystems(subsystems, n):
        t = np.swapaxes(t, s, s + n)
    return np.ascontiguousarray(t.reshape(m.shape))


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``."""
    m = as_matrix(m)
    dims = check_dims(m, dims)
    keep = _check_subsystems(keep, len(dims))
    t = m.reshape(dims + dims)
    n = len(dims)
    for s in reversed(range(len(dims))):
        if s not in keep:
            t = np.trace(t, axis1=s, axis2=s + n)
            n -= 1
    side = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(side, side)


def permute_subsystems(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors so that new subsystem ``i`` is old subsystem ``order[i]``."""
    m = as_matrix(m)
    dims = check_dims(m, dims)
    n = len(dims)
    if sorted(order) != list(range(n)):
        raise DimensionError(f"order {list(order)} is not a permutation of {n} subsystems")
    t = m.reshape(dims + dims).transpose(list(order) + [n + k for k in order])
    return np.ascontiguousarray(t.reshape(m.shape))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # largest-magnitude component made real positive; argmax picks the lowest index on ties
    mags = np.round(np.abs(v), 12)
    k = int(np.argmax(mags))
    return v * (np.abs(v[k]) / v[k])


def _canonical_basis(vectors: np.ndarray) -> np.ndarray:
    """Solver-independent orthonormal basis of span(vectors).

    Projects computational basis vectors onto the subspace in index order and
    Gram-Schmidt orthonormalizes them, so the result depends only on the
    subspace and not on the basis LAPACK happened to return.
    """
    dim, rank = vectors.shape
    proj = vectors @ vectors.conj().T
    basis: list[np.ndarray] = []
    for j in range(dim):
        u = proj[:, j].copy()
        for b in basis:
            u -= (b.conj() @ u) * b
        norm = np.linalg.norm(u)
        if norm > 1e-6:
            basis.append(u / norm)
            if len(basis) == rank:
                break
    out = np.column_stack(basis)
    # one re-orthonormalization pass against accumulated rounding
    q, r = np.linalg.qr(out)
    return q * np.sign(np.real(np.diag(r)))


def hermitian_eigen(m) -> Eigh:
    """Eigendecomposition of a Hermitian matrix with deterministic eigenvectors.

    Eigenvalues are ascending. Within a cluster of (numerically) degenerate
    eigenvalues the eigenvectors are replaced by a canonical basis of the
    eigenspace, and every eigenvector is rotated so that its largest-magnitude
    component is real and positive.
    """
    m = as_matrix(m)
    tol = get_tolerances()
    dev = hermiticity_deviation(m)
    if dev > tol.herm_tol:
        raise NotHermitianError(dev, tol.herm_tol)
    h = (m + m.conj().T) / 2
    values, vectors = np.linalg.eigh(h)
    values = values.copy()
    vectors = vectors.copy()
    start = 0
    n = len(values)
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] <= tol.degen_tol:
            stop += 1
        if stop - start > 1:
            vectors[:, start:stop] = _canonical_basis(vectors[:, start:stop])
            values[start:stop] = values[start:stop].mean()
        start = stop
    for k in range(n):
        vectors[:, k] = _fix_phase(vectors[:, k])
    return Eigh(values, vectors)


def eigenvalue_clusters(values: np.ndarray, tol: float | None = None) -> list[tuple[float, int, int]]:
    """Group ascending eigenvalues into ``(value, start, stop)`` clusters."""
    tol = get_tolerances().degen_tol if tol is None else tol
    out = []
    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and values[stop] - values[stop - 1] <= tol:
            stop += 1
        out.append((float(values[start:stop].mean()), start, stop))
        start = stop
    return out


def is_psd(m, tol: float = 1e-9) -> bool:
    return bool(hermitian_eigen(m).values[0] >= -tol)


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def ket(label: str, dims: Sequence[int] | None = None) -> np.ndarray:
    """Computational-basis ket from a digit string, e.g. ``ket("0101")``."""
    dims = tuple(dims) if dims is not None else (2,) * len(label)
    if len(dims) != len(label):
        raise DimensionError(f"label {label!r} has {len(label)} digits for {len(dims)} subsystems")
    index = 0
    for digit, d in zip(label, dims):
        k = int(digit)
        if not 0 <= k < d:
            raise DimensionError(f"digit {k} out of range for dimension {d}")
        index = index * d + k
    out = np.zeros(int(np.prod(dims)), dtype=complex)
    out[index] = 1.0
    return out
