"""Choi states of channels on a doubled space.

For a channel on ``A B`` the Choi state lives on ``A B A~ B~`` (in that
tensor order) and is obtained by feeding the channel the ``A B`` half of the
maximally entangled state ``sum_ij |ij>_AB |ij>_A~B~``, normalized to trace 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import (
    ChannelExpr,
    Depolarizing,
    Kraus,
    Mixture,
    Unitary,
    apply_linear,
    describe,
)
from .linalg import DimensionError

ORDERING = "ABA~B~"

# Bipartition A A~ : B B~ as subsystem index sets in A B A~ B~ order.
SIDE_A = (0, 2)
SIDE_B = (1, 3)


@dataclass(frozen=True, eq=False)
class ChoiState:
    matrix: np.ndarray
    dims: tuple[int, ...]
    source: str = ""
    ordering: str = ORDERING

    @property
    def input_dims(self) -> tuple[int, ...]:
        return self.dims[: len(self.dims) // 2]


def default_input_dims(d: int) -> tuple[int, ...]:
    if d == 4:
        return (2, 2)
    raise DimensionError(f"cannot infer a bipartite split of dimension {d}; pass input_dims")


def _resolve_dims(ch: ChannelExpr, input_dims: Sequence[int] | None) -> tuple[int, ...]:
    dims = default_input_dims(ch.dim) if input_dims is None else tuple(int(d) for d in input_dims)
    if int(np.prod(dims)) != ch.dim:
        raise DimensionError(f"input dims {list(dims)} do not multiply to channel dimension {ch.dim}")
    return dims


def resource_state(dA: int, dB: int) -> np.ndarray:
    """Maximally entangled ``AB : A~B~`` state as a density matrix in A B A~ B~ order."""
    d = dA * dB
    psi = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    return np.outer(psi, psi.conj())


def _choi_matrix(ch: ChannelExpr) -> np.ndarray:
    d = ch.dim
    if isinstance(ch, Unitary):
        psi = (ch.matrix @ np.eye(d)).reshape(-1) / np.sqrt(d)
        return np.outer(psi, psi.conj())
    if isinstance(ch, Kraus):
        out = np.zeros((d * d, d * d), dtype=complex)
        for k in ch.operators:
            psi = k.reshape(-1) / np.sqrt(d)
            out += np.outer(psi, psi.conj())
        return out
    if isinstance(ch, Depolarizing):
        return np.eye(d * d, dtype=complex) / (d * d)
    if isinstance(ch, Mixture):
        return sum(w * _choi_matrix(sub) for w, sub in ch.terms)
    raise TypeError(f"not a channel expression: {type(ch).__name__}")


def choi_state(ch: ChannelExpr, input_dims: Sequence[int] | None = None) -> ChoiState:
    """Trace-1 Choi state ``(ch (x) id)(resource_state)`` in A B A~ B~ order.

    ``(K (x) I) sum_I |I>|I>`` has amplitude ``K[i, j]`` on ``|i>|j>``, so the
    flattened Kraus operator is the (unnormalized) Choi vector directly.
    """
    dims = _resolve_dims(ch, input_dims)
    return ChoiState(_choi_matrix(ch), dims + dims, source=describe(ch))


def choi_from_matrix_units(ch: ChannelExpr, input_dims: Sequence[int] | None = None) -> ChoiState:
    """Choi state assembled as ``(1/d) sum_IJ ch(e_IJ) (x) e_IJ``.

    Independent of the Kraus route in :func:`choi_state`; only uses the
    channel's action on matrix units.
    """
    dims = _resolve_dims(ch, input_dims)
    d = ch.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            out += np.kron(apply_linear(ch, e), e)
    return ChoiState(out / d, dims + dims, source=describe(ch))


def cjks_linearity_check(
    ch1: ChannelExpr,
    ch2: ChannelExpr,
    weight: float,
    trials: int = 1,
    seed: int = 0,
    tol: float = 1e-10,
) -> bool:
    """Check ``choi(w ch1 + (1-w) ch2) == w choi(ch1) + (1-w) choi(ch2)``.

    The first trial uses ``weight``; further trials draw weights uniformly
    from [0, 1] with the given seed. The mixed Choi state is built through
    the matrix-unit route so that linearity is not assumed by construction.
    """
    if ch1.dim != ch2.dim:
        raise DimensionError(f"channel dimensions differ: {ch1.dim} vs {ch2.dim}")
    rng = np.random.default_rng(seed)
    weights = [weight] + list(rng.uniform(0, 1, size=max(trials - 1, 0)))
    dims = (ch1.dim,)
    c1 = choi_state(ch1, dims).matrix
    c2 = choi_state(ch2, dims).matrix
    for w in weights:
        mixed = choi_from_matrix_units(Mixture(((w, ch1), (1 - w, ch2))), dims).matrix
        if np.linalg.norm(mixed - w * c1 - (1 - w) * c2) > tol:
            return False
    return True
