"""Depolarizing-noise detection thresholds.

For the noisy channel ``p*ch + (1-p)*D`` every quantity below is affine in
``p``, so a fixed witness gives ``f(p) = p*f(1) + (1-p)*f(0)`` and the
detection threshold is the root ``p* = f(0) / (f(0) - f(1))``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .channels import ChannelExpr, apply, depolarize_mix, describe
from .choi import SIDE_A, choi_state
from .linalg import DimensionError, hermitian_eigen, partial_transpose, projector
from .witness import NotDetectableError, Witness, build_witness, evaluate


class ThresholdError(ValueError):
    """Threshold cannot be computed (non-detecting witness, non-monotone bracket...)."""


@dataclass(frozen=True)
class ThresholdReport:
    protocol: str  # "choi" | "resource_free"
    gate: str
    witness_value_at_p1: float
    witness_value_at_p0: float
    p_star: float
    method: str  # "analytic" | "bisection"
    bisection_tolerance: float | None = None
    input_state: str | None = None

    def witness_value(self, p: float) -> float:
        return p * self.witness_value_at_p1 + (1 - p) * self.witness_value_at_p0

    def to_dict(self) -> dict:
        return asdict(self)


def affine_root(f0: float, f1: float) -> float:
    if f1 >= 0:
        raise ThresholdError(f"witness does not detect the ideal channel: value {f1:.3e} >= 0")
    return float(np.clip(f0 / (f0 - f1), 0.0, 1.0))


def witness_threshold(ch: ChannelExpr, w: Witness, input_dims: Sequence[int] | None = None) -> ThresholdReport:
    """Smallest mixing probability at which the fixed witness still fires on the Choi state."""
    ideal = choi_state(ch, input_dims).matrix
    noise = np.eye(ideal.shape[0], dtype=complex) / ideal.shape[0]
    f1 = evaluate(w, ideal)
    f0 = evaluate(w, noise)
    return ThresholdReport("choi", describe(ch), f1, f0, affine_root(f0, f1), "analytic")


def _min_pt_eig(ch: ChannelExpr, p: float, partition, input_dims) -> float:
    c = choi_state(depolarize_mix(ch, p), input_dims)
    return float(hermitian_eigen(partial_transpose(c.matrix, c.dims, partition)).values[0])


def npt_threshold(
    ch: ChannelExpr,
    partition: Sequence[int] = SIDE_A,
    tol: float = 1e-9,
    max_iter: int = 60,
    input_dims: Sequence[int] | None = None,
) -> ThresholdReport:
    """Bisection for the noise level where the Choi state stops being NPT.

    ``g(p)`` is the smallest eigenvalue of the partially transposed noisy
    Choi state. Every evaluated point is kept; if their signs are not
    consistent with a single crossing the search is rejected.
    """
    g1 = _min_pt_eig(ch, 1.0, partition, input_dims)
    if g1 >= -1e-12:
        raise NotDetectableError(f"{describe(ch)}: Choi state is not NPT across {list(partition)}")
    g0 = _min_pt_eig(ch, 0.0, partition, input_dims)
    samples = [(0.0, g0), (1.0, g1)]
    lo, hi = 0.0, 1.0
    if g0 < 0:
        hi = 0.0
    else:
        for _ in range(max_iter):
            if hi - lo <= tol:
                break
            mid = (lo + hi) / 2
            g = _min_pt_eig(ch, mid, partition, input_dims)
            samples.append((mid, g))
            if g < 0:
                hi = mid
            else:
                lo = mid
    p_star = (lo + hi) / 2
    for p, g in samples:
        if (p <= lo and g < 0 and p != hi) or (p >= hi and g >= 0):
            raise ThresholdError(
                f"g(p) is not monotone: g({p:.6g}) = {g:.3e} on the wrong side of p* = {p_star:.6g}"
            )
    return ThresholdReport("choi", describe(ch), g1, g0, p_star, "bisection", tol)


_PRODUCT_KETS = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
}


def product_state(label: str) -> np.ndarray:
    """Density matrix of a qubit product state written as e.g. ``"+0"`` or ``"01"``."""
    try:
        kets = [_PRODUCT_KETS[c] for c in label]
    except KeyError:
        raise ValueError(f"bad product state label {label!r}; use characters from 0 1 + -") from None
    psi = kets[0]
    for k in kets[1:]:
        psi = np.kron(psi, k)
    return projector(psi)


def resource_free_threshold(ch: ChannelExpr, input_state: str | np.ndarray) -> ThresholdReport:
    """Threshold when the gate acts on one product input instead of half of a resource state.

    The witness comes from the most negative PT eigenvector of the ideal
    two-qubit output and is then held fixed while noise varies.
    """
    if isinstance(input_state, str):
        label, rho_in = input_state, product_state(input_state)
    else:
        label, rho_in = "custom", np.asarray(input_state, dtype=complex)
    if rho_in.shape != (4, 4) or ch.dim != 4:
        raise DimensionError("resource-free protocol is defined for two-qubit channels and inputs")
    out = apply(ch, rho_in)
    try:
        w = build_witness(out, partition=(0,), dims=(2, 2), source=describe(ch))
    except NotDetectableError:
        raise NotDetectableError(
            f"{describe(ch)} on |{label}>: output is separable, gate not detectable from this input"
        ) from None
    f1 = evaluate(w, out)
    f0 = evaluate(w, np.eye(4, dtype=complex) / 4)
    return ThresholdReport("resource_free", describe(ch), f1, f0, affine_root(f0, f1), "analytic", input_state=label)
