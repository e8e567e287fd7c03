"""Quantum channels as small symbolic expressions.

A channel is one of :class:`Unitary`, :class:`Kraus`, :class:`Depolarizing`
or :class:`Mixture`. Mixtures stay symbolic so that quantities which are
affine in the mixing weights (Choi states, witness values) can be evaluated
exactly term by term.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .config import get_tolerances
from .linalg import DimensionError, as_matrix, hermiticity_deviation


class ChannelError(ValueError):
    """Invalid channel expression (non-unitary, non-trace-preserving, bad weights...)."""


def _freeze(m) -> np.ndarray:
    arr = np.array(m, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Unitary:
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        u = _freeze(self.matrix)
        object.__setattr__(self, "matrix", u)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ChannelError(f"unitary must be square, got shape {u.shape}")
        dev = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
        if dev > get_tolerances().unitary_tol:
            raise ChannelError(f"matrix is not unitary: max |U^dagger U - I| = {dev:.3e}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class Kraus:
    operators: tuple[np.ndarray, ...]
    name: str = ""

    def __post_init__(self):
        ops = tuple(_freeze(k) for k in self.operators)
        object.__setattr__(self, "operators", ops)
        if not ops:
            raise ChannelError("Kraus set is empty")
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ChannelError(f"Kraus operators must be square, got shape {shape}")
        for i, k in enumerate(ops):
            if k.shape != shape:
                raise ChannelError(f"Kraus operator {i} has shape {k.shape}, expected {shape}")
        completeness = sum(k.conj().T @ k for k in ops)
        dev = float(np.max(np.abs(completeness - np.eye(shape[0]))))
        if dev > get_tolerances().tp_tol:
            raise ChannelError(
                f"Kraus set is not trace preserving: max |sum K^dagger K - I| = {dev:.3e}"
            )

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


@dataclass(frozen=True, eq=False)
class Depolarizing:
    """The completely depolarizing map rho -> Tr(rho) I/d."""

    d: int

    def __post_init__(self):
        if int(self.d) < 1:
            raise ChannelError(f"depolarizing dimension must be positive, got {self.d}")

    @property
    def dim(self) -> int:
        return int(self.d)


@dataclass(frozen=True, eq=False)
class Mixture:
    terms: tuple[tuple[float, "ChannelExpr"], ...]

    def __post_init__(self):
        terms = tuple((float(w), ch) for w, ch in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ChannelError("mixture has no terms")
        if any(w < 0 for w, _ in terms):
            raise ChannelError(f"mixture weights must be nonnegative, got {[w for w, _ in terms]}")
        total = sum(w for w, _ in terms)
        if abs(total - 1) > get_tolerances().weight_tol:
            raise ChannelError(f"mixture weights sum to {total!r}, not 1")
        dims = {ch.dim for _, ch in terms}
        if len(dims) != 1:
            raise ChannelError(f"mixture terms have different input dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.terms[0][1].dim


ChannelExpr = Union[Unitary, Kraus, Depolarizing, Mixture]


def apply(ch: ChannelExpr, rho) -> np.ndarray:
    """Apply a channel to a density matrix.

    Inputs whose trace is off by more than ``trace_warn`` trigger a warning;
    the map itself is linear and is applied regardless.
    """
    rho = as_matrix(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"state is not a square matrix: shape {rho.shape}")
    if rho.shape[0] != ch.dim:
        raise DimensionError(f"rows: state dimension {rho.shape[0]} != channel input dimension {ch.dim}")
    tol = get_tolerances()
    dev = hermiticity_deviation(rho)
    if dev > 1e-9:
        warnings.warn(f"input state is not Hermitian (deviation {dev:.2e})", stacklevel=2)
    if abs(np.trace(rho) - 1) > tol.trace_warn:
        warnings.warn(f"input state has trace {np.trace(rho):.6g}", stacklevel=2)
    return apply_linear(ch, rho)


def apply_linear(ch: ChannelExpr, x: np.ndarray) -> np.ndarray:
    """The channel as a linear map on arbitrary (not necessarily Hermitian) operators."""
    if isinstance(ch, Unitary):
        u = ch.matrix
        return u @ x @ u.conj().T
    if isinstance(ch, Kraus):
        return sum(k @ x @ k.conj().T for k in ch.operators)
    if isinstance(ch, Depolarizing):
        return np.trace(x) * np.eye(ch.dim, dtype=complex) / ch.dim
    if isinstance(ch, Mixture):
        return sum(w * apply_linear(sub, x) for w, sub in ch.terms)
    raise TypeError(f"not a channel expression: {type(ch).__name__}")


def depolarize_mix(ch: ChannelExpr, p: float) -> Mixture:
    """The noisy channel ``p*ch + (1-p)*D``."""
    if not 0 <= p <= 1:
        raise ChannelError(f"mixing probability must lie in [0, 1], got {p}")
    return Mixture(((p, ch), (1 - p, Depolarizing(ch.dim))))


def kraus_of(ch: ChannelExpr) -> list[np.ndarray]:
    if isinstance(ch, Unitary):
        return [ch.matrix.copy()]
    if isinstance(ch, Kraus):
        return [k.copy() for k in ch.operators]
    if isinstance(ch, Depolarizing):
        d = ch.dim
        ops = []
        for i in range(d):
            for j in range(d):
                k = np.zeros((d, d), dtype=complex)
                k[i, j] = 1 / np.sqrt(d)
                ops.append(k)
        return ops
    if isinstance(ch, Mixture):
        return [np.sqrt(w) * k for w, sub in ch.terms if w > 0 for k in kraus_of(sub)]
    raise TypeError(f"not a channel expression: {type(ch).__name__}")


def describe(ch: ChannelExpr) -> str:
    if isinstance(ch, Unitary):
        return ch.name or f"unitary({ch.dim})"
    if isinstance(ch, Kraus):
        return ch.name or f"kraus({len(ch.operators)} ops, dim {ch.dim})"
    if isinstance(ch, Depolarizing):
        return f"depolarizing({ch.dim})"
    return " + ".join(f"{w:.6g}*{describe(sub)}" for w, sub in ch.terms)


# ---------------------------------------------------------------------------
# Gate registry
# ---------------------------------------------------------------------------

_R2 = 1 / np.sqrt(2)


def _cnot() -> np.ndarray:
    # control on the first qubit
    return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def _swap() -> np.ndarray:
    return np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def _sqrt_swap() -> np.ndarray:
    # principal root: SWAP eigenvalue +1 -> 1, eigenvalue -1 -> +i
    a, b = (1 + 1j) / 2, (1 - 1j) / 2
    return np.array([[1, 0, 0, 0], [0, a, b, 0], [0, b, a, 0], [0, 0, 0, 1]], dtype=complex)


def _bell() -> np.ndarray:
    u = np.zeros((4, 4), dtype=complex)
    u[:, 0] = [_R2, 0, 0, _R2]  # |00> -> (|00> + |11>)/sqrt2
    u[:, 3] = [_R2, 0, 0, -_R2]  # |11> -> (|00> - |11>)/sqrt2
    u[:, 1] = [0, _R2, _R2, 0]  # |01> -> (|01> + |10>)/sqrt2
    u[:, 2] = [0, _R2, -_R2, 0]  # |10> -> (|01> - |10>)/sqrt2
    return u


GATES = {
    "identity": lambda: np.eye(4, dtype=complex),
    "cnot": _cnot,
    "swap": _swap,
    "sqrt_swap": _sqrt_swap,
    "bell": _bell,
}


def gate_matrix(name: str) -> np.ndarray:
    try:
        return GATES[name]()
    except KeyError:
        raise KeyError(f"unknown gate {name!r}; known gates: {', '.join(GATES)}") from None


def gate_channel(name: str) -> Unitary:
    return Unitary(gate_matrix(name), name=name)


# ---------------------------------------------------------------------------
# JSON channel files
# ---------------------------------------------------------------------------


def matrix_from_json(rows) -> np.ndarray:
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ChannelError(f"malformed matrix: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ChannelError(
            f"matrix must be nested rows of [re, im] pairs, got array of shape {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_to_json(m) -> list:
    m = as_matrix(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


_CHANNEL_KEYS = ("unitary", "kraus", "depolarizing", "mixture")


def channel_from_dict(doc: dict) -> ChannelExpr:
    if not isinstance(doc, dict):
        raise ChannelError(f"channel must be a JSON object, got {type(doc).__name__}")
    present = [k for k in _CHANNEL_KEYS if k in doc]
    if len(present) != 1:
        raise ChannelError(f"channel needs exactly one of {list(_CHANNEL_KEYS)}, found {present}")
    key = present[0]
    value = doc[key]
    if key == "unitary":
        return Unitary(matrix_from_json(value), name=doc.get("name", ""))
    if key == "kraus":
        return Kraus(tuple(matrix_from_json(k) for k in value), name=doc.get("name", ""))
    if key == "depolarizing":
        return Depolarizing(int(value))
    terms = []
    for item in value:
        if set(item) != {"weight", "channel"}:
            raise ChannelError(f"mixture item needs keys 'weight' and 'channel', got {sorted(item)}")
        terms.append((float(item["weight"]), channel_from_dict(item["channel"])))
    return Mixture(tuple(terms))


def channel_to_dict(ch: ChannelExpr) -> dict:
    if isinstance(ch, Unitary):
        return {"unitary": matrix_to_json(ch.matrix)}
    if isinstance(ch, Kraus):
        return {"kraus": [matrix_to_json(k) for k in ch.operators]}
    if isinstance(ch, Depolarizing):
        return {"depolarizing": ch.dim}
    return {"mixture": [{"weight": w, "channel": channel_to_dict(sub)} for w, sub in ch.terms]}


def load_channel(path: str | Path) -> ChannelExpr:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ChannelError(f"{path}: invalid JSON ({exc})") from None
    return channel_from_dict(doc)


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_kraus_channel(d: int, n_ops: int, rng: np.random.Generator) -> Kraus:
    """Random channel from a Haar-like isometry C^d -> C^(n_ops*d) cut into blocks."""
    z = rng.standard_normal((n_ops * d, d)) + 1j * rng.standard_normal((n_ops * d, d))
    q, _ = np.linalg.qr(z)
    return Kraus(tuple(q[k * d : (k + 1) * d] for k in range(n_ops)), name=f"random_kraus({n_ops})")
