"""Numerical tolerances shared by all modules.

Defaults can be overridden process-wide through the ``OPWITNESS_TOL``
environment variable, e.g. ``OPWITNESS_TOL="herm_tol=1e-9,eig_resid=1e-8"``.
A bare number (``OPWITNESS_TOL=1e-8``) sets ``herm_tol``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

HERM_TOL = 1e-10
EIG_RESID = 1e-9


@dataclass(frozen=True)
class Tolerances:
    herm_tol: float = HERM_TOL  # max-abs deviation from Hermiticity
    eig_resid: float = EIG_RESID  # per-pair residual |m v - lambda v|
    orth_tol: float = 1e-10  # eigenvector orthonormality
    degen_tol: float = 1e-9  # eigenvalues closer than this form one cluster
    neg_tol: float = 1e-10  # eigenvalues below -neg_tol count as negative
    unitary_tol: float = 1e-10
    tp_tol: float = 1e-10  # Kraus completeness
    weight_tol: float = 1e-12  # mixture weights must sum to 1
    trace_warn: float = 1e-6  # input-state trace deviation that triggers a warning


def parse_overrides(text: str) -> dict[str, float]:
    text = text.strip()
    if not text:
        return {}
    names = {f.name for f in fields(Tolerances)}
    try:
        return {"herm_tol": float(text)}
    except ValueError:
        pass
    out = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in names:
            raise ValueError(f"unknown tolerance {key!r}; expected one of {sorted(names)}")
        out[key] = float(value)
    return out


_active = replace(Tolerances(), **parse_overrides(os.environ.get("OPWITNESS_TOL", "")))


def get_tolerances() -> Tolerances:
    return _active


def set_tolerances(**overrides: float) -> Tolerances:
    """Replace the active tolerances; returns the previous set so callers can restore it."""
    global _active
    previous = _active
    _active = replace(_active, **overrides)
    return previous


def reset_tolerances(tol: Tolerances) -> None:
    global _active
    _active = tol
