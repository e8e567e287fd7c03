"""Published reference values and itemized comparisons against them.

Printed matrices carry a global scale of 4 relative to the trace-1
conventions used everywhere else; tuple lists are compared as support and
sign patterns only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .witness import MuDecomposition, Witness, mu_decompose

SLOT_ORDERS = {
    "A,B,A~,B~": (0, 1, 2, 3),
    "A,A~,B,B~": (0, 2, 1, 3),
}


@lru_cache(maxsize=None)
def load_reference() -> dict:
    text = resources.files("opwitness").joinpath("data/published_values.json").read_text("utf-8")
    return json.loads(text)


def printed_choi_cnot() -> np.ndarray:
    """Printed 16x16 CNOT matrix (scale 4)."""
    return np.array(load_reference()["choi_cnot_times4"], dtype=float)


def printed_witness_cnot() -> np.ndarray:
    return np.array(load_reference()["witness_cnot_printed"], dtype=float)


def expected_mu_pattern(gate: str) -> tuple[set, set, bool]:
    entry = load_reference()["mu_tuples"][gate]
    return (
        {tuple(t) for t in entry["positive"]},
        {tuple(t) for t in entry["negative"]},
        bool(entry["alpha_sign"]),
    )


@dataclass
class EntrywiseComparison:
    max_abs_diff: float
    mismatches: list[tuple[int, int, float, float]] = field(default_factory=list)  # (row, col, computed, printed)

    @property
    def match(self) -> bool:
        return not self.mismatches


def compare_entrywise(computed: np.ndarray, printed: np.ndarray, tol: float = 1e-9) -> EntrywiseComparison:
    diff = np.abs(computed - printed)
    bad = np.argwhere(diff > tol)
    return EntrywiseComparison(
        float(diff.max()),
        [(int(r), int(c), complex(computed[r, c]).real, float(printed[r, c])) for r, c in bad],
    )


@dataclass
class PatternComparison:
    gate: str
    slot_order: str
    matched_positive: int
    matched_negative: int
    missing_positive: list = field(default_factory=list)  # listed but absent / wrong sign
    missing_negative: list = field(default_factory=list)
    extra_positive: list = field(default_factory=list)  # computed but not listed
    extra_negative: list = field(default_factory=list)
    non_real: list = field(default_factory=list)
    reconstruction_error: float = 0.0
    magnitudes: list = field(default_factory=list)

    @property
    def match(self) -> bool:
        return not (
            self.missing_positive or self.missing_negative or self.extra_positive
            or self.extra_negative or self.non_real
        )

    def mismatch_lines(self) -> list[str]:
        lines = []
        for label, items in [
            ("listed positive, not computed positive", self.missing_positive),
            ("listed negative, not computed negative", self.missing_negative),
            ("computed positive, not listed", self.extra_positive),
            ("computed negative, not listed", self.extra_negative),
            ("computed non-real", self.non_real),
        ]:
            for t in sorted(items):
                lines.append(f"{label}: {t}")
        return lines


def compare_mu_pattern(gate: str, w: Witness | np.ndarray, slot_order: str = "A,B,A~,B~") -> PatternComparison:
    """Compare the support/sign pattern of ``w``'s mu-expansion with the listed tuples."""
    pos_ref, neg_ref, alpha = expected_mu_pattern(gate)
    dec: MuDecomposition = mu_decompose(w, SLOT_ORDERS[slot_order])
    pos, neg, other = dec.support(tol=1e-12, alpha_sign=alpha)
    m = w.matrix if isinstance(w, Witness) else np.asarray(w)
    mags = sorted({round(abs(c), 12) for c in dec.coefficients.values() if abs(c) > 1e-12})
    return PatternComparison(
        gate=gate,
        slot_order=slot_order,
        matched_positive=len(pos & pos_ref),
        matched_negative=len(neg & neg_ref),
        missing_positive=sorted(pos_ref - pos),
        missing_negative=sorted(neg_ref - neg),
        extra_positive=sorted(pos - pos_ref),
        extra_negative=sorted(neg - neg_ref),
        non_real=sorted(other),
        reconstruction_error=float(np.linalg.norm(dec.reconstruct() - m)),
        magnitudes=mags,
    )


def best_slot_order(gate: str, w: Witness | np.ndarray) -> PatternComparison:
    """Try both slot assignments and return the one with fewest discrepancies."""
    results = [compare_mu_pattern(gate, w, name) for name in SLOT_ORDERS]
    return min(results, key=lambda r: len(r.mismatch_lines()))


def hermiticity_partner_defects(tuples: set[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Tuples whose 3<->4 swapped partner is absent.

    For a Hermitian operator the coefficient of the swapped tuple is the
    complex conjugate, so both must be present together.
    """
    swap = {3: 4, 4: 3}
    return sorted(t for t in tuples if tuple(swap.get(k, k) for k in t) not in tuples)
