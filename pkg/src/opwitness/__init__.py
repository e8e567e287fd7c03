"""Witnessing nonseparability of bipartite quantum operations through their Choi states."""

from .channels import (
    ChannelError,
    Depolarizing,
    Kraus,
    Mixture,
    Unitary,
    apply,
    depolarize_mix,
    gate_channel,
    gate_matrix,
    kraus_of,
)
from .choi import SIDE_A, SIDE_B, ChoiState, choi_state, cjks_linearity_check, resource_state
from .linalg import hermitian_eigen, partial_trace, partial_transpose
from .noise import ThresholdReport, npt_threshold, resource_free_threshold, witness_threshold
from .witness import (
    NotDetectableError,
    Witness,
    build_witness,
    estimate_witness,
    evaluate,
    mu_decompose,
    negative_eigs,
    pauli_decompose,
    validate_on_separable,
)

__version__ = "0.1.0"
