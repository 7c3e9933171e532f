"""Exact analysis of entanglement distillation protocols built from prime-p
stabilizer codes: per-syndrome acceptance and fidelity reports, iterated
yields against the hashing protocol, and a dense state-vector cross-check."""

from qdistil._core import (
    BellDiagState,
    CapacityError,
    QdistilError,
    StabilizerCode,
    SympVector,
    analyze,
    apply_pauli_to_bob,
    bell_diag_density,
    bell_vector,
    combined_yield,
    comparison_sweep,
    entropy,
    general_fidelity_bound,
    hashing_yield,
    iterate,
    uncorrectable_overlap,
    marginal,
    parse_code,
    preset_code,
    preset_names,
    run_cli,
    run_protocol_dense,
    symp_product,
    tensor,
    werner_converted,
    werner_raw,
    xz_matrix,
)

__all__ = [
    "BellDiagState",
    "CapacityError",
    "QdistilError",
    "StabilizerCode",
    "SympVector",
    "analyze",
    "apply_pauli_to_bob",
    "bell_diag_density",
    "bell_vector",
    "combined_yield",
    "comparison_sweep",
    "entropy",
    "general_fidelity_bound",
    "hashing_yield",
    "iterate",
    "uncorrectable_overlap",
    "marginal",
    "parse_code",
    "preset_code",
    "preset_names",
    "run_cli",
    "run_protocol_dense",
    "symp_product",
    "tensor",
    "werner_converted",
    "werner_raw",
    "xz_matrix",
]

__version__ = "0.1.0"
