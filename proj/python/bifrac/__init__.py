"""Bifractional displacement operators, coherent states, and phase-space maps."""

from bifrac._core import (
    Error,
    analysis_coefficients,
    bifrac_coherent,
    bifrac_operator,
    bifrac_operator_integral,
    coherent_amplitudes,
    compose_kernels,
    displaced_parity,
    displacement_reference,
    gaussian_fingerprint,
    grid,
    heisenberg_action,
    kernel_value,
    moments,
    oracle_bifrac_wigner,
    parity,
    photon_stats,
    product_vs_integral_phase,
    reduce_angle,
    run_verify,
    split_fock_requirement,
    sweep_stats,
    verify_check_names,
    verify_report_json,
    wavefunction,
)

__version__ = "0.1.0"

__all__ = [
    "Error",
    "analysis_coefficients",
    "bifrac_coherent",
    "bifrac_operator",
    "bifrac_operator_integral",
    "coherent_amplitudes",
    "compose_kernels",
    "displaced_parity",
    "displacement_reference",
    "gaussian_fingerprint",
    "grid",
    "heisenberg_action",
    "kernel_value",
    "moments",
    "oracle_bifrac_wigner",
    "parity",
    "photon_stats",
    "product_vs_integral_phase",
    "reduce_angle",
    "run_verify",
    "split_fock_requirement",
    "sweep_stats",
    "verify_check_names",
    "verify_report_json",
    "wavefunction",
]
