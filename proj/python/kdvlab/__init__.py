"""Decay-rate certification and simulation for a boundary-damped KdV-KdV system
with time-varying delayed feedback."""

from ._core import (
    Certificate,
    CertificateError,
    ConfigError,
    QuadForm2,
    SimulationError,
    alpha_lower_bound,
    build_certificate,
    certified_length_limit,
    check_gain_feasibility,
    fit_decay_rate,
    is_critical_length,
    mu1_upper_bound,
    mu2_of_mu1,
    optimize_mu1,
    phi_matrix,
    psi_matrix,
    rate_f,
    rate_g,
    resolvent_delay_gain_g0,
    run_simulation,
    verify_bound,
)

__all__ = [
    "Certificate",
    "CertificateError",
    "ConfigError",
    "QuadForm2",
    "SimulationError",
    "alpha_lower_bound",
    "build_certificate",
    "certified_length_limit",
    "check_gain_feasibility",
    "fit_decay_rate",
    "is_critical_length",
    "mu1_upper_bound",
    "mu2_of_mu1",
    "optimize_mu1",
    "phi_matrix",
    "psi_matrix",
    "rate_f",
    "rate_g",
    "resolvent_delay_gain_g0",
    "run_simulation",
    "verify_bound",
]

__version__ = "0.1.0"
