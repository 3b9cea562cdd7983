"""Quantum disk and annulus d-bar toolkit (Python bindings)."""

from ._qdbar import (
    CapabilityError,
    ConfigError,
    DomainError,
    IndexWindow,
    InsufficientDataError,
    NumericalError,
    ParameterError,
    ResourceError,
    WeightFamily,
    __version__,
    apply_qt,
    classical_norm,
    inverse_residual,
    kernel_norms,
    make_window,
    norm_convergence,
    parametrix_convergence,
    quantum_norm,
    realize,
    run_experiment,
    truncation_window,
)

__all__ = [name for name in dir() if not name.startswith("_")]
