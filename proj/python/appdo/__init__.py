"""Almost-periodic pseudodifferential operators."""

from ._appdo import (
    DomainError,
    Error,
    InputError,
    Symbol,
    apply,
    equivalence_residual,
    finite_section_spectrum,
    invariance,
    kernel,
    multiplier_spectrum,
    positivity,
    resolvent,
    set_threads,
    verify,
    weighted_norm,
    weyl_residual,
)

__all__ = [
    "DomainError",
    "Error",
    "InputError",
    "Symbol",
    "apply",
    "equivalence_residual",
    "finite_section_spectrum",
    "invariance",
    "kernel",
    "multiplier_spectrum",
    "positivity",
    "resolvent",
    "set_threads",
    "verify",
    "weighted_norm",
    "weyl_residual",
]
