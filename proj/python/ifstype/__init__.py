"""Finite-type analysis of equicontractive weighted iterated function systems.

Thin re-export of the compiled extension.  Rationals cross the boundary as
strings ("3/164"); anything whose str() parses as a rational is accepted on
the way in, which covers int and fractions.Fraction.
"""

try:
    from ._ifstype import (
        Analysis,
        Component,
        Construction,
        Envelope,
        Error,
        Spectrum,
        System,
        default_depths,
        local_dim_estimate,
        lq_estimate,
        multiinterval,
        multipoint,
        refine_atoms,
        tau_spectrum,
        verify,
        window_mass,
    )
except ImportError:  # flat build tree: extension sits next to the package
    from _ifstype import (
        Analysis,
        Component,
        Construction,
        Envelope,
        Error,
        Spectrum,
        System,
        default_depths,
        local_dim_estimate,
        lq_estimate,
        multiinterval,
        multipoint,
        refine_atoms,
        tau_spectrum,
        verify,
        window_mass,
    )

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "Component",
    "Construction",
    "Envelope",
    "Error",
    "Spectrum",
    "System",
    "default_depths",
    "local_dim_estimate",
    "lq_estimate",
    "multiinterval",
    "multipoint",
    "refine_atoms",
    "tau_spectrum",
    "verify",
    "window_mass",
]
