"""Forward and inverse scattering for the half-line discrete Schroedinger operator.

Potentials are lists ``[V_1, ..., V_b]``; Jost functions are coefficient
lists ``[c_0, ..., c_{2b-1}]`` of f0(z).
"""

from ._core import (
    BoundState,
    InversionReport,
    LatticeIstError,
    bound_states,
    gl_invert,
    jost_function,
    marchenko_invert,
    marchenko_kernel,
    run_cli,
    tev_invert,
    transmission_determinant,
    transmission_eigenvalues,
    unusual_family_b3,
)

__all__ = [
    "BoundState",
    "InversionReport",
    "LatticeIstError",
    "bound_states",
    "gl_invert",
    "jost_function",
    "marchenko_invert",
    "marchenko_kernel",
    "run_cli",
    "tev_invert",
    "transmission_determinant",
    "transmission_eigenvalues",
    "unusual_family_b3",
]
