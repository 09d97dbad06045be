"""Pseudo-Hermitian invariants for driven su(1,1) / su(2) non-Hermitian systems.

The package constructs the Hermitian map R(t), the invariant
I(t) = R K0 R^{-1}, the metric eta = R^{-2}, the exact solution states
e^{i alpha_n(t)} R(t)|n> and their total / geometric / adiabatic phases, and
verifies every closed form against direct numerical integration of the
Schroedinger equation.
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraKind,
    Representation,
    check_commutation,
    k0_eigenbasis,
    su11_boson_generators,
    su2_generators,
)
from .dynamics import (
    Trajectory,
    analytic_state,
    eta_norm,
    extract_phase,
    frame_coefficients,
    propagate,
    stability_horizon,
)
from .invariant import (
    InvariantFrame,
    build_frame,
    build_invariant,
    build_metric,
    build_R,
    build_R_inverse,
    check_invariant_equation,
    check_pseudo_hermiticity,
    invariant_eigenframe,
    similarity_identities_residual,
    solve_epsilon,
)
from .model import (
    ModelParams,
    build_adjoint_hamiltonian,
    build_hamiltonian,
    check_pt_symmetry,
    pt_map,
)
from .phases import (
    PhaseReport,
    adiabatic_berry_phase,
    berry_phase,
    berry_phase_loop_integral,
    breaking_diagram,
    lr_phase,
    lr_phase_single_coupling,
    phase_decompose,
    sinh_sq_half,
)
from .tolerances import TOL

__all__ = [
    "__version__",
    "TOL",
    "AlgebraKind",
    "Representation",
    "su2_generators",
    "su11_boson_generators",
    "check_commutation",
    "k0_eigenbasis",
    "ModelParams",
    "build_hamiltonian",
    "build_adjoint_hamiltonian",
    "pt_map",
    "check_pt_symmetry",
    "InvariantFrame",
    "solve_epsilon",
    "build_R",
    "build_R_inverse",
    "build_invariant",
    "build_metric",
    "build_frame",
    "check_pseudo_hermiticity",
    "check_invariant_equation",
    "similarity_identities_residual",
    "invariant_eigenframe",
    "Trajectory",
    "propagate",
    "analytic_state",
    "frame_coefficients",
    "extract_phase",
    "eta_norm",
    "stability_horizon",
    "lr_phase",
    "lr_phase_single_coupling",
    "berry_phase",
    "berry_phase_loop_integral",
    "adiabatic_berry_phase",
    "sinh_sq_half",
    "phase_decompose",
    "PhaseReport",
    "breaking_diagram",
]
