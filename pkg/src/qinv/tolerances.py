"""Pinned numerical tolerances, shared by kernels and tests.

Every threshold used by a runtime contract check or asserted by the test
suite lives here, so the two can never drift apart.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # dense kernel
    herm_gate: float = 1e-12          # relative max-norm gate for Hermitian input
    eig_orthonormal: float = 1e-12    # eigenvector orthonormality
    expm_norm_bound: float = 20.0     # 1-norm bound for a reliable matrix exponential
    herm_general_agree: float = 1e-11  # Hermitian fast path vs general exponential
    solve_residual: float = 1e-10     # ||a x - b||_max / ||b||_max after solve

    # algebra representations
    commutation: float = 1e-12

    # model
    adjoint_consistency: float = 1e-14
    span_fit: float = 1e-10           # generator-span least-squares fit residual
    pt_verdict: float = 1e-10         # max residual below which H counts as PT-symmetric

    # invariant frame
    aux_condition: float = 1e-12
    r_hermitian: float = 1e-12
    r_inverse: float = 1e-10
    invariant_consistency: float = 1e-9   # similarity product vs closed form
    pseudo_hermiticity: float = 1e-10
    dyson_reduction: float = 1e-9
    similarity: float = 1e-8          # the four conjugation identities
    invariant_equation: float = 1e-8  # finite-difference residual of the defining ODE
    eigen_residual: float = 1e-9
    gram: float = 1e-9
    tail_mass: float = 1e-10          # top-4-component guard for truncated states
    consistency_chain: float = 1e-12  # epsilon <-> sinh^2(alpha/2) <-> auxiliary condition

    # dynamics
    local_error: float = 1e-6         # per-step step-halving estimate
    divergence_growth: float = 1e8    # 2-norm growth factor treated as divergence
    state_match: float = 1e-6         # numeric vs analytic state, componentwise
    eta_drift: float = 1e-8
    leakage_assert: float = 1e-6      # | |c_n| - 1 | contract value
    leakage_error: float = 1e-4       # | |c_n| - 1 | beyond which extraction fails
    eta_imag: float = 1e-12           # relative imaginary part allowed in an eta-norm

    # phases
    phase_match: float = 1e-5         # closed form vs propagation-extracted, radians
    phase_split: float = 1e-10        # dynamic + geometric vs total
    berry_match: float = 1e-8         # closed form vs loop integral, radians


TOL = Tolerances()
