"""Construction and verification of the pseudo-Hermitian invariant.

The Hermitian map R(t) = exp[(eps/2)(K+ e^{i phi} + K- e^{-i phi})] generates
the invariant I(t) = R K0 R^{-1}, which solves i dI/dt + [I, H] = 0 once the
real parameter eps satisfies the auxiliary condition

    G cosh(alpha) = -(omega + Omega) sinh(alpha) / sqrt(2 D),
    alpha = eps sqrt(D/2).

For su(2) (D = +2) alpha = eps and the condition reads
tanh(eps) = -2G/(omega+Omega), solvable only when |2G/(omega+Omega)| < 1;
for su(1,1) (D = -2) alpha = i eps and everything collapses to trigonometric
form, tan(eps) = -2G/(omega+Omega), solvable for every coupling.  All
formulas here use the real parametrization per algebra, so no complex
round-off enters quantities that are real by construction.

The metric is eta = R^{-2}; the eigenframe |n(t)> = R(t)|n> carries the K0
spectrum and is orthonormal under eta.  For truncated su(1,1) spaces every
check is restricted to states whose image under the relevant operator keeps
negligible support on the truncation boundary (the tail-mass guard).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import AlgebraKind, Representation, k0_eigenbasis
from .errors import BrokenRegimeError, ConsistencyError, SingularConditionError
from .matkit import adjoint, commutator, herm_exp, max_abs, solve
from .model import ModelParams, build_hamiltonian
from .tolerances import TOL

__all__ = [
    "solve_epsilon",
    "auxiliary_residual",
    "StructureCoefficients",
    "structure_coefficients",
    "build_R",
    "build_R_inverse",
    "build_invariant",
    "build_metric",
    "InvariantFrame",
    "build_frame",
    "column_tail_mass",
    "guarded_indices",
    "PseudoHermiticityReport",
    "check_pseudo_hermiticity",
    "InvariantEquationReport",
    "check_invariant_equation",
    "similarity_identities_residual",
    "Eigenframe",
    "invariant_eigenframe",
]


def solve_epsilon(kind: AlgebraKind, p: ModelParams) -> float:
    """Principal real solution of the auxiliary condition.

    su(2):  eps = atanh(-2G/(omega+Omega)), broken when |2G/(omega+Omega)| >= 1.
    su(1,1): eps = atan(-2G/(omega+Omega)) in (-pi/2, pi/2).
    """
    if p.coupling == 0.0:
        return 0.0
    s = p.phase_rate + p.omega_drive
    if s == 0.0:
        raise SingularConditionError(
            "omega + Omega = 0 with G != 0: auxiliary condition has no solution"
        )
    ratio = -2.0 * p.coupling / s
    if kind is AlgebraKind.SU2:
        if abs(ratio) >= 1.0:
            raise BrokenRegimeError(
                f"|2G/(omega+Omega)| = {abs(ratio):.6g} >= 1: no real epsilon "
                "(su(2) construction broken)"
            )
        eps = math.atanh(ratio)
    else:
        eps = math.atan(ratio)
    resid = auxiliary_residual(kind, p, eps)
    if resid > TOL.aux_condition:
        raise ConsistencyError(f"auxiliary condition residual {resid:.3e} after solve")
    return eps


def auxiliary_residual(kind: AlgebraKind, p: ModelParams, eps: float) -> float:
    """|G cosh(alpha) + (omega+Omega) sinh(alpha)/sqrt(2D)| in real form."""
    s = p.phase_rate + p.omega_drive
    if kind is AlgebraKind.SU2:
        return abs(p.coupling * math.cosh(eps) + 0.5 * s * math.sinh(eps))
    return abs(p.coupling * math.cos(eps) + 0.5 * s * math.sin(eps))


class StructureCoefficients(NamedTuple):
    """Real-valued hyperbolic/trigonometric coefficients of the frame.

    cosh_alpha:       cosh(alpha)            = cosh eps | cos eps
    sinh_sq_half:     sinh^2(alpha/2)        = (cosh_alpha - 1)/2  (<= 0 for su(1,1))
    cosh_sq_half:     cosh^2(alpha/2)        = (cosh_alpha + 1)/2
    sqrt_d_sinh:      sqrt(D/2) sinh(alpha)  = sinh eps | -sin eps
    sinh_over_sqrt2d: sinh(alpha)/sqrt(2D)   = sinh(eps)/2 | sin(eps)/2
    """

    cosh_alpha: float
    sinh_sq_half: float
    cosh_sq_half: float
    sqrt_d_sinh: float
    sinh_over_sqrt2d: float


def structure_coefficients(kind: AlgebraKind, eps: float) -> StructureCoefficients:
    if kind is AlgebraKind.SU2:
        c, s = math.cosh(eps), math.sinh(eps)
        return StructureCoefficients(c, (c - 1) / 2, (c + 1) / 2, s, s / 2)
    c, s = math.cos(eps), math.sin(eps)
    return StructureCoefficients(c, (c - 1) / 2, (c + 1) / 2, -s, s / 2)


def _exponent(rep: Representation, p: ModelParams, eps: float, t: float) -> np.ndarray:
    """Hermitian exponent (eps/2)(K+ e^{i phi} + K- e^{-i phi})."""
    y = 0.5 * eps * rep.kplus * np.exp(1j * p.phi(t))
    return y + adjoint(y)


def build_R(rep: Representation, p: ModelParams, eps: float, t: float) -> np.ndarray:
    """Hermitian positive-definite map R(t) = exp[(eps/2)(K+ e^{i phi} + K- e^{-i phi})]."""
    return herm_exp(_exponent(rep, p, eps, t))


def build_R_inverse(rep: Representation, p: ModelParams, eps: float, t: float) -> np.ndarray:
    """R^{-1}(t); identical to build_R with eps -> -eps."""
    return herm_exp(_exponent(rep, p, eps, t), scale=-1.0)


def _ladder_combination(rep: Representation, p: ModelParams, t: float) -> np.ndarray:
    """K+ e^{i phi} - K- e^{-i phi} (the anti-Hermitian drive combination)."""
    ph = np.exp(1j * p.phi(t))
    return rep.kplus * ph - rep.kminus * np.conj(ph)


def closed_form_invariant(rep: Representation, p: ModelParams, eps: float, t: float) -> np.ndarray:
    """K0 cosh(alpha) - sinh(alpha)/sqrt(2D) (K+ e^{i phi} - K- e^{-i phi})."""
    sc = structure_coefficients(rep.kind, eps)
    return sc.cosh_alpha * rep.k0 - sc.sinh_over_sqrt2d * _ladder_combination(rep, p, t)


def build_invariant(rep: Representation, p: ModelParams, eps: float, t: float) -> np.ndarray:
    """I(t) = R(t) K0 R^{-1}(t), cross-checked against its closed form.

    Both routes are evaluated; they must agree to the pinned tolerance on the
    whole space (su(2)) or on the tail-guarded interior (truncated su(1,1)),
    otherwise the truncation is too small and a consistency error is raised.
    The similarity product is returned.
    """
    r = build_R(rep, p, eps, t)
    r_inv = build_R_inverse(rep, p, eps, t)
    sim = r @ rep.k0 @ r_inv
    closed = closed_form_invariant(rep, p, eps, t)
    g = guarded_indices(rep, r)
    dev = max_abs((sim - closed)[np.ix_(g, g)])
    if dev > TOL.invariant_consistency:
        raise ConsistencyError(
            f"similarity and closed-form invariants disagree by {dev:.3e} "
            "on the interior subspace (increase fock_dim or reduce |eps|)"
        )
    return sim


def build_metric(rep: Representation, p: ModelParams, eps: float, t: float) -> np.ndarray:
    """Metric eta(t) = R^{-2}(t): Hermitian and positive-definite."""
    return herm_exp(_exponent(rep, p, eps, t), scale=-2.0)


@dataclass(frozen=True)
class InvariantFrame:
    """Everything the invariant construction yields at one instant."""

    epsilon: float
    alpha: complex          # eps * sqrt(D/2): real for su(2), i*eps for su(1,1)
    t: float
    r_matrix: np.ndarray
    r_inverse: np.ndarray
    invariant_i: np.ndarray
    metric_eta: np.ndarray
    branch: str = "principal"


def build_frame(
    rep: Representation, p: ModelParams, t: float, eps: float | None = None
) -> InvariantFrame:
    """Solve the auxiliary condition (unless eps is given) and assemble the frame."""
    if eps is None:
        eps = solve_epsilon(rep.kind, p)
    alpha = complex(eps) if rep.kind is AlgebraKind.SU2 else 1j * eps
    return InvariantFrame(
        epsilon=eps,
        alpha=alpha,
        t=t,
        r_matrix=build_R(rep, p, eps, t),
        r_inverse=build_R_inverse(rep, p, eps, t),
        invariant_i=build_invariant(rep, p, eps, t),
        metric_eta=build_metric(rep, p, eps, t),
    )


def column_tail_mass(m: np.ndarray, n_tail: int = 4) -> np.ndarray:
    """Fraction of each column's squared norm in its last n_tail components."""
    total = (np.abs(m) ** 2).sum(axis=0)
    tail = (np.abs(m[-n_tail:, :]) ** 2).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(total > 0, tail / total, 1.0)
    return frac


def guarded_indices(
    rep: Representation, applied: np.ndarray, threshold: float = TOL.tail_mass
) -> np.ndarray:
    """Basis indices whose image under `applied` stays off the truncation boundary.

    `applied` is the operator the check in question actually applies to the
    basis states (R for the frame, R^2 = eta^{-1} for metric conjugation).
    su(2) has no boundary, so every index passes.
    """
    if rep.kind is AlgebraKind.SU2:
        return np.arange(rep.dim)
    return np.flatnonzero(column_tail_mass(applied) < threshold)


@dataclass(frozen=True)
class PseudoHermiticityReport:
    """Residuals of I+ = eta I eta^{-1} and of the reduction R^{-1} I R = K0."""

    pseudo_residual: float
    dyson_residual: float
    pseudo_interior: tuple[int, ...]
    dyson_interior: tuple[int, ...]


def check_pseudo_hermiticity(rep: Representation, frame: InvariantFrame) -> PseudoHermiticityReport:
    """Measure ||I+ - eta I eta^{-1}||_max and ||R^{-1} I R - K0||_max.

    The metric conjugation applies eta^{-1} = R^2 to the basis, so its
    interior is guarded with R^2; the reduction applies R and uses the
    R-guard.  Both residuals are max-norms over the guarded submatrix.
    """
    i_mat = frame.invariant_i
    eta = frame.metric_eta
    # eta I eta^{-1} without forming the inverse: solve Y eta = eta I.
    eta_i = eta @ i_mat
    conj = adjoint(solve(eta, adjoint(eta_i)))
    pseudo = adjoint(i_mat) - conj
    eta_inv = frame.r_matrix @ frame.r_matrix
    g_metric = guarded_indices(rep, eta_inv)
    g_frame = guarded_indices(rep, frame.r_matrix)
    dyson = frame.r_inverse @ i_mat @ frame.r_matrix - rep.k0
    return PseudoHermiticityReport(
        pseudo_residual=max_abs(pseudo[np.ix_(g_metric, g_metric)]),
        dyson_residual=max_abs(dyson[np.ix_(g_frame, g_frame)]),
        pseudo_interior=tuple(int(i) for i in g_metric),
        dyson_interior=tuple(int(i) for i in g_frame),
    )


@dataclass(frozen=True)
class InvariantEquationReport:
    """Central-difference residual of i dI/dt + [I, H] = 0."""

    residual: float
    h: float
    c_estimate: float     # residual / h^2, the observed second-order constant


def check_invariant_equation(
    rep: Representation, p: ModelParams, eps: float, t: float, h: float
) -> InvariantEquationReport:
    """Residual || i (I(t+h) - I(t-h))/(2h) + [I(t), H(t)] ||_max.

    Second-order accurate in h; the residual obeys C h^2 + floor with the
    reported constant, where the floor collects round-off amplified by 1/h.
    Measured on the R-guarded interior for truncated representations.
    """
    if not 1e-7 <= h <= 1e-3:
        raise ValueError(f"h = {h} outside [1e-7, 1e-3]")

    def inv(tt: float) -> np.ndarray:
        r = build_R(rep, p, eps, tt)
        return r @ rep.k0 @ herm_exp(_exponent(rep, p, eps, tt), scale=-1.0)

    i0 = inv(t)
    dmat = 1j * (inv(t + h) - inv(t - h)) / (2 * h) + commutator(i0, build_hamiltonian(rep, p, t))
    g = guarded_indices(rep, build_R(rep, p, eps, t))
    resid = max_abs(dmat[np.ix_(g, g)])
    return InvariantEquationReport(residual=resid, h=h, c_estimate=resid / h**2)


def _time_derivative(build, t: float, delta: float) -> np.ndarray:
    """Fourth-order central difference of a matrix-valued function of time."""
    return (
        -build(t + 2 * delta) + 8 * build(t + delta) - 8 * build(t - delta) + build(t - 2 * delta)
    ) / (12 * delta)


def similarity_identities_residual(
    rep: Representation, p: ModelParams, eps: float, t: float, delta: float = 1e-3
) -> np.ndarray:
    """Max-norm residuals of the four conjugation identities of R(t).

    In order: R K+ R^{-1}, R K- R^{-1}, R K0 R^{-1} and i R^{-1} dR/dt against
    their closed forms, with dR/dt taken by central finite difference (so the
    last check is independent of any analytic derivative).  Truncated
    representations are measured on the R-guarded interior.
    """
    sc = structure_coefficients(rep.kind, eps)
    r = build_R(rep, p, eps, t)
    r_inv = build_R_inverse(rep, p, eps, t)
    ph = np.exp(1j * p.phi(t))
    lad = _ladder_combination(rep, p, t)
    k0, kp, km = rep.k0, rep.kplus, rep.kminus

    rhs1 = kp * sc.cosh_sq_half - km * np.conj(ph) ** 2 * sc.sinh_sq_half \
        - k0 * np.conj(ph) * sc.sqrt_d_sinh
    rhs2 = km * sc.cosh_sq_half - kp * ph**2 * sc.sinh_sq_half + k0 * ph * sc.sqrt_d_sinh
    rhs3 = k0 * sc.cosh_alpha - sc.sinh_over_sqrt2d * lad
    rhs4 = -2 * p.phase_rate * sc.sinh_sq_half * k0 - p.phase_rate * sc.sinh_over_sqrt2d * lad

    dr = _time_derivative(lambda tt: build_R(rep, p, eps, tt), t, delta)
    g = guarded_indices(rep, r)
    gi = np.ix_(g, g)
    return np.array([
        max_abs((r @ kp @ r_inv - rhs1)[gi]),
        max_abs((r @ km @ r_inv - rhs2)[gi]),
        max_abs((r @ k0 @ r_inv - rhs3)[gi]),
        max_abs((1j * r_inv @ dr - rhs4)[gi]),
    ])


@dataclass(frozen=True)
class Eigenframe:
    """Tail-guarded eigenstates |n(t)> = R(t)|n> of the invariant."""

    indices: np.ndarray        # basis indices that passed the guard
    lambdas: np.ndarray        # K0 eigenvalues, aligned with indices
    states: np.ndarray         # columns R(t)|n>, aligned with indices
    excluded: tuple[int, ...]  # indices rejected by the tail-mass guard
    eigen_residuals: np.ndarray  # ||(I - lambda_n) |n(t)>|| / || |n(t)> ||
    gram_residual: float       # || <n|eta|m> - delta_nm ||_max over the frame


def invariant_eigenframe(
    rep: Representation, p: ModelParams, eps: float, t: float
) -> Eigenframe:
    """Eigenframe of I(t) with eta-orthonormality, by construction from R(t).

    Truncated su(1,1) states whose R-image leaks onto the boundary are
    excluded (returned in `excluded`) rather than reported with untrustworthy
    residuals.
    """
    r = build_R(rep, p, eps, t)
    i_mat = build_invariant(rep, p, eps, t)
    eta = build_metric(rep, p, eps, t)
    lam_all = np.array([v for v, _ in k0_eigenbasis(rep)])
    g = guarded_indices(rep, r)
    excluded = tuple(int(i) for i in np.setdiff1d(np.arange(rep.dim), g))
    states = r[:, g]
    lams = lam_all[g]
    resid = np.array([
        np.linalg.norm(i_mat @ states[:, k] - lams[k] * states[:, k])
        / np.linalg.norm(states[:, k])
        for k in range(len(g))
    ])
    gram = adjoint(states) @ eta @ states - np.eye(len(g))
    return Eigenframe(
        indices=np.asarray(g),
        lambdas=lams,
        states=states,
        excluded=excluded,
        eigen_residuals=resid,
        gram_residual=max_abs(gram),
    )
