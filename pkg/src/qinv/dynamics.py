"""Direct integration of the non-Hermitian Schroedinger equation.

Two independent steppers for i d/dt psi = H(t) psi: classical fourth-order
Runge-Kutta and second-order midpoint-exponential (Magnus) stepping
psi(t+h) = exp(-i h H(t+h/2)) psi(t).  Along a trajectory the eta-norm
<psi|eta(t)|psi> is recorded (it is conserved by the exact flow even though
the ordinary 2-norm is not), together with the invariant eigen-residual of a
tracked eigenstate, and the accumulated phase can be read off against the
closed forms.

Truncated su(1,1) spaces carry a hard numerical limit: the truncated
Hamiltonian family acquires spurious complex eigenvalues whose imaginary
parts grow with the cut, so round-off injected into boundary-localized modes
is amplified exponentially.  :func:`stability_horizon` bounds the time over
which direct double-precision integration of a bounded solution remains
trustworthy; for su(2) (no truncation, real spectrum in the unbroken regime)
the horizon is unlimited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .algebra import Representation, k0_eigenbasis
from .errors import AccuracyError, DivergenceError, FrameLeakageError, MetricError
from .invariant import build_invariant, build_metric, build_R, build_R_inverse, solve_epsilon
from .matkit import mat_exp
from .model import ModelParams, build_hamiltonian
from .phases import lr_phase
from .tolerances import TOL

__all__ = [
    "Trajectory",
    "propagate",
    "analytic_state",
    "frame_coefficients",
    "extract_phase",
    "eta_norm",
    "stability_horizon",
]


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the Schroedinger equation.

    invariant_eigen_residuals is present when an eigenstate index was
    tracked; extracted_phase is attached by :func:`extract_phase` callers.
    """

    times: np.ndarray
    states: np.ndarray                 # shape (len(times), dim)
    eta_norms: np.ndarray
    invariant_eigen_residuals: np.ndarray | None = None
    extracted_phase: np.ndarray | None = None

    def with_phase(self, phase: np.ndarray) -> "Trajectory":
        return replace(self, extracted_phase=phase)


def _hamiltonian_factory(rep: Representation, p: ModelParams):
    """Closure assembling H(t) from precomputed pieces."""
    base = p.omega_drive * rep.k0
    kp = p.coupling * rep.kplus
    km = p.coupling * rep.kminus

    def h_of_t(t: float) -> np.ndarray:
        ph = np.exp(1j * p.phase_rate * t)
        return base + kp * ph - km * np.conj(ph)

    return h_of_t


def _expm_apply(h_mat: np.ndarray, psi: np.ndarray, factor: complex) -> np.ndarray:
    """exp(factor * h_mat) @ psi by a machine-precision Taylor sum.

    Valid for small ||factor * h_mat|| (the stepper regime); falls back to the
    Pade exponential when the scaled norm is not small.
    """
    a_norm = abs(factor) * float(np.linalg.norm(h_mat, 1))
    if a_norm > 1.0:
        return mat_exp(factor * h_mat) @ psi
    out = psi.copy()
    term = psi.copy()
    for k in range(1, 60):
        term = (factor / k) * (h_mat @ term)
        out = out + term
        if np.linalg.norm(term) <= 1e-18 * np.linalg.norm(out):
            break
    return out


def _rk4_step(f, t: float, psi: np.ndarray, h: float) -> np.ndarray:
    k1 = f(t, psi)
    k2 = f(t + 0.5 * h, psi + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, psi + 0.5 * h * k2)
    k4 = f(t + h, psi + h * k3)
    return psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def propagate(
    rep: Representation,
    p: ModelParams,
    psi0: np.ndarray,
    t_grid,
    method: str = "magnus2",
    step: float | None = None,
    track_n: int | None = None,
    error_check_stride: int = 64,
) -> Trajectory:
    """Integrate i d/dt psi = H(t) psi over t_grid and sample observables.

    `step` bounds the inner substep (default: the grid spacing); every
    `error_check_stride`-th substep is re-done as two half steps and the
    difference is required to stay below the per-step accuracy budget.
    Records <psi|eta|psi> at each grid time; when track_n is given, also the
    relative residual ||(I(t) - lambda_n) psi|| / ||psi||.

    Raises AccuracyError (step too large), DivergenceError (norm growth no
    bounded solution can produce, e.g. beyond a truncation's stability
    horizon), or FrameLeakageError via downstream extraction.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing with >= 2 points")
    psi0 = np.asarray(psi0, dtype=complex)
    norm0 = np.linalg.norm(psi0)
    if norm0 == 0.0 or not np.isfinite(norm0):
        raise ValueError("psi0 must be a nonzero finite vector")
    if method not in ("rk4", "magnus2"):
        raise ValueError(f"unknown method '{method}'")
    if step is not None and step <= 0:
        raise ValueError("step must be positive")

    eps = solve_epsilon(rep.kind, p)
    h_of_t = _hamiltonian_factory(rep, p)

    def f(t, y):
        return -1j * (h_of_t(t) @ y)

    def substep(t, y, h):
        if method == "rk4":
            return _rk4_step(f, t, y, h)
        hm = h_of_t(t + 0.5 * h)
        return _expm_apply(hm, y, -1j * h)

    lam = float(k0_eigenbasis(rep)[track_n][0]) if track_n is not None else None

    states = np.empty((len(t_grid), rep.dim), dtype=complex)
    etas = np.empty(len(t_grid))
    residuals = np.empty(len(t_grid)) if track_n is not None else None

    def record(k, t, y):
        states[k] = y
        etas[k] = eta_norm(rep, p, eps, t, y)
        if residuals is not None:
            i_mat = build_invariant(rep, p, eps, t)
            residuals[k] = float(
                np.linalg.norm(i_mat @ y - lam * y) / np.linalg.norm(y)
            )

    psi = psi0.copy()
    record(0, t_grid[0], psi)
    count = 0
    for k in range(len(t_grid) - 1):
        t0, t1 = t_grid[k], t_grid[k + 1]
        span = t1 - t0
        n_sub = max(1, int(math.ceil(span / step))) if step is not None else 1
        h = span / n_sub
        t = t0
        for _ in range(n_sub):
            if count % error_check_stride == 0:
                full = substep(t, psi, h)
                half = substep(t + 0.5 * h, substep(t, psi, 0.5 * h), 0.5 * h)
                est = float(np.abs(full - half).max())
                if est > TOL.local_error:
                    raise AccuracyError(
                        f"local error estimate {est:.3e} > {TOL.local_error:.0e} "
                        f"at t = {t:.6g} (reduce step)"
                    )
                psi = half
            else:
                psi = substep(t, psi, h)
            t += h
            count += 1
            norm = np.linalg.norm(psi)
            if not np.isfinite(norm) or norm > TOL.divergence_growth * norm0:
                raise DivergenceError(
                    f"state norm grew by {norm / norm0:.3e} at t = {t:.6g}; "
                    "for truncated su(1,1) runs stay within stability_horizon()"
                )
        record(k + 1, t1, psi)

    return Trajectory(
        times=t_grid.copy(),
        states=states,
        eta_norms=etas,
        invariant_eigen_residuals=residuals,
    )


def analytic_state(
    rep: Representation, p: ModelParams, eps: float, n: int, t: float
) -> tuple[np.ndarray, float]:
    """Exact solution e^{i alpha_n(t)} R(t)|n> and its total phase."""
    lam = float(k0_eigenbasis(rep)[n][0])
    phase = lr_phase(rep.kind, p, eps, lam, t)
    state = np.exp(1j * phase) * build_R(rep, p, eps, t)[:, n]
    return state, phase


def frame_coefficients(
    traj: Trajectory, rep: Representation, p: ModelParams, eps: float, n: int
) -> np.ndarray:
    """c_n(t) = <n| R^{-1}(t) |psi(t)> along the trajectory."""
    out = np.empty(len(traj.times), dtype=complex)
    for k, t in enumerate(traj.times):
        r_inv = build_R_inverse(rep, p, eps, t)
        out[k] = (r_inv @ traj.states[k])[n]
    return out


def extract_phase(
    traj: Trajectory, rep: Representation, p: ModelParams, eps: float, n: int
) -> np.ndarray:
    """Unwrapped arg c_n(t) for a trajectory started in eigenstate n.

    The solution must stay in the tracked eigenstate: |c_n| drifting from 1
    beyond the leakage threshold aborts with FrameLeakageError (an integration
    or truncation failure, not a phase).
    """
    c = frame_coefficients(traj, rep, p, eps, n)
    drift = float(np.abs(np.abs(c) - 1.0).max())
    if drift > TOL.leakage_error:
        raise FrameLeakageError(
            f"| |c_n| - 1 | reached {drift:.3e} (> {TOL.leakage_error:.0e}): "
            "state left the tracked invariant eigenstate"
        )
    return np.unwrap(np.angle(c))


def eta_norm(
    rep: Representation, p: ModelParams, eps: float, t: float, psi: np.ndarray
) -> float:
    """<psi| eta(t) |psi> as a real number.

    The imaginary part must vanish to round-off (eta is Hermitian); anything
    larger indicates a metric bug and raises.
    """
    eta = build_metric(rep, p, eps, t)
    val = complex(np.vdot(psi, eta @ psi))
    if abs(val.imag) > TOL.eta_imag * max(abs(val.real), 1e-300):
        raise MetricError(f"eta-norm has imaginary part {val.imag:.3e}")
    return val.real


def stability_horizon(
    rep: Representation, p: ModelParams, tol: float = TOL.state_match, safety: float = 0.8
) -> float:
    """Trustworthy integration time for a bounded solution on this space.

    In the frame co-rotating with the drive the generator is the constant
    matrix H(0) + omega K0, whose spurious imaginary eigenvalue sigma (an
    artifact of Fock truncation) amplifies round-off like e^{sigma t}.  The
    horizon keeps eps_mach * e^{sigma t} below tol.  Effectively unbounded
    (1e12) when the spectrum is real to round-off, e.g. su(2) away from the
    broken regime.
    """
    h_rot = build_hamiltonian(rep, p, 0.0) + p.phase_rate * rep.k0
    sigma = float(np.abs(np.linalg.eigvals(h_rot).imag).max())
    if sigma < 1e-10:
        return 1e12
    return safety * math.log(tol / np.finfo(float).eps) / sigma
