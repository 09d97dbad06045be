import numpy as np
import pytest

from qinv import (
    ModelParams,
    extract_phase,
    propagate,
    solve_epsilon,
    stability_horizon,
    su11_boson_generators,
    su2_generators,
)
from qinv.invariant import build_R

# Reference drive used throughout: Omega = 1, G = 0.25, omega = 0.5 (period 4 pi).
REF = ModelParams(omega_drive=1.0, coupling=0.25, phase_rate=0.5)


@pytest.fixture(scope="session")
def ref_params():
    return REF


@pytest.fixture(scope="session")
def su2_half():
    return su2_generators(0.5)


@pytest.fixture(scope="session")
def su11_48():
    return su11_boson_generators(48)


def _eigenstate_trajectory(rep, p, method, n_steps, t_final, n_samples=257, track_n=0):
    eps = solve_epsilon(rep.kind, p)
    psi0 = build_R(rep, p, eps, 0.0)[:, track_n]
    t_grid = np.linspace(0.0, t_final, n_samples)
    traj = propagate(rep, p, psi0, t_grid, method=method,
                     step=t_final / n_steps, track_n=track_n)
    phase = extract_phase(traj, rep, p, eps, track_n)
    return traj.with_phase(phase)


@pytest.fixture(scope="session")
def su2_traj_magnus(su2_half, ref_params):
    """Reference su(2) run over one period, midpoint-exponential stepping."""
    return _eigenstate_trajectory(su2_half, ref_params, "magnus2", 16384, REF.period)


@pytest.fixture(scope="session")
def su2_traj_rk4(su2_half, ref_params):
    return _eigenstate_trajectory(su2_half, ref_params, "rk4", 4096, REF.period)


@pytest.fixture(scope="session")
def su11_window(su11_48, ref_params):
    """su(1,1) run over the largest window direct integration supports.

    The Fock truncation makes the full-period run numerically impossible
    (see dynamics.stability_horizon), so the shared trajectory stops at
    min(T/8, horizon).
    """
    t_w = min(REF.period / 8.0, stability_horizon(su11_48, ref_params))
    traj = _eigenstate_trajectory(su11_48, ref_params, "magnus2", 4096, t_w, n_samples=129)
    return t_w, traj
