"""Exact solution vs direct integration, and what the metric conserves.

Propagates an invariant eigenstate and a two-state superposition over one
driving period with both integrators, compares against the analytic states
e^{i alpha_n(t)} R(t)|n>, and plots the ordinary 2-norm (oscillates: H is
non-Hermitian) against the eta-norm (flat).  Also shows the truncation
stability horizon that limits direct su(1,1) runs.

Writes exact_solution_check.png next to this script.
"""

import math
from pathlib import Path

import numpy as np

from qinv import (
    ModelParams,
    analytic_state,
    extract_phase,
    propagate,
    solve_epsilon,
    stability_horizon,
    su11_boson_generators,
    su2_generators,
)
from qinv.invariant import build_R

p = ModelParams(omega_drive=1.0, coupling=0.25, phase_rate=0.5)
T = p.period

print("=== su(2) j=1/2, one full period ===")
rep = su2_generators(0.5)
eps = solve_epsilon(rep.kind, p)
psi0 = build_R(rep, p, eps, 0.0)[:, 0]
t_grid = np.linspace(0.0, T, 257)

for method, n_steps in (("magnus2", 16384), ("rk4", 4096)):
    traj = propagate(rep, p, psi0, t_grid, method=method, step=T / n_steps, track_n=0)
    state, phase = analytic_state(rep, p, eps, 0, T)
    num_phase = extract_phase(traj, rep, p, eps, 0)
    print(f"{method:<8} steps={n_steps:<6} "
          f"|psi - psi_exact| = {np.abs(traj.states[-1] - state).max():.2e}   "
          f"eta drift = {np.abs(traj.eta_norms - traj.eta_norms[0]).max():.2e}   "
          f"phase err = {abs(num_phase[-1] - phase):.2e}")

print("\n=== superposition (R|0> + R|1>)/sqrt(2): norms along the trajectory ===")
r0 = build_R(rep, p, eps, 0.0)
sup0 = (r0[:, 0] + r0[:, 1]) / math.sqrt(2.0)
traj_sup = propagate(rep, p, sup0, t_grid, method="rk4", step=T / 4096)
two_norm = np.linalg.norm(traj_sup.states, axis=1)
print(f"2-norm range  : [{two_norm.min():.6f}, {two_norm.max():.6f}]  "
      "<- visibly oscillates")
print(f"eta-norm drift: {np.abs(traj_sup.eta_norms - traj_sup.eta_norms[0]).max():.2e}  "
      "<- conserved")

print("\n=== su(1,1) N=48: the truncation stability horizon ===")
rep11 = su11_boson_generators(48)
eps11 = solve_epsilon(rep11.kind, p)
horizon = stability_horizon(rep11, p)
print(f"horizon = {horizon:.3f} time units ({horizon / T:.3f} periods); beyond it the")
print("spurious complex spectrum of the truncated generator amplifies round-off.")
t_w = min(T / 8, horizon)
grid11 = np.linspace(0.0, t_w, 129)
psi11 = build_R(rep11, p, eps11, 0.0)[:, 0]
traj11 = propagate(rep11, p, psi11, grid11, method="magnus2", step=t_w / 4096, track_n=0)
st11, ph11 = analytic_state(rep11, p, eps11, 0, t_w)
print(f"window run to t={t_w:.3f}: |psi - psi_exact| = "
      f"{np.abs(traj11.states[-1] - st11).max():.2e}, "
      f"phase err = {abs(extract_phase(traj11, rep11, p, eps11, 0)[-1] - ph11):.2e}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 3.6))
    axes[0].plot(t_grid / T, two_norm, label=r"$\||\psi\||_2$ (superposition)")
    axes[0].plot(t_grid / T, np.sqrt(traj_sup.eta_norms), label=r"$\sqrt{\langle\psi|\eta|\psi\rangle}$")
    axes[0].set_xlabel("t / T")
    axes[0].set_title("non-Hermitian drive: 2-norm vs metric norm")
    axes[0].legend()

    axes[1].semilogy(t_grid / T, traj_sup.eta_norms - traj_sup.eta_norms[0] + 1e-18)
    axes[1].set_xlabel("t / T")
    axes[1].set_title("eta-norm drift (integration error only)")

    out = Path(__file__).with_name("exact_solution_check.png")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    print(f"\nfigure written to {out}")
except ImportError:
    print("\n(matplotlib not installed; skipping the figure)")
