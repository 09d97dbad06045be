"""Constructing the pseudo-Hermitian invariant and verifying its identities.

Solves the auxiliary condition for epsilon, builds R(t), I(t) = R K0 R^{-1}
and the metric eta = R^{-2}, then measures every defining property: the
invariant equation i dI/dt + [I, H] = 0, the four conjugation identities,
pseudo-Hermiticity, the reduction to K0, and eta-orthonormality of the
eigenframe.
"""

import numpy as np

from qinv import (
    ModelParams,
    build_frame,
    check_invariant_equation,
    check_pseudo_hermiticity,
    invariant_eigenframe,
    similarity_identities_residual,
    solve_epsilon,
    su11_boson_generators,
    su2_generators,
)
from qinv.invariant import auxiliary_residual
from qinv.matkit import adjoint, herm_eig, max_abs

p = ModelParams(omega_drive=1.0, coupling=0.25, phase_rate=0.5)

for rep, label in ((su2_generators(0.5), "su2 j=1/2"),
                   (su11_boson_generators(48), "su11 N=48")):
    eps = solve_epsilon(rep.kind, p)
    print(f"\n=== {label} ===")
    print(f"epsilon = {eps:.15f}   auxiliary-condition residual = "
          f"{auxiliary_residual(rep.kind, p, eps):.2e}")

    t = 0.7
    frame = build_frame(rep, p, t)
    print(f"alpha = {frame.alpha}   (real for su(2), imaginary for su(1,1))")
    print(f"||R - R+||            = {max_abs(frame.r_matrix - adjoint(frame.r_matrix)):.2e}")
    print(f"||R R^-1 - 1||        = "
          f"{max_abs(frame.r_matrix @ frame.r_inverse - np.eye(rep.dim)):.2e}")
    print(f"||I - I+||            = "
          f"{max_abs(frame.invariant_i - adjoint(frame.invariant_i)):.3f}"
          "   <- the invariant is manifestly non-Hermitian")

    ph = check_pseudo_hermiticity(rep, frame)
    print(f"||I+ - eta I eta^-1|| = {ph.pseudo_residual:.2e}   "
          f"(interior: {len(ph.pseudo_interior)} states)")
    print(f"||R^-1 I R - K0||     = {ph.dyson_residual:.2e}   "
          f"(interior: {len(ph.dyson_interior)} states)")
    print(f"smallest eigenvalue of eta = {herm_eig(frame.metric_eta)[0][0]:.3e} > 0")

    eq = check_invariant_equation(rep, p, eps, t, h=1e-5 if rep.j else 5e-4)
    print(f"invariant equation residual (h={eq.h:g}) = {eq.residual:.2e}")

    sim = similarity_identities_residual(rep, p, eps, t)
    print("conjugation identities (K+, K-, K0, i R^-1 dR/dt):",
          " ".join(f"{v:.1e}" for v in sim))

    ef = invariant_eigenframe(rep, p, eps, t)
    print(f"eigenframe: {len(ef.indices)} states kept, {len(ef.excluded)} excluded "
          f"by the truncation guard")
    print(f"  worst eigen-residual = {ef.eigen_residuals.max():.2e}, "
          f"Gram - 1 = {ef.gram_residual:.2e}")
    print(f"  spectrum head: {ef.lambdas[:5]}")
