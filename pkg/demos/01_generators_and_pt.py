"""Generators of su(2) / su(1,1) and the PT behaviour of the driven Hamiltonian.

Builds both matrix realizations, checks the defining commutation relations
(including where the Fock truncation must fail), and runs the two PT
checkers: the algebraic substitution map for spin systems and bosonic
parity + conjugation + time reflection for the Fock realization.
"""

import numpy as np

from qinv import (
    ModelParams,
    check_commutation,
    check_pt_symmetry,
    su11_boson_generators,
    su2_generators,
)

p = ModelParams(omega_drive=1.0, coupling=0.25, phase_rate=0.5)
print(f"drive: Omega={p.omega_drive}, G={p.coupling}, omega={p.phase_rate}, "
      f"period T={p.period:.6f}")

print("\n--- commutation relations ---")
print(f"{'representation':<22} {'[K0,K+]-K+':>12} {'[K0,K-]+K-':>12} "
      f"{'[K+,K-]-DK0':>12}  boundary rows")
for rep in (su2_generators(0.5), su2_generators(1.0), su2_generators(5.0),
            su11_boson_generators(16), su11_boson_generators(48)):
    label = (f"su2 j={rep.j}" if rep.j is not None else f"su11 N={rep.fock_dim}")
    r = check_commutation(rep)
    print(f"{label:<22} {r.residual_k0_kplus:>12.2e} {r.residual_k0_kminus:>12.2e} "
          f"{r.residual_ladder:>12.2e}  {list(r.boundary_rows)}")
print("(su(1,1) ladder residuals are measured on the interior n <= N-3;")
print(" the defect sits exactly on the top two truncated states)")

print("\n--- PT symmetry of H(t) = Omega K0 + G(K+ e^{iwt} - K- e^{-iwt}) ---")
ts = np.linspace(0.0, p.period, 8)
for rep, label in ((su11_boson_generators(32), "su11 N=32"),
                   (su2_generators(0.5), "su2 j=1/2"),
                   (su2_generators(1.5), "su2 j=3/2")):
    rpt = check_pt_symmetry(rep, p, ts)
    verdict = "PT-symmetric" if rpt.symmetric else "NOT PT-symmetric"
    print(f"{label:<12} checker={rpt.checker:<24} max residual={rpt.max_residual:.3e}"
          f"  -> {verdict}")

p0 = ModelParams(0.0, 0.25, 0.5)
rpt = check_pt_symmetry(su2_generators(0.5), p0, ts)
print(f"su2 j=1/2 with Omega=0: residual={rpt.max_residual:.3e} "
      f"-> {'PT-symmetric' if rpt.symmetric else 'NOT PT-symmetric'} "
      "(the K0 term was the only obstruction)")
