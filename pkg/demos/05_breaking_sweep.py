"""Where the su(2) construction breaks: sweeping the coupling plane.

The auxiliary condition tanh(eps) = -2G/(omega+Omega) has a real solution
only for |2G/(omega+Omega)| < 1; this script maps the unbroken / broken
regions over (G, omega), locates the boundary |omega+Omega| = 2G on a line
scan, and contrasts with su(1,1), which never breaks.
"""

import numpy as np

from qinv import AlgebraKind, breaking_diagram

OMEGA = 1.0

print(f"=== su(2) regime map at Omega = {OMEGA} ===")
couplings = np.linspace(0.0, 1.5, 31)
rates = np.linspace(0.0, 2.0, 21)
pts = breaking_diagram(AlgebraKind.SU2, [OMEGA], couplings, rates)
by_key = {(pt.coupling, pt.phase_rate): pt for pt in pts}

print("G \\ omega " + " ".join(f"{w:4.1f}" for w in rates[::4]))
for g in couplings[::3]:
    row = "".join(
        "  . " if by_key[(g, w)].regime == "unbroken" else "  X "
        for w in rates[::4]
    )
    print(f"{g:8.2f}  {row}")
print("( . unbroken, X broken; boundary at 2G = |omega + Omega| )")

print("\n=== line scan G in [0, 1] at omega = 0.5 ===")
line = breaking_diagram(AlgebraKind.SU2, [OMEGA], np.linspace(0.0, 1.0, 9), [0.5])
for pt in line:
    eps_txt = f"eps = {pt.epsilon:+.6f}" if pt.regime == "unbroken" else "no real eps"
    print(f"G = {pt.coupling:5.3f}   {pt.regime:<8}   {eps_txt}")
print("flip occurs exactly at G = 0.75 = |omega + Omega| / 2")

print("\n=== su(1,1) on the same grid ===")
pts11 = breaking_diagram(AlgebraKind.SU11, [OMEGA], couplings, rates)
broken = [pt for pt in pts11 if pt.regime != "unbroken"]
print(f"broken points: {len(broken)} of {len(pts11)} "
      "(tan(eps) = -2G/(omega+Omega) always has a real solution)")
