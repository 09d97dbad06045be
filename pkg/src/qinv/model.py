"""The driven non-Hermitian Hamiltonian and its PT behaviour.

H(t) = Omega K0 + G (K+ e^{i phi(t)} - K- e^{-i phi(t)}) with phi(t) = omega t
is periodic but non-Hermitian for G != 0.  Two PT notions are implemented:
the algebraic substitution K0 -> -K0, K+- -> -K-+ with antilinear coefficient
conjugation (the natural map for spin systems), and bosonic parity (-1)^n
composed with complex conjugation and time reflection for the Fock
realization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraKind, Representation
from .errors import GeneratorSpanError
from .matkit import max_abs
from .tolerances import TOL

__all__ = [
    "ModelParams",
    "build_hamiltonian",
    "build_adjoint_hamiltonian",
    "pt_map",
    "PTSymmetryReport",
    "check_pt_symmetry",
]


@dataclass(frozen=True)
class ModelParams:
    """Drive parameters: H(t) = omega_drive K0 + coupling (K+ e^{i phi} - K- e^{-i phi}).

    phi(t) = phase_rate * t, so the drive is periodic with period
    2 pi / phase_rate whenever phase_rate != 0.
    """

    omega_drive: float   # Omega
    coupling: float      # G
    phase_rate: float    # omega in phi(t) = omega t

    def __post_init__(self):
        for name in ("omega_drive", "coupling", "phase_rate"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def period(self) -> float:
        if self.phase_rate == 0.0:
            raise ValueError("period undefined for phase_rate = 0")
        return 2.0 * math.pi / self.phase_rate

    def phi(self, t: float) -> float:
        return self.phase_rate * t


def build_hamiltonian(rep: Representation, p: ModelParams, t: float) -> np.ndarray:
    """H(t) = Omega K0 + G (K+ e^{i phi} - K- e^{-i phi})."""
    ph = np.exp(1j * p.phi(t))
    return p.omega_drive * rep.k0 + p.coupling * (rep.kplus * ph - rep.kminus * np.conj(ph))


def build_adjoint_hamiltonian(rep: Representation, p: ModelParams, t: float) -> np.ndarray:
    """H+(t) = Omega K0 - G (K+ e^{i phi} - K- e^{-i phi})."""
    ph = np.exp(1j * p.phi(t))
    return p.omega_drive * rep.k0 - p.coupling * (rep.kplus * ph - rep.kminus * np.conj(ph))


def _generator_components(rep: Representation, m: np.ndarray) -> np.ndarray:
    """Least-squares coefficients of m in span{1, K0, K+, K-}.

    Raises when the fit residual exceeds the span-fit gate, i.e. when m is
    not (numerically) a linear combination of the identity and the
    generators.
    """
    basis = [np.eye(rep.dim, dtype=complex), rep.k0, rep.kplus, rep.kminus]
    a = np.stack([b.ravel() for b in basis], axis=1)
    coeff, *_ = np.linalg.lstsq(a, m.ravel(), rcond=None)
    fit = (a @ coeff).reshape(rep.dim, rep.dim)
    resid = max_abs(m - fit)
    scale = max(max_abs(m), 1.0)
    if resid > TOL.span_fit * scale:
        raise GeneratorSpanError(
            f"matrix outside span{{1, K0, K+, K-}}: fit residual {resid:.3e}"
        )
    return coeff


def pt_map(rep: Representation, m: np.ndarray) -> np.ndarray:
    """Algebraic PT action on a generator-linear matrix.

    Substitutes K0 -> -K0, K+ -> -K-, K- -> -K+ and conjugates the expansion
    coefficients (the antilinear part), acting on m = c 1 + c0 K0 + c+ K+ + c- K-.
    An involution on its domain.
    """
    c_id, c0, cp, cm = _generator_components(rep, m)
    return (
        np.conj(c_id) * np.eye(rep.dim, dtype=complex)
        - np.conj(c0) * rep.k0
        - np.conj(cp) * rep.kminus
        - np.conj(cm) * rep.kplus
    )


@dataclass(frozen=True)
class PTSymmetryReport:
    """Residuals of the PT check over the sampled times."""

    residuals: tuple[float, ...]
    max_residual: float
    symmetric: bool
    checker: str          # 'generator-substitution' or 'parity-conjugation'
    tolerance: float


def check_pt_symmetry(
    rep: Representation, p: ModelParams, t_samples
) -> PTSymmetryReport:
    """Test whether H(t) is PT-symmetric, with the checker suited to the algebra.

    su(2): compares the algebraic substitution map of H(t) against H(t)
    itself at each sample (for Omega != 0 the K0 term flips sign and the
    residual sits at the 2|Omega| ||K0|| scale).

    su(1,1): parity is the Fock-space sign (-1)^n, time reversal is complex
    conjugation together with t -> -t; the check compares
    P conj(H(-t)) P against H(t), which the boson realization satisfies
    identically for every Omega, G, omega.
    """
    residuals = []
    if rep.kind is AlgebraKind.SU2:
        checker = "generator-substitution"
        for t in t_samples:
            h = build_hamiltonian(rep, p, t)
            residuals.append(max_abs(pt_map(rep, h) - h))
    else:
        checker = "parity-conjugation"
        parity = np.where(np.arange(rep.dim) % 2 == 0, 1.0, -1.0)
        for t in t_samples:
            h = build_hamiltonian(rep, p, t)
            h_reflected = build_hamiltonian(rep, p, -t)
            mapped = parity[:, None] * np.conj(h_reflected) * parity[None, :]
            residuals.append(max_abs(mapped - h))
    mx = max(residuals) if residuals else 0.0
    return PTSymmetryReport(
        residuals=tuple(residuals),
        max_residual=mx,
        symmetric=mx <= TOL.pt_verdict,
        checker=checker,
        tolerance=TOL.pt_verdict,
    )
