"""Dense complex linear-algebra kernel.

Thin, contract-checked wrappers around LAPACK via numpy/scipy: commutators,
Hermitian eigendecomposition, matrix exponentials and linear solves, with the
tolerances every caller and test agrees on pinned in :mod:`qinv.tolerances`.
All functions are pure and operate on square complex matrices.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    HermiticityError,
    NormRangeError,
    SingularMatrixError,
)
from .tolerances import TOL

__all__ = [
    "adjoint",
    "max_abs",
    "commutator",
    "herm_eig",
    "mat_exp",
    "herm_exp",
    "solve",
]


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def max_abs(a: np.ndarray) -> float:
    """Max-norm ||a||_max = max |a_ij| (0.0 for empty input)."""
    return float(np.abs(a).max()) if a.size else 0.0


def _require_square(a: np.ndarray, name: str = "matrix") -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[a, b] = ab - ba."""
    _require_square(a, "a")
    _require_square(b, "b")
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    return a @ b - b @ a


def herm_eig(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (w, v) with real eigenvalues w ascending and orthonormal
    eigenvector columns v, so that h v = v diag(w).  Rejects input whose
    anti-Hermitian part exceeds the relative gate.
    """
    _require_square(h)
    scale = max_abs(h)
    dev = max_abs(h - adjoint(h))
    if dev > TOL.herm_gate * scale:
        raise HermiticityError(
            f"input not Hermitian: ||h - h*||_max = {dev:.3e} "
            f"> {TOL.herm_gate:.0e} * ||h||_max = {TOL.herm_gate * scale:.3e}"
        )
    w, v = np.linalg.eigh(h)
    return w, v


def mat_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a fixed-order Pade core.

    Reliable (relative accuracy ~1e-12 or better) for ||a||_1 up to the
    pinned bound; larger inputs are refused rather than silently degraded.
    """
    _require_square(a)
    if not np.isfinite(a).all():
        raise ValueError("matrix exponential of non-finite input")
    norm1 = float(np.linalg.norm(a, 1)) if a.size else 0.0
    if norm1 > TOL.expm_norm_bound:
        raise NormRangeError(
            f"||a||_1 = {norm1:.3e} exceeds the reliable bound "
            f"{TOL.expm_norm_bound}; rescale the problem or reduce the exponent"
        )
    return scipy.linalg.expm(a)


def herm_exp(h: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """exp(scale * h) for Hermitian h via eigendecomposition.

    Exactly Hermitian output for real scale; agrees with :func:`mat_exp`
    to 1e-11 on its domain and shares its norm bound (on scale * h).
    """
    norm1 = float(np.linalg.norm(h, 1)) * abs(scale) if h.size else 0.0
    if norm1 > TOL.expm_norm_bound:
        raise NormRangeError(
            f"||scale * h||_1 = {norm1:.3e} exceeds the reliable bound "
            f"{TOL.expm_norm_bound}; rescale the problem or reduce the exponent"
        )
    w, v = herm_eig(h)
    out = (v * np.exp(scale * w)) @ adjoint(v)
    return 0.5 * (out + adjoint(out))


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b by partial-pivoting LU.

    Residual contract: ||a x - b||_max <= 1e-10 ||b||_max for well-conditioned
    systems.  Raises with the offending pivot magnitude when a is singular to
    working precision.
    """
    _require_square(a, "a")
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatchError(f"rhs rows {b.shape[0]} != system size {a.shape[0]}")
    lu, piv = scipy.linalg.lu_factor(a)
    diag = np.abs(np.diag(lu))
    floor = a.shape[0] * np.finfo(float).eps * (diag.max() if diag.size else 0.0)
    if diag.size == 0 or diag.min() <= floor:
        raise SingularMatrixError(
            f"matrix singular to working precision: smallest pivot "
            f"{diag.min() if diag.size else 0.0:.3e}"
        )
    return scipy.linalg.lu_solve((lu, piv), b)
