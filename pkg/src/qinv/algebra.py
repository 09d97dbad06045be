"""Matrix representations of the su(2) and su(1,1) generators.

Both algebras share the ladder relations [K0, K+-] = +-K+- and
[K+, K-] = D K0 with D = +2 for su(2) and D = -2 for su(1,1).  su(2) is
realized by spin matrices (exact at every dimension); su(1,1) by the
single-mode boson quadratics K0 = (n + 1/2)/2, K+ = (a+)^2/2, K- = (a)^2/2,
truncated to a finite Fock space, where the ladder relation necessarily
fails on the top two number states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .matkit import adjoint, commutator, max_abs
from .tolerances import TOL

__all__ = [
    "AlgebraKind",
    "Representation",
    "CommutationReport",
    "su2_generators",
    "su11_boson_generators",
    "check_commutation",
    "k0_eigenbasis",
]


class AlgebraKind(Enum):
    SU2 = "su2"
    SU11 = "su11"

    @property
    def d_constant(self) -> int:
        """Structure constant D in [K+, K-] = D K0."""
        return 2 if self is AlgebraKind.SU2 else -2

    @classmethod
    def from_string(cls, s: str) -> "AlgebraKind":
        try:
            return cls(s.lower())
        except ValueError:
            raise DomainError(f"unknown algebra '{s}', expected 'su2' or 'su11'") from None


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Representation:
    """Concrete generator matrices for one algebra.

    k0 is Hermitian and diagonal; kminus is constructed as the exact
    conjugate transpose of kplus.  For su(1,1) the matrices act on the
    truncated number basis |0> ... |fock_dim-1>.
    """

    kind: AlgebraKind
    dim: int
    k0: np.ndarray
    kplus: np.ndarray
    kminus: np.ndarray
    j: float | None = None
    fock_dim: int | None = None

    @property
    def interior_dim(self) -> int:
        """Indices on which the ladder relation holds exactly."""
        return self.dim if self.kind is AlgebraKind.SU2 else self.dim - 2


def su2_generators(j: float) -> Representation:
    """Spin-j matrices with K0 = diag(j, j-1, ..., -j).

    The basis is ordered from m = +j (index 0) down to m = -j, and
    K+ carries the standard ladder elements sqrt(j(j+1) - m(m+1)).
    """
    two_j = 2 * j
    if two_j <= 0 or abs(two_j - round(two_j)) > 1e-12:
        raise DomainError(f"j must be a positive half-integer, got {j}")
    dim = int(round(two_j)) + 1
    m = j - np.arange(dim)
    k0 = np.diag(m).astype(complex)
    kplus = np.zeros((dim, dim), dtype=complex)
    for col in range(1, dim):
        mm = m[col]  # K+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>
        kplus[col - 1, col] = math.sqrt(j * (j + 1) - mm * (mm + 1))
    kminus = adjoint(kplus)
    return Representation(
        kind=AlgebraKind.SU2,
        dim=dim,
        k0=_freeze(k0),
        kplus=_freeze(kplus),
        kminus=_freeze(kminus),
        j=j,
    )


def su11_boson_generators(fock_dim: int) -> Representation:
    """Boson-pair realization on the truncated Fock basis.

    K0 = diag((n + 1/2)/2); K+ couples |n> -> |n+2> with element
    sqrt((n+1)(n+2))/2; K- is the exact adjoint.  The ladder relation
    [K+, K-] = -2 K0 holds on n <= fock_dim - 3 and fails on the top two
    states, which is why small truncations are refused.
    """
    if fock_dim < 6:
        raise DomainError(f"fock_dim must be >= 6 to retain an interior, got {fock_dim}")
    n = np.arange(fock_dim)
    k0 = np.diag(0.5 * (n + 0.5)).astype(complex)
    kplus = np.zeros((fock_dim, fock_dim), dtype=complex)
    for nn in range(fock_dim - 2):
        kplus[nn + 2, nn] = 0.5 * math.sqrt((nn + 1) * (nn + 2))
    kminus = adjoint(kplus)
    return Representation(
        kind=AlgebraKind.SU11,
        dim=fock_dim,
        k0=_freeze(k0),
        kplus=_freeze(kplus),
        kminus=_freeze(kminus),
        fock_dim=fock_dim,
    )


@dataclass(frozen=True)
class CommutationReport:
    """Max residuals of the defining relations, per relation."""

    residual_k0_kplus: float        # [K0, K+] - K+
    residual_k0_kminus: float       # [K0, K-] + K-
    residual_ladder: float          # [K+, K-] - D K0, applicable subspace
    residual_ladder_full: float     # same, whole (truncated) space
    boundary_rows: tuple[int, ...]  # rows where the full-space ladder residual lives
    tolerance: float
    passed: bool


def check_commutation(rep: Representation, tol: float = TOL.commutation) -> CommutationReport:
    """Evaluate the defining commutation relations of a representation.

    For su(1,1) the ladder relation is judged on the interior subspace
    n <= fock_dim - 3; the full-space residual and its row support are
    reported so the truncation boundary stays visible.
    """
    d = rep.kind.d_constant
    r1 = max_abs(commutator(rep.k0, rep.kplus) - rep.kplus)
    r2 = max_abs(commutator(rep.k0, rep.kminus) + rep.kminus)
    ladder = commutator(rep.kplus, rep.kminus) - d * rep.k0
    r3_full = max_abs(ladder)
    cut = rep.interior_dim
    r3 = max_abs(ladder[:cut, :cut])
    rows = tuple(sorted({int(i) for i in np.argwhere(np.abs(ladder) > tol)[:, 0]}))
    passed = max(r1, r2, r3) <= tol
    return CommutationReport(
        residual_k0_kplus=r1,
        residual_k0_kminus=r2,
        residual_ladder=r3,
        residual_ladder_full=r3_full,
        boundary_rows=rows,
        tolerance=tol,
        passed=passed,
    )


def k0_eigenbasis(rep: Representation) -> list[tuple[float, int]]:
    """(lambda_n, index) pairs of the diagonal K0, in basis order.

    su(2): lambda = m running j, j-1, ..., -j; su(1,1): lambda = (n + 1/2)/2
    on the Fock index n.  The eigenvectors are the coordinate unit vectors.
    """
    lam = np.real(np.diag(rep.k0))
    return [(float(v), i) for i, v in enumerate(lam)]
