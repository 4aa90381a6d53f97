"""Linear-matrix-inequality spectrahedra over traceless hermitian bases.

A spectrahedron here is the set S = {x : I_d + sum_i x_i A_i >= 0} for
an ordered, pairwise HS-orthogonal family of traceless hermitian
matrices A_1..A_m.  The origin is always strictly interior.  The
classic 3x3 cubic-surface example is provided as a built-in.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .hermitian import eigvals_hermitian, hs_inner, matrix_from_json, matrix_to_json
from .local_space import LocalSpaceBasis

__all__ = [
    "PointClass",
    "LmiSpectrahedron",
    "from_local_space",
    "cayley_cubic",
    "assemble",
    "coordinates_of",
    "classify_point",
    "duality_residual",
    "spectrahedron_to_json",
    "spectrahedron_from_json",
]

#: boundary tolerance, one order above the solver gap tolerance
BOUNDARY_TOL = 1e-7


class PointClass(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True, eq=False)
class LmiSpectrahedron:
    """Traceless LMI basis defining {x : I_d + sum x_i A_i >= 0}."""

    d: int
    basis: np.ndarray        # shape (m, d, d), traceless hermitian, HS-orthogonal
    norms: np.ndarray        # shape (m,), <A_i, A_i>
    labels: tuple = ()
    name: str = ""

    @property
    def m(self) -> int:
        return self.basis.shape[0]

    @property
    def origin_matrix(self) -> np.ndarray:
        """The constant term of the pencil: the identity, making the
        origin a strictly interior point."""
        return np.eye(self.d, dtype=complex)


def from_local_space(basis: LocalSpaceBasis, name: str = "") -> LmiSpectrahedron:
    """Spectrahedron of the traceless part of a local-Hamiltonian space.

    Drops the identity element (element 0) of the basis.
    """
    if basis.labels[0] != "I" * basis.n_units:
        raise ValueError("basis element 0 must be the identity word")
    elements = basis.elements[1:]
    traces = np.einsum("kii->k", elements)
    if np.abs(traces).max(initial=0.0) > 0:
        raise ValueError("non-identity basis elements must be traceless")
    return LmiSpectrahedron(
        d=basis.d,
        basis=elements.copy(),
        norms=np.full(elements.shape[0], float(basis.d)),
        labels=tuple(basis.labels[1:]),
        name=name,
    )


def cayley_cubic() -> LmiSpectrahedron:
    """The 3x3 spectrahedron with unit diagonal and free off-diagonal
    slots x, y, z; its boundary is a cubic surface and it contains the
    one-skeleton of a tetrahedron with rank-one vertices."""
    slots = [(0, 1), (0, 2), (1, 2)]
    mats = []
    for i, j in slots:
        a = np.zeros((3, 3), dtype=complex)
        a[i, j] = 1.0
        a[j, i] = 1.0
        mats.append(a)
    return LmiSpectrahedron(
        d=3,
        basis=np.stack(mats),
        norms=np.full(3, 2.0),
        labels=("x", "y", "z"),
        name="cayley",
    )


def assemble(spec: LmiSpectrahedron, x) -> np.ndarray:
    """I_d + sum_i x_i A_i."""
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.m,):
        raise ValueError(f"expected {spec.m} coordinates, got shape {x.shape}")
    return np.eye(spec.d, dtype=complex) + np.einsum("i,iab->ab", x, spec.basis)


def coordinates_of(spec: LmiSpectrahedron, a) -> np.ndarray:
    """Coefficients of a (traceless part of a) matrix in the LMI basis:
    x_i = <A_i, a> / <A_i, A_i>."""
    a = np.asarray(a, dtype=complex)
    return np.real(np.einsum("kij,ij->k", spec.basis.conj(), a)) / spec.norms


def classify_point(spec: LmiSpectrahedron, x, tol: float = BOUNDARY_TOL) -> PointClass:
    lam_min = eigvals_hermitian(assemble(spec, x))[0]
    if lam_min > tol:
        return PointClass.INTERIOR
    if lam_min < -tol:
        return PointClass.OUTSIDE
    return PointClass.BOUNDARY


def duality_residual(spec: LmiSpectrahedron, x, rho) -> float:
    """1 + <A(x), rho> = Tr((I + A(x)) rho) for a feasible point and a state.

    Nonnegative (up to 1e-8) for every feasible x and density matrix rho;
    zero exactly at conjugate-face contact.
    """
    if classify_point(spec, x) is PointClass.OUTSIDE:
        raise ValueError("infeasible point: x lies outside the spectrahedron")
    rho = np.asarray(rho, dtype=complex)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-8:
        raise ValueError(f"state must have unit trace, got {tr}")
    lam_min = eigvals_hermitian(rho)[0]
    if lam_min < -1e-8:
        raise ValueError(f"state must be positive semidefinite, min eigenvalue {lam_min:.3e}")
    return hs_inner(assemble(spec, x), rho)


def spectrahedron_to_json(spec: LmiSpectrahedron) -> dict:
    return {
        "d": spec.d,
        "m": spec.m,
        "basis": [matrix_to_json(a) for a in spec.basis],
    }


def spectrahedron_from_json(obj: dict) -> LmiSpectrahedron:
    mats = np.stack([matrix_from_json(b) for b in obj["basis"]])
    if mats.shape[0] != obj["m"] or mats.shape[1] != obj["d"]:
        raise ValueError("inconsistent spectrahedron dimensions")
    norms = np.array([hs_inner(a, a) for a in mats])
    return LmiSpectrahedron(d=int(obj["d"]), basis=mats, norms=norms)
