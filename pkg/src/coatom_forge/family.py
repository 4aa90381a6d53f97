"""The two-parameter family M(a, t) of rank-five coatom witnesses.

M(a, t) is a positive semidefinite two-local three-qubit Hamiltonian of
rank three (for generic parameters) whose kernel projector is a rank-
five coatom of the ground-projector lattice; M(a, t) - I is then an
extreme point of the dual spectrahedron.  The matrix is built both as
an explicit block matrix and as a tensor-word expansion, and the two
forms are checked against each other on every evaluation.

Parameters range over 0 <= a <= 2 and 0 <= t < pi with eta = 4 - a^2.
The special slices a in {0, 2}, t in {0, pi/2} change the rank and the
extremality status and are reported separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hermitian import eigvals_hermitian, ground_projector, numerical_rank
from .local_space import LocalSpaceBasis, model_space
from .search import CoatomCertificate, Verdict, coatom_certificate, kernel_projector

__all__ = [
    "FamilyPoint",
    "FamilyCertRow",
    "SpecialValueRow",
    "A_GRID_DEFAULT",
    "T_GRID_DEFAULT",
    "m_family",
    "family_kernel_basis",
    "certify_family",
    "special_values_report",
]

#: default parameter grids; chosen away from all special values
A_GRID_DEFAULT = (0.2, 0.6, 1.0, 1.4, 1.8)
T_GRID_DEFAULT = (
    math.pi / 8,
    math.pi / 4,
    3 * math.pi / 8,
    5 * math.pi / 8,
    3 * math.pi / 4,
)

_SPECIAL_EPS = 1e-9


@dataclass(frozen=True)
class FamilyPoint:
    a: float
    t: float
    eta: float
    dense: np.ndarray          # 8x8 hermitian, PSD, trace 8
    pauli_coords: np.ndarray   # coordinates in the 37-element two-local basis


def _pauli_coefficients(a: float, t: float) -> dict:
    eta = 4.0 - a * a
    sq = math.sqrt(eta)
    s2t = math.sin(2 * t)
    c2t = math.cos(2 * t)
    st2 = math.sin(t) ** 2
    ct2 = math.cos(t) ** 2
    return {
        "III": 1.0,
        "IIZ": a * a / 4.0,
        "IZI": a * a * st2 / 4.0,
        "ZII": a * a * ct2 / 4.0,
        "IZX": sq * s2t / 2.0,
        "ZIX": -sq * s2t / 2.0,
        "IZZ": a * a / 8.0 - (8.0 - a * a) * c2t / 8.0,
        "ZIZ": a * a / 8.0 + (8.0 - a * a) * c2t / 8.0,
        "ZZI": -eta / 4.0,
    }


def m_family(a: float, t: float) -> FamilyPoint:
    """Evaluate the family at (a, t), verifying the block-matrix and
    tensor-word forms against each other to 1e-10."""
    a = float(a)
    t = float(t)
    if not 0.0 <= a <= 2.0:
        raise ValueError(f"parameter a={a} out of range [0, 2]")
    if not 0.0 <= t < math.pi:
        raise ValueError(f"parameter t={t} out of range [0, pi)")
    eta = 4.0 - a * a
    sq = math.sqrt(eta)
    s2t = math.sin(2 * t)
    st2 = math.sin(t) ** 2
    ct2 = math.cos(t) ** 2

    dense = np.zeros((8, 8), dtype=complex)
    dense[0, 0] = a * a
    dense[2, 2] = 4.0 * ct2
    dense[3, 3] = eta * st2
    dense[2, 3] = dense[3, 2] = -sq * s2t
    dense[4, 4] = 4.0 * st2
    dense[5, 5] = eta * ct2
    dense[4, 5] = dense[5, 4] = sq * s2t

    basis = model_space("c3-qubit")
    coeffs = _pauli_coefficients(a, t)
    coords = np.zeros(basis.dim)
    for label, value in coeffs.items():
        coords[basis.labels.index(label)] = value
    assembled = basis.assemble(coords)
    if np.abs(assembled - dense).max() > 1e-10:
        raise AssertionError("block form and tensor-word form of the family disagree")
    return FamilyPoint(a=a, t=t, eta=eta, dense=dense, pauli_coords=coords)


def _is_special(a: float, t: float) -> bool:
    return (
        abs(a) < _SPECIAL_EPS
        or abs(a - 2.0) < _SPECIAL_EPS
        or abs(t) < _SPECIAL_EPS
        or abs(t - math.pi / 2) < _SPECIAL_EPS
    )


def family_kernel_basis(a: float, t: float) -> list:
    """The five kernel vectors at generic parameters, normalized.

    Three are configuration basis vectors (001, 110, 111); the other two
    mix the 01x and 10x blocks.  Special parameter values change the
    kernel dimension and are rejected.
    """
    if _is_special(a, t):
        raise ValueError(
            "kernel basis requires generic parameters: a not in {0, 2}, t not in {0, pi/2}"
        )
    point = m_family(a, t)
    eta, s2t = point.eta, math.sin(2 * t)
    e = np.eye(8, dtype=complex)
    psi1 = math.sqrt(eta) * s2t * e[:, 2] + 4.0 * math.cos(t) ** 2 * e[:, 3]
    psi2 = math.sqrt(eta) * s2t * e[:, 4] - 4.0 * math.sin(t) ** 2 * e[:, 5]
    vectors = [e[:, 1], e[:, 6], e[:, 7], psi1 / np.linalg.norm(psi1), psi2 / np.linalg.norm(psi2)]
    for v in vectors:
        if np.linalg.norm(point.dense @ v) > 1e-10:
            raise AssertionError("stated kernel vector is not annihilated")
    return vectors


@dataclass(frozen=True)
class FamilyCertRow:
    a: float
    t: float
    rank: int
    projector_rank: int
    certificate: CoatomCertificate
    generator_residual: float  # collinearity mismatch of certificate generator vs M(a, t)
    min_eigenvalue: float

    @property
    def verdict(self) -> Verdict:
        return self.certificate.verdict


def certify_family(
    a_grid=A_GRID_DEFAULT, t_grid=T_GRID_DEFAULT, basis: LocalSpaceBasis | None = None
) -> list:
    """Certificate table over a parameter grid, ordered by (a, t).

    At generic points the intersection space is the line spanned by
    M(a, t) itself; ``generator_residual`` records how far the computed
    generator is from collinear with it.
    """
    basis = basis or model_space("c3-qubit")
    rows = []
    for a in sorted(a_grid):
        for t in sorted(t_grid):
            point = m_family(a, t)
            rank = numerical_rank(point.dense)
            proj = kernel_projector(point.dense)
            cert = coatom_certificate(proj, basis)
            residual = math.inf
            gen = cert.generator_coordinates
            if gen is None and cert.nullspace_dimension == 1:
                gen = basis.coordinates(cert.intersection_basis[0])
            if gen is not None:
                ref = point.pauli_coords / np.linalg.norm(point.pauli_coords)
                g = gen / np.linalg.norm(gen)
                residual = float(min(np.abs(g - ref).max(), np.abs(g + ref).max()))
            rows.append(
                FamilyCertRow(
                    a=a,
                    t=t,
                    rank=rank,
                    projector_rank=proj.rank,
                    certificate=cert,
                    generator_residual=residual,
                    min_eigenvalue=float(eigvals_hermitian(point.dense)[0]),
                )
            )
    return rows


@dataclass(frozen=True)
class SpecialValueRow:
    case: str
    a: float
    t: float
    rank: int
    extreme: bool            # is M(a,t) - I an extreme point (kernel a coatom)?
    certificate_dim: int
    ground_matches_quarter: bool  # at a=0: coatom equals I - M(0,t)/4


def special_values_report(t_grid=T_GRID_DEFAULT, a_grid=A_GRID_DEFAULT) -> list:
    """Rank and extremality classification along the special slices
    a = 0, a = 2, t = 0, and t = pi/2 (plus generic grid values for
    contrast on each slice)."""
    basis = model_space("c3-qubit")
    cases = []
    for t in sorted(set(t_grid) | {0.0, math.pi / 2}):
        cases.append(("a=0", 0.0, t))
        cases.append(("a=2", 2.0, t))
    for a in sorted(set(a_grid) | {0.0, 2.0}):
        cases.append(("t=0", a, 0.0))
        cases.append(("t=pi/2", a, math.pi / 2))
    rows = []
    for case, a, t in cases:
        point = m_family(a, t)
        rank = numerical_rank(point.dense)
        proj = kernel_projector(point.dense)
        cert = coatom_certificate(proj, basis)
        extreme = cert.verdict is Verdict.COATOM
        quarter = False
        if abs(a) < _SPECIAL_EPS:
            ground = ground_projector(point.dense - np.eye(8))
            quarter = bool(
                np.abs(ground.matrix - (np.eye(8) - point.dense / 4.0)).max() < 1e-9
            )
        rows.append(
            SpecialValueRow(
                case=case,
                a=a,
                t=t,
                rank=rank,
                extreme=extreme,
                certificate_dim=cert.dimension,
                ground_matches_quarter=quarter,
            )
        )
    return rows
