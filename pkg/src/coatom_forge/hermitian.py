"""Dense complex hermitian linear algebra.

Everything downstream (local Hamiltonian spaces, spectrahedra, the
interior-point solver, certificates) is built on the small set of
primitives in this module: Kronecker products, the Hilbert-Schmidt
inner product, a cyclic Jacobi eigensolver for hermitian matrices,
ground/support projectors, numerical ranks, and real nullspaces.

Matrices are plain ``numpy`` arrays of dtype complex128.  The sizes in
this package are tiny (d <= 64), so all algorithms are dense.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "JacobiConvergenceError",
    "EigenDecomposition",
    "Projector",
    "as_hermitian",
    "kron",
    "hs_inner",
    "eig_hermitian",
    "eigvals_hermitian",
    "ground_projector",
    "support_projector",
    "numerical_rank",
    "real_nullspace",
    "matrix_to_json",
    "matrix_from_json",
    "matrix_to_file",
    "matrix_from_file",
]

#: default absolute tolerance for accepting nearly-hermitian input
HERMITICITY_TOL = 1e-9

#: default relative spectral-gap tolerance for ground/support projectors
GAP_TOL = 1e-8

#: default relative eigenvalue cutoff for numerical ranks
RANK_TOL = 1e-6

#: Jacobi sweep cap; non-convergence within this many sweeps signals
#: ill-conditioned input rather than a tolerance problem
MAX_SWEEPS = 100


class JacobiConvergenceError(RuntimeError):
    """Raised when the Jacobi sweeps do not reach the target accuracy."""


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition with eigenvalues in nondecreasing order.

    ``eigenvectors[:, i]`` is the unit eigenvector for ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector with its rank and an orthonormal range basis."""

    matrix: np.ndarray
    rank: int
    range_basis: np.ndarray  # shape (d, rank), columns span the image


def as_hermitian(entries, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate and symmetrize a square complex matrix.

    Rejects input whose anti-hermitian part exceeds ``tol`` per entry,
    otherwise returns the exactly hermitian average (A + A*)/2.
    """
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    defect = np.abs(a - a.conj().T).max() if a.size else 0.0
    if defect > tol:
        raise ValueError(f"matrix is not hermitian: max |A - A*| entry = {defect:.3e}")
    return (a + a.conj().T) / 2


def kron(a, b) -> np.ndarray:
    """Kronecker (tensor) product of two matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt inner product Tr(A.B) of two hermitian matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    # for hermitian A, B: Tr(A.B) = sum_ij A_ij conj(B_ij), which is real
    return float(np.vdot(b, a).real)


def _jacobi(a: np.ndarray, compute_vectors: bool, tol_factor: float = 1e-13):
    """Cyclic Jacobi diagonalization of a hermitian matrix.

    Sweeps the strict upper triangle in a fixed row-major order and
    applies complex plane rotations until the off-diagonal Frobenius
    mass falls below ``tol_factor * ||A||_F``.  Returns eigenvalues in
    nondecreasing order (and aligned eigenvectors when requested).
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex) if compute_vectors else None
    norm = np.linalg.norm(a)
    if n == 1 or norm == 0.0:
        vals = a.diagonal().real.copy()
        order = np.argsort(vals, kind="stable")
        if compute_vectors:
            return vals[order], v[:, order]
        return vals, None
    target = tol_factor * norm
    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= target:
            break
        # rotating below this threshold cannot reduce the mass meaningfully
        skip = off / (n * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= skip or r == 0.0:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # unitary G acting on columns (p, q); G annihilates a[p, q]
                g_pp, g_pq = c, s * phase
                g_qp, g_qq = -s * phase.conjugate(), c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * g_pp + col_q * g_qp
                a[:, q] = col_p * g_pq + col_q * g_qq
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(g_pp) * row_p + np.conj(g_qp) * row_q
                a[q, :] = np.conj(g_pq) * row_p + np.conj(g_qq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if compute_vectors:
                    col_p = v[:, p].copy()
                    col_q = v[:, q].copy()
                    v[:, p] = col_p * g_pp + col_q * g_qp
                    v[:, q] = col_p * g_pq + col_q * g_qq
    else:
        raise JacobiConvergenceError(
            f"Jacobi sweeps did not converge within {MAX_SWEEPS} iterations"
        )
    vals = a.diagonal().real.copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    if not compute_vectors:
        return vals, None
    v = v[:, order]
    # phase convention: first nonzero component of each eigenvector real positive
    for i in range(n):
        col = v[:, i]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        if nz.size:
            pivot = col[nz[0]]
            v[:, i] = col * (pivot.conjugate() / abs(pivot))
    return vals, v


def eig_hermitian(a) -> EigenDecomposition:
    """Full spectral decomposition of a hermitian matrix.

    Deterministic for a fixed input: fixed sweep order and the phase
    convention that the first nonzero component of each eigenvector is
    real positive.
    """
    vals, vecs = _jacobi(np.asarray(a, dtype=complex), compute_vectors=True)
    return EigenDecomposition(eigenvalues=vals, eigenvectors=vecs)


def eigvals_hermitian(a) -> np.ndarray:
    """Eigenvalues only, in nondecreasing order (cheaper than eig_hermitian)."""
    vals, _ = _jacobi(np.asarray(a, dtype=complex), compute_vectors=False)
    return vals


def _spectral_projector(dec: EigenDecomposition, sel: np.ndarray) -> Projector:
    basis = dec.eigenvectors[:, sel]
    mat = basis @ basis.conj().T
    return Projector(matrix=(mat + mat.conj().T) / 2, rank=int(sel.sum()), range_basis=basis)


def ground_projector(a, gap_tol: float = GAP_TOL) -> Projector:
    """Projector onto the eigenspace of the smallest eigenvalue.

    Eigenvalues within ``gap_tol * max(1, ||A||_2)`` of the minimum are
    treated as degenerate with it.
    """
    dec = eig_hermitian(a)
    scale = max(1.0, float(np.abs(dec.eigenvalues).max(initial=0.0)))
    lo = dec.eigenvalues[0]
    sel = dec.eigenvalues - lo <= gap_tol * scale
    return _spectral_projector(dec, sel)


def support_projector(rho, gap_tol: float = GAP_TOL) -> Projector:
    """Projector onto the span of eigenvectors with positive eigenvalue.

    The input must be positive semidefinite up to 1e-8; anything with a
    more negative eigenvalue is rejected.
    """
    dec = eig_hermitian(rho)
    if dec.eigenvalues[0] < -1e-8:
        raise ValueError(
            f"input is not positive semidefinite: min eigenvalue {dec.eigenvalues[0]:.3e}"
        )
    scale = max(1.0, float(np.abs(dec.eigenvalues).max(initial=0.0)))
    sel = dec.eigenvalues > gap_tol * scale
    return _spectral_projector(dec, sel)


def numerical_rank(a, rel_tol: float = RANK_TOL) -> int:
    """Number of eigenvalues above the relative magnitude cutoff."""
    vals = np.abs(eigvals_hermitian(a))
    cutoff = rel_tol * max(1.0, float(vals.max(initial=0.0)))
    return int((vals > cutoff).sum())


def real_nullspace(constraint_rows, m: int, tol: float = 1e-8):
    """Orthonormal basis of the real nullspace of a stack of row vectors.

    Thresholds singular values at ``tol * sigma_max``.  Returns a tuple
    ``(dimension, basis, singular_values)`` where ``basis`` has shape
    (dimension, m).  An empty system returns the full space.
    """
    rows = np.asarray(constraint_rows, dtype=float)
    if rows.size == 0:
        return m, np.eye(m), np.zeros(0)
    rows = rows.reshape(-1, m)
    _, svals, vt = np.linalg.svd(rows, full_matrices=True)
    cutoff = tol * (svals[0] if svals.size else 0.0)
    rank = int((svals > cutoff).sum())
    basis = vt[rank:, :]
    return m - rank, basis, svals


def matrix_to_json(a) -> dict:
    """Encode a matrix as {"dim": d, "re": [[...]], "im": [[...]]} (row-major)."""
    a = np.asarray(a, dtype=complex)
    return {
        "dim": int(a.shape[0]),
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    d = int(obj["dim"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != (d, d) or im.shape != (d, d):
        raise ValueError(f"matrix entries do not match dim={d}")
    return re + 1j * im


def matrix_to_file(path, a) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(a), fh)


def matrix_from_file(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))
