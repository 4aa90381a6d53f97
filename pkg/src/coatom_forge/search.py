"""Random-direction extreme-point sampling and coatom certification.

The search draws directions uniformly from the unit sphere, minimizes
each over the spectrahedron, and records the numerical rank of the
optimum matrix.  The kernel projector of an optimum is a candidate
coatom of the ground-projector lattice; the algebraic certificate
checks that the hermitian part of the compressed algebra P'.A.P'
meets the local space in a line spanned by a positive semidefinite
matrix with kernel exactly the candidate's range.

Trials are independent: each draws its own RNG substream derived from
(seed, trial index), so results do not depend on the worker count.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .hermitian import (
    Projector,
    eig_hermitian,
    eigvals_hermitian,
    numerical_rank,
    real_nullspace,
)
from .local_space import LocalSpaceBasis, project_onto_space
from .sdp import SdpOptions, SolveStatus, minimize
from .spectra import LmiSpectrahedron

__all__ = [
    "Verdict",
    "CoatomCertificate",
    "SampleRecord",
    "SampleReport",
    "random_direction",
    "kernel_projector",
    "coatom_certificate",
    "quick_reject",
    "exposed_point_from_coatom",
    "sample_extreme_points",
    "SAMPLER_GAP_TOL",
]

#: solver gap used by the sampler; tighter than the bare solver default so
#: that vertex-type optimizers are located to well below the rank cutoff
SAMPLER_GAP_TOL = 1e-11

#: relative eigenvalue cutoff separating an optimum's kernel from its support
KERNEL_TOL = 1e-6

#: singular values below this fraction of the largest are treated as zero
#: in the certificate nullspace
CERT_TOL = 1e-8

#: minimum ratio of smallest kept to largest dropped singular value for a
#: conclusive certificate
CERT_GAP_RATIO = 1e3


class Verdict(enum.Enum):
    COATOM = "coatom"
    NOT_COATOM = "not_coatom"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CoatomCertificate:
    """Outcome of the line test on H(P'.A.P') intersected with the space.

    ``dimension`` is the dimension of the span of the cone of positive
    semidefinite space members vanishing on the candidate's range: 1 for
    a coatom, 0 when that cone is trivial, and the raw intersection
    dimension when it exceeds one.  ``intersection_basis`` always holds
    a basis of the linear intersection itself.
    """

    dimension: int
    intersection_basis: tuple
    verdict: Verdict
    tolerance_used: float
    nullspace_dimension: int
    generator_coordinates: np.ndarray | None = None


@dataclass(frozen=True)
class SampleRecord:
    seed_index: int
    direction: np.ndarray
    x_star: np.ndarray
    optimum_rank: int
    projector_rank: int
    status: SolveStatus
    certificate_dim: int | None = None
    certificate_verdict: Verdict | None = None


@dataclass(frozen=True)
class SampleReport:
    trials: int
    seed: int
    histogram: dict
    failures: int
    records: tuple
    rank_tol: float
    gap_tol: float


def random_direction(m: int, rng) -> np.ndarray:
    """Uniform point on the unit sphere S^(m-1) from normalized Gaussians."""
    if m < 1:
        raise ValueError("dimension must be at least 1")
    while True:
        v = rng.standard_normal(m)
        norm = np.linalg.norm(v)
        if norm > 0:
            return v / norm


def kernel_projector(matrix, rel_tol: float = KERNEL_TOL) -> Projector:
    """Projector onto the span of eigenvectors with eigenvalue below the
    relative cutoff; for an optimum matrix this is the ground projector
    of the optimizing Hamiltonian."""
    dec = eig_hermitian(matrix)
    scale = max(1.0, float(np.abs(dec.eigenvalues).max(initial=0.0)))
    sel = dec.eigenvalues < rel_tol * scale
    basis = dec.eigenvectors[:, sel]
    mat = basis @ basis.conj().T
    return Projector(matrix=(mat + mat.conj().T) / 2, rank=int(sel.sum()), range_basis=basis)


def coatom_certificate(
    P: Projector, basis: LocalSpaceBasis, tol: float = CERT_TOL
) -> CoatomCertificate:
    """Certify whether a projector is a coatom of the ground-projector
    lattice of the local space spanned by ``basis``.

    Solves the linear system  sum_j x_j (A_j v) = 0  over all range
    vectors v of P; its solutions are the space members vanishing on the
    range of P, i.e. H(P'.A.P') intersected with the space.  A coatom is
    certified when that intersection is a line whose generator is (up to
    sign) positive semidefinite with kernel exactly the range of P.
    """
    d = basis.d
    if not 0 < P.rank < d:
        raise ValueError("certificate requires 0 < rank(P) < d")
    n = basis.dim
    blocks = []
    for k in range(P.range_basis.shape[1]):
        v = P.range_basis[:, k]
        cols = basis.elements @ v           # (n, d): column j is A_j v, transposed
        blocks.append(cols.T.real)
        blocks.append(cols.T.imag)
    rows = np.concatenate(blocks, axis=0)
    dim_lin, coeffs, svals = real_nullspace(rows, n, tol)

    inconclusive = False
    if svals.size:
        cutoff = tol * svals[0]
        kept = svals[svals > cutoff]
        dropped = svals[svals <= cutoff]
        if kept.size and dropped.size and dropped.max() > 0:
            inconclusive = kept.min() / dropped.max() < CERT_GAP_RATIO

    intersection = tuple(basis.assemble(coeffs[i]) for i in range(dim_lin))

    if inconclusive:
        return CoatomCertificate(
            dimension=dim_lin,
            intersection_basis=intersection,
            verdict=Verdict.INCONCLUSIVE,
            tolerance_used=tol,
            nullspace_dimension=dim_lin,
        )
    if dim_lin == 1:
        gen_coords = coeffs[0].copy()
        gen = intersection[0]
        vals = eigvals_hermitian(gen)
        if abs(vals[0]) > abs(vals[-1]):    # flip sign so the large end is positive
            gen_coords = -gen_coords
            vals = -vals[::-1]
        scale = max(1.0, float(np.abs(vals).max()))
        psd = vals[0] >= -1e-8 * scale
        rank_gen = int((np.abs(vals) > KERNEL_TOL * scale).sum())
        if psd and rank_gen == d - P.rank:
            return CoatomCertificate(
                dimension=1,
                intersection_basis=intersection,
                verdict=Verdict.COATOM,
                tolerance_used=tol,
                nullspace_dimension=1,
                generator_coordinates=gen_coords,
            )
        # the line carries no PSD matrix vanishing exactly on range(P):
        # the cone is trivial and P is not a ground projector at all
        return CoatomCertificate(
            dimension=0,
            intersection_basis=intersection,
            verdict=Verdict.NOT_COATOM,
            tolerance_used=tol,
            nullspace_dimension=1,
        )
    return CoatomCertificate(
        dimension=dim_lin,
        intersection_basis=intersection,
        verdict=Verdict.NOT_COATOM,
        tolerance_used=tol,
        nullspace_dimension=dim_lin,
    )


def quick_reject(P: Projector, complement_basis, tol: float = 1e-8) -> bool:
    """Cheap necessary-condition test: True means P is certainly not a
    ground projector of the space (no conclusion on False).

    Looks for a matrix A in the span of ``complement_basis`` (a basis of
    the orthogonal complement of the space) with P'.A.P' a nonzero
    multiple of P', solved as a linear least-squares problem.
    """
    mats = getattr(complement_basis, "elements", None)
    if mats is None:
        mats = np.asarray(complement_basis, dtype=complex)
        if mats.ndim == 2:
            mats = mats[None, :, :]
    d = P.matrix.shape[0]
    if P.rank >= d:
        raise ValueError("P must differ from the identity")
    if mats.shape[0] == 0:
        return False
    p_prime = np.eye(d, dtype=complex) - P.matrix
    compressed = p_prime @ mats @ p_prime
    cols = compressed.reshape(mats.shape[0], -1)
    system = np.concatenate([cols.real, cols.imag], axis=1).T
    target = np.concatenate([p_prime.real.ravel(), p_prime.imag.ravel()])
    coeffs, *_ = np.linalg.lstsq(system, target, rcond=None)
    residual = np.linalg.norm(system @ coeffs - target)
    return bool(residual <= tol * np.linalg.norm(p_prime))


def exposed_point_from_coatom(P: Projector, basis: LocalSpaceBasis) -> np.ndarray:
    """Coordinates (in the traceless LMI basis of the space) of the
    boundary point  A = (Tr P / Tr P') P' - P  exposed by a coatom P
    that itself belongs to the space."""
    d = basis.d
    if not 0 < P.rank < d:
        raise ValueError("need 0 < rank(P) < d")
    if np.abs(project_onto_space(P.matrix, basis) - P.matrix).max() > 1e-9:
        raise ValueError("P does not lie in the local space")
    p_prime = np.eye(d, dtype=complex) - P.matrix
    a = (P.rank / (d - P.rank)) * p_prime - P.matrix
    return basis.coordinates(a)[1:]


# ---------------------------------------------------------------------------
# sampling

def _run_trial(
    spec: LmiSpectrahedron,
    seed: int,
    index: int,
    opts: SdpOptions,
    rank_tol: float,
    certify: bool,
    basis: LocalSpaceBasis | None,
) -> SampleRecord:
    rng = np.random.default_rng((seed, index))
    direction = random_direction(spec.m, rng)
    sol = minimize(spec, direction, opts)
    if sol.status is not SolveStatus.CONVERGED:
        return SampleRecord(
            seed_index=index,
            direction=direction,
            x_star=sol.x_star,
            optimum_rank=-1,
            projector_rank=-1,
            status=sol.status,
        )
    rank = numerical_rank(sol.optimum_matrix, rank_tol)
    cert_dim = None
    cert_verdict = None
    if certify and basis is not None:
        proj = kernel_projector(sol.optimum_matrix, rank_tol)
        if 0 < proj.rank < spec.d:
            cert = coatom_certificate(proj, basis)
            cert_dim = cert.dimension
            cert_verdict = cert.verdict
    return SampleRecord(
        seed_index=index,
        direction=direction,
        x_star=sol.x_star,
        optimum_rank=rank,
        projector_rank=spec.d - rank,
        status=sol.status,
        certificate_dim=cert_dim,
        certificate_verdict=cert_verdict,
    )


def _run_block(args) -> list:
    spec, seed, indices, opts, rank_tol, certify, basis = args
    return [
        _run_trial(spec, seed, i, opts, rank_tol, certify, basis) for i in indices
    ]


def sample_extreme_points(
    spec: LmiSpectrahedron,
    n_trials: int,
    seed: int = 0,
    certify: bool = False,
    basis: LocalSpaceBasis | None = None,
    rank_tol: float = KERNEL_TOL,
    opts: SdpOptions | None = None,
    workers: int = 1,
) -> SampleReport:
    """Sample extreme points by minimizing random directions.

    Failed solves are counted separately and excluded from the rank
    histogram.  With ``certify`` set (and the originating local-space
    ``basis`` supplied), each converged record gains a coatom
    certificate of the optimum's kernel projector.
    """
    if n_trials < 1:
        raise ValueError("need at least one trial")
    if certify and basis is None:
        raise ValueError("certify=True requires the local-space basis")
    opts = opts or SdpOptions(gap_tol=SAMPLER_GAP_TOL)
    if workers is None or workers < 1:
        import os

        workers = os.cpu_count() or 1
    workers = min(workers, n_trials)

    if workers == 1:
        records = _run_block((spec, seed, range(n_trials), opts, rank_tol, certify, basis))
    else:
        import multiprocessing as mp

        block = max(16, n_trials // (workers * 8))
        chunks = [
            (spec, seed, range(lo, min(lo + block, n_trials)), opts, rank_tol, certify, basis)
            for lo in range(0, n_trials, block)
        ]
        with mp.get_context("fork").Pool(workers) as pool:
            out = pool.map(_run_block, chunks)
        records = [rec for blk in out for rec in blk]

    histogram: dict[int, int] = {}
    failures = 0
    for rec in records:
        if rec.status is not SolveStatus.CONVERGED:
            failures += 1
            continue
        histogram[rec.optimum_rank] = histogram.get(rec.optimum_rank, 0) + 1
    return SampleReport(
        trials=n_trials,
        seed=seed,
        histogram=dict(sorted(histogram.items())),
        failures=failures,
        records=tuple(records),
        rank_tol=rank_tol,
        gap_tol=opts.gap_tol,
    )
