"""Logarithmic-barrier interior-point minimization over a spectrahedron.

Minimizes <c, x> over {x : I + sum x_i A_i >= 0} by path-following on
f_t(x) = t <c, x> - log det(I + sum x_i A_i), starting from the strictly
feasible origin with t0 = 1 and t <- mu t per stage.  Each stage is
recentred with damped Newton steps (exact gradient and Hessian, dense
Cholesky on the m x m system, Armijo backtracking that keeps the slack
matrix positive definite).  Termination at duality gap d/t <= gap_tol.

Intermediate stages are centred only to a small Newton decrement, which
is all path-following needs; the final stage is centred tightly so the
reported gap bound d/t is honest.

The solver is deterministic: a fixed iteration schedule and no
randomness, so identical inputs give bit-identical optimizers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .hermitian import eigvals_hermitian
from .spectra import LmiSpectrahedron

__all__ = ["SolveStatus", "SdpOptions", "SdpSolution", "minimize", "dual_residuals"]


class SolveStatus(enum.Enum):
    CONVERGED = "converged"
    ITERATION_CAP = "iteration_cap"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True)
class SdpOptions:
    gap_tol: float = 1e-9
    mu: float = 4.0
    t0: float = 1.0
    max_outer: int = 60
    max_newton: int = 50
    alpha: float = 0.25           # Armijo sufficient-decrease fraction
    beta: float = 0.5             # backtracking shrink factor
    newton_tol: float = 1e-13     # squared Newton decrement, final stage
    newton_tol_path: float = 1e-4  # squared Newton decrement, intermediate stages
    hessian_residual_tol: float = 1e-6


@dataclass(frozen=True)
class SdpSolution:
    x_star: np.ndarray
    optimum_matrix: np.ndarray
    objective: float
    gap_bound: float
    newton_iters: int
    status: SolveStatus
    t_final: float
    c: np.ndarray
    stage_objectives: tuple = field(default_factory=tuple)


class _NumericalFailure(Exception):
    pass


def _logdet_from_chol(L: np.ndarray) -> float:
    return 2.0 * float(np.log(L.diagonal().real).sum())


def _gradient_pieces(L, a_cols, m, d):
    """Congruence-transformed basis M_i = L^-1 A_i L^-*, giving the
    log-det gradient Tr(S^-1 A_i) = Tr(M_i) and Hessian Tr(M_i M_j)."""
    l_inv = np.linalg.inv(L)
    w = (l_inv @ a_cols).reshape(d, m, d).transpose(1, 0, 2)
    mt = w @ l_inv.conj().T           # (m, d, d), hermitian slices
    grad = mt.trace(axis1=1, axis2=2).real
    mv = mt.view(float).reshape(m, 2 * d * d)
    hess = mv @ mv.T
    return grad, hess


def minimize(spec: LmiSpectrahedron, c, opts: SdpOptions | None = None) -> SdpSolution:
    """Barrier path-following minimization of <c, x> over the spectrahedron."""
    opts = opts or SdpOptions()
    m, d = spec.m, spec.d
    if m < 1:
        raise ValueError("spectrahedron is degenerate (m = 0); nothing to optimize")
    c = np.asarray(c, dtype=float).copy()
    if c.shape != (m,):
        raise ValueError(f"objective must have {m} entries, got shape {c.shape}")
    if not np.linalg.norm(c) > 0:
        raise ValueError("zero objective rejected: no unique target face")

    a_stack = spec.basis
    a_flat = np.ascontiguousarray(a_stack).reshape(m, d * d)
    a_cols = np.ascontiguousarray(a_stack.transpose(1, 0, 2)).reshape(d, m * d)
    eye = np.eye(d, dtype=complex)

    x = np.zeros(m)
    s_mat = eye.copy()
    chol = eye.copy()
    t = opts.t0
    newton_total = 0
    stage_objectives = []
    status = SolveStatus.ITERATION_CAP
    pieces = None  # (grad_logdet, hess) at the current x, if already computed

    try:
        for _ in range(opts.max_outer):
            final_stage = d / t <= opts.gap_tol
            tol = opts.newton_tol if final_stage else opts.newton_tol_path
            f_cur = t * float(c @ x) - _logdet_from_chol(chol)
            for _ in range(opts.max_newton):
                if pieces is None:
                    pieces = _gradient_pieces(chol, a_cols, m, d)
                grad_logdet, hess = pieces
                g = t * c - grad_logdet
                try:
                    dx = np.linalg.solve(hess, -g)
                except np.linalg.LinAlgError as err:
                    raise _NumericalFailure(str(err)) from None
                residual = np.linalg.norm(hess @ dx + g)
                if residual > opts.hessian_residual_tol * max(1.0, np.linalg.norm(g)):
                    raise _NumericalFailure("Hessian solve residual too large")
                decrement_sq = float(-(g @ dx))
                if decrement_sq <= tol:
                    break
                newton_total += 1
                delta_s = (dx @ a_flat).reshape(d, d)
                step = 1.0
                slope = -decrement_sq
                accepted = False
                while step >= 1e-14:
                    s_new = s_mat + step * delta_s
                    try:
                        l_new = np.linalg.cholesky(s_new)
                    except np.linalg.LinAlgError:
                        step *= opts.beta
                        continue
                    f_new = t * float(c @ x + step * (c @ dx)) - _logdet_from_chol(l_new)
                    if f_new <= f_cur + opts.alpha * step * slope:
                        accepted = True
                        break
                    step *= opts.beta
                if not accepted:
                    break  # stalled line search; keep the current centre
                x = x + step * dx
                s_mat, chol, f_cur = s_new, l_new, f_new
                pieces = None
            stage_objectives.append(float(c @ x))
            if final_stage:
                status = SolveStatus.CONVERGED
                break
            t *= opts.mu
    except _NumericalFailure:
        status = SolveStatus.NUMERICAL_FAILURE

    return SdpSolution(
        x_star=x,
        optimum_matrix=s_mat,
        objective=float(c @ x),
        gap_bound=d / t,
        newton_iters=newton_total,
        status=status,
        t_final=t,
        c=c,
        stage_objectives=tuple(stage_objectives),
    )


def dual_residuals(spec: LmiSpectrahedron, sol: SdpSolution) -> tuple[float, float]:
    """Feasibility and stationarity residuals of a solution, for logging.

    feasibility = -min(0, lambda_min(optimum matrix)); stationarity is
    ||t c - grad log det|| / t at the final barrier parameter.  Both are
    finite for any returned solution, converged or not.
    """
    m, d = spec.m, spec.d
    lam_min = float(eigvals_hermitian(sol.optimum_matrix)[0])
    feasibility = -min(0.0, lam_min)
    try:
        chol = np.linalg.cholesky(sol.optimum_matrix)
        a_cols = np.ascontiguousarray(spec.basis.transpose(1, 0, 2)).reshape(d, m * d)
        grad_logdet, _ = _gradient_pieces(chol, a_cols, m, d)
        stationarity = float(np.linalg.norm(sol.t_final * sol.c - grad_logdet) / sol.t_final)
    except np.linalg.LinAlgError:
        # boundary-singular iterate: report the raw objective gradient scale
        stationarity = float(np.linalg.norm(sol.c))
    return feasibility, stationarity
