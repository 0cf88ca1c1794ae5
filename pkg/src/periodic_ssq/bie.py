"""Interior Laplace Dirichlet problem via the double-layer potential.

The solution is represented as ``u(z) = Im int sigma dtau / (tau - z)`` with
a real density ``sigma``. Letting ``z`` approach the curve from inside gives
the second-kind system ``(pi I + A) sigma = u_e`` with the Nyström matrix

    A_ij = Im[gamma'_j / (gamma_j - gamma_i)] w,     j != i
    A_ii = Im[gamma''_i / (2 gamma'_i)] w.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import ssq
from .exceptions import AssemblyError, InvalidDiscretizationError, SolverError


@dataclass(frozen=True, eq=False)
class DirichletProblem:
    disc: object
    boundary_data: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.boundary_data, dtype=float)
        if u.shape != (self.disc.n,):
            raise InvalidDiscretizationError(
                f"boundary data has shape {u.shape}, expected ({self.disc.n},)")
        object.__setattr__(self, "boundary_data", u)

    @classmethod
    def from_function(cls, disc, u_exact):
        """Sample a function of the complex coordinate on the nodes."""
        return cls(disc, u_exact(disc.gamma))


@dataclass(frozen=True, eq=False)
class DlpSolution:
    sigma: np.ndarray
    system_condition_estimate: float
    relative_residual: float


def dlp_matrix(disc):
    """The matrix ``A`` (without the ``pi I`` jump term)."""
    g, dg = disc.gamma, disc.dgamma
    diff = g[None, :] - g[:, None]
    np.fill_diagonal(diff, 1.0)
    A = np.imag(dg[None, :] / diff) * disc.weight
    np.fill_diagonal(A, np.imag(disc.d2gamma / (2 * dg)) * disc.weight)
    return A


def assemble_dlp_system(disc):
    """System matrix ``pi I + A`` of the interior Dirichlet problem."""
    M = np.pi * np.eye(disc.n) + dlp_matrix(disc)
    if not np.all(np.isfinite(M)):
        raise AssemblyError("non-finite entries in the DLP matrix")
    return M


def solve_dirichlet(problem):
    """Dense LU solve of ``(pi I + A) sigma = u_e``."""
    M = assemble_dlp_system(problem.disc)
    u = problem.boundary_data
    try:
        lu = scipy.linalg.lu_factor(M, check_finite=True)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise SolverError(f"LU factorization failed: {exc}") from exc
    sigma = scipy.linalg.lu_solve(lu, u)
    # 1-norm condition estimate from the factorization
    cond = 1.0 / max(scipy.linalg.lapack.dgecon(
        lu[0], np.linalg.norm(M, 1), norm="1")[0], np.finfo(float).tiny)
    res = np.linalg.norm(M @ sigma - u) / max(np.linalg.norm(u), np.finfo(float).tiny)
    if not np.all(np.isfinite(sigma)):
        raise SolverError("solution contains non-finite values", condition=cond)
    if np.linalg.norm(u) > 0 and res > 1e-12:
        raise SolverError(f"relative residual {res:.2e} above 1e-12", condition=cond)
    return DlpSolution(sigma, float(cond), float(res))


def eval_solution(sol, disc, z, tol=ssq.DEFAULT_TOL, force=None):
    """``u(z) = Im I_1(z)`` with automatic SSQ near the boundary."""
    return ssq.eval_auto(disc, sol.sigma, z, "cauchy", tol, force).value.imag


def eval_solution_many(sol, disc, zs, tol=ssq.DEFAULT_TOL, force=None):
    """Vectorized :func:`eval_solution`; returns ``(u, used_ssq)``."""
    values, used = ssq.eval_auto_many(disc, sol.sigma, zs, "cauchy", tol, force)
    return values.imag, used
