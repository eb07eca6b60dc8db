"""Sparse SPD solves of the reduced system."""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from wgplate.exceptions import NoConvergence, NotPositiveDefinite, WgplateInternalError
from wgplate.settings import DEFAULT_SETTINGS

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveInfo:
    method: str
    iterations: int
    residual: float  # relative when the right-hand side is nonzero


def _relative_residual(A, x, b):
    norm_b = np.linalg.norm(b)
    r = np.linalg.norm(b - A @ x)
    return r / norm_b if norm_b > 0.0 else r


def _direct(A, b, settings):
    try:
        lu = spla.splu(
            A.tocsc(),
            permc_spec="MMD_AT_PLUS_A",
            diag_pivot_thresh=0.0,
            options=dict(SymmetricMode=True),
        )
    except RuntimeError as err:
        raise NotPositiveDefinite(str(err))
    # symmetric ordering without pivoting: the pivots of an SPD matrix are positive
    pivots = lu.U.diagonal()
    if not np.all(pivots > 0.0):
        raise NotPositiveDefinite(f"pivot {pivots.min():.3e} in the sparse factorization")

    x = lu.solve(b)
    residual = _relative_residual(A, x, b)
    steps = 0
    while residual > settings.residual_tolerance and steps < settings.refinement_steps:
        x = x + lu.solve(b - A @ x)
        residual = _relative_residual(A, x, b)
        steps += 1
    _logger.debug(f"direct solve: n={len(b)}, nnz(L+U)={lu.nnz}, refinement steps {steps}")
    return x, SolveInfo("direct", steps, residual)


def conjugate_gradient(A, b, tol=1e-13, max_iterations=0, x0=None):
    """Jacobi-preconditioned conjugate gradients.

    Stops when the residual norm drops below ``tol``; ``max_iterations`` of 0
    means ten times the system size.

    Raises:
        NoConvergence: the iteration budget ran out.
        NotPositiveDefinite: a non-positive diagonal entry or curvature.
    """
    n = len(b)
    max_iterations = max_iterations or 10 * n
    diag = A.diagonal()
    if np.any(diag <= 0.0):
        raise NotPositiveDefinite("non-positive diagonal entry")
    inv_diag = 1.0 / diag

    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    r = b - A @ x
    z = inv_diag * r
    d = z.copy()
    rz = r @ z
    k = 0
    while np.linalg.norm(r) > tol:
        if k >= max_iterations:
            raise NoConvergence(k, float(np.linalg.norm(r)))
        Ad = A @ d
        curvature = d @ Ad
        if curvature <= 0.0:
            raise NotPositiveDefinite(f"curvature {curvature:.3e} at iteration {k}")
        alpha = rz / curvature
        x += alpha * d
        r -= alpha * Ad
        z = inv_diag * r
        rz_next = r @ z
        d = z + (rz_next / rz) * d
        rz = rz_next
        k += 1
    return x, k


def solve_with_info(system, settings=DEFAULT_SETTINGS, method=None):
    """Solve the reduced system; return the full weak solution and diagnostics."""
    method = method or settings.solver_method
    A, b = system.matrix, system.rhs
    if system.n_free == 0:
        return system.expand(np.zeros(0)), SolveInfo(method, 0, 0.0)
    if method == "direct":
        x, info = _direct(A, b, settings)
    elif method == "cg":
        # absolute target, relaxed to the relative contract for large loads
        tol = max(settings.cg_tolerance, 0.1 * settings.residual_tolerance * np.linalg.norm(b))
        x, iterations = conjugate_gradient(A, b, tol, settings.cg_max_iterations)
        info = SolveInfo("cg", iterations, _relative_residual(A, x, b))
    else:
        raise WgplateInternalError(f'unknown solver method "{method}"')

    if np.linalg.norm(b) > 0.0 and info.residual > settings.residual_tolerance:
        _logger.warning(
            f"{method} solve residual {info.residual:.3e} above {settings.residual_tolerance:.1e}"
        )
    _logger.debug(f"{method} solve: {system.n_free} free DOFs, residual {info.residual:.3e}")
    return system.expand(x), info


def solve(system, settings=DEFAULT_SETTINGS, method=None):
    """Free-DOF solution merged with the constrained values.

    Raises:
        NotPositiveDefinite: the reduced matrix is not SPD.
        NoConvergence: conjugate gradients ran out of iterations.
    """
    return solve_with_info(system, settings, method)[0]


def smallest_eigenvalue(system, dense_limit=2000):
    """Smallest eigenvalue of the reduced stiffness matrix."""
    A = system.matrix
    if A.shape[0] <= dense_limit:
        return float(scipy.linalg.eigvalsh(A.toarray(), subset_by_index=[0, 0])[0])
    return float(spla.eigsh(A.tocsc(), k=1, sigma=0.0, which="LM", return_eigenvectors=False)[0])
