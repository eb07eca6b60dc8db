"""Mass matrices and L2 projections onto cell and edge polynomial spaces."""

import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from wgplate.exceptions import SingularMass
from wgplate.polyspaces.basis import CellBasis, EdgeBasis
from wgplate.polyspaces.quadrature import cell_quadrature, edge_quadrature
from wgplate.settings import DEFAULT_SETTINGS

_logger = logging.getLogger(__name__)


class MassMatrix:
    """Cholesky-factored Gram matrix of a basis.

    Args:
        matrix (numpy.ndarray): symmetric positive definite Gram matrix.
        degree (int): polynomial degree, for diagnostics.
        tolerance (float): relative residual above which solves are logged.

    Raises:
        SingularMass: the matrix is not symmetric or the factorization fails.
    """

    def __init__(self, matrix, degree, tolerance=DEFAULT_SETTINGS.projection_residual_tolerance):
        matrix = np.asarray(matrix, dtype=float)
        scale = np.abs(matrix).max()
        if not np.isfinite(scale) or scale == 0.0:
            raise SingularMass(degree, "(empty or non-finite entries)")
        if np.abs(matrix - matrix.T).max() > 1e-13 * scale:
            raise SingularMass(degree, "(not symmetric)")
        self.matrix = 0.5 * (matrix + matrix.T)
        self.degree = degree
        self.tolerance = tolerance
        try:
            self.factor = cho_factor(self.matrix)
        except LinAlgError as err:
            raise SingularMass(degree, f"({err})")
        if np.any(np.diag(self.factor[0]) <= 0.0):
            raise SingularMass(degree, "(non-positive pivot)")

    @classmethod
    def from_table(cls, values, weights, degree, tolerance=DEFAULT_SETTINGS.projection_residual_tolerance):
        return cls(values.T @ (weights[:, None] * values), degree, tolerance)

    @property
    def shape(self):
        return self.matrix.shape

    def solve(self, rhs):
        x = cho_solve(self.factor, rhs)
        norm = np.linalg.norm(rhs)
        if norm > 0.0:
            residual = np.linalg.norm(self.matrix @ x - rhs) / norm
            if residual > self.tolerance:
                _logger.warning(
                    f"P_{self.degree} mass solve residual {residual:.3e} above {self.tolerance:.1e}"
                )
        return x

    def inner(self, a, b):
        return a @ self.matrix @ b

    def norm(self, a):
        return float(np.sqrt(max(self.inner(a, a), 0.0)))


def project_cell(f, degree, cell, basis=None, exactness=None, settings=DEFAULT_SETTINGS):
    """L2 projection of ``f`` onto P_degree(cell).

    Args:
        f (callable): maps ``(M, 2)`` points to ``(M,)`` values.
        degree (int): target degree.
        cell (wgplate.mesh.Cell): the polygon.
        basis (CellBasis): defaults to :meth:`CellBasis.for_cell`.
        exactness (int): defaults to ``2 degree + [quadrature] projection_margin``.

    Returns:
        numpy.ndarray: coefficients in ``basis``.
    """
    if basis is None:
        basis = CellBasis.for_cell(cell, degree, settings)
    if exactness is None:
        exactness = settings.projection_exactness(degree)
    rule = cell_quadrature(cell, exactness, settings)
    values = basis.values(rule.points)
    mass = MassMatrix.from_table(values, rule.weights, degree, settings.projection_residual_tolerance)
    return mass.solve(values.T @ (rule.weights * f(rule.points)))


def project_edge(f, degree, edge, exactness=None, settings=DEFAULT_SETTINGS):
    """L2 projection of ``f`` onto P_degree(edge) in the edge coordinate."""
    if exactness is None:
        exactness = settings.projection_exactness(degree)
    rule = edge_quadrature(edge, exactness, settings)
    values = EdgeBasis(degree).values(rule.abscissae)
    mass = MassMatrix.from_table(values, rule.weights, degree, settings.projection_residual_tolerance)
    return mass.solve(values.T @ (rule.weights * f(rule.points)))
