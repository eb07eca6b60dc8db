"""Scaled monomial bases on cells and edges.

A cell basis of degree ``d`` spans P_d(T) with the monomials
``((x - c_x) / h_T)^a ((y - c_y) / h_T)^b``, ``a + b <= d``, ordered by total
degree and then by increasing power of ``y``. From ``[basis] gram_threshold``
on, the monomials are replaced by an orthonormal basis of the same space
(modified Gram-Schmidt in the cell L2 inner product, two passes).
"""

import logging
from functools import lru_cache

import numpy as np

from wgplate.exceptions import SingularMass
from wgplate.polyspaces.quadrature import cell_quadrature
from wgplate.settings import DEFAULT_SETTINGS

_logger = logging.getLogger(__name__)


def dimension(degree):
    return (degree + 1) * (degree + 2) // 2


@lru_cache(maxsize=None)
def monomial_exponents(degree):
    exps = [(d - b, b) for d in range(degree + 1) for b in range(d + 1)]
    return np.array(exps, dtype=int).reshape(-1, 2)


def _gram_schmidt(gram, passes=2):
    # columns of C span the same space with C^T G C = I
    n = gram.shape[0]
    C = np.eye(n)
    for j in range(n):
        for _ in range(passes):
            for i in range(j):
                C[:, j] -= (C[:, i] @ gram @ C[:, j]) * C[:, i]
        norm2 = C[:, j] @ gram @ C[:, j]
        if not norm2 > 0.0:
            raise SingularMass(int(monomial_degree(n)), "during orthonormalization")
        C[:, j] /= np.sqrt(norm2)
    return C


def monomial_degree(n):
    d = 0
    while dimension(d) < n:
        d += 1
    return d


class CellBasis:
    """Polynomial basis of P_degree on one cell.

    Args:
        degree (int): total degree.
        center (numpy.ndarray): monomial center, the cell interior point.
        scale (float): the cell diameter h_T.
        coefficients (numpy.ndarray): optional ``(n, n)`` change of basis;
          basis function ``j`` is ``sum_i monomial_i * coefficients[i, j]``.
    """

    def __init__(self, degree, center, scale, coefficients=None):
        self.degree = int(degree)
        self.center = np.asarray(center, dtype=float)
        self.scale = float(scale)
        self.exponents = monomial_exponents(self.degree)
        self.coefficients = coefficients

    @classmethod
    def for_cell(cls, cell, degree, settings=DEFAULT_SETTINGS, anchor=None, rule=None):
        """Basis of ``cell`` centered at its interior point.

        With ``anchor`` the basis lives in coordinates relative to it. ``rule``
        is the quadrature used for orthonormalization (exactness >= 2 degree).
        """
        center = cell.interior_point if anchor is None else cell.interior_point - anchor
        basis = cls(degree, center, cell.diameter)
        if degree >= settings.gram_threshold:
            if rule is None:
                rule = cell_quadrature(cell, 2 * degree, settings, anchor)
            basis = basis.orthonormalized(rule)
        return basis

    @property
    def dimension(self):
        return len(self.exponents)

    @property
    def is_orthonormal(self):
        return self.coefficients is not None

    def orthonormalized(self, rule):
        mono = CellBasis(self.degree, self.center, self.scale)
        V = mono.values(rule.points)
        gram = V.T @ (rule.weights[:, None] * V)
        C = _gram_schmidt(gram)
        _logger.debug(f"orthonormalized P_{self.degree} basis (h_T = {self.scale:.3e})")
        return CellBasis(self.degree, self.center, self.scale, C)

    def _scaled(self, points):
        X = (np.atleast_2d(points) - self.center) / self.scale
        return X[:, 0:1], X[:, 1:2]

    def _combine(self, table):
        if self.coefficients is None:
            return table
        return table @ self.coefficients

    def values(self, points):
        """Basis values, shape ``(M, n)``."""
        X, Y = self._scaled(points)
        a, b = self.exponents[:, 0], self.exponents[:, 1]
        return self._combine(X**a * Y**b)

    def gradients(self, points):
        """Basis gradients, shape ``(M, n, 2)``."""
        X, Y = self._scaled(points)
        a, b = self.exponents[:, 0], self.exponents[:, 1]
        dx = a * X ** np.maximum(a - 1, 0) * Y**b / self.scale
        dy = b * X**a * Y ** np.maximum(b - 1, 0) / self.scale
        return np.stack([self._combine(dx), self._combine(dy)], axis=-1)

    def laplacians(self, points):
        """Basis Laplacians, shape ``(M, n)``."""
        X, Y = self._scaled(points)
        a, b = self.exponents[:, 0], self.exponents[:, 1]
        lap = (
            a * (a - 1) * X ** np.maximum(a - 2, 0) * Y**b
            + b * (b - 1) * X**a * Y ** np.maximum(b - 2, 0)
        ) / self.scale**2
        return self._combine(lap)

    def evaluate(self, coefficients, points):
        return self.values(points) @ coefficients

    def __repr__(self):
        kind = "orthonormal" if self.is_orthonormal else "monomial"
        return f"CellBasis(degree={self.degree}, {kind}, h={self.scale:.3e})"


class EdgeBasis:
    """Monomials ``s^j`` in the affine edge coordinate ``s`` in [-1, 1].

    The coordinate runs from the edge start (lower vertex index) to its end, so
    both incident cells read a shared coefficient block the same way.
    """

    def __init__(self, degree):
        self.degree = int(degree)

    @property
    def dimension(self):
        return self.degree + 1

    def values(self, s):
        s = np.asarray(s, dtype=float)
        return s[:, None] ** np.arange(self.degree + 1)

    def evaluate(self, coefficients, s):
        return self.values(s) @ coefficients

    def __repr__(self):
        return f"EdgeBasis(degree={self.degree})"
