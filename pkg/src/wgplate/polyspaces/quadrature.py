"""Composite polygon and edge quadrature.

Triangles use the collapsed (Duffy) tensor product of Gauss-Jacobi(1, 0) in
the collapsed direction and Gauss-Legendre in the other one; edges use
Gauss-Legendre. An ``m``-point Gauss rule is exact to degree ``2m - 1``.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from wgplate.exceptions import UnsupportedDegree
from wgplate.settings import DEFAULT_SETTINGS


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Points and positive weights integrating polynomials up to ``exactness``.

    Attributes:
        points (numpy.ndarray): ``(M, 2)`` physical points.
        weights (numpy.ndarray): ``(M,)`` weights; their sum is the measure.
        exactness (int): polynomial degree integrated exactly.
        abscissae (numpy.ndarray): ``(M,)`` edge coordinates in [-1, 1] for
          edge rules, ``None`` for cell rules.
    """

    points: np.ndarray
    weights: np.ndarray
    exactness: int
    abscissae: np.ndarray = None

    def __len__(self):
        return len(self.weights)

    @property
    def measure(self):
        return float(self.weights.sum())

    def integrate(self, values):
        """Integrate sampled values; extra trailing axes are kept."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def shifted(self, offset):
        return QuadratureRule(self.points + offset, self.weights, self.exactness, self.abscissae)


def _points_for(exactness, max_exactness):
    if exactness < 0 or exactness > max_exactness:
        raise UnsupportedDegree(exactness, max_exactness)
    return max(1, -(-(exactness + 1) // 2))


@lru_cache(maxsize=None)
def gauss_legendre(m):
    s, w = leggauss(m)
    s.setflags(write=False)
    w.setflags(write=False)
    return s, w


@lru_cache(maxsize=None)
def collapsed_triangle(m):
    """Rule on the reference triangle (0,0), (1,0), (0,1) with m x m points."""
    t, wt = roots_jacobi(m, 1.0, 0.0)
    u = 0.5 * (1.0 + t)
    wu = 0.25 * wt
    s, ws = gauss_legendre(m)
    v = 0.5 * (1.0 + s)
    wv = 0.5 * ws
    U, V = np.meshgrid(u, v, indexing="ij")
    points = np.column_stack([U.ravel(), (V * (1.0 - U)).ravel()])
    weights = np.outer(wu, wv).ravel()
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def triangle_quadrature(coords, triangles, exactness, max_exactness=None):
    """Composite rule over triangles given as position triples into ``coords``."""
    if max_exactness is None:
        max_exactness = DEFAULT_SETTINGS.max_exactness
    ref_points, ref_weights = collapsed_triangle(_points_for(exactness, max_exactness))
    points, weights = [], []
    for i, j, k in triangles:
        a, b, c = coords[i], coords[j], coords[k]
        jac = np.column_stack([b - a, c - a])
        det = abs(np.linalg.det(jac))
        points.append(a + ref_points @ jac.T)
        weights.append(ref_weights * det)
    return QuadratureRule(np.vstack(points), np.concatenate(weights), exactness)


def cell_quadrature(cell, exactness, settings=DEFAULT_SETTINGS, anchor=None):
    """Composite rule on the sub-triangulation of ``cell``.

    Args:
        cell (wgplate.mesh.Cell): the polygon.
        exactness (int): degree to integrate exactly.
        anchor (numpy.ndarray): when given, points are relative to it.

    Raises:
        UnsupportedDegree: exactness above ``[quadrature] max_exactness``.
    """
    coords = cell.coords if anchor is None else cell.coords - anchor
    return triangle_quadrature(
        coords, cell.triangulation.local, exactness, settings.max_exactness
    )


def edge_quadrature(edge, exactness, settings=DEFAULT_SETTINGS, anchor=None):
    m = _points_for(exactness, settings.max_exactness)
    s, w = gauss_legendre(m)
    points = edge.point_at(s)
    if anchor is not None:
        points = points - anchor
    return QuadratureRule(points, 0.5 * edge.length * w, exactness, s)
