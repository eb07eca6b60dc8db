"""Element and edge bubble functions of a polygonal cell.

With ``l_i(x) = (x - A_i) . n_i / h_T`` for the supporting line of loop edge
``i`` (``A_i`` its first vertex, ``n_i`` its outward normal), the element
bubble is ``Phi_B = prod_i l_i^2`` (``prod_i l_i`` in the convex variant),
scaled to 1 at the cell interior point, and the bubble of edge ``k`` is
``phi_k = prod_{i != k} l_i^2``.

On a non-convex cell the supporting line of an edge next to a reflex vertex
crosses the cell, so positivity is only recorded on a sub-domain: the largest
sub-triangle shrunk about its centroid by 1/2, halved again until no
supporting line meets it. Likewise ``rho_1`` is recorded on the middle half of
the longest piece of ``e_k`` not cut by another supporting line.
"""

import logging
from dataclasses import dataclass

import numpy as np

from wgplate.exceptions import WgplateInternalError

_logger = logging.getLogger(__name__)


def _triangle_samples(vertices, m=12):
    # barycentric lattice including the corners
    pts = []
    for i in range(m + 1):
        for j in range(m + 1 - i):
            lam = np.array([i, j, m - i - j]) / m
            pts.append(lam @ vertices)
    return np.array(pts)


@dataclass(frozen=True, eq=False)
class BubbleFunction:
    """Bubbles of one cell with their recorded positivity bounds.

    Attributes:
        anchors (numpy.ndarray): ``(N, 2)`` first vertex of every loop edge.
        normals (numpy.ndarray): ``(N, 2)`` outward unit normals.
        scale (float): factor making ``Phi_B(normalization_point) = 1``.
        sub_domain (numpy.ndarray): ``(3, 2)`` triangle where ``rho_0`` holds.
        shrink (float): shrink factor of ``sub_domain``.
        rho0 (float): sampled minimum of ``Phi_B`` on ``sub_domain``.
        sub_portions (list): per edge, the ``(t0, t1)`` parameter window.
        rho1 (numpy.ndarray): per edge, sampled minimum of ``phi_k`` there.
    """

    cell: object
    anchors: np.ndarray
    normals: np.ndarray
    diameter: float
    power: int
    normalization_point: np.ndarray
    scale: float
    sub_domain: np.ndarray
    shrink: float
    rho0: float
    sub_portions: list
    rho1: np.ndarray

    @property
    def n_edges(self):
        return len(self.anchors)

    def linear_forms(self, points):
        points = np.atleast_2d(points)
        diff = points[:, None, :] - self.anchors[None, :, :]
        return np.einsum("mnd,nd->mn", diff, self.normals) / self.diameter

    def element(self, points):
        return self.scale * np.prod(self.linear_forms(points) ** self.power, axis=1)

    def edge(self, k, points):
        forms = np.delete(self.linear_forms(points), k, axis=1)
        return np.prod(forms**2, axis=1)


def _edge_geometry(coords):
    anchors = coords
    ends = np.roll(coords, -1, axis=0)
    d = ends - anchors
    lengths = np.hypot(d[:, 0], d[:, 1])
    normals = np.column_stack([d[:, 1], -d[:, 0]]) / lengths[:, None]
    return anchors, ends, normals


def _clear_of_lines(vertices, anchors, normals, diameter):
    forms = np.einsum("mnd,nd->mn", vertices[:, None, :] - anchors[None, :, :], normals) / diameter
    # a supporting line misses the closed triangle iff its form keeps one strict sign
    return bool(np.all(np.all(forms > 0.0, axis=0) | np.all(forms < 0.0, axis=0)))


def build_bubbles(cell, convex=False, samples=12, max_halvings=30):
    """Element and edge bubbles of ``cell``.

    Args:
        cell (wgplate.mesh.Cell): a simple polygon.
        convex (bool): use ``prod l_i`` instead of ``prod l_i^2``.
        samples (int): lattice resolution for the recorded minima.
    """
    coords = np.asarray(cell.coords, dtype=float)
    anchors, ends, normals = _edge_geometry(coords)
    h = cell.diameter
    power = 1 if convex else 2
    point = np.asarray(cell.interior_point, dtype=float)

    raw = BubbleFunction(cell, anchors, normals, h, power, point, 1.0, None, 0.0, 0.0, [], None)
    value = raw.element(point)[0]
    if value == 0.0:
        raise WgplateInternalError(f"bubble of cell {cell.index} vanishes at its interior point")

    i, j, k = cell.triangulation.largest()
    triangle = coords[[i, j, k]]
    center = triangle.mean(axis=0)
    shrink = 0.5
    sub = center + shrink * (triangle - center)
    halvings = 0
    while not _clear_of_lines(sub, anchors, normals, h):
        halvings += 1
        if halvings > max_halvings:
            raise WgplateInternalError(f"no line-free sub-domain found in cell {cell.index}")
        shrink *= 0.5
        sub = center + shrink * (triangle - center)

    bubble = BubbleFunction(cell, anchors, normals, h, power, point, 1.0 / value, sub, shrink, 0.0, [], None)
    rho0 = float(bubble.element(_triangle_samples(sub, samples)).min())

    portions, rho1 = [], []
    t = np.linspace(0.0, 1.0, 2 * samples + 1)
    for e in range(len(anchors)):
        a, b = anchors[e], ends[e]
        cuts = [0.0, 1.0]
        for other in range(len(anchors)):
            if other == e:
                continue
            fa = (a - anchors[other]) @ normals[other]
            fb = (b - anchors[other]) @ normals[other]
            if fa * fb < 0.0:
                cuts.append(fa / (fa - fb))
        cuts = np.sort(cuts)
        longest = int(np.argmax(np.diff(cuts)))
        t0, t1 = cuts[longest], cuts[longest + 1]
        lo, hi = t0 + 0.25 * (t1 - t0), t1 - 0.25 * (t1 - t0)
        pts = a + np.outer(lo + (hi - lo) * t, b - a)
        portions.append((float(lo), float(hi)))
        rho1.append(float(bubble.edge(e, pts).min()))

    bubble = BubbleFunction(
        cell, anchors, normals, h, power, point, 1.0 / value, sub, shrink, rho0, portions, np.array(rho1)
    )
    _logger.debug(
        f"bubbles of cell {cell.index}: rho0={rho0:.3e} (shrink {shrink}), min rho1={min(rho1):.3e}"
    )
    return bubble
