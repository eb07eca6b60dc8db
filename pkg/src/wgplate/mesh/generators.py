"""Refinement families and single-cell samples."""

import logging

import numpy as np

from wgplate.exceptions import InvalidMesh
from wgplate.mesh.polymesh import PolyMesh
from wgplate.mesh.triangulate import signed_area
from wgplate.settings import DEFAULT_SETTINGS

_logger = logging.getLogger(__name__)

UNIT_SQUARE = (0.0, 1.0, 0.0, 1.0)


def _grid(n, domain):
    if int(n) != n or n < 1:
        raise InvalidMesh(f"refinement level n={n} must be a positive integer")
    x0, x1, y0, y1 = domain
    if not (x1 > x0 and y1 > y0):
        raise InvalidMesh(f"degenerate domain {domain}")
    xs = np.linspace(x0, x1, n + 1)
    ys = np.linspace(y0, y1, n + 1)
    X, Y = np.meshgrid(xs, ys)
    return np.column_stack([X.ravel(), Y.ravel()])


def generate_square_mesh(n, domain=UNIT_SQUARE, rho_min=None):
    """Uniform ``n x n`` grid of rectangles.

    Args:
        n (int): cells per direction.
        domain (tuple): ``(x0, x1, y0, y1)``.
        rho_min (float): shape bound, ``[mesh] rho_min`` when omitted.

    Returns:
        PolyMesh: cells in row-major order, counter-clockwise loops.
    """
    n = int(n)
    vertices = _grid(n, domain)

    def v(i, j):
        return j * (n + 1) + i

    loops = [
        (v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1))
        for j in range(n)
        for i in range(n)
    ]
    mesh = PolyMesh(vertices, loops, rho_min or DEFAULT_SETTINGS.rho_min)
    _logger.debug(f"square mesh n={n}: {mesh}")
    return mesh


def _zigzag_points(offset):
    # bend points of the polyline (0,0) -> P1 -> P2 -> (1,1) in unit cell coordinates
    p1 = np.array([1.0 / 3.0 + 0.5 * offset, 1.0 / 3.0 - 0.5 * offset])
    return p1, 1.0 - p1


def generate_nonconvex_mesh(n, domain=UNIT_SQUARE, offset=None, rho_min=None):
    """Chevron family: every grid square cut into two non-convex pentagons.

    Each square is split along its diagonal by the zigzag
    ``(0,0) -> P1 -> P2 -> (1,1)`` (cell-width units) with
    ``P1 = (1/3 + offset/2, 1/3 - offset/2)`` and ``P2 = (1,1) - P1``. The
    lower-right piece has its reflex vertex at ``P1``, the upper-left piece at
    ``P2``; both have area half the square and the square's diagonal as
    diameter, so the family is shape regular.

    Args:
        n (int): squares per direction.
        domain (tuple): ``(x0, x1, y0, y1)``.
        offset (float): reflex offset, ``[mesh] nonconvex_offset`` when omitted.
        rho_min (float): shape bound, ``[mesh] rho_min`` when omitted.
    """
    n = int(n)
    offset = DEFAULT_SETTINGS.nonconvex_offset if offset is None else offset
    if not 0.0 < offset < 2.0 / 3.0:
        raise InvalidMesh(f"reflex offset {offset} outside (0, 2/3)")
    grid = _grid(n, domain)
    x0, x1, y0, y1 = domain
    width = np.array([(x1 - x0) / n, (y1 - y0) / n])
    p1, p2 = _zigzag_points(offset)

    def v(i, j):
        return j * (n + 1) + i

    extra = []
    loops = []
    for j in range(n):
        for i in range(n):
            corner = grid[v(i, j)]
            a = len(grid) + len(extra)
            extra.append(corner + p1 * width)
            extra.append(corner + p2 * width)
            b = a + 1
            c00, c10, c11, c01 = v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)
            loops.append((c00, c10, c11, b, a))
            loops.append((c00, a, b, c11, c01))
    vertices = np.vstack([grid, np.array(extra)])
    mesh = PolyMesh(vertices, loops, rho_min or DEFAULT_SETTINGS.rho_min)
    _logger.debug(f"nonconvex mesh n={n}, offset={offset}: {mesh}")
    return mesh


def generate_mesh(family, n, settings=DEFAULT_SETTINGS):
    """Dispatch on the family name used by study configurations."""
    if family == "square":
        return generate_square_mesh(n, rho_min=settings.rho_min)
    if family == "nonconvex":
        return generate_nonconvex_mesh(n, offset=settings.nonconvex_offset, rho_min=settings.rho_min)
    raise InvalidMesh(f'unknown mesh family "{family}"')


def single_cell_mesh(vertices, rho_min=None):
    """One-cell mesh; a clockwise vertex list is reversed."""
    coords = np.array(vertices, dtype=float)
    loop = list(range(len(coords)))
    if len(coords) >= 3 and signed_area(coords) < 0.0:
        loop.reverse()
    return PolyMesh(coords, [loop], rho_min or DEFAULT_SETTINGS.rho_min)


def reference_shapes(offset=None):
    """Sample cells for verification sweeps, keyed by name."""
    offset = DEFAULT_SETTINGS.nonconvex_offset if offset is None else offset
    p1, p2 = _zigzag_points(offset)
    return {
        "square": [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        "convex_pentagon": [(0.0, 0.0), (1.0, 0.0), (1.3, 0.7), (0.5, 1.2), (-0.3, 0.7)],
        "chevron_pentagon": [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), tuple(p2), tuple(p1)],
    }
