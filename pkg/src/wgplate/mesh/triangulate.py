"""Polygon primitives and ear-clipping triangulation.

Cells are small simple polygons (N <= 6 in the generated families), so the
naive O(N^2) ear clipping is used: repeatedly cut a convex vertex whose
triangle contains no other polygon vertex.
"""

from dataclasses import dataclass

import numpy as np

from wgplate.exceptions import SelfIntersectingPolygon


@dataclass(frozen=True, eq=False)
class SubTriangulation:
    """Triangles covering a cell.

    Attributes:
        local (tuple): triples of positions in the cell loop.
        triangles (tuple): the same triples as global vertex indices.
        areas (numpy.ndarray): positive triangle areas.
    """

    local: tuple
    triangles: tuple
    areas: np.ndarray

    def __len__(self):
        return len(self.triangles)

    @property
    def area(self):
        return float(self.areas.sum())

    def largest(self):
        return self.local[int(np.argmax(self.areas))]


def signed_area(coords):
    # shoelace formula, positive for counter-clockwise loops
    x, y = coords[:, 0], coords[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_centroid(coords):
    x, y = coords[:, 0], coords[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = 0.5 * cross.sum()
    return np.array([((x + xn) * cross).sum(), ((y + yn) * cross).sum()]) / (6.0 * a)


def diameter(coords):
    diff = coords[:, None, :] - coords[None, :, :]
    return float(np.sqrt((diff**2).sum(axis=-1)).max())


def interior_angles_reflex(coords):
    # True at vertices whose interior angle exceeds pi (CCW loop)
    prev = coords - np.roll(coords, 1, axis=0)
    nxt = np.roll(coords, -1, axis=0) - coords
    cross = prev[:, 0] * nxt[:, 1] - prev[:, 1] * nxt[:, 0]
    return cross < 0.0


def point_in_polygon(points, coords):
    """Even-odd ray casting test for one or many points."""
    points = np.atleast_2d(points)
    x, y = points[:, 0][:, None], points[:, 1][:, None]
    xa, ya = coords[:, 0][None, :], coords[:, 1][None, :]
    xb, yb = np.roll(coords[:, 0], -1)[None, :], np.roll(coords[:, 1], -1)[None, :]
    straddle = (ya > y) != (yb > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xcross = xa + (y - ya) * (xb - xa) / (yb - ya)
    inside = np.logical_and(straddle, x < xcross).sum(axis=1) % 2 == 1
    return inside


def segments_intersect(p1, p2, q1, q2):
    # proper or touching intersection of two closed segments
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 and d2 and d3 and d4:
        return True

    def on_segment(a, b, c):
        return (
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    return (
        (d1 == 0 and on_segment(q1, q2, p1))
        or (d2 == 0 and on_segment(q1, q2, p2))
        or (d3 == 0 and on_segment(p1, p2, q1))
        or (d4 == 0 and on_segment(p1, p2, q2))
    )


def is_simple(coords):
    m = len(coords)
    for i in range(m):
        for j in range(i + 1, m):
            # adjacent edges share a vertex by construction
            if j == i + 1 or (i == 0 and j == m - 1):
                continue
            if segments_intersect(
                coords[i], coords[(i + 1) % m], coords[j], coords[(j + 1) % m]
            ):
                return False
    return True


def ear_clip(coords, tolerance=1e-14):
    """Triangulate a counter-clockwise simple polygon.

    Args:
        coords (numpy.ndarray): ``(m, 2)`` vertex coordinates, CCW.
        tolerance (float): relative area threshold for degenerate ears.

    Returns:
        list: triples of vertex positions.

    Raises:
        SelfIntersectingPolygon: on repeated vertices or when no ear can be cut.
    """
    coords = np.asarray(coords, dtype=float)
    m = len(coords)
    scale = diameter(coords) if m > 1 else 0.0
    if m < 3 or scale == 0.0:
        raise SelfIntersectingPolygon(coords.tolist())
    gaps = np.sqrt(((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=-1))
    if (gaps[np.triu_indices(m, 1)] <= tolerance * scale).any():
        raise SelfIntersectingPolygon(coords.tolist())

    eps = tolerance * scale * scale
    remaining = list(range(m))
    triangles = []
    while len(remaining) > 3:
        for pos in range(len(remaining)):
            i = remaining[pos - 1]
            j = remaining[pos]
            k = remaining[(pos + 1) % len(remaining)]
            if _cross(coords[i], coords[j], coords[k]) <= eps:
                continue
            others = [v for v in remaining if v not in (i, j, k)]
            if any(_in_triangle(coords[v], coords[i], coords[j], coords[k], eps) for v in others):
                continue
            triangles.append((i, j, k))
            remaining.pop(pos)
            break
        else:
            raise SelfIntersectingPolygon(coords.tolist())
    i, j, k = remaining
    if _cross(coords[i], coords[j], coords[k]) <= eps:
        raise SelfIntersectingPolygon(coords.tolist())
    triangles.append((i, j, k))
    return triangles


def triangle_areas(coords, triangles):
    return np.array([0.5 * _cross(coords[i], coords[j], coords[k]) for i, j, k in triangles])


def triangulate_polygon(loop, coords):
    local = tuple(tuple(t) for t in ear_clip(coords))
    triangles = tuple(tuple(loop[v] for v in t) for t in local)
    return SubTriangulation(local, triangles, triangle_areas(coords, local))


def triangulate_cell(cell):
    """Ear-clipping sub-triangulation of a mesh cell."""
    return triangulate_polygon(cell.loop, cell.coords)


def _cross(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _in_triangle(p, a, b, c, eps):
    # closed test; vertices of the ear itself are excluded by the caller
    return _cross(a, b, p) >= -eps and _cross(b, c, p) >= -eps and _cross(c, a, p) >= -eps
