"""Polygonal meshes with globally oriented edges.

Orientation convention: an interior edge carries the unit normal ``n_e`` that
points from its lower-indexed incident cell into the higher-indexed one; a
boundary edge carries the outward normal of the domain. Each cell records, per
loop edge, the sign ``sigma`` with ``sigma * n_e`` equal to the outward normal
of that cell, so ``sigma = n_e . n`` in the edge terms of the weak Laplacian.
"""

import logging
from dataclasses import dataclass

import numpy as np

from wgplate.exceptions import (
    EdgeNotIncident,
    InvalidMesh,
    SelfIntersectingPolygon,
    ShapeRegularityViolation,
)
from wgplate.mesh.triangulate import (
    SubTriangulation,
    diameter,
    interior_angles_reflex,
    is_simple,
    point_in_polygon,
    polygon_centroid,
    signed_area,
    triangulate_polygon,
)

_logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Edge:
    index: int
    endpoints: tuple
    start: np.ndarray
    end: np.ndarray
    normal: np.ndarray
    length: float
    midpoint: np.ndarray
    cells: tuple

    @property
    def tangent(self):
        return (self.end - self.start) / self.length

    @property
    def is_boundary(self):
        return len(self.cells) == 1

    def point_at(self, s):
        """Map the affine edge coordinate ``s`` in [-1, 1] to the plane."""
        s = np.asarray(s, dtype=float)
        return self.midpoint + (0.5 * self.length * s)[..., None] * self.tangent

    def parameter(self, points):
        return (np.asarray(points) - self.midpoint) @ self.tangent * (2.0 / self.length)


@dataclass(frozen=True, eq=False)
class Cell:
    """A simple polygon of the mesh.

    Attributes:
        loop (tuple): counter-clockwise vertex indices.
        coords (numpy.ndarray): ``(N, 2)`` vertex coordinates of the loop.
        edges (tuple): ``(edge index, sigma)`` per loop edge, where loop edge
          ``i`` runs from ``loop[i]`` to ``loop[i + 1]``.
        interior_point (numpy.ndarray): the centroid for convex cells, the
          centroid of the largest sub-triangle otherwise.
    """

    index: int
    loop: tuple
    coords: np.ndarray
    edges: tuple
    area: float
    diameter: float
    centroid: np.ndarray
    interior_point: np.ndarray
    triangulation: SubTriangulation
    is_convex: bool

    @property
    def n_edges(self):
        return len(self.edges)

    def sign(self, edge_index):
        for e, sigma in self.edges:
            if e == edge_index:
                return sigma
        raise EdgeNotIncident(self.index, edge_index)

    def local_position(self, edge_index):
        for pos, (e, _) in enumerate(self.edges):
            if e == edge_index:
                return pos
        raise EdgeNotIncident(self.index, edge_index)


class PolyMesh:
    """Immutable conforming mesh of simple polygons.

    Args:
        vertices: ``(NV, 2)`` coordinates.
        loops: one counter-clockwise vertex-index loop per cell.
        rho_min (float): lower bound of ``area / h_T^2`` per cell.
        flipped (iterable): edges whose normal is reversed against the
          orientation convention (used to exercise sign handling).
    """

    def __init__(self, vertices, loops, rho_min=0.02, flipped=()):
        self.vertices = np.array(vertices, dtype=float)
        self.vertices.setflags(write=False)
        self.loops = tuple(tuple(int(v) for v in loop) for loop in loops)
        self.rho_min = rho_min
        self.flipped = frozenset(flipped)
        if not self.loops:
            raise InvalidMesh("no cells")
        if not np.isfinite(self.vertices).all():
            raise InvalidMesh("non-finite vertex coordinates")

        incidences = {}
        order = []
        for c, loop in enumerate(self.loops):
            if len(loop) < 3:
                raise InvalidMesh(f"cell {c} has fewer than 3 vertices")
            for i, a in enumerate(loop):
                b = loop[(i + 1) % len(loop)]
                key = (min(a, b), max(a, b))
                if key not in incidences:
                    incidences[key] = []
                    order.append(key)
                incidences[key].append((c, i, a < b))

        self.edges = []
        signs = {}
        for e, key in enumerate(order):
            inc = sorted(incidences[key])
            if len(inc) > 2:
                raise InvalidMesh(f"edge {key} shared by {len(inc)} cells")
            if len(inc) == 2 and inc[0][2] == inc[1][2]:
                raise InvalidMesh(f"cells {inc[0][0]} and {inc[1][0]} traverse edge {key} in the same direction")
            start, end = self.vertices[key[0]], self.vertices[key[1]]
            length = float(np.hypot(*(end - start)))
            if length <= 0.0:
                raise InvalidMesh(f"edge {key} has zero length")
            tangent = (end - start) / length
            # outward normal of the lowest-indexed cell, whose loop runs a -> b
            forward = inc[0][2]
            loop_tangent = tangent if forward else -tangent
            normal = np.array([loop_tangent[1], -loop_tangent[0]])
            if e in self.flipped:
                normal = -normal
            normal.setflags(write=False)
            cells = tuple(c for c, _, _ in inc)
            self.edges.append(
                Edge(e, key, start, end, normal, length, 0.5 * (start + end), cells)
            )
            first_sign = -1 if e in self.flipped else 1
            signs[(inc[0][0], e)] = first_sign
            if len(inc) == 2:
                signs[(inc[1][0], e)] = -first_sign

        edge_of = {key: e for e, key in enumerate(order)}
        self.cells = []
        for c, loop in enumerate(self.loops):
            self.cells.append(self._build_cell(c, loop, edge_of, signs))

        self.boundary_edges = frozenset(e.index for e in self.edges if e.is_boundary)
        self.h = max(cell.diameter for cell in self.cells)
        self._check_signs()
        _logger.debug(
            f"mesh built: {len(self.vertices)} vertices, {len(self.edges)} edges, "
            f"{len(self.cells)} cells, h = {self.h:.6g}"
        )

    def _build_cell(self, c, loop, edge_of, signs):
        coords = self.vertices[list(loop)]
        area = signed_area(coords)
        if area <= 0.0:
            raise InvalidMesh(f"cell {c} is not counter-clockwise (signed area {area:.3e})")
        if not is_simple(coords):
            raise SelfIntersectingPolygon(coords.tolist())
        triangulation = triangulate_polygon(loop, coords)
        if abs(triangulation.area - area) > 1e-12 * area:
            raise InvalidMesh(f"cell {c} triangulation does not cover the polygon")
        h_T = diameter(coords)
        ratio = area / h_T**2
        if ratio < self.rho_min:
            raise ShapeRegularityViolation(c, ratio, self.rho_min)
        convex = not interior_angles_reflex(coords).any()
        if convex:
            interior = polygon_centroid(coords)
        else:
            i, j, k = triangulation.largest()
            interior = coords[[i, j, k]].mean(axis=0)
        edges = []
        for i, a in enumerate(loop):
            b = loop[(i + 1) % len(loop)]
            e = edge_of[(min(a, b), max(a, b))]
            edges.append((e, signs[(c, e)]))
        coords.setflags(write=False)
        return Cell(
            c,
            loop,
            coords,
            tuple(edges),
            area,
            h_T,
            polygon_centroid(coords),
            interior,
            triangulation,
            convex,
        )

    def _check_signs(self):
        # sigma * n_e must leave the cell: test points on both sides of each midpoint
        for cell in self.cells:
            if not point_in_polygon(cell.interior_point, cell.coords)[0]:
                raise InvalidMesh(f"interior point of cell {cell.index} is outside")
            for e, sigma in cell.edges:
                if e in self.flipped:
                    continue
                edge = self.edges[e]
                step = 1e-7 * cell.diameter * sigma * edge.normal
                outside, inside = point_in_polygon(
                    np.array([edge.midpoint + step, edge.midpoint - step]), cell.coords
                )
                if outside or not inside:
                    raise InvalidMesh(f"edge {e} normal sign inconsistent for cell {cell.index}")

    @property
    def n_cells(self):
        return len(self.cells)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def interior_edges(self):
        return [e.index for e in self.edges if not e.is_boundary]

    @property
    def area(self):
        return sum(cell.area for cell in self.cells)

    def edge_sign(self, cell, edge_index):
        """Return sigma with sigma * n_e outward for ``cell`` on this edge."""
        if not isinstance(cell, Cell):
            cell = self.cells[cell]
        return cell.sign(edge_index)

    def cell_edges(self, cell):
        """Yield ``(Edge, sigma)`` pairs in loop order."""
        return [(self.edges[e], sigma) for e, sigma in cell.edges]

    def scaled(self, factor):
        return PolyMesh(self.vertices * factor, self.loops, self.rho_min, self.flipped)

    def permuted(self, order):
        """Mesh with cells listed in ``order``; edge normals follow the convention."""
        return PolyMesh(self.vertices, [self.loops[c] for c in order], self.rho_min)

    def with_flipped_normal(self, edge_index):
        return PolyMesh(
            self.vertices, self.loops, self.rho_min, self.flipped | {edge_index}
        )

    def __repr__(self):
        return f"PolyMesh(cells={self.n_cells}, edges={self.n_edges}, h={self.h:.6g})"


def edge_sign(mesh, cell, edge_index):
    return mesh.edge_sign(cell, edge_index)
