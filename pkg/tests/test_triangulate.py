import numpy as np
import pytest

from wgplate.exceptions import SelfIntersectingPolygon
from wgplate.mesh import single_cell_mesh, triangulate_cell
from wgplate.mesh.triangulate import (
    diameter,
    ear_clip,
    interior_angles_reflex,
    is_simple,
    point_in_polygon,
    polygon_centroid,
    signed_area,
    triangle_areas,
    triangulate_polygon,
)

CHEVRON_QUAD = np.array([(0.0, 0.0), (2.0, 0.5), (4.0, 0.0), (2.0, 2.0)])


def test_unit_square_two_triangles():
    cell = single_cell_mesh([(0, 0), (1, 0), (1, 1), (0, 1)]).cells[0]
    tri = triangulate_cell(cell)
    assert len(tri) == 2
    assert tri.area == pytest.approx(1.0, rel=1e-12)


def test_chevron_quad_matches_shoelace():
    assert signed_area(CHEVRON_QUAD) == pytest.approx(3.0)
    assert interior_angles_reflex(CHEVRON_QUAD).tolist() == [False, True, False, False]
    triangles = ear_clip(CHEVRON_QUAD)
    areas = triangle_areas(CHEVRON_QUAD, triangles)
    assert len(triangles) == 2
    assert (areas > 0.0).all()
    assert abs(areas.sum() - 3.0) <= 1e-12 * 3.0


def test_chevron_quad_cell():
    cell = single_cell_mesh(CHEVRON_QUAD, rho_min=0.1).cells[0]
    assert not cell.is_convex
    assert point_in_polygon(cell.interior_point, cell.coords)[0]
    assert cell.interior_point.tolist() != cell.centroid.tolist()
    assert np.allclose(cell.centroid, [2.0, 5.0 / 6.0])


def test_repeated_vertex():
    with pytest.raises(SelfIntersectingPolygon):
        ear_clip([(0, 0), (1, 0), (1, 0), (1, 1), (0, 1)])


def test_collinear_polygon():
    with pytest.raises(SelfIntersectingPolygon):
        ear_clip([(0, 0), (1, 0), (2, 0)])


def test_global_indices():
    loop = (7, 3, 9, 4)
    tri = triangulate_polygon(loop, CHEVRON_QUAD)
    for local, glob in zip(tri.local, tri.triangles):
        assert tuple(loop[i] for i in local) == glob
    assert tri.largest() in tri.local


def test_polygon_helpers():
    square = np.array([(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)])
    assert diameter(square) == pytest.approx(2.0 * np.sqrt(2.0))
    assert np.allclose(polygon_centroid(square), [1.0, 1.0])
    assert is_simple(square)
    inside = point_in_polygon(np.array([(1.0, 1.0), (3.0, 1.0), (1.0, -0.5)]), square)
    assert inside.tolist() == [True, False, False]
