import math

import numpy as np
import pytest

from wgplate.exceptions import (
    EdgeNotIncident,
    InvalidMesh,
    InvalidMeshFile,
    SelfIntersectingPolygon,
    ShapeRegularityViolation,
)
from wgplate.mesh import (
    PolyMesh,
    edge_sign,
    generate_mesh,
    generate_nonconvex_mesh,
    generate_square_mesh,
    load_mesh,
    point_in_polygon,
    reference_shapes,
    save_mesh,
    single_cell_mesh,
)
from wgplate.mesh.triangulate import interior_angles_reflex


@pytest.mark.parametrize(
    "n, n_cells, n_vertices, n_edges, n_boundary",
    [(1, 1, 4, 4, 4), (2, 4, 9, 12, 8), (3, 9, 16, 24, 12)],
)
def test_square_mesh_counts(n, n_cells, n_vertices, n_edges, n_boundary):
    mesh = generate_square_mesh(n)
    assert mesh.n_cells == n_cells
    assert len(mesh.vertices) == n_vertices
    assert mesh.n_edges == n_edges
    assert len(mesh.boundary_edges) == n_boundary


def test_square_mesh_size():
    assert generate_square_mesh(4).h == pytest.approx(math.sqrt(2) / 4, abs=1e-15)


@pytest.mark.parametrize("family", ["square", "nonconvex"])
def test_refinement_halves_h(family):
    coarse = generate_mesh(family, 3)
    fine = generate_mesh(family, 6)
    assert abs(fine.h - coarse.h / 2) <= 1e-14


def test_nonconvex_single_square():
    mesh = generate_nonconvex_mesh(1)
    assert mesh.n_cells == 2
    for cell in mesh.cells:
        assert cell.n_edges == 5
        assert interior_angles_reflex(cell.coords).sum() == 1
        assert not cell.is_convex


def test_nonconvex_partition_of_area():
    mesh = generate_nonconvex_mesh(2)
    assert mesh.n_cells == 8
    assert abs(mesh.area - 1.0) <= 1e-12
    for cell in mesh.cells:
        assert cell.area == pytest.approx(1.0 / 8.0, rel=1e-12)


def test_nonconvex_offset_range():
    with pytest.raises(InvalidMesh):
        generate_nonconvex_mesh(2, offset=0.7)


@pytest.mark.parametrize("family", ["square", "nonconvex"])
def test_edge_invariants(family):
    mesh = generate_mesh(family, 3)
    for edge in mesh.edges:
        assert abs(np.linalg.norm(edge.normal) - 1.0) <= 1e-14
        assert abs(edge.normal @ (edge.end - edge.start)) <= 1e-14 * edge.length
        assert edge.length > 0.0
        assert len(edge.cells) in (1, 2)
        assert edge.is_boundary == (edge.index in mesh.boundary_edges)


@pytest.mark.parametrize("family", ["square", "nonconvex"])
def test_interior_edges_have_opposite_signs(family):
    mesh = generate_mesh(family, 3)
    for e in mesh.interior_edges:
        a, b = mesh.edges[e].cells
        assert edge_sign(mesh, a, e) == -edge_sign(mesh, b, e)
        assert a < b
        assert edge_sign(mesh, a, e) == 1


@pytest.mark.parametrize("family", ["square", "nonconvex"])
def test_boundary_normals_point_out_of_the_domain(family):
    mesh = generate_mesh(family, 2)
    for e in mesh.boundary_edges:
        edge = mesh.edges[e]
        assert mesh.edge_sign(edge.cells[0], e) == 1
        outside = edge.midpoint + 1e-6 * edge.normal
        assert not (0.0 < outside[0] < 1.0 and 0.0 < outside[1] < 1.0)


def test_bottom_edge_sign_of_unit_square():
    mesh = generate_square_mesh(1)
    cell = mesh.cells[0]
    bottom = [e for e in mesh.edges if np.allclose(e.normal, [0.0, -1.0])]
    assert len(bottom) == 1
    assert mesh.edge_sign(cell, bottom[0].index) == 1


def test_edge_not_incident():
    mesh = generate_square_mesh(2)
    far = [e for e in range(mesh.n_edges) if e not in dict(mesh.cells[0].edges)][0]
    with pytest.raises(EdgeNotIncident):
        mesh.edge_sign(0, far)


@pytest.mark.parametrize("family", ["square", "nonconvex"])
def test_interior_points_are_inside(family):
    mesh = generate_mesh(family, 3)
    for cell in mesh.cells:
        assert point_in_polygon(cell.interior_point, cell.coords)[0]


@pytest.mark.parametrize("family", ["square", "nonconvex"])
def test_subtriangulation_covers_every_cell(family):
    mesh = generate_mesh(family, 4)
    for cell in mesh.cells:
        tri = cell.triangulation
        assert (tri.areas > 0.0).all()
        assert abs(tri.area - cell.area) <= 1e-12 * cell.area


def test_shape_regularity_bound():
    sliver = [(0.0, 0.0), (1.0, 0.0), (1.0, 0.001), (0.0, 0.001)]
    with pytest.raises(ShapeRegularityViolation):
        single_cell_mesh(sliver)
    assert single_cell_mesh(sliver, rho_min=1e-4).n_cells == 1


def test_clockwise_loop_rejected_by_mesh():
    with pytest.raises(InvalidMesh):
        PolyMesh([(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 3, 2, 1)])


def test_clockwise_vertices_reversed_for_single_cell():
    mesh = single_cell_mesh([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert mesh.cells[0].area == pytest.approx(1.0)


def test_self_intersecting_cell():
    # last edge crosses the bottom edge, signed area stays positive
    with pytest.raises(SelfIntersectingPolygon):
        PolyMesh([(0, 0), (4, 0), (4, 4), (0, 4), (2, -1)], [(0, 1, 2, 3, 4)])


def test_edge_shared_by_three_cells():
    vertices = [(0, 0), (1, 0), (0.5, 1), (0.5, -1), (2, 2)]
    with pytest.raises(InvalidMesh):
        PolyMesh(vertices, [(0, 1, 2), (0, 3, 1), (1, 0, 4)], rho_min=1e-3)


def test_scaled_mesh():
    mesh = generate_nonconvex_mesh(2)
    small = mesh.scaled(0.5)
    assert small.h == pytest.approx(mesh.h / 2, rel=1e-14)
    assert small.area == pytest.approx(0.25, rel=1e-12)


def test_permuted_mesh_keeps_geometry():
    mesh = generate_square_mesh(3)
    order = list(reversed(range(mesh.n_cells)))
    permuted = mesh.permuted(order)
    assert permuted.n_edges == mesh.n_edges
    assert permuted.cells[0].loop == mesh.cells[-1].loop
    for e in permuted.interior_edges:
        a, b = permuted.edges[e].cells
        assert permuted.edge_sign(a, e) == -permuted.edge_sign(b, e)


def test_flipped_normal():
    mesh = generate_square_mesh(2)
    e = sorted(mesh.boundary_edges)[0]
    flipped = mesh.with_flipped_normal(e)
    assert np.allclose(flipped.edges[e].normal, -mesh.edges[e].normal)
    cell = mesh.edges[e].cells[0]
    assert flipped.edge_sign(cell, e) == -mesh.edge_sign(cell, e)


def test_reference_shapes_are_valid_cells():
    shapes = reference_shapes()
    assert set(shapes) == {"square", "convex_pentagon", "chevron_pentagon"}
    assert single_cell_mesh(shapes["convex_pentagon"]).cells[0].is_convex
    chevron = single_cell_mesh(shapes["chevron_pentagon"]).cells[0]
    assert not chevron.is_convex
    assert chevron.area == pytest.approx(0.5)


def test_mesh_file_roundtrip(tmp_path):
    mesh = generate_nonconvex_mesh(2)
    path = tmp_path / "chevron.mesh"
    save_mesh(mesh, path)
    loaded = load_mesh(path)
    assert loaded.n_cells == mesh.n_cells
    assert loaded.n_edges == mesh.n_edges
    assert np.array_equal(loaded.vertices, mesh.vertices)


def test_mesh_file_with_comments(tmp_path):
    path = tmp_path / "square.mesh"
    path.write_text("# one unit square\n4 1\n0 0\n1 0\n\n1 1\n0 1  # top left\n4 0 1 2 3\n")
    mesh = load_mesh(path)
    assert mesh.n_cells == 1
    assert mesh.area == pytest.approx(1.0)


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("4 one\n", 1),
        ("3 1\n0 0\n1 0\n0 1\n3 0 1\n", 5),
        ("3 1\n0 0\n1 x\n0 1\n3 0 1 2\n", 3),
        ("3 1\n0 0\n1 0\n0 1\n3 0 1 7\n", 5),
    ],
)
def test_mesh_file_errors(tmp_path, text, line):
    path = tmp_path / "bad.mesh"
    path.write_text(text)
    with pytest.raises(InvalidMeshFile) as e:
        load_mesh(path)
    assert e.value.line == line
