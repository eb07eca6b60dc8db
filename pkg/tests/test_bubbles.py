import numpy as np
import pytest

from wgplate.analysis.bubbles import build_bubbles
from wgplate.mesh import generate_nonconvex_mesh, reference_shapes, single_cell_mesh


@pytest.fixture(params=sorted(reference_shapes()))
def shape(request):
    return single_cell_mesh(reference_shapes()[request.param])


def test_positivity_bounds(shape):
    bubble = build_bubbles(shape.cells[0])
    assert bubble.rho0 > 0.0
    assert (bubble.rho1 > 0.0).all()
    assert len(bubble.sub_portions) == shape.cells[0].n_edges


def test_normalized_at_interior_point(shape):
    cell = shape.cells[0]
    bubble = build_bubbles(cell)
    assert bubble.element(cell.interior_point)[0] == pytest.approx(1.0, rel=1e-14)


def test_element_bubble_vanishes_on_the_boundary(shape):
    bubble = build_bubbles(shape.cells[0])
    s = np.linspace(-1.0, 1.0, 9)
    for edge in shape.edges:
        assert np.abs(bubble.element(edge.point_at(s))).max() <= 1e-13


def test_edge_bubble_vanishes_on_the_other_edges(shape):
    cell = shape.cells[0]
    bubble = build_bubbles(cell)
    s = np.linspace(-1.0, 1.0, 9)
    for k, (e, _) in enumerate(cell.edges):
        for j, (other, _) in enumerate(cell.edges):
            if j == k:
                continue
            assert np.abs(bubble.edge(k, shape.edges[other].point_at(s))).max() <= 1e-13


def test_sub_domain_inside_the_cell():
    cell = single_cell_mesh(reference_shapes()["chevron_pentagon"]).cells[0]
    bubble = build_bubbles(cell)
    assert bubble.shrink <= 0.5
    tri = cell.triangulation
    i, j, k = tri.largest()
    center = cell.coords[[i, j, k]].mean(axis=0)
    assert np.allclose(bubble.sub_domain.mean(axis=0), center)


def test_convex_variant_on_convex_cell():
    cell = single_cell_mesh(reference_shapes()["convex_pentagon"]).cells[0]
    squared = build_bubbles(cell)
    linear = build_bubbles(cell, convex=True)
    assert linear.power == 1 and squared.power == 2
    assert linear.rho0 > 0.0
    assert linear.element(cell.interior_point)[0] == pytest.approx(1.0)


def test_bubbles_on_every_chevron_cell():
    mesh = generate_nonconvex_mesh(2)
    for cell in mesh.cells:
        bubble = build_bubbles(cell, samples=6)
        assert bubble.rho0 > 0.0
        assert bubble.rho1.min() > 0.0
