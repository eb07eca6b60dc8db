import numpy as np
import pytest

from wgplate.exceptions import UnsupportedDegree
from wgplate.mesh import generate_nonconvex_mesh, generate_square_mesh, single_cell_mesh
from wgplate.polyspaces import cell_quadrature, edge_quadrature
from wgplate.polyspaces.quadrature import collapsed_triangle, triangle_quadrature
from wgplate.settings import NumericsSettings


@pytest.fixture
def unit_cell():
    return generate_square_mesh(1).cells[0]


@pytest.fixture
def chevron_quad():
    return single_cell_mesh([(0.0, 0.0), (2.0, 0.5), (4.0, 0.0), (2.0, 2.0)], rho_min=0.1).cells[0]


@pytest.mark.parametrize("exactness", [0, 1, 5, 12, 30])
def test_measure(unit_cell, chevron_quad, exactness):
    assert cell_quadrature(unit_cell, exactness).measure == pytest.approx(1.0, rel=1e-12)
    assert cell_quadrature(chevron_quad, exactness).measure == pytest.approx(3.0, rel=1e-12)


def test_x2y_on_unit_square(unit_cell):
    rule = cell_quadrature(unit_cell, 3)
    x, y = rule.points[:, 0], rule.points[:, 1]
    assert rule.integrate(x**2 * y) == pytest.approx(1.0 / 6.0, rel=1e-12)


def test_first_moment_of_chevron_quad(chevron_quad):
    # shoelace decomposition into (0,0),(2,0.5),(2,2) and (2,0.5),(4,0),(2,2)
    expected = 1.5 * (4.0 / 3.0) + 1.5 * (8.0 / 3.0)
    rule = cell_quadrature(chevron_quad, 1)
    assert rule.integrate(rule.points[:, 0]) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("degree", [2, 7, 13, 22])
def test_monomial_exactness_on_triangle(degree):
    # int_T x^a y^b over the reference triangle = a! b! / (a + b + 2)!
    from math import factorial

    points, weights = collapsed_triangle(-(-(degree + 1) // 2))
    for a in range(degree + 1):
        b = degree - a
        exact = factorial(a) * factorial(b) / factorial(a + b + 2)
        value = weights @ (points[:, 0] ** a * points[:, 1] ** b)
        assert value == pytest.approx(exact, rel=1e-12)


def test_positive_weights_on_nonconvex_cells():
    mesh = generate_nonconvex_mesh(2)
    for cell in mesh.cells:
        rule = cell_quadrature(cell, 24)
        assert (rule.weights > 0.0).all()
        assert rule.measure == pytest.approx(cell.area, rel=1e-12)


def test_edge_rule_on_unit_segment():
    edge = generate_square_mesh(1).edges[0]
    assert np.allclose(edge.start, [0.0, 0.0]) and np.allclose(edge.end, [1.0, 0.0])
    exact = edge_quadrature(edge, 3)
    assert len(exact) == 2
    assert exact.measure == pytest.approx(1.0, rel=1e-14)
    assert exact.integrate(exact.points[:, 0] ** 2) == pytest.approx(1.0 / 3.0, rel=1e-14)
    midpoint = edge_quadrature(edge, 1)
    assert len(midpoint) == 1
    error = 1.0 / 3.0 - midpoint.integrate(midpoint.points[:, 0] ** 2)
    assert error == pytest.approx(1.0 / 12.0, rel=1e-14)


def test_edge_abscissae_follow_the_edge():
    edge = generate_square_mesh(2).edges[3]
    rule = edge_quadrature(edge, 9)
    assert np.allclose(edge.point_at(rule.abscissae), rule.points)
    assert np.allclose(edge.parameter(rule.points), rule.abscissae)


def test_anchor_shift(unit_cell):
    anchor = np.array([0.25, 0.5])
    plain = cell_quadrature(unit_cell, 4)
    shifted = cell_quadrature(unit_cell, 4, anchor=anchor)
    assert np.allclose(shifted.points + anchor, plain.points)
    assert np.allclose(plain.shifted(-anchor).points, shifted.points)


def test_unsupported_degree(unit_cell):
    with pytest.raises(UnsupportedDegree):
        cell_quadrature(unit_cell, 61)
    with pytest.raises(UnsupportedDegree):
        cell_quadrature(unit_cell, 12, NumericsSettings(max_exactness=10))
    with pytest.raises(UnsupportedDegree):
        triangle_quadrature(np.eye(3)[:, :2], [(0, 1, 2)], -1)
