import logging

import numpy as np
import pytest

from wgplate.analysis.manufactured import manufactured_poly, polynomial_solution
from wgplate.exceptions import SingularMass
from wgplate.mesh import generate_nonconvex_mesh, generate_square_mesh
from wgplate.polyspaces import (
    CellBasis,
    EdgeBasis,
    MassMatrix,
    cell_quadrature,
    dimension,
    monomial_exponents,
    project_cell,
    project_edge,
)
from wgplate.polyspaces.injection import inject_Qh
from wgplate.weak_laplacian import WeakDofLayout


@pytest.fixture
def unit_cell():
    return generate_square_mesh(1).cells[0]


@pytest.fixture
def chevron():
    return generate_nonconvex_mesh(1).cells[0]


def test_dimensions():
    assert [dimension(d) for d in range(5)] == [1, 3, 6, 10, 15]
    assert monomial_exponents(2).tolist() == [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]
    assert EdgeBasis(3).dimension == 4


def test_sin_mean_on_unit_square(unit_cell):
    f = lambda p: np.sin(np.pi * p[:, 0]) * np.sin(np.pi * p[:, 1])
    c = project_cell(f, 0, unit_cell, exactness=30)
    assert c[0] == pytest.approx(4.0 / np.pi**2, rel=1e-12)


@pytest.mark.parametrize("degree", [0, 2, 5])
def test_constant_reproduced(unit_cell, chevron, degree):
    for cell in (unit_cell, chevron):
        basis = CellBasis.for_cell(cell, degree)
        c = project_cell(lambda p: np.full(len(p), 3.0), degree, cell, basis)
        pts = cell_quadrature(cell, 4).points
        assert np.allclose(basis.evaluate(c, pts), 3.0, rtol=0, atol=1e-12)


@pytest.mark.parametrize("degree", [1, 3, 6, 8])
def test_basis_function_gives_unit_vector(chevron, degree):
    basis = CellBasis.for_cell(chevron, degree)
    for j in (0, basis.dimension // 2, basis.dimension - 1):
        c = project_cell(lambda p: basis.values(p)[:, j], degree, chevron, basis)
        expected = np.zeros(basis.dimension)
        expected[j] = 1.0
        assert np.allclose(c, expected, atol=1e-10)


@pytest.mark.parametrize("degree", [2, 4, 7])
def test_projection_idempotent(chevron, degree):
    basis = CellBasis.for_cell(chevron, degree)
    f = lambda p: np.exp(p[:, 0]) * np.cos(3 * p[:, 1])
    once = project_cell(f, degree, chevron, basis)
    twice = project_cell(lambda p: basis.evaluate(once, p), degree, chevron, basis)
    assert np.allclose(once, twice, atol=1e-12 * max(1.0, np.abs(once).max()))


def test_orthonormal_from_threshold(chevron):
    low = CellBasis.for_cell(chevron, 5)
    high = CellBasis.for_cell(chevron, 6)
    assert not low.is_orthonormal
    assert high.is_orthonormal
    rule = cell_quadrature(chevron, 14)
    V = high.values(rule.points)
    gram = V.T @ (rule.weights[:, None] * V)
    assert np.allclose(gram, np.eye(high.dimension), atol=1e-12)


def test_basis_derivatives_match_finite_differences(chevron):
    basis = CellBasis.for_cell(chevron, 7)
    pts = cell_quadrature(chevron, 2).points
    step = 1e-5 * chevron.diameter
    ex, ey = np.array([step, 0.0]), np.array([0.0, step])
    dx = (basis.values(pts + ex) - basis.values(pts - ex)) / (2 * step)
    dy = (basis.values(pts + ey) - basis.values(pts - ey)) / (2 * step)
    grads = basis.gradients(pts)
    scale = np.abs(grads).max()
    assert np.allclose(grads[..., 0], dx, atol=1e-6 * scale)
    assert np.allclose(grads[..., 1], dy, atol=1e-6 * scale)


@pytest.mark.parametrize("degree", [0, 3, 11])
def test_mass_matrix_spd(chevron, degree):
    rule = cell_quadrature(chevron, 2 * degree + 2)
    basis = CellBasis.for_cell(chevron, degree, rule=rule)
    mass = MassMatrix.from_table(basis.values(rule.points), rule.weights, degree)
    assert np.abs(mass.matrix - mass.matrix.T).max() <= 1e-13 * np.abs(mass.matrix).max()
    assert np.linalg.eigvalsh(mass.matrix).min() > 0.0


def test_mass_quadrature_saturation(chevron):
    basis = CellBasis.for_cell(chevron, 4)
    tables = []
    for exactness in (8, 10):
        rule = cell_quadrature(chevron, exactness)
        V = basis.values(rule.points)
        tables.append(V.T @ (rule.weights[:, None] * V))
    assert np.abs(tables[0] - tables[1]).max() <= 1e-12 * np.abs(tables[1]).max()


def test_singular_mass():
    with pytest.raises(SingularMass):
        MassMatrix(np.array([[1.0, 1.0], [1.0, 1.0]]), 1)
    with pytest.raises(SingularMass):
        MassMatrix(np.array([[1.0, 0.5], [0.0, 1.0]]), 1)


def test_inaccurate_mass_solve_warns(monkeypatch, caplog):
    mass = MassMatrix(np.diag([1.0, 2.0]), 1)
    monkeypatch.setattr("wgplate.polyspaces.projection.cho_solve", lambda factor, rhs: rhs)
    with caplog.at_level(logging.WARNING, logger="wgplate.polyspaces.projection"):
        mass.solve(np.array([1.0, 1.0]))
    assert "P_1 mass solve residual" in caplog.text


def test_accurate_mass_solve_is_quiet(caplog):
    mass = MassMatrix(np.diag([1.0, 2.0]), 1)
    with caplog.at_level(logging.WARNING, logger="wgplate.polyspaces.projection"):
        x = mass.solve(np.array([1.0, 1.0]))
    assert np.allclose(x, [1.0, 0.5])
    assert caplog.text == ""


def test_edge_projection():
    edge = generate_square_mesh(1).edges[0]
    s2 = project_edge(lambda p: edge.parameter(p) ** 2, 0, edge)
    assert s2[0] == pytest.approx(1.0 / 3.0, rel=1e-14)
    const = project_edge(lambda p: np.full(len(p), -2.5), 2, edge)
    assert np.allclose(const, [-2.5, 0.0, 0.0], atol=1e-14)
    linear = project_edge(lambda p: 1.0 + 4.0 * edge.parameter(p), 1, edge)
    assert np.allclose(linear, [1.0, 4.0], atol=1e-13)


def test_inject_constant():
    mesh = generate_nonconvex_mesh(2)
    layout = WeakDofLayout(2)
    one = polynomial_solution([[1.0]], "one")
    v = inject_Qh(one, layout, mesh)
    for cell in mesh.cells:
        assert np.allclose(v.interior(cell.index), [1, 0, 0, 0, 0, 0], atol=1e-12)
    for edge in mesh.edges:
        assert np.allclose(v.trace(edge.index), [1, 0, 0], atol=1e-12)
        assert np.allclose(v.normal(edge.index), 0.0, atol=1e-12)


def test_inject_quadratic_normal_blocks():
    mesh = generate_square_mesh(2)
    layout = WeakDofLayout(2, 2, 1)
    solution = manufactured_poly(2)
    v = inject_Qh(solution, layout, mesh)
    for edge in mesh.edges:
        # grad(x^2 + y^2) . n_e = 2 x . n_e is constant along a straight edge
        assert np.allclose(v.normal(edge.index), [2.0 * edge.midpoint @ edge.normal, 0.0], atol=1e-12)
        s = np.linspace(-1, 1, 5)
        trace = EdgeBasis(2).evaluate(v.trace(edge.index), s)
        assert np.allclose(trace, solution.u(edge.point_at(s)), atol=1e-12)
