import numpy as np
import pytest

from wgplate.analysis.manufactured import (
    ManufacturedSolution,
    manufactured,
    manufactured_poly,
    manufactured_trig,
    polynomial_solution,
)
from wgplate.exceptions import InvalidStudyConfig


def test_trig_source_at_the_center():
    u = manufactured_trig()
    assert u.f(np.array([[0.5, 0.5]]))[0] == pytest.approx(4.0 * np.pi**4, rel=1e-14)


def test_trig_vanishes_on_the_boundary():
    u = manufactured_trig()
    t = np.linspace(0.0, 1.0, 11)
    pts = np.vstack(
        [np.column_stack([t, 0 * t]), np.column_stack([t, 1 + 0 * t]), np.column_stack([0 * t, t])]
    )
    assert np.abs(u.xi(pts)).max() <= 1e-15


def test_poly_normal_data_on_right_side():
    u = manufactured_poly(2)
    pts = np.column_stack([np.ones(5), np.linspace(0, 1, 5)])
    assert np.allclose(u.nu(pts, np.array([1.0, 0.0])), 2.0)
    assert np.allclose(u.f(pts), 0.0)
    assert u.degree == 2


def test_poly_family_degrees():
    for k in (2, 3, 4):
        u = manufactured_poly(k)
        assert u.degree == k
        assert np.isinf(u.smoothness)


def test_biharmonic_of_polynomial():
    # u = x^4 gives Delta^2 u = 24
    u = polynomial_solution([[0.0], [0.0], [0.0], [0.0], [1.0]])
    assert np.allclose(u.f(np.array([[0.3, 0.7], [0.9, 0.1]])), 24.0)
    assert np.allclose(u.laplacian(np.array([[0.5, 0.0]])), 12.0 * 0.25)


@pytest.mark.parametrize("solution", [manufactured_trig(), manufactured_poly(3)])
def test_closures_are_consistent(solution):
    assert solution.check_consistency() <= 1e-3


def test_inconsistent_closures_detected():
    good = manufactured_trig()
    bad = ManufacturedSolution("bad", good.u, good.grad, good.laplacian, good.grad_laplacian, lambda p: 0 * good.u(p))
    assert bad.check_consistency() > 0.1


def test_named_solutions():
    assert manufactured("trig", 2).name == "trig"
    assert manufactured("poly", 3).name == "poly3"
    with pytest.raises(InvalidStudyConfig):
        manufactured("exp", 2)
