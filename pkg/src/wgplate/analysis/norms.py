"""Error norms and the consistency functional of the error equation.

All functions take weak DOF vectors (:class:`wgplate.solver.dofmap.WeakDofVector`)
and evaluate cell contributions with the element kernels of a
:class:`wgplate.weak_laplacian.KernelCache`.
"""

import logging

import numpy as np

from wgplate.exceptions import BoundaryNotZero, WgplateInternalError
from wgplate.settings import DEFAULT_SETTINGS
from wgplate.weak_laplacian import KernelCache

_logger = logging.getLogger(__name__)


def _kernels(v, cache, settings):
    dofmap = v.dofmap
    if cache is None:
        cache = KernelCache(settings)
    for cell in dofmap.mesh.cells:
        yield cell, cache.get(dofmap.mesh, cell, dofmap.layout)


def energy_norm(v, cache=None, settings=DEFAULT_SETTINGS):
    """``|||v||| = (sum_T ||Delta_w v||_T^2)^(1/2)``."""
    total = 0.0
    for cell, kernel in _kernels(v, cache, settings):
        coefs = kernel.matrix @ v.local(cell)
        total += kernel.r_mass.inner(coefs, coefs)
    return float(np.sqrt(max(total, 0.0)))


def exact_weak_laplacian(kernel, solution, cell, via="projection"):
    """P_r coefficients standing in for ``Delta_w u`` of the exact solution.

    ``projection`` uses ``Q_r(Delta u)``; ``traces`` integrates the exact
    weak function of ``u``. The two agree by the commuting identity.
    """
    if via == "projection":
        return kernel.project_r(solution.laplacian, cell)
    if via == "traces":
        return kernel.r_mass.solve(kernel.exact_moments(solution, cell))
    raise WgplateInternalError(f"unknown evaluation path {via}")


def energy_error(solution, u_h, cache=None, settings=DEFAULT_SETTINGS, via="projection"):
    """``|||u - u_h|||`` with ``Delta_w u = Q_r(Delta u)`` on every cell."""
    total = 0.0
    for cell, kernel in _kernels(u_h, cache, settings):
        diff = exact_weak_laplacian(kernel, solution, cell, via) - kernel.matrix @ u_h.local(cell)
        total += kernel.r_mass.inner(diff, diff)
    return float(np.sqrt(max(total, 0.0)))


def local_h2_squared(kernel, local):
    """Cell contribution to the squared discrete H2 norm."""
    layout = kernel.layout
    h = kernel.diameter
    c0 = local[: layout.n_interior]
    lap = kernel.k_laplacians @ c0
    total = kernel.rule.weights @ lap**2
    for position, tables in enumerate(kernel.edges):
        we = tables.rule.weights
        jump = tables.k_values @ c0 - tables.trace @ local[layout.trace_slice(position)]
        flux = tables.k_normal_derivatives @ c0 - tables.sigma * (
            tables.flux @ local[layout.normal_slice(position)]
        )
        total += we @ jump**2 / h**3 + we @ flux**2 / h
    return float(total)


def local_h2_gram(kernel):
    """Symmetric matrix ``G`` with ``local @ G @ local == local_h2_squared(kernel, local)``."""
    layout = kernel.layout
    h = kernel.diameter
    size = layout.local_size(kernel.n_edges)
    n0 = layout.n_interior

    lap = np.zeros((len(kernel.rule.weights), size))
    lap[:, :n0] = kernel.k_laplacians
    gram = lap.T @ (kernel.rule.weights[:, None] * lap)
    for position, tables in enumerate(kernel.edges):
        we = tables.rule.weights[:, None]
        jump = np.zeros((len(tables.rule.weights), size))
        jump[:, :n0] = tables.k_values
        jump[:, layout.trace_slice(position)] = -tables.trace
        flux = np.zeros_like(jump)
        flux[:, :n0] = tables.k_normal_derivatives
        flux[:, layout.normal_slice(position)] = -tables.sigma * tables.flux
        gram += jump.T @ (we * jump) / h**3 + flux.T @ (we * flux) / h
    return 0.5 * (gram + gram.T)


def discrete_h2_norm(v, cache=None, settings=DEFAULT_SETTINGS):
    """``||v||_{2,h}``: cell Laplacians plus scaled trace and flux mismatches."""
    total = sum(local_h2_squared(kernel, v.local(cell)) for cell, kernel in _kernels(v, cache, settings))
    return float(np.sqrt(max(total, 0.0)))


def l2_error(solution, u_h, cache=None, settings=DEFAULT_SETTINGS):
    """``||u - u0||`` over the mesh."""
    total = 0.0
    for cell, kernel in _kernels(u_h, cache, settings):
        u0 = kernel.k_values @ u_h.interior(cell.index)
        total += kernel.rule.weights @ (solution.u(kernel.points(cell)) - u0) ** 2
    return float(np.sqrt(max(total, 0.0)))


def residual_functional_ell(solution, v, cache=None, settings=DEFAULT_SETTINGS, tolerance=0.0):
    """Consistency functional of the error equation.

    ``l(u, v) = sum_T -<vb - v0, grad w . n>_dT + <sigma vn - grad v0 . n, w>_dT``
    with ``w = (Q_r - I) Delta u``.

    Raises:
        BoundaryNotZero: ``v`` is not in the space with zero boundary DOFs.
    """
    boundary = v.boundary_max()
    if boundary > tolerance:
        raise BoundaryNotZero(boundary)
    layout = v.dofmap.layout
    total = 0.0
    for cell, kernel in _kernels(v, cache, settings):
        q_lap = kernel.project_r(solution.laplacian, cell)
        local = v.local(cell)
        c0 = local[: layout.n_interior]
        for position, tables in enumerate(kernel.edges):
            pts = kernel.edge_points(cell, position)
            w = tables.r_values @ q_lap - solution.laplacian(pts)
            dw = tables.r_normal_derivatives @ q_lap - solution.grad_laplacian(pts) @ tables.normal
            jump = tables.trace @ local[layout.trace_slice(position)] - tables.k_values @ c0
            flux = tables.sigma * (tables.flux @ local[layout.normal_slice(position)]) - (
                tables.k_normal_derivatives @ c0
            )
            total += tables.rule.weights @ (flux * w - jump * dw)
    return float(total)


def error_equation_sides(solution, u_h, v, cache=None, settings=DEFAULT_SETTINGS):
    """Both sides of ``(Delta_w e_h, Delta_w v) = l(u, v)``.

    The left side uses the exact-trace weak Laplacian of ``u`` for
    ``Delta_w u``.

    Returns:
        tuple: ``(lhs, rhs, scale)`` with ``scale = |||e_h||| |||v||| + |rhs|``.
    """
    if cache is None:
        cache = KernelCache(settings)
    lhs = 0.0
    error2 = 0.0
    test2 = 0.0
    for cell, kernel in _kernels(u_h, cache, settings):
        e = exact_weak_laplacian(kernel, solution, cell, "traces") - kernel.matrix @ u_h.local(cell)
        w = kernel.matrix @ v.local(cell)
        lhs += kernel.r_mass.inner(e, w)
        error2 += kernel.r_mass.inner(e, e)
        test2 += kernel.r_mass.inner(w, w)
    rhs = residual_functional_ell(solution, v, cache, settings)
    scale = np.sqrt(max(error2, 0.0) * max(test2, 0.0)) + abs(rhs)
    _logger.debug(f"error equation: lhs={lhs:.6e}, rhs={rhs:.6e}, scale={scale:.3e}")
    return float(lhs), rhs, float(scale)
