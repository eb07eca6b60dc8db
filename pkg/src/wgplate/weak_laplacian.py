"""Discrete weak Laplacian of weak functions.

For a weak function ``v = {v0, vb, vn n_e}`` on a cell T, ``Delta_w v`` is the
polynomial of P_r(T) with, for every ``phi`` in P_r(T),

    (Delta_w v, phi)_T = (v0, Delta phi)_T - <vb, grad phi . n>_dT
                         + <vn sigma, phi>_dT

where ``n = sigma n_e`` is the outward normal of T. Per cell this is the
matrix ``D_T = M_r^-1 [B0 | Bb_1 Bn_1 | ... | Bb_N Bn_N]`` acting on the local
weak degrees of freedom, ordered interior block first, then per loop edge the
trace block and the normal block.
"""

import logging
import threading
from dataclasses import dataclass, field

import numpy as np

from wgplate.exceptions import InvalidLayout, InvalidMesh, InvalidR, InvalidStudyConfig
from wgplate.polyspaces.basis import CellBasis, EdgeBasis, dimension
from wgplate.polyspaces.projection import MassMatrix
from wgplate.polyspaces.quadrature import cell_quadrature, edge_quadrature
from wgplate.settings import DEFAULT_SETTINGS

_logger = logging.getLogger(__name__)

R_MODES = ("nonconvex", "convex", "custom")


def choose_r(n_edges, k, mode="nonconvex", r=None):
    """Degree of the weak Laplacian on a cell with ``n_edges`` edges.

    ``nonconvex`` gives ``2N + k - 2``, ``convex`` gives ``N + k - 2`` and
    ``custom`` returns ``r`` after checking ``r >= k - 2``.
    """
    if n_edges < 3:
        raise InvalidMesh(f"a cell needs at least 3 edges, got {n_edges}")
    if k < 2:
        raise InvalidLayout(k, "-", "-", "k must be at least 2")
    if mode == "nonconvex":
        return 2 * n_edges + k - 2
    if mode == "convex":
        return n_edges + k - 2
    if mode == "custom":
        if r is None or r < k - 2:
            raise InvalidR(r, k)
        return int(r)
    raise InvalidStudyConfig("r_mode", mode, "expected one of " + ", ".join(R_MODES))


@dataclass(frozen=True)
class WeakDofLayout:
    """Degrees of the weak space V(k, p, q, T) and the choice of r.

    ``p`` defaults to ``k`` and ``q`` to ``k - 1``.
    """

    k: int
    p: int = None
    q: int = None
    r_mode: str = "nonconvex"
    r: int = None

    def __post_init__(self):
        if self.p is None:
            object.__setattr__(self, "p", self.k)
        if self.q is None:
            object.__setattr__(self, "q", self.k - 1)
        k, p, q = self.k, self.p, self.q
        if k < 2:
            raise InvalidLayout(k, p, q, "k must be at least 2")
        if not k >= p >= q >= 1:
            raise InvalidLayout(k, p, q, "degrees must satisfy k >= p >= q >= 1")
        if self.r_mode not in R_MODES:
            raise InvalidStudyConfig("r_mode", self.r_mode, "expected one of " + ", ".join(R_MODES))
        if self.r_mode == "custom" and (self.r is None or self.r < k - 2):
            raise InvalidR(self.r, k)

    @property
    def n_interior(self):
        return dimension(self.k)

    @property
    def n_trace(self):
        return self.p + 1

    @property
    def n_normal(self):
        return self.q + 1

    @property
    def n_edge(self):
        return self.n_trace + self.n_normal

    def r_for(self, n_edges):
        return choose_r(n_edges, self.k, self.r_mode, self.r)

    def local_size(self, n_edges):
        return self.n_interior + n_edges * self.n_edge

    def trace_slice(self, position):
        start = self.n_interior + position * self.n_edge
        return slice(start, start + self.n_trace)

    def normal_slice(self, position):
        start = self.n_interior + position * self.n_edge + self.n_trace
        return slice(start, start + self.n_normal)


@dataclass(frozen=True, eq=False)
class EdgeTables:
    """Quadrature tables of one loop edge, points relative to the kernel anchor."""

    rule: object
    sigma: int
    normal: np.ndarray  # outward normal of the cell
    length: float
    trace: np.ndarray  # (M, p + 1)
    flux: np.ndarray  # (M, q + 1)
    k_values: np.ndarray
    k_normal_derivatives: np.ndarray
    r_values: np.ndarray
    r_normal_derivatives: np.ndarray


@dataclass(frozen=True, eq=False)
class LocalWeakLaplacian:
    """``D_T`` with the P_r mass matrix it was built with.

    Attributes:
        matrix (numpy.ndarray): ``(dim P_r, local size)``.
        mass (MassMatrix): Gram matrix of the P_r basis.
        stiffness (numpy.ndarray): ``D_T^T M_r D_T``.
    """

    matrix: np.ndarray
    mass: MassMatrix
    stiffness: np.ndarray
    r: int

    def apply(self, local_dofs):
        return self.matrix @ local_dofs

    def norm(self, local_dofs):
        """L2 norm of ``Delta_w v`` on the cell."""
        return self.mass.norm(self.apply(local_dofs))


class ElementKernel:
    """Everything computed once per distinct cell shape.

    A kernel serves every cell that is a translate of its reference cell with
    the same edge signs and edge parametrization directions. Points are stored
    relative to the first loop vertex (the anchor).
    """

    def __init__(self, mesh, cell, layout, settings=DEFAULT_SETTINGS):
        self.layout = layout
        self.settings = settings
        self.n_edges = cell.n_edges
        self.r = layout.r_for(cell.n_edges)
        self.diameter = cell.diameter
        self.area = cell.area
        anchor = cell.coords[0]
        k, r = layout.k, self.r

        exactness = max(settings.mass_exactness(r), settings.data_exactness(k))
        self.rule = cell_quadrature(cell, exactness, settings, anchor)
        self.k_basis = CellBasis.for_cell(cell, k, settings, anchor, self.rule)
        self.r_basis = CellBasis.for_cell(cell, r, settings, anchor, self.rule)
        pts, w = self.rule.points, self.rule.weights
        self.k_values = self.k_basis.values(pts)
        self.k_gradients = self.k_basis.gradients(pts)
        self.k_laplacians = self.k_basis.laplacians(pts)
        self.r_values = self.r_basis.values(pts)
        self.r_laplacians = self.r_basis.laplacians(pts)
        tol = settings.projection_residual_tolerance
        self.r_mass = MassMatrix.from_table(self.r_values, w, r, tol)
        self.k_mass = MassMatrix.from_table(self.k_values, w, k, tol)

        trace_basis, flux_basis = EdgeBasis(layout.p), EdgeBasis(layout.q)
        self.edges = []
        blocks = [self.r_laplacians.T @ (w[:, None] * self.k_values)]
        for edge, sigma in mesh.cell_edges(cell):
            rule = edge_quadrature(edge, exactness, settings, anchor)
            n = sigma * edge.normal
            tables = EdgeTables(
                rule,
                sigma,
                n,
                edge.length,
                trace_basis.values(rule.abscissae),
                flux_basis.values(rule.abscissae),
                self.k_basis.values(rule.points),
                self.k_basis.gradients(rule.points) @ n,
                self.r_basis.values(rule.points),
                self.r_basis.gradients(rule.points) @ n,
            )
            self.edges.append(tables)
            we = rule.weights[:, None]
            blocks.append(-tables.r_normal_derivatives.T @ (we * tables.trace))
            blocks.append(sigma * tables.r_values.T @ (we * tables.flux))
        self.moments = np.hstack(blocks)
        self.matrix = self.r_mass.solve(self.moments)
        stiffness = self.matrix.T @ self.moments
        self.stiffness = 0.5 * (stiffness + stiffness.T)
        self.local_weak_laplacian = LocalWeakLaplacian(self.matrix, self.r_mass, self.stiffness, r)

    def points(self, cell):
        return self.rule.points + cell.coords[0]

    def edge_points(self, cell, position):
        return self.edges[position].rule.points + cell.coords[0]

    def load(self, f, cell):
        """Moments ``(f, phi_j^k)_T`` of the interior basis."""
        return self.k_values.T @ (self.rule.weights * f(self.points(cell)))

    def project_r(self, f, cell):
        return self.r_mass.solve(self.r_values.T @ (self.rule.weights * f(self.points(cell))))

    def project_k(self, f, cell):
        return self.k_mass.solve(self.k_values.T @ (self.rule.weights * f(self.points(cell))))

    def exact_moments(self, field, cell):
        """Right-hand side of ``Delta_w`` for the exact weak function of ``field``."""
        w = self.rule.weights
        rhs = self.r_laplacians.T @ (w * field.u(self.points(cell)))
        for position, tables in enumerate(self.edges):
            pts = self.edge_points(cell, position)
            we = tables.rule.weights
            rhs -= tables.r_normal_derivatives.T @ (we * field.u(pts))
            rhs += tables.r_values.T @ (we * (field.grad(pts) @ tables.normal))
        return rhs


def shape_key(mesh, cell, layout, settings=DEFAULT_SETTINGS, digits=12):
    """Translation-invariant identity of the kernel serving ``cell``."""
    rel = np.round(cell.coords - cell.coords[0], digits) + 0.0
    orientation = tuple(
        (sigma, mesh.edges[e].endpoints[0] == cell.loop[pos])
        for pos, (e, sigma) in enumerate(cell.edges)
    )
    return layout, settings, rel.tobytes(), orientation


@dataclass
class KernelCache:
    """Thread-safe insert-or-read store of element kernels."""

    settings: object = DEFAULT_SETTINGS
    hits: int = 0
    misses: int = 0
    _kernels: dict = field(default_factory=dict, repr=False)
    _lock: object = field(default_factory=threading.Lock, repr=False)

    def get(self, mesh, cell, layout):
        key = shape_key(mesh, cell, layout, self.settings)
        with self._lock:
            kernel = self._kernels.get(key)
            if kernel is not None:
                self.hits += 1
                return kernel
        kernel = ElementKernel(mesh, cell, layout, self.settings)
        with self._lock:
            self.misses += 1
            kernel = self._kernels.setdefault(key, kernel)
        _logger.debug(
            f"kernel built for cell {cell.index}: N={cell.n_edges}, r={kernel.r}, "
            f"local size {kernel.matrix.shape[1]}"
        )
        return kernel

    def clear(self):
        with self._lock:
            self._kernels.clear()
            self.hits = self.misses = 0

    def __len__(self):
        return len(self._kernels)


def build_local_weak_laplacian(mesh, cell, layout, settings=DEFAULT_SETTINGS, cache=None):
    """``D_T`` and ``M_r`` for one cell of ``mesh``.

    Raises:
        SingularMass: the P_r mass matrix cannot be factorized.
        UnsupportedDegree: ``2 r + 2`` exceeds the quadrature table.
    """
    if cache is not None:
        return cache.get(mesh, cell, layout).local_weak_laplacian
    return ElementKernel(mesh, cell, layout, settings).local_weak_laplacian


def weak_laplacian_of_exact(field, mesh, cell, layout, settings=DEFAULT_SETTINGS, cache=None):
    """P_r coefficients of ``Delta_w`` applied to the exact weak function of ``field``.

    The weak function is ``{u|_T, u|_dT, (grad u . n_e) n_e}``, integrated from
    the exact traces without projecting them first. ``field`` provides ``u``
    and ``grad`` callables on ``(M, 2)`` point arrays.
    """
    kernel = cache.get(mesh, cell, layout) if cache is not None else ElementKernel(mesh, cell, layout, settings)
    return kernel.r_mass.solve(kernel.exact_moments(field, cell))


def consistent_affine_kernel(kernel):
    """Local DOF vectors of the weak injections of 1, x and y.

    Columns are ``{a, a|_e, grad a . n_e}`` for the three affine monomials of
    the cell basis; ``D_T`` maps all of them to zero.
    """
    layout = kernel.layout
    size = layout.local_size(kernel.n_edges)
    center, h = kernel.k_basis.center, kernel.k_basis.scale
    affine = [
        (lambda p: np.ones(len(p)), np.zeros(2)),
        (lambda p: (p[:, 0] - center[0]) / h, np.array([1.0 / h, 0.0])),
        (lambda p: (p[:, 1] - center[1]) / h, np.array([0.0, 1.0 / h])),
    ]
    columns = np.zeros((size, 3))
    w = kernel.rule.weights
    for j, (a, grad) in enumerate(affine):
        columns[: layout.n_interior, j] = kernel.k_mass.solve(
            kernel.k_values.T @ (w * a(kernel.rule.points))
        )
        for position, tables in enumerate(kernel.edges):
            we = tables.rule.weights
            trace_mass = MassMatrix.from_table(tables.trace, we, layout.p)
            flux_mass = MassMatrix.from_table(tables.flux, we, layout.q)
            columns[layout.trace_slice(position), j] = trace_mass.solve(
                tables.trace.T @ (we * a(tables.rule.points))
            )
            # v_n = grad a . n_e with n_e = sigma n
            normal_value = tables.sigma * (grad @ tables.normal)
            columns[layout.normal_slice(position), j] = flux_mass.solve(
                tables.flux.T @ (we * np.full(len(we), normal_value))
            )
    return columns


def laplacian_bound_ratio(kernel, trials=100, rng=None):
    """Largest ``||Delta v0||_T / ||Delta_w v||_T`` over random local DOF vectors.

    The consistent affine kernel is projected out of each sample, so the
    denominator vanishes only on rounding noise.
    """
    rng = np.random.default_rng(rng)
    q, _ = np.linalg.qr(consistent_affine_kernel(kernel))
    lap = kernel.k_laplacians
    lap_gram = lap.T @ (kernel.rule.weights[:, None] * lap)
    n_int = kernel.layout.n_interior
    worst = 0.0
    for _ in range(trials):
        v = rng.standard_normal(q.shape[0])
        v -= q @ (q.T @ v)
        top = np.sqrt(max(v[:n_int] @ lap_gram @ v[:n_int], 0.0))
        bottom = kernel.local_weak_laplacian.norm(v)
        worst = max(worst, top / bottom)
    return worst
