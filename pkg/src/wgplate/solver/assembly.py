"""Global stiffness and load assembly for ``(Delta_w u_h, Delta_w v) = (f, v0)``.

Boundary edge DOFs are fixed by the clamped data and eliminated: their
columns move to the right-hand side and the system keeps only free DOFs.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from wgplate.polyspaces.projection import project_edge
from wgplate.settings import DEFAULT_SETTINGS
from wgplate.solver.dofmap import DofMap, WeakDofVector
from wgplate.weak_laplacian import KernelCache

_logger = logging.getLogger(__name__)


def local_stiffness(cell, local_weak_laplacian):
    """``K_T = D_T^T M_r D_T``, symmetric positive semi-definite."""
    D = local_weak_laplacian.matrix
    K = D.T @ local_weak_laplacian.mass.matrix @ D
    return 0.5 * (K + K.T)


def impose_boundary(mesh, layout, xi=None, nu=None, settings=DEFAULT_SETTINGS, dofmap=None):
    """Values of the constrained DOFs from the clamped data.

    Args:
        xi (callable): trace data ``u`` on ``(M, 2)`` points; zero when omitted.
        nu (callable): ``nu(points, normal)`` returning ``grad u . n`` for the
          outward unit normal ``n`` of the domain; zero when omitted.

    Returns:
        WeakDofVector: zero everywhere except on boundary edge blocks, where
        the trace block is ``Q_b xi`` and the normal block ``sigma Q_n nu``.
    """
    if dofmap is None:
        dofmap = DofMap(mesh, layout)
    values = dofmap.zeros()
    exactness = settings.data_exactness(layout.k)
    for e in sorted(mesh.boundary_edges):
        edge = mesh.edges[e]
        sigma = mesh.edge_sign(edge.cells[0], e)
        outward = sigma * edge.normal
        if xi is not None:
            values.values[dofmap.trace_block(e)] = project_edge(xi, layout.p, edge, exactness, settings)
        if nu is not None:
            values.values[dofmap.normal_block(e)] = sigma * project_edge(
                lambda pts: nu(pts, outward), layout.q, edge, exactness, settings
            )
    return values


@dataclass(eq=False)
class GlobalSystem:
    """Reduced system on the free DOFs.

    Attributes:
        matrix (scipy.sparse.csr_matrix): ``A`` restricted to free DOFs.
        rhs (numpy.ndarray): load minus the coupling to the fixed DOFs.
        boundary (WeakDofVector): fixed values, zero on free DOFs.
        load (numpy.ndarray): full load vector before elimination.
    """

    mesh: object
    layout: object
    dofmap: DofMap
    matrix: object
    rhs: np.ndarray
    boundary: WeakDofVector
    load: np.ndarray
    full_matrix: object = None

    @property
    def n_free(self):
        return self.dofmap.n_free

    def expand(self, free_values):
        """Merge a free-DOF solution with the constrained values."""
        vector = self.boundary.copy()
        vector.values[self.dofmap.free] = free_values
        return vector

    def symmetry_defect(self):
        A = self.matrix
        scale = abs(A).max()
        return abs(A - A.T).max() / scale if scale else 0.0


def assemble(mesh, layout, f, xi=None, nu=None, settings=DEFAULT_SETTINGS, cache=None, dofmap=None):
    """Assemble the reduced stiffness system.

    Args:
        mesh (wgplate.mesh.PolyMesh): the mesh.
        layout (wgplate.weak_laplacian.WeakDofLayout): space degrees and r mode.
        f (callable): source term on ``(M, 2)`` points, ``None`` for zero.
        xi, nu: clamped data, see :func:`impose_boundary`.
        cache (KernelCache): kernel store shared across calls.

    Returns:
        GlobalSystem
    """
    if cache is None:
        cache = KernelCache(settings)
    if dofmap is None:
        dofmap = DofMap(mesh, layout)

    rows, cols, vals = [], [], []
    load = np.zeros(dofmap.n_dofs)
    for cell in mesh.cells:
        kernel = cache.get(mesh, cell, layout)
        K = local_stiffness(cell, kernel.local_weak_laplacian)
        dofs = dofmap.cell_dofs(cell)
        rows.append(np.repeat(dofs, len(dofs)))
        cols.append(np.tile(dofs, len(dofs)))
        vals.append(K.ravel())
        if f is not None:
            load[dofmap.interior_block(cell.index)] += kernel.load(f, cell)

    n = dofmap.n_dofs
    A = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()
    boundary = impose_boundary(mesh, layout, xi, nu, settings, dofmap)
    free, fixed = dofmap.free, dofmap.fixed
    A_ff = A[free][:, free]
    rhs = load[free] - A[free][:, fixed] @ boundary.values[fixed]
    _logger.debug(
        f"assembled {dofmap}: nnz={A_ff.nnz}, kernels cached={len(cache)} "
        f"(hits {cache.hits}, misses {cache.misses})"
    )
    return GlobalSystem(mesh, layout, dofmap, A_ff.tocsr(), rhs, boundary, load, A)
