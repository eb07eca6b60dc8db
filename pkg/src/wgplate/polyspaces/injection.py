"""Projection ``Q_h`` of smooth functions into the weak finite element space."""

from wgplate.polyspaces.projection import project_edge
from wgplate.settings import DEFAULT_SETTINGS
from wgplate.solver.dofmap import DofMap
from wgplate.weak_laplacian import KernelCache


def inject_Qh(field, layout, mesh, settings=DEFAULT_SETTINGS, cache=None, dofmap=None):
    """``Q_h w = {Q_0 w, Q_b w, Q_n(grad w . n_e) n_e}``.

    Args:
        field: object with ``u`` and ``grad`` callables on ``(M, 2)`` points.
        layout (wgplate.weak_laplacian.WeakDofLayout): degrees k, p, q.
        mesh (wgplate.mesh.PolyMesh): the mesh.
        cache (wgplate.weak_laplacian.KernelCache): reused for the cell bases.

    Returns:
        wgplate.solver.dofmap.WeakDofVector: the projected weak function.
    """
    if cache is None:
        cache = KernelCache(settings)
    if dofmap is None:
        dofmap = DofMap(mesh, layout)
    vector = dofmap.zeros()
    for cell in mesh.cells:
        kernel = cache.get(mesh, cell, layout)
        vector.values[dofmap.interior_block(cell.index)] = kernel.project_k(field.u, cell)
    exactness = settings.data_exactness(layout.k)
    for edge in mesh.edges:
        vector.values[dofmap.trace_block(edge.index)] = project_edge(
            field.u, layout.p, edge, exactness, settings
        )
        vector.values[dofmap.normal_block(edge.index)] = project_edge(
            lambda pts, n=edge.normal: field.grad(pts) @ n, layout.q, edge, exactness, settings
        )
    return vector
