"""Global numbering of weak degrees of freedom.

Cell interior blocks come first, cell by cell; then every edge contributes its
trace block followed by its normal block. Edge blocks are shared by the
incident cells and are constrained on boundary edges.
"""

from dataclasses import dataclass

import numpy as np

from wgplate.exceptions import WgplateInternalError


def _indices(block):
    return np.arange(block.start, block.stop)


class DofMap:
    def __init__(self, mesh, layout):
        self.mesh = mesh
        self.layout = layout
        self.n_interior_dofs = mesh.n_cells * layout.n_interior
        self.n_dofs = self.n_interior_dofs + mesh.n_edges * layout.n_edge
        constrained = np.zeros(self.n_dofs, dtype=bool)
        for e in mesh.boundary_edges:
            constrained[self.edge_block(e)] = True
        self.constrained = constrained
        self.constrained.setflags(write=False)
        self.free = np.flatnonzero(~constrained)
        self.fixed = np.flatnonzero(constrained)
        self._cell_dofs = [self._build_cell_dofs(cell) for cell in mesh.cells]

    def _build_cell_dofs(self, cell):
        layout = self.layout
        dofs = np.empty(layout.local_size(cell.n_edges), dtype=np.int64)
        dofs[: layout.n_interior] = _indices(self.interior_block(cell.index))
        for position, (e, _) in enumerate(cell.edges):
            dofs[layout.trace_slice(position)] = _indices(self.trace_block(e))
            dofs[layout.normal_slice(position)] = _indices(self.normal_block(e))
        return dofs

    @property
    def n_free(self):
        return len(self.free)

    def interior_block(self, c):
        start = c * self.layout.n_interior
        return slice(start, start + self.layout.n_interior)

    def edge_block(self, e):
        start = self.n_interior_dofs + e * self.layout.n_edge
        return slice(start, start + self.layout.n_edge)

    def trace_block(self, e):
        start = self.n_interior_dofs + e * self.layout.n_edge
        return slice(start, start + self.layout.n_trace)

    def normal_block(self, e):
        start = self.n_interior_dofs + e * self.layout.n_edge + self.layout.n_trace
        return slice(start, start + self.layout.n_normal)

    def cell_dofs(self, cell):
        """Global indices of the local DOFs of ``cell`` in layout order."""
        index = cell if isinstance(cell, (int, np.integer)) else cell.index
        return self._cell_dofs[index]

    def zeros(self):
        return WeakDofVector(self, np.zeros(self.n_dofs))

    def __repr__(self):
        return f"DofMap(n_dofs={self.n_dofs}, n_free={self.n_free})"


@dataclass(eq=False)
class WeakDofVector:
    """Global coefficient vector of a weak function ``{v0, vb, vn n_e}``."""

    dofmap: DofMap
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.dofmap.n_dofs,):
            raise WgplateInternalError(
                f"weak DOF vector of length {self.values.shape} for {self.dofmap.n_dofs} DOFs"
            )

    def interior(self, c):
        return self.values[self.dofmap.interior_block(c)]

    def trace(self, e):
        return self.values[self.dofmap.trace_block(e)]

    def normal(self, e):
        return self.values[self.dofmap.normal_block(e)]

    def local(self, cell):
        return self.values[self.dofmap.cell_dofs(cell)]

    def boundary_max(self):
        fixed = self.values[self.dofmap.fixed]
        return float(np.abs(fixed).max()) if len(fixed) else 0.0

    def copy(self):
        return WeakDofVector(self.dofmap, self.values.copy())

    def __sub__(self, other):
        return WeakDofVector(self.dofmap, self.values - other.values)

    def __add__(self, other):
        return WeakDofVector(self.dofmap, self.values + other.values)

    def __mul__(self, factor):
        return WeakDofVector(self.dofmap, self.values * factor)

    __rmul__ = __mul__

    def __len__(self):
        return len(self.values)
