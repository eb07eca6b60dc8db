from wgplate.polyspaces.basis import CellBasis, EdgeBasis, dimension, monomial_exponents
from wgplate.polyspaces.projection import MassMatrix, project_cell, project_edge
from wgplate.polyspaces.quadrature import QuadratureRule, cell_quadrature, edge_quadrature
