from wgplate.mesh.generators import (
    generate_mesh,
    generate_nonconvex_mesh,
    generate_square_mesh,
    reference_shapes,
    single_cell_mesh,
)
from wgplate.mesh.polymesh import Cell, Edge, PolyMesh, edge_sign
from wgplate.mesh.textformat import load_mesh, save_mesh
from wgplate.mesh.triangulate import (
    SubTriangulation,
    point_in_polygon,
    triangulate_cell,
)
