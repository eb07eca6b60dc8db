"""Plain-text polygon mesh files.

Layout: a header ``NV NC``, then ``NV`` lines ``x y``, then ``NC`` lines
``m i1 ... im`` with zero-based counter-clockwise vertex indices. Blank lines
and ``#`` comments are ignored. Edges and normals are derived on load.
"""

import logging

from wgplate.exceptions import InvalidMeshFile
from wgplate.mesh.polymesh import PolyMesh
from wgplate.settings import DEFAULT_SETTINGS

_logger = logging.getLogger(__name__)


def _records(text):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def load_mesh(path, rho_min=None):
    with open(path) as f:
        text = f.read()
    records = list(_records(text))
    if not records:
        raise InvalidMeshFile(path, 1, "empty file")

    number, header = records[0]
    try:
        nv, nc = (int(t) for t in header)
    except ValueError:
        raise InvalidMeshFile(path, number, f"bad header {' '.join(header)}")
    if len(records) != 1 + nv + nc:
        raise InvalidMeshFile(
            path, records[-1][0], f"expected {nv} vertices and {nc} cells"
        )

    vertices = []
    for number, tokens in records[1 : 1 + nv]:
        try:
            x, y = (float(t) for t in tokens)
        except ValueError:
            raise InvalidMeshFile(path, number, "a vertex line needs two numbers")
        vertices.append((x, y))

    loops = []
    for number, tokens in records[1 + nv :]:
        try:
            ids = [int(t) for t in tokens]
        except ValueError:
            raise InvalidMeshFile(path, number, "cell lines hold integers")
        if not ids or ids[0] != len(ids) - 1:
            raise InvalidMeshFile(path, number, "vertex count does not match the loop")
        if any(i < 0 or i >= nv for i in ids[1:]):
            raise InvalidMeshFile(path, number, "vertex index out of range")
        loops.append(ids[1:])

    _logger.debug(f"mesh file {path}: {nv} vertices, {nc} cells")
    return PolyMesh(vertices, loops, rho_min or DEFAULT_SETTINGS.rho_min)


def save_mesh(mesh, path):
    lines = [f"{len(mesh.vertices)} {len(mesh.loops)}"]
    lines += [f"{x!r} {y!r}" for x, y in mesh.vertices.tolist()]
    lines += [" ".join(str(i) for i in (len(loop),) + loop) for loop in mesh.loops]
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
