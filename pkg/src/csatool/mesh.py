"""Indexed triangle-mesh representation and per-face geometry.

Coordinates are stored in millimeters.  Faces are ordered vertex-index
tuples; the data model permits faces with more than three vertices even
though STL ingestion only ever produces triangles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFace, NotWatertight

_NORMAL_EPS = 1e-12


@dataclass(frozen=True)
class TriMesh:
    """Immutable indexed mesh.

    vertices: (V, 3) float64 array, millimeters.
    faces: tuple of vertex-index tuples, each of length >= 3.
    unit_scale: millimeters per original model unit (provenance only;
        vertices are already scaled to mm).
    """

    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]
    unit_scale: float = 1.0
    _tri: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        verts = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise ValueError("vertices must be an (V, 3) array")
        if not np.isfinite(verts).all():
            raise ValueError("vertex coordinates must be finite")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        faces = tuple(tuple(int(i) for i in f) for f in self.faces)
        nv = len(verts)
        for f in faces:
            if len(f) < 3:
                raise ValueError("face needs at least 3 vertices")
            for a, b in zip(f, f[1:] + f[:1]):
                if a == b:
                    raise ValueError("face repeats a consecutive vertex index")
            if min(f) < 0 or max(f) >= nv:
                raise ValueError("face index out of range")
        object.__setattr__(self, "faces", faces)
        if faces and all(len(f) == 3 for f in faces):
            tri = np.asarray(faces, dtype=np.int64)
            tri.setflags(write=False)
            object.__setattr__(self, "_tri", tri)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def triangles(self) -> np.ndarray | None:
        """(N, 3) index array when every face is a triangle, else None."""
        return self._tri

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def transformed(self, rotation: np.ndarray, translation: np.ndarray) -> "TriMesh":
        """Apply ``x -> R x + t`` to every vertex."""
        verts = self.vertices @ np.asarray(rotation, dtype=np.float64).T
        verts = verts + np.asarray(translation, dtype=np.float64)
        return TriMesh(verts, self.faces, self.unit_scale)

    def scaled(self, s: float) -> "TriMesh":
        return TriMesh(self.vertices * float(s), self.faces, self.unit_scale)


def weld_vertices(mesh: TriMesh, epsilon: float) -> tuple[TriMesh, int]:
    """Merge near-duplicate vertices with grid-snapping semantics.

    Coordinates are quantized to cells of size ``epsilon``; vertices in the
    same cell or in any of the 26 neighbor cells are merged (transitively)
    onto the first-seen representative.  ``epsilon == 0`` merges only
    bit-equal vertices.  Faces whose index loop collapses below 3 distinct
    vertices are dropped.

    Returns the welded mesh and the number of dropped faces.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    verts = mesh.vertices
    n = len(verts)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    cells: dict[tuple, int] = {}
    if epsilon == 0.0:
        for i in range(n):
            key = (verts[i, 0], verts[i, 1], verts[i, 2])
            j = cells.setdefault(key, i)
            if j != i:
                parent[find(i)] = find(j)
    else:
        cell_ids = np.floor(verts / epsilon).astype(np.int64)
        offsets = [
            (dx, dy, dz)
            for dx in (-1, 0, 1)
            for dy in (-1, 0, 1)
            for dz in (-1, 0, 1)
        ]
        for i in range(n):
            cx, cy, cz = cell_ids[i]
            for dx, dy, dz in offsets:
                j = cells.get((cx + dx, cy + dy, cz + dz))
                if j is not None:
                    parent[find(i)] = find(j)
            cells.setdefault((cx, cy, cz), i)

    roots = [find(i) for i in range(n)]
    remap: dict[int, int] = {}
    new_verts = []
    for r in roots:
        if r not in remap:
            remap[r] = len(new_verts)
            new_verts.append(verts[r])
    new_faces = []
    dropped = 0
    for f in mesh.faces:
        loop = [remap[roots[i]] for i in f]
        cleaned: list[int] = []
        for idx in loop:
            if not cleaned or idx != cleaned[-1]:
                cleaned.append(idx)
        if len(cleaned) > 1 and cleaned[0] == cleaned[-1]:
            cleaned.pop()
        if len(set(cleaned)) < 3 or len(cleaned) < 3:
            dropped += 1
            continue
        new_faces.append(tuple(cleaned))
    welded = TriMesh(np.asarray(new_verts, dtype=np.float64), tuple(new_faces), mesh.unit_scale)
    return welded, dropped


def face_centroid(mesh: TriMesh, face_id: int) -> np.ndarray:
    """Arithmetic mean of the face's vertices."""
    return mesh.vertices[list(mesh.faces[face_id])].mean(axis=0)


def all_centroids(mesh: TriMesh) -> np.ndarray:
    """(N, 3) array of face centroids, in face order."""
    tri = mesh.triangles
    if tri is not None:
        return mesh.vertices[tri].mean(axis=1)
    return np.asarray([face_centroid(mesh, i) for i in range(mesh.n_faces)])


def _newell_normal(pts: np.ndarray) -> np.ndarray:
    nxt = np.roll(pts, -1, axis=0)
    normal = np.array(
        [
            np.sum((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])),
            np.sum((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])),
            np.sum((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])),
        ]
    )
    return normal


def project_to_plane(mesh: TriMesh, face_id: int) -> np.ndarray:
    """Express the face's vertices in an orthonormal in-plane (u, v) basis.

    u is the normalized first non-zero edge, v = normal x u; winding order
    is preserved.  Raises DegenerateFace when the Newell normal vanishes.
    """
    pts = mesh.vertices[list(mesh.faces[face_id])]
    normal = _newell_normal(pts)
    norm = np.linalg.norm(normal)
    if norm <= _NORMAL_EPS:
        raise DegenerateFace(f"face {face_id} has no well-defined plane")
    normal = normal / norm
    u = None
    for k in range(1, len(pts)):
        edge = pts[k] - pts[0]
        if np.linalg.norm(edge) > _NORMAL_EPS:
            u = edge / np.linalg.norm(edge)
            break
    if u is None:  # unreachable when the normal is non-zero
        raise DegenerateFace(f"face {face_id} has no non-zero edge")
    v = np.cross(normal, u)
    rel = pts - pts[0]
    return np.column_stack([rel @ u, rel @ v])


def shoelace_area(pts2d: np.ndarray) -> float:
    """Polygon area from ordered 2D vertices."""
    x = pts2d[:, 0]
    y = pts2d[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def face_area(mesh: TriMesh, face_id: int) -> float:
    """Shoelace area of the face's planar projection; 0 for degenerate faces."""
    try:
        pts2d = project_to_plane(mesh, face_id)
    except DegenerateFace:
        return 0.0
    return shoelace_area(pts2d)


def face_areas(mesh: TriMesh) -> np.ndarray:
    """Per-face areas; vectorized cross-product path for triangle meshes."""
    tri = mesh.triangles
    if tri is None:
        return np.asarray([face_area(mesh, i) for i in range(mesh.n_faces)])
    p = mesh.vertices[tri]
    cross = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    return 0.5 * np.linalg.norm(cross, axis=1)


def mesh_total_area(mesh: TriMesh) -> float:
    return float(sum(face_area(mesh, i) for i in range(mesh.n_faces)))


def is_watertight(mesh: TriMesh) -> bool:
    """True when every edge is shared by exactly two opposite-wound faces."""
    directed: dict[tuple[int, int], int] = {}
    for f in mesh.faces:
        for a, b in zip(f, f[1:] + f[:1]):
            directed[(a, b)] = directed.get((a, b), 0) + 1
    for (a, b), count in directed.items():
        if count != 1 or directed.get((b, a), 0) != 1:
            return False
    return True


def mesh_volume(mesh: TriMesh) -> float:
    """Enclosed volume of a closed, consistently wound mesh (signed-tet sum).

    Raises NotWatertight when the edge-manifold check fails.  Non-triangular
    faces are fan-triangulated from their first vertex.
    """
    if not is_watertight(mesh):
        raise NotWatertight("mesh is not closed and consistently wound")
    total = 0.0
    tri = mesh.triangles
    if tri is not None:
        p = mesh.vertices[tri]
        total = float(np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2])).sum())
    else:
        for f in mesh.faces:
            pts = mesh.vertices[list(f)]
            for k in range(1, len(f) - 1):
                total += float(np.dot(pts[0], np.cross(pts[k], pts[k + 1])))
    return abs(total) / 6.0


def connected_components(mesh: TriMesh, face_ids) -> list[list[int]]:
    """Partition a face subset into vertex-connected groups.

    Connectivity is over the shared-vertex graph: consecutive vertex pairs of
    every face (loop closed last-to-first) are edges, so two faces touching
    at a single welded vertex belong to the same component.  Components are
    ordered by their smallest face id; faces inside a component keep
    ascending order.
    """
    face_ids = sorted(int(i) for i in face_ids)
    if not face_ids:
        return []
    parent: dict[int, int] = {}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(a: int, b: int) -> None:
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for fid in face_ids:
        f = mesh.faces[fid]
        for a, b in zip(f, f[1:] + f[:1]):
            union(a, b)
    groups: dict[int, list[int]] = {}
    for fid in face_ids:
        root = find(mesh.faces[fid][0])
        groups.setdefault(root, []).append(fid)
    return sorted(groups.values(), key=lambda g: g[0])
