"""STL and PLY reading/writing.

Binary STL: 80-byte header, little-endian uint32 triangle count, then
50-byte records (12 float32 + uint16 attribute).  ASCII STL follows the
solid/facet/vertex grammar.  Stored facet normals are discarded.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import EmptyMesh, MalformedAscii, TruncatedFile
from .mesh import TriMesh

_RECORD = struct.Struct("<12fH")


def parse_stl(data: bytes, unit_scale: float = 1.0) -> TriMesh:
    """Parse binary or ASCII STL bytes into an indexed mesh.

    The format is auto-detected: ASCII iff the stream starts with "solid"
    and parses as ASCII.  Per-triangle vertex records are deduplicated by
    exact bit-equality; welding beyond that is a separate step.
    """
    if data.lstrip()[:5] == b"solid":
        try:
            return _parse_ascii(data, unit_scale)
        except MalformedAscii:
            # Some binary exporters write "solid" into the header.
            if _looks_binary(data):
                return _parse_binary(data, unit_scale)
            raise
    return _parse_binary(data, unit_scale)


def _looks_binary(data: bytes) -> bool:
    if len(data) < 84:
        return False
    (count,) = struct.unpack_from("<I", data, 80)
    return len(data) == 84 + 50 * count


def _parse_binary(data: bytes, unit_scale: float) -> TriMesh:
    if len(data) < 84:
        raise TruncatedFile("binary STL shorter than 84-byte preamble")
    (count,) = struct.unpack_from("<I", data, 80)
    if len(data) < 84 + 50 * count:
        raise TruncatedFile(
            f"binary STL declares {count} triangles but holds "
            f"{(len(data) - 84) // 50}"
        )
    if count == 0:
        raise EmptyMesh("STL contains zero triangles")
    raw = np.frombuffer(data, dtype=np.uint8, count=50 * count, offset=84)
    records = raw.reshape(count, 50)
    floats = records[:, :48].copy().view("<f4").reshape(count, 12)
    tris = floats[:, 3:].astype(np.float64).reshape(count, 3, 3)
    return _index_soup(tris, unit_scale)


def _parse_ascii(data: bytes, unit_scale: float) -> TriMesh:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise MalformedAscii("non-ASCII bytes in STL text") from exc
    tokens = text.split()
    pos = 0

    def take(*expected: str):
        nonlocal pos
        for word in expected:
            if pos >= len(tokens) or tokens[pos] != word:
                got = tokens[pos] if pos < len(tokens) else "<eof>"
                raise MalformedAscii(f"expected '{word}', got '{got}'")
            pos += 1

    def number() -> float:
        nonlocal pos
        if pos >= len(tokens):
            raise MalformedAscii("unexpected end of file in number")
        try:
            value = float(tokens[pos])
        except ValueError as exc:
            raise MalformedAscii(f"bad number '{tokens[pos]}'") from exc
        pos += 1
        return value

    take("solid")
    # Optional solid name: skip tokens until the first "facet"/"endsolid".
    while pos < len(tokens) and tokens[pos] not in ("facet", "endsolid"):
        pos += 1
    tris = []
    while pos < len(tokens) and tokens[pos] == "facet":
        take("facet", "normal")
        number(), number(), number()
        take("outer", "loop")
        tri = []
        for _ in range(3):
            take("vertex")
            tri.append([number(), number(), number()])
        take("endloop", "endfacet")
        tris.append(tri)
    take("endsolid")
    if not tris:
        raise EmptyMesh("STL contains zero triangles")
    return _index_soup(np.asarray(tris, dtype=np.float64), unit_scale)


def _index_soup(tris: np.ndarray, unit_scale: float) -> TriMesh:
    """Turn a (N, 3, 3) triangle soup into an indexed mesh via exact dedup."""
    flat = tris.reshape(-1, 3) * float(unit_scale)
    seen: dict[bytes, int] = {}
    verts = []
    index = np.empty(len(flat), dtype=np.int64)
    for i, row in enumerate(flat):
        key = row.tobytes()
        j = seen.get(key)
        if j is None:
            j = len(verts)
            seen[key] = j
            verts.append(row)
        index[i] = j
    faces = tuple(tuple(f) for f in index.reshape(-1, 3))
    return TriMesh(np.asarray(verts), faces, unit_scale)


def serialize_stl(mesh: TriMesh, header: bytes = b"") -> bytes:
    """Serialize a triangle mesh to binary STL (normals recomputed)."""
    tri = mesh.triangles
    if tri is None:
        raise ValueError("binary STL supports triangular faces only")
    out = bytearray(header[:80].ljust(80, b"\0"))
    out += struct.pack("<I", len(tri))
    p = mesh.vertices[tri]
    cross = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    norms = np.linalg.norm(cross, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    normals = cross / safe[:, None]
    for i in range(len(tri)):
        vals = [*normals[i], *p[i, 0], *p[i, 1], *p[i, 2]]
        out += _RECORD.pack(*[float(v) for v in vals], 0)
    return bytes(out)


def load_stl(path: str | Path, unit_scale: float = 1.0) -> TriMesh:
    return parse_stl(Path(path).read_bytes(), unit_scale)


def export_ply_colored(mesh: TriMesh, highlighted, path: str | Path) -> None:
    """Write an ASCII PLY with per-face RGB: highlighted faces red."""
    highlighted = set(int(i) for i in highlighted)
    if highlighted and (min(highlighted) < 0 or max(highlighted) >= mesh.n_faces):
        raise ValueError("highlighted face id out of range")
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {mesh.n_vertices}",
        "property float x",
        "property float y",
        "property float z",
        f"element face {mesh.n_faces}",
        "property list uchar int vertex_indices",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        "end_header",
    ]
    for v in mesh.vertices:
        lines.append(f"{v[0]:.9g} {v[1]:.9g} {v[2]:.9g}")
    for i, f in enumerate(mesh.faces):
        color = "255 0 0" if i in highlighted else "200 200 160"
        lines.append(f"{len(f)} {' '.join(str(j) for j in f)} {color}")
    Path(path).write_text("\n".join(lines) + "\n")


def parse_ply(data: str) -> tuple[TriMesh, list[tuple[int, int, int]]]:
    """Minimal reader for the PLY flavor written by export_ply_colored."""
    lines = [ln.strip() for ln in data.splitlines() if ln.strip()]
    n_verts = n_faces = 0
    body_at = 0
    for i, ln in enumerate(lines):
        if ln.startswith("element vertex"):
            n_verts = int(ln.split()[-1])
        elif ln.startswith("element face"):
            n_faces = int(ln.split()[-1])
        elif ln == "end_header":
            body_at = i + 1
            break
    verts = [tuple(float(t) for t in ln.split()) for ln in lines[body_at : body_at + n_verts]]
    faces = []
    colors = []
    for ln in lines[body_at + n_verts : body_at + n_verts + n_faces]:
        toks = ln.split()
        m = int(toks[0])
        faces.append(tuple(int(t) for t in toks[1 : 1 + m]))
        colors.append(tuple(int(t) for t in toks[1 + m : 4 + m]))
    return TriMesh(np.asarray(verts), tuple(faces)), colors
