"""Synthetic organ-tumor pairs with analytic ground-truth contact area.

The tumor is a (possibly anisotropically scaled) icosphere; the organ is a
rectangular box whose top face carries an indentation congruent to the
submerged part of the tumor.  The indentation reuses the tumor's own
facets (crossing triangles clipped at the plane), so the contact gap is
exactly zero and the pair is positioned like a segmented organ/tumor
couple: shared boundary, no overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGeometry
from .mesh import TriMesh

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class SyntheticPair:
    organ: TriMesh
    tumor: TriMesh
    ground_truth_csa: float
    descriptor: dict
    # Tumor faces entirely below the cut plane; handy for tests that need
    # the true contact/free labeling.
    submerged_face_ids: frozenset[int]


def icosphere(radius: float, subdiv: int) -> TriMesh:
    """Recursively subdivided icosahedron scaled to the given radius."""
    if radius <= 0:
        raise InvalidGeometry("radius must be positive")
    if subdiv < 0:
        raise InvalidGeometry("subdiv must be >= 0")
    t = GOLDEN
    verts = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=np.float64,
    )
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    vlist = [v for v in verts]
    for _ in range(subdiv):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(i: int, j: int) -> int:
            key = (i, j) if i < j else (j, i)
            idx = cache.get(key)
            if idx is None:
                m = (vlist[i] + vlist[j]) / 2.0
                m = m / np.linalg.norm(m)
                idx = len(vlist)
                vlist.append(m)
                cache[key] = idx
            return idx

        next_faces = []
        for a, b, c in faces:
            ab = midpoint(a, b)
            bc = midpoint(b, c)
            ca = midpoint(c, a)
            next_faces += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        faces = next_faces
    return TriMesh(np.asarray(vlist) * radius, tuple(faces))


def _clip_triangles_below(verts: np.ndarray, faces) -> tuple[list[np.ndarray], list[tuple[bytes, bytes]], dict[bytes, np.ndarray]]:
    """Clip triangles against the half-space z <= 0.

    Returns the kept polygons (coordinate arrays in winding order), directed
    rim segments (edges lying exactly on z = 0, keyed by point bytes), and
    the point table for resolving keys.
    """
    z = verts[:, 2]
    cut_cache: dict[tuple[int, int], np.ndarray] = {}

    def cut(i: int, j: int) -> np.ndarray:
        key = (i, j) if i < j else (j, i)
        p = cut_cache.get(key)
        if p is None:
            a, b = verts[key[0]], verts[key[1]]
            t = a[2] / (a[2] - b[2])
            p = a + t * (b - a)
            p = np.array([p[0], p[1], 0.0])
            cut_cache[key] = p
        return p

    polys: list[np.ndarray] = []
    rim: list[tuple[bytes, bytes]] = []
    points: dict[bytes, np.ndarray] = {}

    def register(p: np.ndarray) -> bytes:
        key = p.tobytes()
        points.setdefault(key, p)
        return key

    for tri in faces:
        zs = [z[i] for i in tri]
        if all(v >= 0 for v in zs):
            continue
        if all(v <= 0 for v in zs):
            arr = verts[list(tri)]
        else:
            poly: list[np.ndarray] = []
            for k in range(3):
                i, j = tri[k], tri[(k + 1) % 3]
                if z[i] <= 0:
                    poly.append(verts[i])
                if (z[i] < 0 < z[j]) or (z[j] < 0 < z[i]):
                    poly.append(cut(i, j))
            if len(poly) < 3:
                continue
            arr = np.asarray(poly)
        polys.append(arr)
        # Rim candidate: consecutive polygon points both exactly on the plane.
        n = len(arr)
        for k in range(n):
            p, q = arr[k], arr[(k + 1) % n]
            if p[2] == 0.0 and q[2] == 0.0:
                rim.append((register(p), register(q)))
    # An on-plane edge shared by two kept faces is interior, not rim.
    directed = set(rim)
    rim = [(a, b) for a, b in rim if (b, a) not in directed]
    return polys, rim, points


def _chain_rim(rim, points) -> list[np.ndarray]:
    """Order directed rim segments into closed loops of points."""
    succ = {a: b for a, b in rim}
    loops = []
    remaining = set(succ)
    while remaining:
        start = min(remaining)  # deterministic
        loop_keys = [start]
        cur = succ[start]
        remaining.discard(start)
        while cur != start:
            loop_keys.append(cur)
            remaining.discard(cur)
            cur = succ[cur]
        loops.append(np.asarray([points[k] for k in loop_keys]))
    return loops


def _loop_ccw(loop: np.ndarray) -> np.ndarray:
    x, y = loop[:, 0], loop[:, 1]
    area2 = np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)
    return loop if area2 > 0 else loop[::-1]


def _stitch_annulus(inner: np.ndarray, outer: np.ndarray) -> list[np.ndarray]:
    """Triangulate the flat region between two star-shaped CCW loops at z=0."""
    def angles(loop):
        return np.arctan2(loop[:, 1], loop[:, 0])

    def rotate_to_min(loop):
        return np.roll(loop, -int(np.argmin(angles(loop))), axis=0)

    inner = rotate_to_min(_loop_ccw(inner))
    outer = rotate_to_min(_loop_ccw(outer))
    ai = angles(inner)
    ao = angles(outer)
    ni, no = len(inner), len(outer)

    def ang(a, k, n):
        return a[k] if k < n else a[k - n] + 2.0 * math.pi

    tris = []
    i = j = 0
    while i < ni or j < no:
        if j >= no or (i < ni and ang(ai, i + 1, ni) <= ang(ao, j + 1, no)):
            tris.append(np.asarray([inner[i % ni], outer[j % no], inner[(i + 1) % ni]]))
            i += 1
        else:
            tris.append(np.asarray([inner[i % ni], outer[j % no], outer[(j + 1) % no]]))
            j += 1
    return tris


def _square_loop(half: float) -> np.ndarray:
    return np.asarray(
        [
            [half, half, 0.0],
            [-half, half, 0.0],
            [-half, -half, 0.0],
            [half, -half, 0.0],
        ]
    )


def _box_shell(half: float, depth: float) -> list[np.ndarray]:
    """Walls and bottom of the organ box (top face handled separately)."""
    top = _square_loop(half)
    bot = top.copy()
    bot[:, 2] = -depth
    tris = []
    for k in range(4):
        a, b = top[k], top[(k + 1) % 4]
        c, d = bot[(k + 1) % 4], bot[k]
        # Outward-facing wall quads (top loop is CCW from above).
        tris.append(np.asarray([a, d, c]))
        tris.append(np.asarray([a, c, b]))
    tris.append(np.asarray([bot[0], bot[2], bot[1]]))
    tris.append(np.asarray([bot[0], bot[3], bot[2]]))
    return tris


def _soup_to_mesh(triangles: list[np.ndarray]) -> TriMesh:
    """Index a coordinate soup by exact vertex identity."""
    seen: dict[bytes, int] = {}
    verts: list[np.ndarray] = []
    faces = []
    for tri in triangles:
        ids = []
        for p in tri:
            key = p.tobytes()
            idx = seen.get(key)
            if idx is None:
                idx = len(verts)
                seen[key] = idx
                verts.append(p)
            ids.append(idx)
        if len(set(ids)) == 3:
            faces.append(tuple(ids))
    return TriMesh(np.asarray(verts), tuple(faces))


def _fan(poly: np.ndarray) -> list[np.ndarray]:
    return [np.asarray([poly[0], poly[k], poly[k + 1]]) for k in range(1, len(poly) - 1)]


def _embedded_pair(tumor: TriMesh, box: tuple[float, float] | None, descriptor: dict,
                   ground_truth: float) -> SyntheticPair:
    """Build the organ box around a tumor positioned with its cut plane at z=0."""
    verts = tumor.vertices
    z = verts[:, 2]
    if not (z.min() < 0):
        raise InvalidGeometry("tumor has no submerged part")
    sub = verts[z < 0]
    reach = float(np.abs(sub[:, :2]).max()) if len(sub) else 0.0
    depth_needed = float(-z.min())
    if box is None:
        half = 1.4 * max(reach, 1e-9) + 2.0
        depth = depth_needed + 0.25 * depth_needed + 2.0
    else:
        half, depth = box[0] / 2.0, box[1]
        if half <= reach or depth <= depth_needed:
            raise InvalidGeometry("box too small to contain the submerged tumor part")

    polys, rim, points = _clip_triangles_below(verts, tumor.faces)
    dent = []
    for poly in polys:
        for tri in _fan(poly):
            dent.append(tri[::-1])  # organ outward normal points into the tumor

    organ_tris = list(dent)
    loops = _chain_rim(rim, points)
    square = _square_loop(half)
    if not loops:
        organ_tris += _fan(square)
    elif len(loops) == 1:
        organ_tris += _stitch_annulus(loops[0], square)
    else:
        raise InvalidGeometry("cut plane produced multiple rim loops")
    organ_tris += _box_shell(half, depth)
    organ = _soup_to_mesh(organ_tris)

    tri_idx = tumor.triangles
    submerged = frozenset(
        int(i) for i in np.flatnonzero((z[tri_idx] < 0).all(axis=1))
    )
    return SyntheticPair(
        organ=organ,
        tumor=tumor,
        ground_truth_csa=ground_truth,
        descriptor=descriptor,
        submerged_face_ids=submerged,
    )


def generate_sphere_pair(
    r: float, h: float, subdiv: int = 4, box: tuple[float, float] | None = None
) -> SyntheticPair:
    """Sphere of radius r embedded to depth h; truth is the cap area 2*pi*r*h."""
    if r <= 0 or h <= 0 or h > 2 * r:
        raise InvalidGeometry(f"need 0 < h <= 2r, got r={r}, h={h}")
    sphere = icosphere(r, subdiv)
    tumor = TriMesh(sphere.vertices + np.array([0.0, 0.0, r - h]), sphere.faces)
    descriptor = {"shape": "sphere", "params": {"r": r, "h": h}, "subdiv": subdiv}
    return _embedded_pair(tumor, box, descriptor, 2.0 * math.pi * r * h)


def ellipsoid_cap_area(
    a: float, b: float, c: float, z0: float, n_phi: int = 1024, n_theta: int = 2048
) -> float:
    """Surface area of the ellipsoid portion with z < z0, by Simpson quadrature.

    The default grid evaluates ~2e6 samples; halving the resolution moves
    the result by well under 0.01% for benchmark-scale shapes (see tests).
    """
    if not (-c < z0 < c):
        raise InvalidGeometry("cut plane must intersect the ellipsoid")
    phi0 = math.acos(z0 / c)
    phi = np.linspace(phi0, math.pi, n_phi + 1)
    theta = np.linspace(0.0, 2.0 * math.pi, n_theta + 1)
    sin_phi = np.sin(phi)[:, None]
    cos_phi = np.cos(phi)[:, None]
    cos_t = np.cos(theta)[None, :]
    sin_t = np.sin(theta)[None, :]
    integrand = sin_phi * np.sqrt(
        (b * c * cos_t * sin_phi) ** 2
        + (a * c * sin_t * sin_phi) ** 2
        + (a * b * cos_phi) ** 2
    )
    from scipy.integrate import simpson

    inner = simpson(integrand, x=theta, axis=1)
    return float(simpson(inner, x=phi))


def generate_ellipsoid_pair(
    a: float, b: float, c: float, z0: float, subdiv: int = 4,
    box: tuple[float, float] | None = None,
) -> SyntheticPair:
    """Axis-aligned ellipsoid cut by the plane z = z0 (local frame)."""
    if min(a, b, c) <= 0:
        raise InvalidGeometry("semi-axes must be positive")
    if not (-c < z0 < c):
        raise InvalidGeometry(f"need -c < z0 < c, got z0={z0}, c={c}")
    unit = icosphere(1.0, subdiv)
    verts = unit.vertices * np.array([a, b, c]) + np.array([0.0, 0.0, -z0])
    tumor = TriMesh(verts, unit.faces)
    truth = ellipsoid_cap_area(a, b, c, z0)
    descriptor = {
        "shape": "ellipsoid",
        "params": {"a": a, "b": b, "c": c, "z0": z0},
        "subdiv": subdiv,
    }
    return _embedded_pair(tumor, box, descriptor, truth)


def generate_suite(seed: int, subdiv: int = 4, n_pairs: int = 20) -> list[SyntheticPair]:
    """Deterministic mix of sphere and ellipsoid pairs."""
    rng = np.random.default_rng(seed)
    pairs = []
    for i in range(n_pairs):
        if i % 5 < 3:
            r = float(rng.uniform(6.0, 14.0))
            h = float(rng.uniform(0.35, 1.4)) * r
            pairs.append(generate_sphere_pair(r, h, subdiv))
        else:
            a = float(rng.uniform(6.0, 13.0))
            b = float(rng.uniform(6.0, 13.0))
            c = float(rng.uniform(6.0, 13.0))
            z0 = float(rng.uniform(-0.4, 0.5)) * c
            pairs.append(generate_ellipsoid_pair(a, b, c, z0, subdiv))
    return pairs
