"""Minimum centroid-to-centroid distances from the smaller mesh to the other.

The measured mesh is the one with fewer faces; on a tie the second
argument (by convention the tumor) is measured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .mesh import TriMesh, all_centroids

# Below this face count the k-d tree buys nothing.
_BRUTE_FORCE_CUTOFF = 256


@dataclass(frozen=True)
class DistanceVector:
    """Per-face minimum distances for the smaller mesh.

    distances[i] is the Euclidean distance from centroid i of the measured
    mesh to its nearest centroid on the other mesh.  small_is_first records
    whether the first argument was the measured one.
    """

    distances: np.ndarray
    small_is_first: bool

    def __post_init__(self):
        d = np.ascontiguousarray(np.asarray(self.distances, dtype=np.float64))
        d.setflags(write=False)
        object.__setattr__(self, "distances", d)

    def __len__(self) -> int:
        return len(self.distances)


def _pick_smaller(a: TriMesh, b: TriMesh) -> bool:
    """True when the first mesh is the measured (smaller) one."""
    return a.n_faces < b.n_faces


def _point_distances(point: np.ndarray, points: np.ndarray) -> np.ndarray:
    return np.sqrt(((points - point) ** 2).sum(axis=1))


def min_distances_bruteforce(a: TriMesh, b: TriMesh) -> DistanceVector:
    """O(N_small * N_large) reference implementation."""
    small_is_first = _pick_smaller(a, b)
    small, large = (a, b) if small_is_first else (b, a)
    cs = all_centroids(small)
    cl = all_centroids(large)
    out = np.empty(len(cs))
    for i in range(len(cs)):
        out[i] = _point_distances(cs[i], cl).min()
    return DistanceVector(out, small_is_first)


def min_distances(a: TriMesh, b: TriMesh) -> DistanceVector:
    """Spatially indexed nearest-centroid distances.

    A k-d tree over the larger mesh's centroids picks the nearest neighbor;
    the returned distance is then recomputed with the same arithmetic as the
    brute-force path so the two agree bit-for-bit.
    """
    small_is_first = _pick_smaller(a, b)
    small, large = (a, b) if small_is_first else (b, a)
    cs = all_centroids(small)
    cl = all_centroids(large)
    if min(small.n_faces, large.n_faces) < _BRUTE_FORCE_CUTOFF:
        out = np.empty(len(cs))
        for i in range(len(cs)):
            out[i] = _point_distances(cs[i], cl).min()
        return DistanceVector(out, small_is_first)
    tree = cKDTree(cl)
    _, idx = tree.query(cs, k=1)
    out = np.sqrt(((cl[idx] - cs) ** 2).sum(axis=1))
    return DistanceVector(out, small_is_first)
