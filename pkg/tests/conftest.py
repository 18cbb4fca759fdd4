import time

import numpy as np
import pytest

from csatool.mesh import TriMesh
from csatool.pipeline import compute_csa
from csatool.synth import generate_sphere_pair, generate_suite

ACCEPTANCE_SEED = 7


def random_rotation(rng) -> np.ndarray:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_soup_mesh(rng, n_faces: int, scale: float = 20.0) -> TriMesh:
    """Triangle soup with independent random vertices (no shared topology)."""
    verts = rng.uniform(-scale, scale, size=(3 * n_faces, 3))
    faces = tuple((3 * i, 3 * i + 1, 3 * i + 2) for i in range(n_faces))
    return TriMesh(verts, faces)


@pytest.fixture(scope="session")
def sphere_pair():
    """The r=10 mm, h=5 mm, subdiv=4 benchmark pair."""
    return generate_sphere_pair(10.0, 5.0, 4)


@pytest.fixture(scope="session")
def sphere_pair_result(sphere_pair):
    return compute_csa(sphere_pair.organ, sphere_pair.tumor)


@pytest.fixture(scope="session")
def suite():
    return generate_suite(ACCEPTANCE_SEED, subdiv=4)


@pytest.fixture(scope="session")
def suite_results(suite):
    """(results, wall seconds) for the whole benchmark suite."""
    start = time.perf_counter()
    results = [compute_csa(p.organ, p.tumor) for p in suite]
    return results, time.perf_counter() - start
