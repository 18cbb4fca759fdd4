"""Contact-surface-area toolkit for organ/tumor triangle meshes."""

from .distances import DistanceVector, min_distances, min_distances_bruteforce
from .errors import (
    CsaError,
    DegenerateFace,
    EmptyMesh,
    InsufficientContact,
    InvalidGeometry,
    MalformedAscii,
    NotWatertight,
    TruncatedFile,
)
from .mesh import (
    TriMesh,
    all_centroids,
    connected_components,
    face_area,
    face_centroid,
    mesh_total_area,
    mesh_volume,
    project_to_plane,
    weld_vertices,
)
from .meshio import export_ply_colored, load_stl, parse_stl, serialize_stl
from .pipeline import (
    CsaResult,
    PipelineConfig,
    compute_csa,
    compute_csa_area,
    define_csa,
    hsieh_estimate,
    refine_csa,
)
from .threshold import ThresholdResult, find_threshold
