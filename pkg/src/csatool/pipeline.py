"""The six-step CSA pipeline: distances, threshold, labeling, refinement, area."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distances import DistanceVector, min_distances
from .errors import InsufficientContact, NotWatertight
from .mesh import TriMesh, connected_components, face_area, mesh_total_area, mesh_volume
from .threshold import DEFAULT_CAP_MM, ThresholdResult, find_threshold


@dataclass(frozen=True)
class PipelineConfig:
    cap_mm: float = DEFAULT_CAP_MM
    threshold_override_mm: float | None = None
    refine: bool = True
    unit_scale: float = 1.0


@dataclass(frozen=True)
class CsaResult:
    """Outcome of a CSA computation on the smaller ("tumor") mesh."""

    csa_face_ids: frozenset[int]
    csa_face_ids_pre_refinement: frozenset[int]
    csa_area: float
    threshold: ThresholdResult | None
    threshold_mm: float | None
    refinement_applied: bool
    discarded_component_count: int
    insufficient_contact: bool
    smaller_total_area: float
    smaller_volume: float | None
    face_count_smaller: int
    face_count_larger: int
    small_is_first: bool
    config: PipelineConfig = field(default_factory=PipelineConfig)

    def to_json_dict(self, include_distribution: bool = False) -> dict:
        """Serialize to the published report schema."""
        out = {
            "csa_area_mm2": self.csa_area,
            "tumor_total_area_mm2": self.smaller_total_area,
            "tumor_volume_mm3": self.smaller_volume,
            "threshold_mm": self.threshold_mm,
            "split_index": self.threshold.split_index if self.threshold else None,
            "face_count_tumor": self.face_count_smaller,
            "face_count_organ": self.face_count_larger,
            "csa_face_ids": sorted(self.csa_face_ids),
            "pre_refinement_face_ids": sorted(self.csa_face_ids_pre_refinement),
            "refinement_applied": self.refinement_applied,
            "insufficient_contact": self.insufficient_contact,
            "unit_scale": self.config.unit_scale,
        }
        if include_distribution and self.threshold is not None:
            t = self.threshold
            out["distribution"] = {
                "sorted_distances": [float(v) for v in t.sorted_distances],
                "fit_lines": [list(t.fit_lines[0]), list(t.fit_lines[1])],
                "split_index": t.split_index,
                "capped_count": t.capped_count,
                "tau": t.tau,
                "cap": t.cap,
            }
        return out


def define_csa(d: DistanceVector, tau: float) -> set[int]:
    """Face ids whose distance is strictly below the threshold."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    return set(int(i) for i in np.flatnonzero(d.distances < tau))


def refine_csa(
    smaller: TriMesh, csa_ids: set[int], d: DistanceVector
) -> tuple[set[int], int]:
    """Reassign disconnected non-contact components back into the CSA.

    The complement of the CSA is split into vertex-connected components; the
    component containing the globally furthest face (max distance, lowest
    component index on ties) stays non-contact, every other component is
    absorbed.  Returns the refined set and the number of absorbed components.
    """
    complement = [i for i in range(smaller.n_faces) if i not in csa_ids]
    parts = connected_components(smaller, complement)
    if len(parts) <= 1:
        return set(csa_ids), 0
    maxima = [max(d.distances[fid] for fid in comp) for comp in parts]
    keep = int(np.argmax(maxima))
    refined = set(csa_ids)
    for ci, comp in enumerate(parts):
        if ci != keep:
            refined.update(comp)
    return refined, len(parts) - 1


def compute_csa_area(smaller: TriMesh, csa_ids) -> float:
    """Sum of the Shoelace face areas over the CSA face ids."""
    return float(sum(face_area(smaller, i) for i in csa_ids))


def hsieh_estimate(r: float, d: float) -> float:
    """Legacy spherical approximation: 2*pi*r*d."""
    if r < 0 or d < 0:
        raise ValueError("radius and depth must be >= 0")
    return 2.0 * math.pi * r * d


def compute_csa(
    organ: TriMesh, tumor: TriMesh, config: PipelineConfig | None = None
) -> CsaResult:
    """Run the full pipeline on a welded organ/tumor mesh pair."""
    config = config or PipelineConfig()
    d = min_distances(organ, tumor)
    return compute_csa_from_distances(organ, tumor, d, config)


def compute_csa_from_distances(
    organ: TriMesh,
    tumor: TriMesh,
    d: DistanceVector,
    config: PipelineConfig | None = None,
) -> CsaResult:
    """Pipeline tail reusing a precomputed distance vector (service cache)."""
    config = config or PipelineConfig()
    smaller = organ if d.small_is_first else tumor
    larger = tumor if d.small_is_first else organ

    threshold: ThresholdResult | None = None
    insufficient = False
    if config.threshold_override_mm is not None:
        tau = float(config.threshold_override_mm)
    else:
        try:
            threshold = find_threshold(d, cap=config.cap_mm)
            tau = threshold.tau
        except InsufficientContact:
            insufficient = True
            tau = 0.0

    pre = set() if insufficient else define_csa(d, tau)
    if config.refine and not insufficient:
        refined, discarded = refine_csa(smaller, pre, d)
    else:
        refined, discarded = set(pre), 0

    try:
        volume = mesh_volume(smaller)
    except NotWatertight:
        volume = None

    return CsaResult(
        csa_face_ids=frozenset(refined),
        csa_face_ids_pre_refinement=frozenset(pre),
        csa_area=compute_csa_area(smaller, refined),
        threshold=threshold,
        threshold_mm=None if insufficient else tau,
        refinement_applied=refined != pre,
        discarded_component_count=discarded,
        insufficient_contact=insufficient,
        smaller_total_area=mesh_total_area(smaller),
        smaller_volume=volume,
        face_count_smaller=smaller.n_faces,
        face_count_larger=larger.n_faces,
        small_is_first=d.small_is_first,
        config=config,
    )
