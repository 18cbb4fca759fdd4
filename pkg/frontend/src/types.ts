// Wire types mirroring the service JSON payloads.

export interface MeshSummary {
  face_count: number;
  vertex_count: number;
  total_area_mm2: number;
  volume_mm3: number | null;
  bbox: { min: number[]; max: number[] };
}

export interface SessionInfo {
  session_id: string;
  organ: MeshSummary;
  tumor: MeshSummary;
}

export interface MeshPayload {
  vertices: number[][];
  faces: number[][];
}

export interface Distribution {
  sorted_distances: number[];
  fit_lines: [number, number][]; // (slope, intercept) per segment
  split_index: number; // 1-based
  capped_count: number;
  tau: number;
  cap: number;
}

export interface CsaReport {
  csa_area_mm2: number;
  tumor_total_area_mm2: number;
  tumor_volume_mm3: number | null;
  threshold_mm: number | null;
  split_index: number | null;
  face_count_tumor: number;
  face_count_organ: number;
  csa_face_ids: number[];
  pre_refinement_face_ids: number[];
  refinement_applied: boolean;
  insufficient_contact: boolean;
  unit_scale: number;
  distribution?: Distribution;
}

export interface ComputeParams {
  cap_mm?: number;
  threshold_override_mm?: number | null;
  refine?: boolean;
}
