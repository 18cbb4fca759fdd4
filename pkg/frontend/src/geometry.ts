import { CsaReport, MeshPayload, SessionInfo } from "./types";

// Highlight and base colors, normalized RGB. Same palette as the PLY export.
export const HIGHLIGHT_RGB: [number, number, number] = [1, 0, 0];
export const BASE_RGB: [number, number, number] = [200 / 255, 200 / 255, 160 / 255];

export interface FlatGeometry {
  positions: Float32Array; // 9 floats per face, non-indexed
  colors: Float32Array; // per-vertex, constant within a face
  highlightedFaceCount: number;
}

/**
 * Expand an indexed mesh payload into non-indexed triangle buffers with
 * per-face coloring. Face i of the payload maps to floats [9i, 9i+9), so
 * served face IDs index the buffers directly.
 */
export function buildFlatGeometry(
  mesh: MeshPayload,
  highlightIds: Iterable<number> = [],
): FlatGeometry {
  const highlight = new Set(highlightIds);
  const n = mesh.faces.length;
  const positions = new Float32Array(9 * n);
  const colors = new Float32Array(9 * n);
  let highlighted = 0;
  for (let i = 0; i < n; i++) {
    const face = mesh.faces[i];
    const hot = highlight.has(i);
    if (hot) highlighted++;
    const rgb = hot ? HIGHLIGHT_RGB : BASE_RGB;
    for (let k = 0; k < 3; k++) {
      const v = mesh.vertices[face[k]];
      positions.set(v, 9 * i + 3 * k);
      colors.set(rgb, 9 * i + 3 * k);
    }
  }
  return { positions, colors, highlightedFaceCount: highlighted };
}

/** Face IDs to highlight for a report, honoring the refinement toggle. */
export function highlightedIds(report: CsaReport, showRefined: boolean): number[] {
  return showRefined ? report.csa_face_ids : report.pre_refinement_face_ids;
}

/** Which uploaded mesh the CSA face IDs index into (the measured one). */
export function measuredMeshName(
  report: CsaReport,
  session: SessionInfo,
): "organ" | "tumor" {
  // The report labels the measured (smaller) mesh "tumor"; resolve it back
  // to the upload slot by face count. Equal counts measure the tumor upload.
  if (session.tumor.face_count === report.face_count_tumor) return "tumor";
  return "organ";
}

export function sceneCenter(mesh: MeshPayload): [number, number, number] {
  const lo = [Infinity, Infinity, Infinity];
  const hi = [-Infinity, -Infinity, -Infinity];
  for (const v of mesh.vertices) {
    for (let k = 0; k < 3; k++) {
      if (v[k] < lo[k]) lo[k] = v[k];
      if (v[k] > hi[k]) hi[k] = v[k];
    }
  }
  return [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2];
}
