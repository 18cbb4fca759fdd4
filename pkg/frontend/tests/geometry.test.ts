import { describe, expect, it } from "vitest";

import {
  BASE_RGB,
  buildFlatGeometry,
  HIGHLIGHT_RGB,
  highlightedIds,
  measuredMeshName,
  sceneCenter,
} from "../src/geometry";
import { CsaReport, MeshPayload, SessionInfo } from "../src/types";

import reportJson from "./fixtures/report.json";
import sessionJson from "./fixtures/session.json";
import organJson from "./fixtures/mesh_organ.json";
import tumorJson from "./fixtures/mesh_tumor.json";

const report = reportJson as CsaReport;
const session = sessionJson as SessionInfo;
const organ = organJson as MeshPayload;
const tumor = tumorJson as MeshPayload;

describe("buildFlatGeometry", () => {
  it("expands every face to nine floats", () => {
    const flat = buildFlatGeometry(tumor);
    expect(flat.positions.length).toBe(9 * tumor.faces.length);
    expect(flat.colors.length).toBe(9 * tumor.faces.length);
    expect(flat.highlightedFaceCount).toBe(0);
  });

  it("copies vertex coordinates verbatim", () => {
    const flat = buildFlatGeometry(tumor);
    const face = tumor.faces[5];
    for (let k = 0; k < 3; k++) {
      const v = tumor.vertices[face[k]];
      expect(flat.positions[9 * 5 + 3 * k]).toBeCloseTo(v[0], 6);
      expect(flat.positions[9 * 5 + 3 * k + 1]).toBeCloseTo(v[1], 6);
      expect(flat.positions[9 * 5 + 3 * k + 2]).toBeCloseTo(v[2], 6);
    }
  });

  it("highlighted face count equals served id count", () => {
    const measured = measuredMeshName(report, session) === "organ" ? organ : tumor;
    const flat = buildFlatGeometry(measured, report.csa_face_ids);
    expect(flat.highlightedFaceCount).toBe(report.csa_face_ids.length);
  });

  it("colors highlighted faces red and the rest base", () => {
    const flat = buildFlatGeometry(organ, [0]);
    expect([...flat.colors.slice(0, 3)]).toEqual(HIGHLIGHT_RGB);
    expect(flat.colors[9]).toBeCloseTo(BASE_RGB[0], 6);
    expect(flat.colors[10]).toBeCloseTo(BASE_RGB[1], 6);
    expect(flat.colors[11]).toBeCloseTo(BASE_RGB[2], 6);
  });

  it("ignores out-of-range highlight ids gracefully", () => {
    const flat = buildFlatGeometry(organ, [10_000]);
    expect(flat.highlightedFaceCount).toBe(0);
  });
});

describe("highlightedIds", () => {
  it("selects refined or pre-refinement sets per toggle", () => {
    expect(highlightedIds(report, true)).toEqual(report.csa_face_ids);
    expect(highlightedIds(report, false)).toEqual(report.pre_refinement_face_ids);
  });
});

describe("measuredMeshName", () => {
  it("resolves the measured mesh for the fixture pair", () => {
    const name = measuredMeshName(report, session);
    const mesh = name === "organ" ? organ : tumor;
    expect(mesh.faces.length).toBe(report.face_count_tumor);
  });

  it("served face ids index into the measured mesh", () => {
    const name = measuredMeshName(report, session);
    const mesh = name === "organ" ? organ : tumor;
    expect(report.csa_face_ids.length).toBeGreaterThan(0);
    expect(Math.max(...report.csa_face_ids)).toBeLessThan(mesh.faces.length);
  });

  it("prefers the tumor upload when face counts tie", () => {
    const tied = {
      ...session,
      organ: { ...session.organ, face_count: 42 },
      tumor: { ...session.tumor, face_count: 42 },
    };
    const tiedReport = { ...report, face_count_tumor: 42, face_count_organ: 42 };
    expect(measuredMeshName(tiedReport, tied)).toBe("tumor");
  });
});

describe("sceneCenter", () => {
  it("centers the fixture organ block", () => {
    const c = sceneCenter(organ);
    expect(c.length).toBe(3);
    const xs = organ.vertices.map((v) => v[0]);
    expect(c[0]).toBeCloseTo((Math.min(...xs) + Math.max(...xs)) / 2, 9);
  });
});
