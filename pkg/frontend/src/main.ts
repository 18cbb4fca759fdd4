import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";

import { CsaClient } from "./api";
import {
  buildChartModel,
  DEFAULT_LAYOUT,
  snapThreshold,
} from "./chart";
import {
  buildFlatGeometry,
  highlightedIds,
  measuredMeshName,
  sceneCenter,
} from "./geometry";
import { ViewState } from "./state";
import { CsaReport, Distribution, MeshPayload } from "./types";

const client = new CsaClient("");
const state = new ViewState(client);

const el = (id: string) => document.getElementById(id)!;
const input = (id: string) => el(id) as HTMLInputElement;

// --- three.js scene -------------------------------------------------------

const viewport = el("viewport");
const renderer = new THREE.WebGLRenderer({ antialias: true });
renderer.setSize(viewport.clientWidth, viewport.clientHeight);
viewport.appendChild(renderer.domElement);

const scene = new THREE.Scene();
scene.background = new THREE.Color(0x15191f);
const camera = new THREE.PerspectiveCamera(
  50,
  viewport.clientWidth / viewport.clientHeight,
  0.1,
  5000,
);
camera.position.set(0, -60, 40);
const controls = new OrbitControls(camera, renderer.domElement);
scene.add(new THREE.AmbientLight(0xffffff, 0.45));
const sun = new THREE.DirectionalLight(0xffffff, 1.1);
sun.position.set(1, -2, 3);
scene.add(sun);

let organObject: THREE.Mesh | null = null;
let tumorObject: THREE.Mesh | null = null;
let meshes: { organ: MeshPayload; tumor: MeshPayload } | null = null;

function disposeMesh(obj: THREE.Mesh | null): void {
  if (!obj) return;
  scene.remove(obj);
  obj.geometry.dispose();
  (obj.material as THREE.Material).dispose();
}

function makeMesh(
  payload: MeshPayload,
  ids: Iterable<number>,
  opacity: number,
): THREE.Mesh {
  const flat = buildFlatGeometry(payload, ids);
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute("position", new THREE.BufferAttribute(flat.positions, 3));
  geometry.setAttribute("color", new THREE.BufferAttribute(flat.colors, 3));
  geometry.computeVertexNormals();
  const material = new THREE.MeshLambertMaterial({
    vertexColors: true,
    transparent: opacity < 1,
    opacity,
    side: THREE.DoubleSide,
  });
  return new THREE.Mesh(geometry, material);
}

function rebuildScene(report: CsaReport | null): void {
  if (!meshes || !state.session) return;
  disposeMesh(organObject);
  disposeMesh(tumorObject);
  let organIds: number[] = [];
  let tumorIds: number[] = [];
  if (report && state.visibility.highlight) {
    const ids = highlightedIds(report, state.params.refine);
    if (measuredMeshName(report, state.session) === "organ") organIds = ids;
    else tumorIds = ids;
  }
  organObject = makeMesh(meshes.organ, organIds, state.organOpacity);
  tumorObject = makeMesh(meshes.tumor, tumorIds, 1.0);
  organObject.visible = state.visibility.organ;
  tumorObject.visible = state.visibility.tumor;
  scene.add(organObject);
  scene.add(tumorObject);
  const c = sceneCenter(meshes.organ);
  controls.target.set(c[0], c[1], c[2]);
}

function animate(): void {
  requestAnimationFrame(animate);
  controls.update();
  renderer.render(scene, camera);
}
animate();

// --- distance chart -------------------------------------------------------

const chartCanvas = el("chart") as HTMLCanvasElement;

function drawChart(dist: Distribution | undefined, overrideMm: number | null): void {
  const ctx = chartCanvas.getContext("2d")!;
  ctx.clearRect(0, 0, chartCanvas.width, chartCanvas.height);
  if (!dist) return;
  const model = buildChartModel(dist, DEFAULT_LAYOUT, overrideMm);

  ctx.strokeStyle = "#8ab";
  ctx.beginPath();
  model.points.forEach((p, i) => (i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
  ctx.stroke();

  ctx.strokeStyle = "#fa0";
  for (const [a, b] of model.fitSegments) {
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
  }

  ctx.fillStyle = "#f33";
  ctx.beginPath();
  ctx.arc(model.splitMarker.x, model.splitMarker.y, 4, 0, 2 * Math.PI);
  ctx.fill();

  ctx.fillStyle = "#ccc";
  ctx.font = "11px sans-serif";
  ctx.fillText("rank", chartCanvas.width / 2, chartCanvas.height - 6);
  ctx.save();
  ctx.translate(12, chartCanvas.height / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText("distance (mm)", 0, 0);
  ctx.restore();
}

// --- stats panel ----------------------------------------------------------

function fmt(v: number | null, digits = 2): string {
  return v === null ? "n/a" : v.toFixed(digits);
}

function renderStats(report: CsaReport): void {
  el("stat-area").textContent = fmt(report.csa_area_mm2);
  el("stat-total").textContent = fmt(report.tumor_total_area_mm2);
  el("stat-volume").textContent = fmt(report.tumor_volume_mm3);
  el("stat-tau").textContent = fmt(report.threshold_mm, 4);
  el("stat-faces").textContent = String(report.csa_face_ids.length);
  el("stat-refined").textContent = report.refinement_applied ? "yes" : "no";
  el("stat-contact").textContent = report.insufficient_contact
    ? "insufficient contact"
    : "ok";
}

function showError(message: string | null): void {
  const banner = el("error-banner");
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

// --- wiring ---------------------------------------------------------------

async function recomputeAndRender(): Promise<void> {
  if (!state.session || state.computePending) return;
  const button = input("btn-compute");
  button.disabled = true;
  try {
    const report = await state.recompute();
    if (report) {
      renderStats(report);
      drawChart(report.distribution, state.params.threshold_override_mm);
      rebuildScene(report);
      showError(null);
    }
  } catch {
    showError(state.lastError);
  } finally {
    button.disabled = false;
  }
}

el("btn-load").addEventListener("click", async () => {
  const organFile = input("file-organ").files?.[0];
  const tumorFile = input("file-tumor").files?.[0];
  if (!organFile || !tumorFile) {
    showError("select both an organ and a tumor STL file");
    return;
  }
  try {
    const session = await state.loadPair(organFile, tumorFile);
    meshes = {
      organ: await client.fetchMesh(session.session_id, "organ"),
      tumor: await client.fetchMesh(session.session_id, "tumor"),
    };
    el("summary").textContent =
      `organ: ${session.organ.face_count} faces, ` +
      `${session.organ.total_area_mm2.toFixed(1)} mm² | ` +
      `tumor: ${session.tumor.face_count} faces, ` +
      `${session.tumor.total_area_mm2.toFixed(1)} mm²`;
    rebuildScene(null);
    showError(null);
    await recomputeAndRender();
  } catch (err) {
    showError(err instanceof Error ? err.message : String(err));
  }
});

el("btn-compute").addEventListener("click", recomputeAndRender);

input("slider-threshold").addEventListener("change", () => {
  const dist = state.result?.distribution;
  const raw = Number(input("slider-threshold").value);
  const snapped = dist ? snapThreshold(raw, dist.sorted_distances) : raw;
  state.setParams({ threshold_override_mm: snapped });
  el("threshold-value").textContent = snapped.toFixed(4);
  void recomputeAndRender();
});

input("check-override").addEventListener("change", () => {
  const on = input("check-override").checked;
  input("slider-threshold").disabled = !on;
  if (!on) {
    state.setParams({ threshold_override_mm: null });
    void recomputeAndRender();
  }
});

input("check-refine").addEventListener("change", () => {
  state.setParams({ refine: input("check-refine").checked });
  void recomputeAndRender();
});

input("cap-mm").addEventListener("change", () => {
  state.setParams({ cap_mm: Number(input("cap-mm").value) });
  void recomputeAndRender();
});

for (const which of ["organ", "tumor", "highlight"] as const) {
  input(`check-${which}`).addEventListener("change", () => {
    state.visibility[which] = input(`check-${which}`).checked;
    rebuildScene(state.result);
  });
}

input("organ-opacity").addEventListener("input", () => {
  state.organOpacity = Number(input("organ-opacity").value);
  rebuildScene(state.result);
});

window.addEventListener("resize", () => {
  renderer.setSize(viewport.clientWidth, viewport.clientHeight);
  camera.aspect = viewport.clientWidth / viewport.clientHeight;
  camera.updateProjectionMatrix();
});
