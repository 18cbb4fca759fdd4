"""HTTP facade over the engine for the viewer and other clients.

Sessions live in memory with TTL eviction; uploaded meshes are immutable.
The distance vector is cached per (session, cap) so threshold overrides
recompute instantly.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .bench import DEFAULT_WELD_EPSILON_MM
from .distances import DistanceVector, min_distances
from .errors import CsaError, NotWatertight
from .mesh import TriMesh, mesh_total_area, mesh_volume, weld_vertices
from .meshio import parse_stl
from .pipeline import PipelineConfig, compute_csa_from_distances
from .threshold import DEFAULT_CAP_MM

DEFAULT_MAX_UPLOAD_BYTES = 256 * 1024 * 1024
DEFAULT_SESSION_TTL_S = 3600.0


@dataclass
class Session:
    session_id: str
    organ: TriMesh
    tumor: TriMesh
    created_at: float
    last_result: dict | None = None
    distance_cache: dict[float, DistanceVector] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


class ComputeParams(BaseModel):
    cap_mm: float = DEFAULT_CAP_MM
    threshold_override_mm: float | None = None
    refine: bool = True


def _mesh_summary(mesh: TriMesh) -> dict:
    try:
        volume = mesh_volume(mesh)
    except NotWatertight:
        volume = None
    lo, hi = mesh.bbox()
    return {
        "face_count": mesh.n_faces,
        "vertex_count": mesh.n_vertices,
        "total_area_mm2": mesh_total_area(mesh),
        "volume_mm3": volume,
        "bbox": {"min": list(lo), "max": list(hi)},
    }


def _mesh_payload(mesh: TriMesh) -> dict:
    return {
        "vertices": mesh.vertices.tolist(),
        "faces": [list(f) for f in mesh.faces],
    }


def create_app(
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES,
    session_ttl_s: float = DEFAULT_SESSION_TTL_S,
    static_dir: str | Path | None = None,
    weld_epsilon_mm: float = DEFAULT_WELD_EPSILON_MM,
) -> FastAPI:
    app = FastAPI(title="csatool service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def evict_expired() -> None:
        now = time.monotonic()
        with registry_lock:
            expired = [
                sid for sid, s in sessions.items() if now - s.created_at > session_ttl_s
            ]
            for sid in expired:
                del sessions[sid]

    def get_session(session_id: str) -> Session:
        evict_expired()
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return session

    async def read_mesh_upload(upload: UploadFile, label: str) -> TriMesh:
        data = await upload.read()
        if len(data) > max_upload_bytes:
            raise HTTPException(status_code=413, detail=f"{label} upload too large")
        try:
            mesh = parse_stl(data)
        except CsaError as exc:
            raise HTTPException(status_code=400, detail=f"{label}: {exc}") from exc
        welded, _ = weld_vertices(mesh, weld_epsilon_mm)
        return welded

    @app.post("/sessions", status_code=201)
    async def create_session(organ: UploadFile, tumor: UploadFile):
        organ_mesh = await read_mesh_upload(organ, "organ")
        tumor_mesh = await read_mesh_upload(tumor, "tumor")
        session = Session(
            session_id=uuid.uuid4().hex,
            organ=organ_mesh,
            tumor=tumor_mesh,
            created_at=time.monotonic(),
        )
        with registry_lock:
            sessions[session.session_id] = session
        return {
            "session_id": session.session_id,
            "organ": _mesh_summary(organ_mesh),
            "tumor": _mesh_summary(tumor_mesh),
        }

    @app.post("/sessions/{session_id}/compute")
    def compute(
        session_id: str,
        params: ComputeParams,
        include_distribution: int = Query(default=0),
    ):
        if params.cap_mm <= 0:
            raise HTTPException(status_code=422, detail="cap_mm must be positive")
        if params.threshold_override_mm is not None and params.threshold_override_mm < 0:
            raise HTTPException(status_code=422, detail="threshold_override_mm must be >= 0")
        session = get_session(session_id)
        config = PipelineConfig(
            cap_mm=params.cap_mm,
            threshold_override_mm=params.threshold_override_mm,
            refine=params.refine,
        )
        with session.lock:
            d = session.distance_cache.get(params.cap_mm)
            if d is None:
                d = min_distances(session.organ, session.tumor)
                session.distance_cache[params.cap_mm] = d
            result = compute_csa_from_distances(session.organ, session.tumor, d, config)
            report = result.to_json_dict(include_distribution=bool(include_distribution))
            session.last_result = report
        return report

    @app.get("/sessions/{session_id}/mesh/{which}")
    def get_mesh(session_id: str, which: str):
        session = get_session(session_id)
        if which == "organ":
            return _mesh_payload(session.organ)
        if which == "tumor":
            return _mesh_payload(session.tumor)
        raise HTTPException(status_code=404, detail="mesh must be 'organ' or 'tumor'")

    if static_dir is not None and Path(static_dir).is_dir():
        static_path = Path(static_dir)

        @app.get("/")
        def index():
            return FileResponse(static_path / "index.html")

        app.mount("/", StaticFiles(directory=static_path), name="viewer")

    return app


def main() -> None:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="csatool HTTP service")
    parser.add_argument("--port", type=int, default=8008)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--max-upload-bytes", type=int, default=DEFAULT_MAX_UPLOAD_BYTES)
    parser.add_argument("--session-ttl", type=float, default=DEFAULT_SESSION_TTL_S)
    parser.add_argument("--static-dir", default=None,
                        help="directory with the built viewer bundle")
    args = parser.parse_args()
    app = create_app(
        max_upload_bytes=args.max_upload_bytes,
        session_ttl_s=args.session_ttl,
        static_dir=args.static_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
