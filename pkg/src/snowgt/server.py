"""HTTP curation service for the human frame-selection step.

A small JSON API over a :class:`~snowgt.workspace.Workspace`, plus
optional static hosting for the browser UI. Every mutation is persisted
to the manifest before the response is sent; concurrent writers are
serialized by the workspace lock with last-write-wins per video.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Optional

import numpy as np
import uvicorn
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from PIL import Image
from pydantic import BaseModel

from .errors import (
    BoundsError,
    ConflictError,
    NotFoundError,
    ParameterError,
    SnowgtError,
)
from .workspace import Workspace

_STATUS_BY_ERROR = (
    (NotFoundError, 404),
    (ConflictError, 409),
    (BoundsError, 400),
    (ParameterError, 400),
    (SnowgtError, 500),
)


class SelectionBody(BaseModel):
    frame: int
    note: str = ""


class RejectionBody(BaseModel):
    note: str = ""


def _png_bytes(image: np.ndarray) -> bytes:
    arr = np.clip(image, 0.0, 1.0)
    quantized = np.round(arr * 255.0).astype(np.uint8)
    mode = "L" if quantized.ndim == 2 else "RGB"
    buf = io.BytesIO()
    Image.fromarray(quantized, mode=mode).save(buf, format="PNG")
    return buf.getvalue()


def build_app(workspace: Workspace, ui_dir: Optional[Path] = None) -> FastAPI:
    """Assemble the FastAPI application for one workspace."""
    app = FastAPI(title="snowgt curation service")

    @app.exception_handler(SnowgtError)
    async def _snowgt_error(request: Request, exc: SnowgtError):
        status = next(s for cls, s in _STATUS_BY_ERROR if isinstance(exc, cls))
        return JSONResponse(
            status_code=status, content={"error": str(exc), "code": exc.code}
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": str(exc.errors()), "code": "invalid-request"},
        )

    @app.get("/api/videos")
    def list_videos():
        manifest = workspace.manifest
        out = []
        for vid in sorted(manifest.videos):
            record = manifest.videos[vid]
            selection = manifest.selections.get(vid)
            out.append(
                {
                    "id": vid,
                    "frames": record.frames,
                    "resolution": f"{record.cols}x{record.rows}",
                    "status": manifest.status(vid),
                    "selection": selection.to_dict() if selection else None,
                    "candidate_tags": workspace.candidate_tags(vid),
                }
            )
        return out

    @app.get("/api/videos/{video_id}/frames/{frame}")
    def get_frame(video_id: str, frame: int, kind: str = "snowy",
                  params: Optional[str] = None):
        if kind not in ("snowy", "candidate"):
            raise ParameterError(f"kind must be 'snowy' or 'candidate', got {kind!r}")
        path = workspace.frame_file(video_id, frame, kind, params)
        return Response(content=path.read_bytes(), media_type="image/png")

    @app.get("/api/videos/{video_id}/residual/{frame}")
    def get_residual(video_id: str, frame: int, tau: float = 0.05,
                     params: Optional[str] = None):
        if not 0.0 < tau < 1.0:
            raise ParameterError(f"tau must be in (0, 1), got {tau}")
        overlay = workspace.residual_overlay(video_id, frame, tau, params)
        return Response(content=_png_bytes(overlay), media_type="image/png")

    @app.post("/api/videos/{video_id}/selection")
    def post_selection(video_id: str, body: SelectionBody):
        revision = workspace.record_selection(video_id, body.frame, body.note)
        return {"ok": True, "manifest_revision": revision}

    @app.post("/api/videos/{video_id}/rejection")
    def post_rejection(video_id: str, body: RejectionBody):
        revision = workspace.record_rejection(video_id, body.note)
        return {"ok": True, "manifest_revision": revision}

    @app.post("/api/export")
    def post_export():
        result = workspace.export_pairs()
        return {"pairs": len(result.pairs), "report_path": result.report_path}

    if ui_dir is not None:
        ui_dir = Path(ui_dir)
        if not ui_dir.is_dir():
            raise ParameterError(f"UI directory not found: {ui_dir}")
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def parse_bind(bind: str) -> tuple[str, int]:
    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        raise ParameterError(f"bind address must look like 127.0.0.1:8641, got {bind!r}")
    return host, int(port)


def serve(workspace: Workspace, bind: str = "127.0.0.1:8641",
          ui_dir: Optional[Path] = None) -> None:
    """Run the curation service until interrupted."""
    host, port = parse_bind(bind)
    app = build_app(workspace, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
