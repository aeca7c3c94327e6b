"""HTTP façade for the QA service.

POST /ask, GET /snapshot/{version}, POST /feedback, GET /healthz. Bodies
are JSON; CORS is open so the bundled chat UI can be served from anywhere.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .service import QaService, QueueFull, UnknownRequestId


class AskBody(BaseModel):
    session_id: str = Field(min_length=1)
    text: str


class TimingBody(BaseModel):
    queue_ms: float
    parse_ms: float
    evaluate_ms: float
    total_ms: float


class AskReply(BaseModel):
    request_id: int
    answer_text: str
    program_text: str | None = None
    scene_version: str
    snapshot_link: str
    timing: TimingBody


class FeedbackBody(BaseModel):
    request_id: int
    reaction: str


def create_app(service: QaService, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="fridgeqa service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/ask", response_model=AskReply)
    def ask(body: AskBody) -> AskReply:
        try:
            response = service.ask(body.session_id, body.text)
        except QueueFull:
            raise HTTPException(status_code=429, detail="queue full, try again") from None
        return AskReply(
            request_id=response.request_id,
            answer_text=response.answer_text,
            program_text=response.program_text,
            scene_version=response.scene_version,
            snapshot_link=response.snapshot_link,
            timing=TimingBody(**vars(response.timing)),
        )

    @app.get("/snapshot/{version}")
    def snapshot(version: str) -> Response:
        svg = service.snapshot_svg(version)
        if svg is None:
            raise HTTPException(status_code=404, detail="unknown scene version")
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/feedback", status_code=204)
    def feedback(body: FeedbackBody) -> Response:
        try:
            service.record_feedback(body.request_id, body.reaction)
        except UnknownRequestId:
            raise HTTPException(status_code=404, detail="unknown request id") from None
        except ValueError as err:
            raise HTTPException(status_code=422, detail=str(err)) from None
        return Response(status_code=204)

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    if ui_dir:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
