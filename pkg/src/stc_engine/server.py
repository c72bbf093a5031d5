"""HTTP serving of the chat pipeline.

The loaded bundle is immutable and shared by all handlers; per-request
state is just the RNG for the final pick, so concurrent requests are safe.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import pipeline
from .bundle import IndexBundle
from .errors import EmptyQuery
from .pipeline import ChatResponse, PipelineConfig


class ChatRequest(BaseModel):
    query: str
    seed: int | None = None
    debug: bool = False


def _debug_payload(resp: ChatResponse) -> dict:
    return {
        "retrieved": [
            {"ordinal": sp.corpus_ordinal, "score": sp.score}
            for sp in resp.retrieved
        ],
        "matched": [
            {"ordinal": sp.corpus_ordinal, "score": sp.score}
            for sp in resp.matched
        ],
        "pool": [
            {
                "post_ordinal": c.post_ordinal,
                "comment_index": c.comment_index,
                "text": c.text,
                "popularity": c.popularity,
            }
            for c in resp.pool
        ],
        "chosen": {
            "post_ordinal": resp.chosen.post_ordinal,
            "comment_index": resp.chosen.comment_index,
            "text": resp.chosen.text,
            "popularity": resp.chosen.popularity,
        },
    }


def create_app(bundle: IndexBundle, defaults: PipelineConfig | None = None) -> FastAPI:
    cfg = defaults if defaults is not None else bundle.manifest.pipeline_defaults
    app = FastAPI(title="stc-engine", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "malformed_request", "detail": "invalid request body"},
        )

    @app.exception_handler(Exception)
    async def _internal_handler(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"error": "internal"})

    @app.get("/v1/health")
    def health():
        return {
            "status": "ok",
            "n_posts": bundle.manifest.n_posts,
            "pv_dim": bundle.manifest.pv_dim,
        }

    @app.get("/v1/manifest")
    def manifest():
        return bundle.manifest.to_dict()

    @app.post("/v1/chat")
    def chat(req: ChatRequest):
        try:
            resp = pipeline.respond(req.query, bundle, cfg, seed=req.seed)
        except EmptyQuery:
            return JSONResponse(
                status_code=422,
                content={"error": "empty_query", "detail": "query has no tokens"},
            )
        payload = {"text": resp.text, "low_confidence": resp.low_confidence}
        if req.debug:
            payload["debug"] = _debug_payload(resp)
        return payload

    return app


def serve(bundle: IndexBundle, host: str, port: int,
          defaults: PipelineConfig | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(bundle, defaults), host=host, port=port, log_level="info")
