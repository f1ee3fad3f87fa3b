"""HTTP API over a pipeline store.

Thin wrapper: every payload is the JSON form of the corresponding library
call on the same store. Writes (response submission, targeting dispatch)
are validated with the library's own preconditions before anything is
persisted.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware

from . import store as storage
from .annotate import document_to_dict
from .assess import (
    AssessError,
    ResponseSet,
    aggregate_readiness,
    response_documents,
    score_response,
    target_groups,
)
from .nvd import categorical_matrix
from .themes import ThemeError, combos_report, profile_clusters
from .schema import FeatureSchema
from .store import Store


@dataclass(frozen=True)
class ServiceConfig:
    token: str | None = None
    cors_origin: str = "*"

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(token=os.environ.get("INCAT_TOKEN") or None)


def create_app(store: Store, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    schema = FeatureSchema.default()
    app = FastAPI(title="incat", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[config.cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    async def require_token(request: Request) -> None:
        if config.token is None:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {config.token}":
            raise HTTPException(status_code=401, detail="missing or bad bearer token")

    auth = [Depends(require_token)]

    def categorical_rows():
        _, rows = categorical_matrix(storage.all_records(store, schema), schema)
        return rows

    @app.get("/api/themes", dependencies=auth)
    def get_themes():
        return storage.current_themes(store)

    @app.get("/api/clusters", dependencies=auth)
    def get_clusters():
        model = storage.latest_model(store)
        if model is None:
            raise HTTPException(status_code=404, detail="no cluster model in store")
        rows = categorical_rows()
        try:
            profile = [
                {"mode": schema.to_mapping(mode), "count": count}
                for mode, count in profile_clusters(model, rows, schema=schema)
            ]
        except ThemeError:
            profile = None
        return {"model": model.to_dict(), "profile": profile}

    @app.get("/api/elbow", dependencies=auth)
    def get_elbow():
        report = storage.latest_report(store, "elbow")
        if report is None:
            raise HTTPException(status_code=404, detail="no elbow report in store")
        return report

    @app.get("/api/combos", dependencies=auth)
    def get_combos():
        return combos_report(categorical_rows(), schema=schema)

    @app.get("/api/assessments/{assessment_id}", dependencies=auth)
    def get_assessment(assessment_id: str):
        assessment = storage.find_assessment(store, assessment_id)
        if assessment is None:
            raise HTTPException(status_code=404, detail=f"unknown assessment {assessment_id!r}")
        return assessment.to_dict()

    @app.post("/api/responses", dependencies=auth)
    def post_response(body: dict):
        for field in ("user_id", "group_id", "assessment_id"):
            if not isinstance(body.get(field), str) or not body[field]:
                raise HTTPException(
                    status_code=400,
                    detail={"field": field, "error": "required string field"},
                )
        if not isinstance(body.get("answers", {}), dict):
            raise HTTPException(
                status_code=400, detail={"field": "answers", "error": "must be an object"}
            )
        resp = ResponseSet.from_dict(body)
        assessment = storage.find_assessment(store, resp.assessment_id)
        if assessment is None:
            raise HTTPException(
                status_code=404, detail=f"unknown assessment {resp.assessment_id!r}"
            )
        try:
            scores = score_response(resp, assessment)
        except AssessError as exc:
            raise HTTPException(
                status_code=400, detail={"field": "answers", "error": str(exc)}
            ) from exc
        seq = storage.add_response(store, resp)
        docs = response_documents(resp, prefix=f"resp-{seq:06d}")
        if docs:
            store.append_many("corpora", [document_to_dict(d) for d in docs])
        return {
            "stored": True,
            "scores": {tag: {"correct": c, "attempted": a} for tag, (c, a) in sorted(scores.items())},
        }

    def readiness():
        responses = storage.all_responses(store)
        assessments = storage.all_assessments(store)
        return aggregate_readiness(responses, assessments)

    @app.get("/api/readiness", dependencies=auth)
    def get_readiness():
        return readiness().to_dict()

    @app.post("/api/targeting/{theme_id}", dependencies=auth)
    def post_targeting(theme_id: str, quota: int = 1):
        if quota < 0:
            raise HTTPException(status_code=400, detail={"field": "quota", "error": "must be >= 0"})
        report = readiness()
        try:
            groups = target_groups(report, theme_id, quota)
        except AssessError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        result = {"theme_id": theme_id, "quota": quota, "groups": groups}
        storage.add_report(store, "targeting", result)
        return result

    return app


def serve(store: Store, port: int = 8800, config: ServiceConfig | None = None):
    """Blocking HTTP server over the store."""
    import uvicorn

    app = create_app(store, config)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
