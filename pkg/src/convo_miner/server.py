"""HTTP JSON API over one immutable corpus snapshot.

Every endpoint is a pure function of (snapshot, request body): identical
requests produce byte-identical responses, and responses embed the hash of
the criteria they were computed under so the client can detect staleness.
The snapshot can be swapped atomically for hot reload; in-flight requests
keep the snapshot they started with.
"""

from __future__ import annotations

from typing import Any, Optional

from fastapi import Body, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware

from . import jsonutil
from .corpus import apply_filter, background_distributions, serialize_corpus
from .model import Corpus, FilterCriteria
from .patterns import MiningParams, Pattern, mine_patterns, sort_patterns
from .summary import GroupingMode, UnknownGroupKeyError, summary_document
from .tree import build_tree, highlight_paths, prune_tree, serialize_tree

__all__ = ["create_app", "set_snapshot"]


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str):
        self.status = status
        self.code = code
        self.detail = detail
        super().__init__(detail)


def _json_response(payload: Any, status: int = 200) -> Response:
    return Response(
        content=jsonutil.dumps(payload),
        status_code=status,
        media_type="application/json",
    )


def _parse_criteria(body: Optional[dict]) -> FilterCriteria:
    raw = (body or {}).get("criteria")
    try:
        return FilterCriteria.from_dict(raw)
    except (ValueError, TypeError) as exc:
        raise ApiError(400, "invalid_criteria", str(exc)) from exc


def set_snapshot(app: FastAPI, corpus: Optional[Corpus]) -> None:
    """Atomically swap the corpus the app serves."""
    app.state.snapshot = corpus


def create_app(corpus: Optional[Corpus] = None, ui_origin: str = "*") -> FastAPI:
    app = FastAPI(title="convo-miner", docs_url=None, redoc_url=None)
    app.state.snapshot = corpus
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[ui_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> Response:
        return _json_response({"code": exc.code, "detail": exc.detail}, status=exc.status)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError) -> Response:
        return _json_response({"code": "invalid_request", "detail": str(exc)}, status=400)

    def snapshot() -> Corpus:
        snap = app.state.snapshot
        if snap is None:
            raise ApiError(503, "no_corpus", "no corpus loaded")
        return snap

    @app.get("/api/overview")
    def overview() -> Response:
        corpus = snapshot()
        distributions = background_distributions(corpus, FilterCriteria())
        payload = distributions.to_dict()
        payload["schema"] = serialize_corpus(corpus)["schema"]
        payload["conversations"] = len(corpus.conversations)
        payload["turns"] = corpus.turn_count
        payload["criteria_hash"] = jsonutil.criteria_hash({})
        return _json_response(payload)

    @app.post("/api/summary")
    def summary(body: Optional[dict] = Body(None)) -> Response:
        corpus = snapshot()
        body = body or {}
        criteria = _parse_criteria(body)
        try:
            mode = GroupingMode(body.get("mode", GroupingMode.STUDENT.value))
        except ValueError as exc:
            raise ApiError(400, "invalid_mode", str(exc)) from exc
        selection = apply_filter(corpus, criteria)
        try:
            payload = summary_document(corpus, selection, mode, body.get("group_by"))
        except UnknownGroupKeyError as exc:
            raise ApiError(400, "invalid_group_by", str(exc)) from exc
        payload["criteria_hash"] = jsonutil.criteria_hash(criteria.to_dict())
        return _json_response(payload)

    @app.post("/api/patterns")
    def patterns(body: Optional[dict] = Body(None)) -> Response:
        corpus = snapshot()
        body = body or {}
        criteria = _parse_criteria(body)
        try:
            params = MiningParams.from_dict(body.get("params"))
        except (ValueError, TypeError) as exc:
            raise ApiError(400, "invalid_params", str(exc)) from exc
        selection = apply_filter(corpus, criteria)
        if selection.conversations:
            catalog = mine_patterns(selection.conversations, params)
            ordered = catalog.patterns
            sort_spec = body.get("sort")
            if sort_spec:
                try:
                    ordered = sort_patterns(
                        catalog,
                        key=sort_spec.get("key", "support"),
                        direction=sort_spec.get("direction", "desc"),
                    )
                except (ValueError, AttributeError) as exc:
                    raise ApiError(400, "invalid_sort", str(exc)) from exc
            rows = [p.to_row() for p in ordered]
        else:
            rows = []
        payload = {
            "patterns": rows,
            "params": params.to_dict(),
            "criteria_hash": jsonutil.criteria_hash(criteria.to_dict()),
        }
        return _json_response(payload)

    @app.post("/api/tree")
    def tree(body: Optional[dict] = Body(None)) -> Response:
        corpus = snapshot()
        body = body or {}
        criteria = _parse_criteria(body)
        try:
            min_conv = int(body.get("prune", 1))
            gain_scale = float(body.get("gain_scale", 1.0))
            base_length = float(body.get("base_length", 1.0))
            if min_conv < 1 or gain_scale <= 0:
                raise ValueError("prune must be >= 1 and gain_scale positive")
        except (TypeError, ValueError) as exc:
            raise ApiError(400, "invalid_tree_params", str(exc)) from exc

        highlight_spec = body.get("highlight_pattern")
        query = None
        if highlight_spec is not None:
            try:
                query = Pattern.query(highlight_spec.get("kind"), highlight_spec.get("codes") or [])
            except (ValueError, AttributeError) as exc:
                raise ApiError(400, "invalid_pattern", str(exc)) from exc

        selection = apply_filter(corpus, criteria)
        if selection.conversations:
            built = prune_tree(build_tree(selection.conversations), min_conv)
            doc = serialize_tree(built, gain_scale=gain_scale, base_length=base_length)
            total = built.total_conversations
            highlight = highlight_paths(built, query).to_dict() if query else None
        else:
            doc = {"nodes": [], "edges": [], "elided": []}
            total = 0
            highlight = None
        payload = {
            "tree": doc,
            "total_conversations": total,
            "highlight": highlight,
            "criteria_hash": jsonutil.criteria_hash(criteria.to_dict()),
        }
        return _json_response(payload)

    @app.get("/api/conversation/{student}/{task}")
    def conversation(student: str, task: str) -> Response:
        corpus = snapshot()
        conv = corpus.conversation(student, task)
        if conv is None:
            raise ApiError(404, "unknown_conversation", f"no conversation for {student}/{task}")
        task_obj = corpus.tasks_by_id[conv.task]
        payload = {
            "student": conv.student,
            "task": conv.task,
            "task_description": task_obj.description,
            "task_type": task_obj.task_type,
            "score": conv.score,
            "turns": [
                {
                    "index": turn.index,
                    "prompt": turn.prompt_text,
                    "response": turn.response_text,
                    "codes": list(turn.codes),
                    "relevance": turn.relevance,
                    "relevance_is_fallback": turn.relevance_is_fallback,
                    "correctness": turn.correctness,
                    "response_length": turn.response_length,
                    "information_gain": turn.information_gain,
                }
                for turn in conv.turns
            ],
        }
        return _json_response(payload)

    return app
