"""Stateless HTTP facade over the library.

Endpoints wrap the library one-to-one and add no semantics; identical requests
get identical responses. An append-only session log records request/verdict
digests for replay. Configuration via environment: REDUKT_MAX_N (budget
ceiling), REDUKT_LOG_PATH, REDUKT_BIND, REDUKT_CORS_ORIGINS.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .cookbook import (
    from_gadget,
    gadget_spec_from_doc,
    reduction_from_doc,
    structure_to_doc,
    validate_wellformed,
)
from .errors import (
    LiftFailure,
    MalformedDocument,
    NotInFragment,
    NotWellFormed,
    ReduktError,
    SchemaMismatch,
)
from .logic import interpretation_from_doc
from .problems import BUILTIN_KINDS, problem_from_doc
from .structures import structure_from_doc, undirected_graph_schema, directed_graph_schema
from .validators import validate

DEFAULT_MAX_N = 6

CHARACTERIZATION_PAIRS = (
    {"source": "clique", "target": "clique", "note": "global gadgets, k < l"},
    {"source": "vertex-cover", "target": "feedback-vertex-set", "note": "edge gadgets, same k"},
    {"source": "hamcycle-d", "target": "hamcycle-u", "note": "node gadgets, node graphs <= 3"},
)


class SessionLog:
    """Append-only JSON-lines log of (timestamp, request digest, verdict digest)."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self._lock = threading.Lock()

    def append(self, request_doc: dict, response_doc: dict) -> None:
        if not self.path:
            return
        entry = {
            "ts": time.time(),
            "request": _digest(request_doc),
            "verdict": _digest(response_doc),
        }
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")


def _digest(doc: dict) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


def _schema_doc(schema) -> list:
    from .cookbook import schema_to_doc

    return schema_to_doc(schema)


def parse_candidate(doc: dict):
    keys = [k for k in ("cookbook", "gadget", "interpretation") if k in doc]
    if len(keys) != 1:
        raise MalformedDocument(
            "candidate must have exactly one of: cookbook, gadget, interpretation"
        )
    key = keys[0]
    if key == "cookbook":
        return reduction_from_doc(doc["cookbook"])
    if key == "gadget":
        return gadget_spec_from_doc(doc["gadget"])
    return interpretation_from_doc(doc["interpretation"])


def create_app(
    max_n: Optional[int] = None,
    log_path: Optional[str] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    max_n = max_n if max_n is not None else int(os.environ.get("REDUKT_MAX_N", DEFAULT_MAX_N))
    log_path = log_path if log_path is not None else os.environ.get("REDUKT_LOG_PATH", "")
    app = FastAPI(title="redukt", docs_url=None, redoc_url=None)
    log = SessionLog(log_path or None)

    origins = os.environ.get(
        "REDUKT_CORS_ORIGINS",
        "http://localhost:5173,http://127.0.0.1:5173,http://localhost:8000",
    ).split(",")
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware,
        allow_origins=[o.strip() for o in origins if o.strip()],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def error(status: int, message: str, extra: Optional[dict] = None) -> JSONResponse:
        body = {"error": message}
        if extra:
            body.update(extra)
        return JSONResponse(body, status_code=status)

    @app.post("/api/validate")
    async def api_validate(request: Request):
        try:
            body = await request.json()
        except Exception:
            return error(400, "request body is not valid JSON")
        if not isinstance(body, dict):
            return error(400, "request body must be an object")
        budget = body.get("budget")
        if budget is not None:
            if not isinstance(budget, int) or budget < 0:
                return error(400, "budget must be a non-negative integer")
            if budget > max_n:
                return error(413, f"budget {budget} above the server ceiling {max_n}")
        try:
            candidate = parse_candidate(body)
            p = problem_from_doc(body.get("source_problem", {}))
            p_star = problem_from_doc(body.get("target_problem", {}))
        except MalformedDocument as exc:
            return error(400, str(exc))
        try:
            verdict = validate(candidate, p, p_star, budget)
        except (SchemaMismatch, NotInFragment) as exc:
            return error(422, str(exc))
        except (NotWellFormed,) as exc:
            return error(422, str(exc), {"report": exc.report.to_doc()})
        except LiftFailure as exc:
            return error(422, str(exc))
        except ReduktError as exc:
            return error(422, str(exc))
        doc = verdict.to_doc()
        log.append(body, doc)
        return JSONResponse(doc)

    @app.post("/api/apply")
    async def api_apply(request: Request):
        try:
            body = await request.json()
        except Exception:
            return error(400, "request body is not valid JSON")
        if not isinstance(body, dict):
            return error(400, "request body must be an object")
        try:
            if "gadget" in body and "reduction" not in body:
                rho = from_gadget(gadget_spec_from_doc(body["gadget"]))
            else:
                rho = reduction_from_doc(body.get("reduction", {}))
            s = structure_from_doc(body.get("structure", {}))
        except LiftFailure as exc:
            return error(422, str(exc))
        except MalformedDocument as exc:
            return error(400, str(exc))
        report = validate_wellformed(rho)
        if not report.ok:
            return error(422, "reduction is not well-formed", {"report": report.to_doc()})
        try:
            from .cookbook import apply_reduction

            out = apply_reduction(rho, s)
        except ReduktError as exc:
            return error(422, str(exc))
        doc = structure_to_doc(out)
        log.append(body, doc)
        return JSONResponse(doc)

    @app.get("/api/problems")
    async def api_problems():
        kinds = []
        for kind in BUILTIN_KINDS:
            parametric = kind in ("clique", "independent-set", "vertex-cover", "feedback-vertex-set")
            schema = directed_graph_schema() if kind == "hamcycle-d" else undirected_graph_schema()
            kinds.append({
                "kind": kind,
                "parameter": "k" if parametric else None,
                "schema": _schema_doc(schema),
            })
        return JSONResponse({
            "builtin": kinds,
            "fo": {"format": "formula text, s-expression or infix"},
            "characterization_pairs": list(CHARACTERIZATION_PAIRS),
            "max_budget": max_n,
        })

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(bind: str = "127.0.0.1:8000", ui_dir: Optional[str] = None) -> None:
    import uvicorn

    host, _, port = bind.partition(":")
    app = create_app(ui_dir=ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="info")
