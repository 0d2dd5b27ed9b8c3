"""HTTP service over one memory tree.

Reads are lock-free snapshots of an immutable tree value; mutations are
serialized behind a lock, appended to a JSON-lines journal, and swap the
current snapshot atomically, so a request sees either the pre- or the
post-mutation tree, never a torn state.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .api import build_query_response, scorer_spec_from_json
from .errors import (
    MemoryParseError,
    MutationError,
    QuerySyntaxError,
    SchemaViolationError,
    ScorerError,
    TransportError,
    UnknownNodeError,
)
from .memtree import MemoryTree, insert_version, load_memory_file, parse_edit, to_document


class MemoryService:
    """Holds the current tree, applies mutations, and keeps the journal."""

    def __init__(self, tree: MemoryTree, journal_path: Optional[Path] = None):
        self._tree = tree
        self._write_lock = threading.Lock()
        self.journal_path = Path(journal_path) if journal_path else None

    @classmethod
    def from_files(cls, memory_path, journal_path=None) -> "MemoryService":
        service = cls(load_memory_file(memory_path), journal_path)
        service.replay_journal()
        return service

    @property
    def tree(self) -> MemoryTree:
        return self._tree

    def replay_journal(self):
        """Re-apply a pre-existing journal (crash recovery) without re-journaling."""
        if self.journal_path is None or not self.journal_path.exists():
            return
        with open(self.journal_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                self._apply(entry["spec"], entry.get("summary", ""))

    def _apply(self, spec: dict, summary: str) -> str:
        edit, source = parse_edit(spec)
        if source is None:
            versions = self._tree.children(self._tree.root_id)
            if not versions:
                raise MutationError("memory has no version branches to mutate")
            source = versions[-1]
        self._tree = insert_version(self._tree, source, edit, summary)
        return self._tree.children(self._tree.root_id)[-1]

    def mutate(self, spec: dict, summary: str) -> dict:
        with self._write_lock:
            version_id = self._apply(spec, summary)
            if self.journal_path is not None:
                with open(self.journal_path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"spec": spec, "summary": summary}, ensure_ascii=False) + "\n")
        return {"versionId": version_id, "revision": self._tree.revision}

    def versions(self) -> list[dict]:
        tree = self._tree
        return [
            {"id": vid, "summary": tree.nodes[vid].attributes.get("summary")}
            for vid in tree.children(tree.root_id)
        ]


class QueryBody(BaseModel):
    query: str
    scorer: Optional[dict] = None
    topK: int = Field(default=5, ge=1)
    includeTrace: bool = False


class MutateBody(BaseModel):
    spec: dict
    summary: str = ""


def create_app(service: MemoryService) -> FastAPI:
    app = FastAPI(title="sxq memory service")
    # the workbench is served as static files from another origin
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/memory")
    def memory():
        return to_document(service.tree)

    @app.get("/schema")
    def schema():
        return service.tree.schema.to_document()

    @app.get("/versions")
    def versions():
        return service.versions()

    @app.post("/query")
    def query(body: QueryBody):
        try:
            spec = scorer_spec_from_json(body.scorer)
            response = build_query_response(service.tree, body.query, spec, body.topK, body.includeTrace)
        except QuerySyntaxError as exc:
            return JSONResponse(
                status_code=422,
                content={"error": "syntax", "message": str(exc), "offset": exc.offset,
                         "expected": list(exc.expected)},
            )
        except (TransportError, ScorerError) as exc:
            return JSONResponse(status_code=502, content={"error": "scorer", "message": str(exc)})
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"error": "request", "message": str(exc)})
        return response

    @app.post("/mutate")
    def mutate(body: MutateBody):
        try:
            return service.mutate(body.spec, body.summary)
        except SchemaViolationError as exc:
            return JSONResponse(
                status_code=400,
                content={"error": "schema", "message": str(exc),
                         "violations": [{"nodeId": v.node_id, "rule": v.rule} for v in exc.violations]},
            )
        except (MutationError, UnknownNodeError, MemoryParseError) as exc:
            return JSONResponse(status_code=400, content={"error": "mutation", "message": str(exc)})

    return app


def serve(memory_path, port: int, journal_path=None, host: str = "127.0.0.1"):
    """Run the service until interrupted (blocking)."""
    import uvicorn

    journal = journal_path or (str(memory_path) + ".journal")
    service = MemoryService.from_files(memory_path, journal)
    app = create_app(service)
    uvicorn.run(app, host=host, port=port, log_level="warning")
