"""Replay-fixture scoring service for tests and offline demos.

Serves recorded embedding vectors and NLI probabilities over the same
JSON-over-HTTP contract the real scorers expect, so the engine can be
exercised end to end without any model in the loop.  Unknown inputs get
a 404: a replay must never invent a score.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


def load_replay(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("kind") not in ("embedding", "nli"):
        raise ValueError(f"{path}: replay fixture needs kind 'embedding' or 'nli'")
    return doc


class ReplayScorerServer:
    """Threaded localhost HTTP server answering from replay fixtures."""

    def __init__(self, embeddings: dict | None = None, nli: dict | None = None):
        self.embeddings = (embeddings or {}).get("embeddings", {})
        self.nli_pairs = {
            (p["premise"], p["hypothesis"]): p for p in (nli or {}).get("pairs", [])
        }
        self._server: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    @classmethod
    def from_files(cls, embedding_path=None, nli_path=None) -> "ReplayScorerServer":
        return cls(
            embeddings=load_replay(embedding_path) if embedding_path else None,
            nli=load_replay(nli_path) if nli_path else None,
        )

    def handle(self, body: dict) -> tuple[int, dict]:
        if "input" in body:
            vectors = []
            for text in body["input"]:
                vec = self.embeddings.get(text)
                if vec is None:
                    return 404, {"error": f"no replay embedding for {text!r}"}
                vectors.append(vec)
            return 200, {"embeddings": vectors}
        if "premise" in body:
            pair = self.nli_pairs.get((body.get("premise"), body.get("hypothesis")))
            if pair is None:
                return 404, {"error": "no replay entry for this premise/hypothesis pair"}
            return 200, {
                "entailment": pair["entailment"],
                "neutral": pair.get("neutral", 0.0),
                "contradiction": pair.get("contradiction", 0.0),
            }
        return 400, {"error": "expected an embedding or NLI request body"}

    @property
    def url(self) -> str:
        if self._server is None:
            raise RuntimeError("server not started")
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> str:
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                try:
                    body = json.loads(self.rfile.read(length).decode("utf-8"))
                except (ValueError, UnicodeDecodeError):
                    status, payload = 400, {"error": "invalid JSON body"}
                else:
                    status, payload = outer.handle(body)
                data = json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self.url

    def stop(self):
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None

    def __enter__(self) -> "ReplayScorerServer":
        self.start()
        return self

    def __exit__(self, *exc):
        self.stop()
