"""Drive the HTTP service end to end: query, inspect, mutate, journal.

Starts the service in-process on an ephemeral port, exercises every
endpoint the workbench uses, then shuts down. The JSON bodies printed
here are exactly what `sxq serve` returns.

Run from anywhere:  python demos/07_http_service.py
"""

import json
import tempfile
import threading
import time
from pathlib import Path

import httpx
import uvicorn

from sxq.memtree import load_memory_file
from sxq.service import MemoryService, create_app

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

journal = Path(tempfile.mkdtemp()) / "demo.journal"
service = MemoryService(load_memory_file(FIXTURES / "acl_trip.json"), journal_path=journal)
config = uvicorn.Config(create_app(service), host="127.0.0.1", port=0, log_level="error")
server = uvicorn.Server(config)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)
base = f"http://127.0.0.1:{server.servers[0].sockets[0].getsockname()[1]}"
print("service up at", base)

print("\nGET /healthz ->", httpx.get(f"{base}/healthz").json())
print("GET /versions ->", httpx.get(f"{base}/versions").json())

query = {"query": '//Day[ avg(/POI[ node ~= "conference" ]) ]', "topK": 1, "includeTrace": True}
body = httpx.post(f"{base}/query", json=query).json()
print("\nPOST /query top match:", body["topId"], "with", body["contextTokenCount"], "context tokens")
print(body["topSubtree"]["text"])
print("trace steps:", [s["step"] for s in body["trace"]["steps"]])

mutation = {
    "spec": {"action": "insert", "parent": "d2",
             "subtree": {"type": "POI", "attributes": {"title": "coffee break", "time": "15:30"}}},
    "summary": "add coffee break on day 2",
}
print("\nPOST /mutate ->", httpx.post(f"{base}/mutate", json=mutation).json())
print("GET /versions ->", httpx.get(f"{base}/versions").json())

bad = httpx.post(f"{base}/query", json={"query": "//Day["})
print("\nPOST /query with a syntax error ->", bad.status_code, bad.json())

print("\njournal contents:")
print(journal.read_text().strip())

server.should_exit = True
thread.join(timeout=5)
print("\nservice stopped")
