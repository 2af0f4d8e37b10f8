"""Drive a live capture session end-to-end through the HTTP API.

Starts the service in-process on a free port, defines catalog rows over
HTTP, then runs create -> start -> stop -> save and watches the statistics
move. The same endpoints back the browser operator console.
"""

import socket
import threading
import time
from pathlib import Path

import httpx
import uvicorn

from signcol.service import ServiceConfig, create_app
from signcol.sources import MotionKind

with socket.socket() as probe:
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]

config = ServiceConfig(
    data_dir=Path("demo_output/service"),
    rate=60.0,
    motion=MotionKind.CIRCLE,
    seed=8,
    port=port,
)
server = uvicorn.Server(
    uvicorn.Config(create_app(config), host="127.0.0.1", port=port, log_level="warning")
)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)
print(f"service listening on http://127.0.0.1:{port}")

with httpx.Client(base_url=f"http://127.0.0.1:{port}", timeout=10.0) as api:
    language = api.post("/api/languages", json={"name": "English"}).json()
    item = api.post(
        "/api/items", json={"name": "Mom", "category": "cat4", "language_id": language["id"]}
    ).json()
    performer = api.post("/api/performers", json={"name": "Rita", "age": 30}).json()

    session = api.post(
        "/api/sessions", json={"item_id": item["id"], "performer_id": performer["id"]}
    ).json()
    sid = session["id"]
    print(f"session {sid}: {session['state']}")

    api.post(f"/api/sessions/{sid}/start")
    while api.get(f"/api/sessions/{sid}").json()["frames_written"] < 20:
        time.sleep(0.05)
    state = api.post(f"/api/sessions/{sid}/stop").json()
    print(f"stopped after {state['frames_written']} frames")

    saved = api.post(f"/api/sessions/{sid}/save").json()
    print(f"saved; recording id {saved['recording_id']}")

    recording = api.get("/api/recordings").json()[0]
    print(f"folder: {recording['folder_path']}")

    cat4 = next(r for r in api.get("/api/stats").json()["categories"] if r["category"] == "cat4")
    print(f"cat4 now has {cat4['recording_count']} recording(s)")

server.should_exit = True
thread.join(timeout=5)
print("service stopped")
