"""HTTP + streaming facade driving live capture sessions.

Endpoints mirror the catalog and the session state machine one-to-one; the
frame pump (source -> recorder -> preview fanout) runs in its own thread per
recording session, decoupled from request handling by bounded per-subscriber
queues that drop stale preview frames under backpressure.
"""

from __future__ import annotations

import asyncio
import base64
import queue
import random
import socket
import threading
import time
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np
from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.concurrency import run_in_threadpool
from starlette.staticfiles import StaticFiles

from . import catalog as cat
from .frames import DEPTH_MAX_MM, FrameBundle
from .mapping import DEFAULT_CALIBRATION, DeviceCalibration
from .recording import SessionStateError, create_session
from .sources import (
    DEFAULT_FRAME_RATE,
    FrameSource,
    GestureSpec,
    MotionKind,
    SyntheticGestureSource,
    open_replay,
)

DEFAULT_PORT = 8731

PREVIEW_COLOR_SIZE = (480, 270)
PREVIEW_DEPTH_SIZE = (256, 212)
PREVIEW_QUEUE_DEPTH = 4

SESSION_ACTIONS = ("start", "stop", "save", "discard")


class StartupError(RuntimeError):
    """Service cannot start (e.g. the port is already in use)."""


class ApiError(Exception):
    def __init__(self, status: int, message: str, **extra):
        super().__init__(message)
        self.status = status
        self.payload = {"error": message, **extra}


@dataclass
class ServiceConfig:
    data_dir: Path = Path("signcol_data")
    db_path: Path | None = None
    output_root: Path | None = None
    source: str = "synthetic"  # "synthetic" or "replay:<folder>"
    rate: float = DEFAULT_FRAME_RATE
    port: int = DEFAULT_PORT
    seed: int = 0
    motion: MotionKind = MotionKind.CIRCLE
    body_count: int = 1
    duration_s: float = 4.0
    calibration: DeviceCalibration = field(default=DEFAULT_CALIBRATION)
    frontend_dir: Path | None = None

    def resolved_db_path(self) -> Path:
        return self.db_path if self.db_path is not None else self.data_dir / cat.DEFAULT_DB_FILENAME

    def resolved_output_root(self) -> Path:
        return self.output_root if self.output_root is not None else self.data_dir / "recordings"

    def build_source(self) -> FrameSource:
        if self.source == "synthetic":
            spec = GestureSpec(
                self.motion, self.duration_s, body_count=self.body_count, seed=self.seed
            )
            return SyntheticGestureSource(spec, rate=self.rate, calibration=self.calibration)
        if self.source.startswith("replay:"):
            return open_replay(self.source.split(":", 1)[1])
        raise ValueError(f"unknown source {self.source!r}; use 'synthetic' or 'replay:<folder>'")


def build_preview_message(bundle: FrameBundle) -> dict:
    """Downscale one bundle into the JSON preview message (base64 PNG thumbnails)."""
    color = cv2.resize(bundle.color.pixels, PREVIEW_COLOR_SIZE, interpolation=cv2.INTER_AREA)
    normalized = np.clip(
        bundle.depth.pixels.astype(np.float64) * (255.0 / DEPTH_MAX_MM), 0, 255
    ).astype(np.uint8)
    depth = cv2.resize(normalized, PREVIEW_DEPTH_SIZE, interpolation=cv2.INTER_AREA)

    ok_c, color_png = cv2.imencode(".png", color[:, :, ::-1])
    ok_d, depth_png = cv2.imencode(".png", depth)
    if not (ok_c and ok_d):
        raise RuntimeError("preview thumbnail encoding failed")

    return {
        "frame_index": bundle.frame_index,
        "timestamp_ms": bundle.timestamp_ms,
        "color_png_b64": base64.b64encode(color_png.tobytes()).decode(),
        "depth_png_b64": base64.b64encode(depth_png.tobytes()).decode(),
        "skeletons": [
            {
                "body_index": s.body_index,
                "joints": [
                    {
                        "name": j.joint_type.name,
                        "x": j.depth[0],
                        "y": j.depth[1],
                        "tracking_state": j.tracking_state.name,
                    }
                    for j in s.joints
                ],
            }
            for s in bundle.skeletons
        ],
    }


class _ManagedSession:
    def __init__(self, session, item, performer, language):
        self.id = uuid.uuid4().hex[:12]
        self.session = session
        self.item = item
        self.performer = performer
        self.language = language
        self.created = time.monotonic()
        self.stop_event = threading.Event()
        self.thread: threading.Thread | None = None
        self.recording_id: int | None = None

    def snapshot(self) -> dict:
        return {
            "id": self.id,
            "state": self.session.state.value,
            "frames_written": self.session.frames_written,
            "item": self.item.name,
            "performer": self.performer.name,
            "language": self.language.name,
            "elapsed_ms": int((time.monotonic() - self.created) * 1000),
            "recording_id": self.recording_id,
        }


class SessionManager:
    """Owns capture sessions: one active at a time, actions serialized."""

    ACTIVE_STATES = ("initialized", "recording", "stopped")

    def __init__(self, config: ServiceConfig, catalog: cat.Catalog):
        self._config = config
        self._catalog = catalog
        self._lock = threading.RLock()
        self._sessions: dict[str, _ManagedSession] = {}
        self._subscribers: list[queue.Queue] = []
        self._sub_lock = threading.Lock()
        # One seeded stream of folder suffixes: capture n of a fresh service
        # run draws the n-th suffix, so seeded runs are reproducible and match
        # the CLI's scripted captures.
        self._suffix_rng = random.Random(config.seed)

    # -- preview fanout ---------------------------------------------------

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue(maxsize=PREVIEW_QUEUE_DEPTH)
        with self._sub_lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue):
        with self._sub_lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def _publish(self, bundle: FrameBundle):
        with self._sub_lock:
            subscribers = list(self._subscribers)
        if not subscribers:
            return
        message = build_preview_message(bundle)
        for q in subscribers:
            try:
                q.put_nowait(message)
            except queue.Full:
                # Drop the stalest frame to keep latency bounded.
                try:
                    q.get_nowait()
                except queue.Empty:
                    pass
                try:
                    q.put_nowait(message)
                except queue.Full:
                    pass

    # -- lifecycle ----------------------------------------------------------

    def create(self, item_id: int, performer_id: int) -> dict:
        with self._lock:
            item = self._catalog.get_item(item_id)
            if item is None:
                raise ApiError(404, f"item id {item_id} does not exist")
            performer = self._catalog.get_performer(performer_id)
            if performer is None:
                raise ApiError(404, f"performer id {performer_id} does not exist")
            language = self._catalog.get_language(item.language_id)
            active = [
                m for m in self._sessions.values() if m.session.state.value in self.ACTIVE_STATES
            ]
            if active:
                raise ApiError(
                    409,
                    "another session is active",
                    state=active[0].session.state.value,
                    active_session_id=active[0].id,
                )
            session = create_session(
                language.name,
                item.category,
                item.name,
                performer.name,
                self._config.resolved_output_root(),
                self._config.calibration,
                rng=self._suffix_rng,
            )
            managed = _ManagedSession(session, item, performer, language)
            self._sessions[managed.id] = managed
            return managed.snapshot()

    def _lookup(self, session_id: str) -> _ManagedSession:
        managed = self._sessions.get(session_id)
        if managed is None:
            raise ApiError(404, f"no session {session_id}")
        if managed.session.state.value == "discarded":
            raise ApiError(410, f"session {session_id} was discarded", state="discarded")
        return managed

    def get(self, session_id: str) -> dict:
        with self._lock:
            return self._lookup(session_id).snapshot()

    def list(self) -> list[dict]:
        with self._lock:
            return [m.snapshot() for m in self._sessions.values()]

    def action(self, session_id: str, action: str) -> dict:
        if action not in SESSION_ACTIONS:
            raise ApiError(404, f"unknown action {action!r}")
        with self._lock:
            managed = self._lookup(session_id)
            try:
                getattr(self, f"_{action}")(managed)
            except SessionStateError as exc:
                raise ApiError(409, str(exc), state=managed.session.state.value) from exc
            return managed.snapshot()

    def _start(self, managed: _ManagedSession):
        managed.session.start()
        source = self._config.build_source()
        managed.stop_event.clear()
        managed.thread = threading.Thread(
            target=self._pump, args=(managed, source), name=f"pump-{managed.id}", daemon=True
        )
        managed.thread.start()

    def _stop(self, managed: _ManagedSession):
        managed.stop_event.set()
        if managed.thread is not None:
            managed.thread.join()
            managed.thread = None
        managed.session.stop()

    def _save(self, managed: _ManagedSession):
        result = managed.session.save()
        entry = self._catalog.register_recording(
            str(result.folder), managed.item.id, managed.performer.id, result.frame_count
        )
        managed.recording_id = entry.id

    def _discard(self, managed: _ManagedSession):
        managed.session.discard()

    def _pump(self, managed: _ManagedSession, source: FrameSource):
        """Append frames at the source's nominal rate until stopped or exhausted."""
        period = 1.0 / source.nominal_rate
        started = time.monotonic()
        produced = 0
        while not managed.stop_event.is_set():
            bundle = source.next()
            if bundle is None:
                break
            try:
                managed.session.append_frame(bundle)
            except SessionStateError:
                break
            self._publish(bundle)
            produced += 1
            delay = started + produced * period - time.monotonic()
            if delay > 0:
                managed.stop_event.wait(delay)

    def shutdown(self):
        with self._lock:
            for managed in self._sessions.values():
                managed.stop_event.set()
                if managed.thread is not None:
                    managed.thread.join()
                    managed.thread = None


# -- request bodies ---------------------------------------------------------------


class LanguageIn(BaseModel):
    name: str


class ItemIn(BaseModel):
    name: str
    category: str | int
    language_id: int


class PerformerIn(BaseModel):
    name: str
    age: int
    phone: str = ""


class SessionIn(BaseModel):
    item_id: int
    performer_id: int


# -- application -----------------------------------------------------------------------


def _language_json(row: cat.Language) -> dict:
    return {"id": row.id, "name": row.name}


def _item_json(row: cat.SignItem, recording_count: int | None = None) -> dict:
    body = {
        "id": row.id,
        "name": row.name,
        "language_id": row.language_id,
        "category": row.category.label,
    }
    if recording_count is not None:
        body["recording_count"] = recording_count
    return body


def _performer_json(row: cat.Performer) -> dict:
    return {"id": row.id, "name": row.name, "age": row.age, "phone": row.phone}


def _recording_json(row: cat.RecordingEntry) -> dict:
    return {
        "id": row.id,
        "folder_path": row.folder_path,
        "performer_id": row.performer_id,
        "item_id": row.item_id,
        "frame_count": row.frame_count,
    }


def create_app(config: ServiceConfig) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        config.data_dir.mkdir(parents=True, exist_ok=True)
        app.state.catalog = cat.Catalog(config.resolved_db_path())
        app.state.catalog.set_option("output_root", str(config.resolved_output_root()))
        app.state.catalog.set_option("frame_rate", str(config.rate))
        app.state.sessions = SessionManager(config, app.state.catalog)
        yield
        app.state.sessions.shutdown()
        app.state.catalog.close()

    app = FastAPI(title="signcol", lifespan=lifespan)

    @app.exception_handler(ApiError)
    async def api_error_handler(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.payload)

    @app.exception_handler(cat.CatalogError)
    async def catalog_error_handler(_req: Request, exc: cat.CatalogError):
        status = 500
        if isinstance(exc, cat.DuplicateError):
            status = 409
        elif isinstance(exc, cat.MissingReferenceError):
            status = 404
        elif isinstance(exc, (cat.InvalidValueError,)):
            status = 422
        elif isinstance(exc, cat.DeletionRestrictedError):
            status = 409
        return JSONResponse(status_code=status, content={"error": str(exc)})

    def catalog_of(request: Request) -> cat.Catalog:
        return request.app.state.catalog

    def sessions_of(request: Request) -> SessionManager:
        return request.app.state.sessions

    # -- catalog -----------------------------------------------------------

    @app.get("/api/languages")
    def list_languages(request: Request):
        return [_language_json(row) for row in catalog_of(request).languages()]

    @app.post("/api/languages", status_code=201)
    def define_language(request: Request, body: LanguageIn):
        return _language_json(catalog_of(request).define_language(body.name))

    @app.get("/api/items")
    def list_items(request: Request, category: str | None = None, search: str = ""):
        store = catalog_of(request)
        categories = (
            [cat.SignCategory.parse(category)] if category is not None else list(cat.SignCategory)
        )
        rows: list[dict] = []
        for one in categories:
            rows.extend(_item_json(item, count) for item, count in store.list_items(one, search))
        rows.sort(key=lambda r: r["name"])
        return rows

    @app.post("/api/items", status_code=201)
    def define_item(request: Request, body: ItemIn):
        item = catalog_of(request).define_item(
            body.name, cat.SignCategory.parse(body.category), body.language_id
        )
        return _item_json(item)

    @app.get("/api/performers")
    def list_performers(request: Request):
        return [_performer_json(row) for row in catalog_of(request).performers()]

    @app.post("/api/performers", status_code=201)
    def define_performer(request: Request, body: PerformerIn):
        return _performer_json(catalog_of(request).define_performer(body.name, body.age, body.phone))

    @app.get("/api/recordings")
    def list_recordings(request: Request):
        return [_recording_json(row) for row in catalog_of(request).recordings()]

    @app.get("/api/stats")
    def stats(request: Request):
        return {"categories": catalog_of(request).category_stats().as_rows()}

    # -- sessions -------------------------------------------------------------

    @app.get("/api/sessions")
    def list_sessions(request: Request):
        return sessions_of(request).list()

    @app.post("/api/sessions", status_code=201)
    def create_capture_session(request: Request, body: SessionIn):
        return sessions_of(request).create(body.item_id, body.performer_id)

    @app.get("/api/sessions/{session_id}")
    def get_session(request: Request, session_id: str):
        return sessions_of(request).get(session_id)

    @app.post("/api/sessions/{session_id}/{action}")
    def session_action(request: Request, session_id: str, action: str):
        return sessions_of(request).action(session_id, action)

    # -- preview stream ----------------------------------------------------------

    @app.websocket("/api/preview")
    async def preview(websocket: WebSocket):
        await websocket.accept()
        manager: SessionManager = websocket.app.state.sessions
        q = manager.subscribe()
        disconnected = asyncio.Event()

        async def watch_disconnect():
            try:
                while True:
                    message = await websocket.receive()
                    if message["type"] == "websocket.disconnect":
                        break
            except Exception:
                pass
            disconnected.set()

        watcher = asyncio.create_task(watch_disconnect())
        try:
            while not disconnected.is_set():
                try:
                    message = await run_in_threadpool(q.get, True, 0.25)
                except queue.Empty:
                    continue
                await websocket.send_json(message)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            watcher.cancel()
            manager.unsubscribe(q)

    if config.frontend_dir is not None and Path(config.frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(config.frontend_dir), html=True), name="ui")

    return app


def serve(config: ServiceConfig, host: str = "127.0.0.1"):
    """Run the service until interrupted. Raises StartupError if the port is taken."""
    import uvicorn

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, config.port))
    except OSError as exc:
        raise StartupError(f"port {config.port} is not available: {exc}") from exc
    finally:
        probe.close()

    uvicorn.run(create_app(config), host=host, port=config.port, log_level="warning")
