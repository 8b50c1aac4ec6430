"""HTTP surface of the model server.

All responses are rendered to exact bytes here (compact JSON, pinned key
order per payload) so the wire contract is byte-stable. Every kernel error
maps to exactly one (status, code) pair; nothing else escapes as a 500.
"""

from __future__ import annotations

import json
import queue
import socket
import threading
import time
from datetime import datetime, timezone

import uvicorn
from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from starlette.concurrency import run_in_threadpool
from starlette.websockets import WebSocket, WebSocketDisconnect, WebSocketState

from . import __version__
from .diagram import DiagramOperation, DiagramService
from .errors import (
    CompositionForbidden,
    DuplicateId,
    DuplicateType,
    InvalidScope,
    InvariantViolation,
    IoError,
    KernelError,
    NoHandler,
    NotFound,
    NothingToRedo,
    NothingToUndo,
    ParseError,
    PortInUse,
    RegistryInconsistent,
    RegistrySealed,
    StaleScope,
    TypeMismatch,
    UnknownElement,
    UnknownType,
    WorkspaceMissing,
)
from .services import ToolContext, verify_registries
from .store import Command, Workspace
from .validation import validate_model

DEFAULT_PORT = 8081
FRONTEND_ORIGIN = "http://localhost:3000"
SUBSCRIBER_QUEUE_SIZE = 64

# one (status, code) per kernel error; the code on the wire is the class name
ERROR_STATUS: dict[type[KernelError], int] = {
    NotFound: 404,
    UnknownElement: 404,
    ParseError: 400,
    TypeMismatch: 400,
    CompositionForbidden: 400,
    InvalidScope: 400,
    InvariantViolation: 400,
    UnknownType: 400,
    DuplicateId: 400,
    DuplicateType: 400,
    NothingToUndo: 409,
    NothingToRedo: 409,
    StaleScope: 409,
    IoError: 500,
    WorkspaceMissing: 500,
    NoHandler: 500,
    RegistrySealed: 500,
    PortInUse: 500,
    RegistryInconsistent: 500,
}


def _dumps(payload) -> str:
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def _json(payload, status_code: int = 200) -> Response:
    return Response(content=_dumps(payload), status_code=status_code, media_type="application/json")


def _parse_json_body(body: bytes):
    try:
        return json.loads(body.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ParseError(f"request body is not valid JSON: {exc}") from None


class _QueueSink:
    """Bounded patch buffer for one websocket; overflow marks the consumer dead."""

    def __init__(self, capacity: int = SUBSCRIBER_QUEUE_SIZE):
        self.queue: queue.Queue = queue.Queue(maxsize=capacity)
        self.closed = False

    def __call__(self, patch) -> None:
        try:
            self.queue.put_nowait(patch)
        except queue.Full:
            self.closed = True

    def get(self, timeout: float = 0.25):
        try:
            return self.queue.get(timeout=timeout)
        except queue.Empty:
            return None


def _typeids_payload(context: ToolContext) -> dict:
    metaclasses = []
    for name in context.meta_registry.names():
        cls = context.meta_registry.get(name)
        attributes = []
        for spec in cls.attributes:
            entry: dict = {"name": spec.name}
            if spec.validator_id is not None:
                entry["validatorId"] = spec.validator_id
            entry["valueType"] = spec.value_type
            attributes.append(entry)
        entry = {"attributes": attributes}
        entry["containments"] = [
            {"many": ref.many, "type": ref.target_type} for ref in cls.containments
        ]
        entry["crossReferences"] = [
            {"many": ref.many, "name": ref.name, "type": ref.target_type}
            for ref in cls.cross_references
        ]
        handler = context.handlers.get(name)
        if handler is not None:
            handler_wire: dict = {}
            if handler.description_attribute is not None:
                handler_wire["descriptionAttribute"] = handler.description_attribute
            handler_wire["iconId"] = handler.icon_id
            handler_wire["labelAttribute"] = handler.label_attribute
            entry["handler"] = handler_wire
        entry["name"] = name
        metaclasses.append(entry)
    return {
        "metaclasses": metaclasses,
        "typeTags": dict(sorted(context.diagram_config.type_tags.items())),
        "compositors": [list(pair) for pair in context.composition.pairs()],
    }


def create_app(workspace: Workspace, *, started_at: datetime | None = None) -> FastAPI:
    context = workspace.context
    diagrams = DiagramService(workspace)
    started = (started_at or datetime.now(timezone.utc)).isoformat()

    app = FastAPI(title="model server", version=__version__, docs_url=None, redoc_url=None)
    app.state.workspace = workspace
    app.state.diagrams = diagrams
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[FRONTEND_ORIGIN],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(KernelError)
    async def kernel_error_handler(request: Request, exc: KernelError) -> Response:
        status = ERROR_STATUS.get(type(exc), 500)
        return _json({"code": exc.code, "message": exc.message}, status_code=status)

    @app.get("/api/v1/modeluris")
    async def modeluris() -> Response:
        return _json({"uris": workspace.list_model_uris()})

    @app.get("/api/v1/models/{uri}")
    async def model_document(uri: str) -> Response:
        session = workspace.load(uri)
        return Response(content=session.serialized(), media_type="application/json")

    @app.post("/api/v1/models/{uri}/commands")
    async def post_command(uri: str, request: Request) -> Response:
        session = workspace.load(uri)
        command = Command.from_wire(_parse_json_body(await request.body()))
        patch = session.execute(command)
        return _json({"revision": patch.revision})

    @app.post("/api/v1/models/{uri}/undo")
    async def undo(uri: str) -> Response:
        return _json({"revision": workspace.load(uri).undo().revision})

    @app.post("/api/v1/models/{uri}/redo")
    async def redo(uri: str) -> Response:
        return _json({"revision": workspace.load(uri).redo().revision})

    @app.post("/api/v1/models/{uri}/save")
    async def save(uri: str) -> Response:
        workspace.load(uri).save()
        return _json({"saved": True})

    @app.get("/api/v1/models/{uri}/validation")
    async def validation(uri: str) -> Response:
        session = workspace.load(uri)
        return _json({"diagnostics": [d.to_wire() for d in validate_model(session)]})

    @app.get("/api/v1/models/{uri}/diagrams/{scope_id}")
    async def diagram(uri: str, scope_id: str) -> Response:
        state = diagrams.open(uri, scope_id)
        return _json(diagrams.graph(state).to_wire())

    @app.post("/api/v1/models/{uri}/diagrams/{scope_id}/operations")
    async def diagram_operation(uri: str, scope_id: str, request: Request) -> Response:
        state = diagrams.open(uri, scope_id)
        operation = DiagramOperation.from_wire(_parse_json_body(await request.body()))
        return _json(diagrams.apply(state, operation).to_wire())

    @app.get("/api/v1/typeids")
    async def typeids() -> Response:
        return _json(_typeids_payload(context))

    @app.get("/api/v1/introspection")
    async def introspection() -> Response:
        from .services import introspect

        snapshot = introspect(workspace, started_at=started, version=__version__)
        return _json(snapshot.to_wire())

    @app.get("/api/v1/health")
    async def health() -> Response:
        return _json({"status": "up"})

    @app.websocket("/api/v1/subscribe/{uri}")
    async def subscribe(websocket: WebSocket, uri: str) -> None:
        try:
            session = workspace.load(uri)
        except KernelError:
            await websocket.close(code=4404)
            return
        sink = _QueueSink()
        subscription = session.subscribe(sink)
        await websocket.accept()
        try:
            while True:
                if sink.closed:
                    break
                patch = await run_in_threadpool(sink.get)
                if patch is None:
                    if websocket.client_state != WebSocketState.CONNECTED:
                        break
                    continue
                await websocket.send_text(_dumps(patch.to_wire()))
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            subscription.cancel()
            if websocket.client_state == WebSocketState.CONNECTED:
                try:
                    await websocket.close()
                except RuntimeError:
                    pass

    return app


def verify_or_raise(context: ToolContext) -> None:
    """Fail fast when the registries disagree; the server must not start."""
    reports = verify_registries(
        context.meta_registry,
        context.composition,
        context.handlers,
        context.validation,
        context.diagram_config,
    )
    if reports:
        summary = "; ".join(f"[{r.kind}] {r.message}" for r in reports)
        raise RegistryInconsistent(f"registry sanity checks failed: {summary}")


def _bind(host: str, port: int) -> socket.socket:
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        raise PortInUse(f"cannot bind {host}:{port}: {exc}") from None
    return sock


def serve(port: int, workspace: Workspace, host: str = "127.0.0.1") -> None:
    """Run the model server until interrupted; refuses to start on registry faults."""
    verify_or_raise(workspace.context)
    sock = _bind(host, port)
    app = create_app(workspace)
    config = uvicorn.Config(app, host=host, port=port, log_level="warning")
    server = uvicorn.Server(config)
    try:
        server.run(sockets=[sock])
    finally:
        sock.close()


class BackgroundServer:
    """The same server on a daemon thread, for tests and scripted sessions."""

    def __init__(self, workspace: Workspace, port: int, host: str = "127.0.0.1"):
        verify_or_raise(workspace.context)
        self.host = host
        self.port = port
        self._sock = _bind(host, port)
        config = uvicorn.Config(create_app(workspace), host=host, port=port, log_level="warning")
        self._server = uvicorn.Server(config)
        self._thread = threading.Thread(
            target=self._server.run, kwargs={"sockets": [self._sock]}, daemon=True
        )

    @property
    def base_url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def start(self) -> "BackgroundServer":
        self._thread.start()
        deadline = time.monotonic() + 10.0
        while not self._server.started:
            if not self._thread.is_alive():
                raise RuntimeError("server thread exited during startup")
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start within 10s")
            time.sleep(0.02)
        return self

    def stop(self) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10.0)
        self._sock.close()

    def __enter__(self) -> "BackgroundServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()
