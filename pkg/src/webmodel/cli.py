"""Command-line launcher and batch tools for the model server.

Exit codes: 0 success (or clean validation), 1 validation found errors,
2 usage or environment problems.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import urllib.error
import urllib.request
from importlib import resources
from pathlib import Path

from .api import DEFAULT_PORT, serve as run_server
from .errors import KernelError
from .mvp import EXAMPLE_MODEL_URI, build_mvp_context
from .store import Workspace
from .validation import validate_model

PORT_ENV_VAR = "WEBMODEL_PORT"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="webmodel", description="model server launcher")
    sub = parser.add_subparsers(dest="command", required=True)

    serve_cmd = sub.add_parser("serve", help="start the model server")
    serve_cmd.add_argument("--workspace", required=True, help="workspace directory")
    serve_cmd.add_argument("--port", type=int, default=None, help=f"TCP port (default {DEFAULT_PORT})")

    list_cmd = sub.add_parser("list", help="list model uris in the workspace")
    list_cmd.add_argument("--workspace", required=True)

    validate_cmd = sub.add_parser("validate", help="validate one model and print diagnostics")
    validate_cmd.add_argument("--workspace", required=True)
    validate_cmd.add_argument("--model", required=True, help="model uri")

    init_cmd = sub.add_parser("init-example", help="write the example model into the workspace")
    init_cmd.add_argument("--workspace", required=True)
    return parser


def resolve_port(flag_value: int | None) -> int:
    """Flag beats the WEBMODEL_PORT environment variable beats the default."""
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(PORT_ENV_VAR)
    if raw is None:
        return DEFAULT_PORT
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PORT_ENV_VAR} must be an integer, got {raw!r}") from None


class UsageError(Exception):
    pass


def packaged_example_text() -> str:
    """The example model shipped with the package, copied verbatim by init-example."""
    return resources.files("webmodel").joinpath("data", EXAMPLE_MODEL_URI).read_text("utf-8")


def health_probe(port: int, host: str = "127.0.0.1", timeout: float = 1.0) -> bool:
    """True when a model server already answers on the port."""
    url = f"http://{host}:{port}/api/v1/health"
    try:
        with urllib.request.urlopen(url, timeout=timeout) as response:
            payload = json.loads(response.read().decode("utf-8"))
        return payload.get("status") == "up"
    except (urllib.error.URLError, ValueError, OSError):
        return False


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _dispatch(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KernelError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2


def _dispatch(args: argparse.Namespace) -> int:
    workspace_dir = Path(args.workspace)

    if args.command == "init-example":
        workspace_dir.mkdir(parents=True, exist_ok=True)
        target = workspace_dir / EXAMPLE_MODEL_URI
        target.write_text(packaged_example_text(), encoding="utf-8")
        print(f"wrote {target}")
        return 0

    if not workspace_dir.is_dir():
        print(f"error: workspace directory {workspace_dir} does not exist", file=sys.stderr)
        return 2

    workspace = Workspace(workspace_dir, build_mvp_context())

    if args.command == "list":
        for uri in workspace.list_model_uris():
            print(uri)
        return 0

    if args.command == "validate":
        session = workspace.load(args.model)
        diagnostics = validate_model(session)
        for diagnostic in diagnostics:
            print(json.dumps(diagnostic.to_wire(), separators=(",", ":"), ensure_ascii=False))
        return 1 if any(d.severity == "error" for d in diagnostics) else 0

    port = resolve_port(args.port)
    if health_probe(port):
        print(f"a model server is already running on port {port}; nothing to do")
        return 0
    run_server(port, workspace)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
