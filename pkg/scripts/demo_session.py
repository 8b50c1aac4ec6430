#!/usr/bin/env python3
"""Drive a live model server through a full editing session over HTTP.

Starts a server on an ephemeral port against a temporary workspace, then:
lists models, opens a diagram, creates a node from the palette position,
renames it, draws an edge, runs validation, saves, and prints the stage
counters. Useful as a quick end-to-end smoke check:

    python scripts/demo_session.py
"""

from __future__ import annotations

import json
import socket
import tempfile
import urllib.request
from pathlib import Path

from webmodel.api import BackgroundServer
from webmodel.meta import serialize_model
from webmodel.mvp import EXAMPLE_MODEL_URI, build_example_model, build_mvp_context
from webmodel.store import Workspace


def call(method: str, url: str, payload: dict | None = None):
    data = None if payload is None else json.dumps(payload).encode("utf-8")
    request = urllib.request.Request(url, data=data, method=method)
    if data is not None:
        request.add_header("Content-Type", "application/json")
    with urllib.request.urlopen(request, timeout=5) as response:
        return json.loads(response.read().decode("utf-8"))


def main() -> None:
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()

    context = build_mvp_context()
    with tempfile.TemporaryDirectory() as tmp:
        root, layout = build_example_model(context.meta_registry)
        Path(tmp, EXAMPLE_MODEL_URI).write_text(
            serialize_model(root, layout), encoding="utf-8"
        )
        workspace = Workspace(tmp, context)
        with BackgroundServer(workspace, port) as server:
            base = f"{server.base_url}/api/v1"
            print("models:", call("GET", f"{base}/modeluris")["uris"])

            document = call("GET", f"{base}/models/{EXAMPLE_MODEL_URI}")
            system_id = document["root"]["children"][1]["children"][0]["id"]

            graph = call("GET", f"{base}/models/{EXAMPLE_MODEL_URI}/diagrams/{system_id}")
            print("diagram children:", len(graph["children"]))

            graph = call(
                "POST",
                f"{base}/models/{EXAMPLE_MODEL_URI}/diagrams/{system_id}/operations",
                {"kind": "createNode", "nodeType": "node:component", "position": {"x": 420, "y": 240}},
            )
            nodes = [c for c in graph["children"] if c["type"] == "node:component"]
            new_id = nodes[-1]["id"]
            print("created node:", new_id)

            call(
                "POST",
                f"{base}/models/{EXAMPLE_MODEL_URI}/commands",
                {"kind": "setAttribute", "elementId": new_id, "attributeName": "name", "value": "Pedal"},
            )
            graph = call(
                "POST",
                f"{base}/models/{EXAMPLE_MODEL_URI}/diagrams/{system_id}/operations",
                {"kind": "createEdge", "sourceId": new_id, "targetId": nodes[0]["id"]},
            )
            print("edges now:", sum(1 for c in graph["children"] if c["type"] == "edge:channel"))

            diagnostics = call("GET", f"{base}/models/{EXAMPLE_MODEL_URI}/validation")["diagnostics"]
            print("diagnostics:")
            for diagnostic in diagnostics:
                print("  ", diagnostic["severity"], diagnostic["message"])

            print("save:", call("POST", f"{base}/models/{EXAMPLE_MODEL_URI}/save"))
            snapshot = call("GET", f"{base}/introspection")
            print("open models:", snapshot["openModels"])


if __name__ == "__main__":
    main()
