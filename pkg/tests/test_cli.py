from __future__ import annotations

import json
import socket

from webmodel import names
from webmodel.api import BackgroundServer
from webmodel.cli import build_parser, health_probe, resolve_port, run
from webmodel.meta import deserialize_model, serialize_model
from webmodel.mvp import EXAMPLE_MODEL_URI, build_mvp_registry


def free_port() -> int:
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    return port


# -- argument handling ----------------------------------------------------------

def test_usage_error_exits_2(capsys):
    assert run([]) == 2
    assert run(["unknown-command"]) == 2
    assert run(["list"]) == 2  # --workspace is required
    capsys.readouterr()


def test_missing_workspace_exits_2(tmp_path, capsys):
    assert run(["list", "--workspace", str(tmp_path / "nope")]) == 2
    assert "does not exist" in capsys.readouterr().err


def test_resolve_port_precedence(monkeypatch):
    monkeypatch.delenv("WEBMODEL_PORT", raising=False)
    assert resolve_port(None) == 8081
    monkeypatch.setenv("WEBMODEL_PORT", "9000")
    assert resolve_port(None) == 9000
    assert resolve_port(1234) == 1234  # flag wins over env


def test_bad_port_env_is_usage_error(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("WEBMODEL_PORT", "not-a-number")
    tmp_path.mkdir(exist_ok=True)
    assert run(["serve", "--workspace", str(tmp_path)]) == 2
    capsys.readouterr()


# -- init-example and list ---------------------------------------------------------

def test_init_example_then_list(tmp_path, capsys):
    workspace = tmp_path / "ws"
    assert run(["init-example", "--workspace", str(workspace)]) == 0
    capsys.readouterr()
    assert run(["list", "--workspace", str(workspace)]) == 0
    assert capsys.readouterr().out == f"{EXAMPLE_MODEL_URI}\n"
    text = (workspace / EXAMPLE_MODEL_URI).read_text(encoding="utf-8")
    loaded = deserialize_model(text, build_mvp_registry())
    assert loaded.root.type_name == "Project"


def test_list_empty_workspace(tmp_path, capsys):
    assert run(["list", "--workspace", str(tmp_path)]) == 0
    assert capsys.readouterr().out == ""


# -- validate ---------------------------------------------------------------------------

def test_validate_example_exits_1_with_stable_output(tmp_path, capsys):
    run(["init-example", "--workspace", str(tmp_path)])
    capsys.readouterr()
    assert run(["validate", "--workspace", str(tmp_path), "--model", EXAMPLE_MODEL_URI]) == 1
    first = capsys.readouterr().out
    assert run(["validate", "--workspace", str(tmp_path), "--model", EXAMPLE_MODEL_URI]) == 1
    second = capsys.readouterr().out
    assert first == second
    lines = [json.loads(line) for line in first.splitlines()]
    assert any(d["validatorId"] == "weak-causality" and d["severity"] == "error" for d in lines)


def test_validate_repaired_copy_exits_0(tmp_path, capsys):
    run(["init-example", "--workspace", str(tmp_path)])
    registry = build_mvp_registry()
    path = tmp_path / EXAMPLE_MODEL_URI
    loaded = deserialize_model(path.read_text(encoding="utf-8"), registry)
    system = loaded.root.children[1].children[0]
    controller = next(c for c in system.children if c.attributes.get("name") == "Controller")
    controller.attributes[names.ATTR_STRONGLY_CAUSAL] = True
    path.write_text(serialize_model(loaded.root, loaded.layout), encoding="utf-8")
    capsys.readouterr()
    assert run(["validate", "--workspace", str(tmp_path), "--model", EXAMPLE_MODEL_URI]) == 0
    assert capsys.readouterr().out == ""


def test_validate_missing_model_exits_2(tmp_path, capsys):
    assert run(["validate", "--workspace", str(tmp_path), "--model", "nope.model.json"]) == 2
    capsys.readouterr()


# -- serve ------------------------------------------------------------------------------------

def test_serve_detects_running_server(example_workspace, capsys):
    port = free_port()
    with BackgroundServer(example_workspace, port):
        assert health_probe(port) is True
        code = run(["serve", "--workspace", str(example_workspace.root_dir), "--port", str(port)])
        assert code == 0
        assert "already running" in capsys.readouterr().out


def test_health_probe_down():
    assert health_probe(free_port()) is False


def test_parser_lists_all_subcommands():
    parser = build_parser()
    text = parser.format_help()
    for command in ("serve", "list", "validate", "init-example"):
        assert command in text
