from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from webmodel.meta import serialize_model
from webmodel.mvp import EXAMPLE_MODEL_URI, build_example_model, build_mvp_context
from webmodel.store import Workspace


@pytest.fixture(scope="session")
def context():
    return build_mvp_context()


@pytest.fixture
def example_workspace(tmp_path, context) -> Workspace:
    """A fresh workspace directory containing only the example model."""
    root, layout = build_example_model(context.meta_registry)
    (tmp_path / EXAMPLE_MODEL_URI).write_text(serialize_model(root, layout), encoding="utf-8")
    return Workspace(tmp_path, context)


@pytest.fixture
def example_session(example_workspace):
    return example_workspace.load(EXAMPLE_MODEL_URI)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, visible in every run."""
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "CRITERION_LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
