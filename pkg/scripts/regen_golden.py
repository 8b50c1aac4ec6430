#!/usr/bin/env python3
"""Regenerate the golden wire-conformance files in tests/golden/.

Run from the repository root after an intentional wire-format change:

    python scripts/regen_golden.py

Review the diff before committing; golden files pin the exact bytes every
endpoint must produce for the example workspace (ids normalized).
"""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT / "tests"))

from fastapi.testclient import TestClient

from goldentools import GOLDEN_DIR, collect_conformance
from webmodel.api import create_app
from webmodel.meta import serialize_model
from webmodel.mvp import EXAMPLE_MODEL_URI, build_example_model, build_mvp_context
from webmodel.store import Workspace


def main() -> None:
    context = build_mvp_context()
    root, layout = build_example_model(context.meta_registry)
    example_text = serialize_model(root, layout)

    packaged = REPO_ROOT / "src" / "webmodel" / "data" / EXAMPLE_MODEL_URI
    packaged.write_text(example_text, encoding="utf-8")
    print(f"wrote {packaged.relative_to(REPO_ROOT)} ({len(example_text)} bytes)")

    with tempfile.TemporaryDirectory() as tmp:
        workspace = Workspace(tmp, context)
        workspace.path_for(EXAMPLE_MODEL_URI).write_text(example_text, encoding="utf-8")
        with TestClient(create_app(workspace)) as client:
            collected = collect_conformance(client, EXAMPLE_MODEL_URI)

    GOLDEN_DIR.mkdir(exist_ok=True)
    for name, content in sorted(collected.items()):
        (GOLDEN_DIR / name).write_text(content, encoding="utf-8")
        print(f"wrote tests/golden/{name} ({len(content)} bytes)")


if __name__ == "__main__":
    main()
