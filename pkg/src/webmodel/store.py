"""Workspace management and the command-based model editing engine.

Models are loaded from a directory of ``.model.json`` files into cached
sessions. All edits go through serializable commands; each applied command
is recorded as a list of primitive mutations so undo and redo replay the
exact same structure (including element ids, which keeps serialized bytes
identical across an undo/redo round trip).

Concurrency: one lock per session serializes all mutations; patch delivery
to subscribers happens outside that lock but preserves revision order.
"""

from __future__ import annotations

import math
import os
import tempfile
import threading
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Union

from .errors import (
    CompositionForbidden,
    InvariantViolation,
    IoError,
    NotFound,
    NothingToRedo,
    NothingToUndo,
    ParseError,
    TypeMismatch,
    UnknownElement,
    WorkspaceMissing,
)
from .meta import (
    AttributeValue,
    Bounds,
    LayoutTable,
    ModelObject,
    coerce_attribute_value,
    collect_ids,
    find_by_id,
    deserialize_model,
    find_parent,
    serialize_model,
)
from .names import (
    ALLOCATION_ENTRY,
    ALLOCATION_TABLE,
    CHANNEL,
    COMPONENT,
    MODEL_FILE_SUFFIX,
    REF_COMPONENT,
    REF_REQUIREMENT,
    REF_SOURCE,
    REF_TARGET,
    REQUIREMENT,
)
from .services import ToolContext

KIND_ADD_CHILD = "addChild"
KIND_REMOVE_ELEMENT = "removeElement"
KIND_SET_ATTRIBUTE = "setAttribute"
KIND_ADD_ALLOCATION = "addAllocation"
KIND_REMOVE_ALLOCATION = "removeAllocation"
KIND_SET_BOUNDS = "setBounds"
KIND_ADD_CHANNEL = "addChannel"

COMMAND_KINDS = (
    KIND_ADD_CHILD,
    KIND_REMOVE_ELEMENT,
    KIND_SET_ATTRIBUTE,
    KIND_ADD_ALLOCATION,
    KIND_REMOVE_ALLOCATION,
    KIND_SET_BOUNDS,
    KIND_ADD_CHANNEL,
)

# wire field name -> constructor argument
_FIELD_NAMES = {
    "parentId": "parent_id",
    "typeName": "type_name",
    "elementId": "element_id",
    "attributeName": "attribute_name",
    "value": "value",
    "sourceId": "source_id",
    "targetId": "target_id",
    "bounds": "bounds",
}

_REQUIRED_FIELDS = {
    KIND_ADD_CHILD: ("parentId", "typeName"),
    KIND_REMOVE_ELEMENT: ("elementId",),
    KIND_SET_ATTRIBUTE: ("elementId", "attributeName", "value"),
    KIND_ADD_ALLOCATION: ("elementId", "sourceId", "targetId"),
    KIND_REMOVE_ALLOCATION: ("elementId", "sourceId", "targetId"),
    KIND_SET_BOUNDS: ("elementId", "bounds"),
    KIND_ADD_CHANNEL: ("sourceId", "targetId"),
}


@dataclass(frozen=True)
class Command:
    """A serializable edit operation.

    For allocations, sourceId names the requirement and targetId the
    component, mirroring the direction of the mapping.
    """

    kind: str
    parent_id: str | None = None
    type_name: str | None = None
    element_id: str | None = None
    attribute_name: str | None = None
    value: AttributeValue | None = None
    source_id: str | None = None
    target_id: str | None = None
    bounds: Bounds | None = None

    def to_wire(self) -> dict:
        wire: dict = {"kind": self.kind}
        for wire_name, attr_name in _FIELD_NAMES.items():
            value = getattr(self, attr_name)
            if value is None:
                continue
            if wire_name == "bounds":
                value = {"height": value.height, "width": value.width, "x": value.x, "y": value.y}
            wire[wire_name] = value
        return wire

    @staticmethod
    def from_wire(obj: object) -> "Command":
        if not isinstance(obj, dict):
            raise ParseError("command must be a JSON object")
        kind = obj.get("kind")
        if kind not in COMMAND_KINDS:
            raise ParseError(f"unknown command kind {kind!r}")
        required = _REQUIRED_FIELDS[kind]
        unknown = set(obj) - {"kind", *required}
        if unknown:
            raise ParseError(f"unexpected fields for {kind}: {sorted(unknown)}")
        missing = [name for name in required if name not in obj]
        if missing:
            raise ParseError(f"{kind} requires fields {missing}")
        kwargs = {}
        for wire_name in required:
            value = obj[wire_name]
            if wire_name == "bounds":
                value = _bounds_from_wire(value)
            elif wire_name == "value":
                if not value_kind_ok(value):
                    raise ParseError("value must be a string, number or boolean")
            elif not isinstance(value, str) or not value:
                raise ParseError(f"{wire_name} must be a non-empty string")
            kwargs[_FIELD_NAMES[wire_name]] = value
        return Command(kind=kind, **kwargs)


def value_kind_ok(value: object) -> bool:
    return isinstance(value, (str, int, float, bool))


def _bounds_from_wire(value: object) -> Bounds:
    if not isinstance(value, dict) or set(value) != {"x", "y", "width", "height"}:
        raise ParseError("bounds must be an object with keys x, y, width, height")
    for key, number in value.items():
        if isinstance(number, bool) or not isinstance(number, (int, float)) or not math.isfinite(number):
            raise ParseError(f"bounds.{key} must be a finite number")
    if value["width"] <= 0 or value["height"] <= 0:
        raise ParseError("bounds width and height must be positive")
    return Bounds(x=value["x"], y=value["y"], width=value["width"], height=value["height"])


@dataclass(frozen=True)
class Patch:
    """Change notification broadcast to subscribers after a mutation."""

    model_uri: str
    command: Command
    affected_ids: tuple[str, ...]
    revision: int

    def to_wire(self) -> dict:
        return {
            "affectedIds": list(self.affected_ids),
            "command": self.command.to_wire(),
            "modelUri": self.model_uri,
            "revision": self.revision,
        }


# -- primitive mutations ------------------------------------------------------
#
# Commands are planned into primitive ops before anything mutates, so a
# failing command leaves the model untouched. Ops keep references to the
# detached subtrees, which is what makes undo/redo id- and byte-exact.

@dataclass(frozen=True)
class _Attach:
    parent_id: str
    index: int
    element: ModelObject


@dataclass(frozen=True)
class _Detach:
    parent_id: str
    index: int
    element: ModelObject


@dataclass(frozen=True)
class _SetAttr:
    element_id: str
    name: str
    old: AttributeValue
    new: AttributeValue


@dataclass(frozen=True)
class _SetLayout:
    element_id: str
    old: Bounds | None
    new: Bounds | None


_Op = Union[_Attach, _Detach, _SetAttr, _SetLayout]


def _apply_op(session: "ModelSession", op: _Op) -> None:
    if isinstance(op, _Attach):
        find_by_id(session.root, op.parent_id).children.insert(op.index, op.element)
    elif isinstance(op, _Detach):
        del find_by_id(session.root, op.parent_id).children[op.index]
    elif isinstance(op, _SetAttr):
        find_by_id(session.root, op.element_id).attributes[op.name] = op.new
    else:
        if op.new is None:
            session.layout.pop(op.element_id, None)
        else:
            session.layout[op.element_id] = op.new


def _invert_op(op: _Op) -> _Op:
    if isinstance(op, _Attach):
        return _Detach(op.parent_id, op.index, op.element)
    if isinstance(op, _Detach):
        return _Attach(op.parent_id, op.index, op.element)
    if isinstance(op, _SetAttr):
        return _SetAttr(op.element_id, op.name, old=op.new, new=op.old)
    return _SetLayout(op.element_id, old=op.new, new=op.old)


@dataclass(frozen=True)
class _Entry:
    command: Command
    ops: tuple[_Op, ...]
    affected_ids: tuple[str, ...]


class Subscription:
    def __init__(self, session: "ModelSession", key: int):
        self._session = session
        self._key = key

    def cancel(self) -> None:
        self._session._unsubscribe(self._key)


class ModelSession:
    """One loaded model: root, layout, command stacks and subscribers."""

    def __init__(self, workspace: "Workspace", uri: str, root: ModelObject, layout: LayoutTable, warnings):
        self.workspace = workspace
        self.context: ToolContext = workspace.context
        self.uri = uri
        self.root = root
        self.layout = layout
        self.load_warnings = list(warnings)
        self.revision = 0
        self.dirty = False
        self._saved_text = serialize_model(root, layout)
        self._undo: list[_Entry] = []
        self._redo: list[_Entry] = []
        self._subscribers: dict[int, Callable[[Patch], None]] = {}
        self._next_key = 0
        self._lock = threading.RLock()
        self._outbox: deque[Patch] = deque()
        self._notify_lock = threading.Lock()

    @property
    def lock(self):
        """Mutation lock; hold it to read a consistent snapshot of root and layout."""
        return self._lock

    # -- editing ---------------------------------------------------------

    def execute(self, command: Command) -> Patch:
        """Apply a command atomically; returns the broadcast patch.

        On any validation error the model is unchanged. A successful command
        clears the redo stack and marks the session dirty.
        """
        with self._lock:
            ops, affected = _plan(self, command)
            for op in ops:
                _apply_op(self, op)
            self.revision += 1
            self._undo.append(_Entry(command, tuple(ops), tuple(affected)))
            self._redo.clear()
            self._refresh_dirty()
            patch = Patch(self.uri, command, tuple(affected), self.revision)
            self._outbox.append(patch)
        self._deliver()
        return patch

    def undo(self) -> Patch:
        with self._lock:
            if not self._undo:
                raise NothingToUndo("undo stack is empty")
            entry = self._undo.pop()
            for op in reversed(entry.ops):
                _apply_op(self, _invert_op(op))
            self._redo.append(entry)
            self.revision += 1
            self._refresh_dirty()
            patch = Patch(self.uri, entry.command, entry.affected_ids, self.revision)
            self._outbox.append(patch)
        self._deliver()
        return patch

    def redo(self) -> Patch:
        with self._lock:
            if not self._redo:
                raise NothingToRedo("redo stack is empty")
            entry = self._redo.pop()
            for op in entry.ops:
                _apply_op(self, op)
            self._undo.append(entry)
            self.revision += 1
            self._refresh_dirty()
            patch = Patch(self.uri, entry.command, entry.affected_ids, self.revision)
            self._outbox.append(patch)
        self._deliver()
        return patch

    def save(self) -> None:
        """Atomically replace the model file (write temp file, then rename)."""
        with self._lock:
            text = serialize_model(self.root, self.layout)
            target = self.workspace.path_for(self.uri)
            try:
                fd, temp_name = tempfile.mkstemp(
                    prefix=f".{target.name}.", suffix=".tmp", dir=str(target.parent)
                )
                try:
                    with os.fdopen(fd, "w", encoding="utf-8") as handle:
                        handle.write(text)
                        handle.flush()
                        os.fsync(handle.fileno())
                    os.replace(temp_name, target)
                except Exception:
                    try:
                        os.unlink(temp_name)
                    except OSError:
                        pass
                    raise
            except OSError as exc:
                raise IoError(f"could not save {self.uri}: {exc}") from None
            self._saved_text = text
            self.dirty = False

    def serialized(self) -> str:
        with self._lock:
            return serialize_model(self.root, self.layout)

    def _refresh_dirty(self) -> None:
        # dirty reflects actual divergence from the saved state, so undoing
        # back to the last save clears it again
        self.dirty = serialize_model(self.root, self.layout) != self._saved_text

    # -- notifications ------------------------------------------------------

    def subscribe(self, sink: Callable[[Patch], None]) -> Subscription:
        with self._lock:
            key = self._next_key
            self._next_key += 1
            self._subscribers[key] = sink
            return Subscription(self, key)

    def _unsubscribe(self, key: int) -> None:
        with self._lock:
            self._subscribers.pop(key, None)

    def _deliver(self) -> None:
        with self._notify_lock:
            while True:
                with self._lock:
                    if not self._outbox:
                        return
                    patch = self._outbox.popleft()
                    sinks = list(self._subscribers.items())
                for key, sink in sinks:
                    try:
                        sink(patch)
                    except Exception:
                        self._unsubscribe(key)


class Workspace:
    """A directory of model files with one cached session per model uri."""

    def __init__(self, root_dir: str | os.PathLike, context: ToolContext):
        self.root_dir = Path(root_dir)
        self.context = context
        self._sessions: dict[str, ModelSession] = {}
        self._lock = threading.Lock()

    def list_model_uris(self) -> list[str]:
        if not self.root_dir.is_dir():
            raise WorkspaceMissing(f"workspace directory {self.root_dir} does not exist")
        return sorted(
            path.name for path in self.root_dir.glob(f"*{MODEL_FILE_SUFFIX}") if path.is_file()
        )

    def path_for(self, uri: str) -> Path:
        return self.root_dir / uri

    def load(self, uri: str) -> ModelSession:
        """Load a model into a session; repeated loads return the cached session."""
        if Path(uri).name != uri or not uri.endswith(MODEL_FILE_SUFFIX):
            raise NotFound(f"invalid model uri {uri!r}")
        with self._lock:
            session = self._sessions.get(uri)
            if session is not None:
                return session
            path = self.path_for(uri)
            try:
                text = path.read_text(encoding="utf-8")
            except FileNotFoundError:
                raise NotFound(f"no model file for uri {uri!r}") from None
            except OSError as exc:
                raise IoError(f"could not read {uri!r}: {exc}") from None
            loaded = deserialize_model(text, self.context.meta_registry)
            session = ModelSession(self, uri, loaded.root, loaded.layout, loaded.warnings)
            self._sessions[uri] = session
            return session

    def open_sessions(self) -> list[ModelSession]:
        with self._lock:
            return [self._sessions[uri] for uri in sorted(self._sessions)]


# -- command planning ------------------------------------------------------------

def _plan(session: ModelSession, command: Command) -> tuple[list[_Op], list[str]]:
    """Validate a command against the current model and compute its primitive ops."""
    planners = {
        KIND_ADD_CHILD: _plan_add_child,
        KIND_REMOVE_ELEMENT: _plan_remove_element,
        KIND_SET_ATTRIBUTE: _plan_set_attribute,
        KIND_ADD_ALLOCATION: _plan_add_allocation,
        KIND_REMOVE_ALLOCATION: _plan_remove_allocation,
        KIND_SET_BOUNDS: _plan_set_bounds,
        KIND_ADD_CHANNEL: _plan_add_channel,
    }
    return planners[command.kind](session, command)


def _require(session: ModelSession, element_id: str) -> ModelObject:
    element = find_by_id(session.root, element_id)
    if element is None:
        raise UnknownElement(f"no element with id {element_id!r}")
    return element


def _plan_add_child(session, command):
    parent = _require(session, command.parent_id)
    if not session.context.composition.can_compose(parent.type_name, command.type_name):
        raise CompositionForbidden(
            f"{command.type_name!r} cannot be added under {parent.type_name!r}"
        )
    cls = session.context.meta_registry.get(command.type_name)
    if any(not ref.many for ref in cls.cross_references):
        # elements with mandatory references (channels, allocation entries)
        # are created through their dedicated commands, fully wired
        raise InvariantViolation(
            f"{command.type_name!r} requires wired references and has a dedicated command"
        )
    child = session.context.meta_registry.instantiate(command.type_name)
    ops = [_Attach(parent.id, len(parent.children), child)]
    return ops, [parent.id, child.id]


def _plan_remove_element(session, command):
    element = _require(session, command.element_id)
    if element is session.root:
        raise InvariantViolation("the model root cannot be removed")
    parent = find_parent(session.root, element.id)
    if not session.context.composition.can_compose(parent.type_name, element.type_name):
        raise InvariantViolation(
            f"{element.type_name!r} under {parent.type_name!r} is fixed and cannot be removed"
        )
    removed_ids = collect_ids(element)
    # cascade: siblings cross-referencing into the removed subtree go with it
    cascade = [
        sibling
        for sibling in parent.children
        if sibling is not element
        and any(target in removed_ids for ids in sibling.cross_refs.values() for target in ids)
    ]
    doomed = sorted(cascade + [element], key=lambda e: parent.children.index(e), reverse=True)
    ops: list[_Op] = [_Detach(parent.id, parent.children.index(e), e) for e in doomed]
    for gone in doomed:
        for gone_id in sorted(collect_ids(gone)):
            if gone_id in session.layout:
                ops.append(_SetLayout(gone_id, old=session.layout[gone_id], new=None))
    affected = [parent.id, element.id] + [e.id for e in cascade]
    return ops, affected


def _plan_set_attribute(session, command):
    element = _require(session, command.element_id)
    cls = session.context.meta_registry.get(element.type_name)
    spec = cls.attribute(command.attribute_name)
    if spec is None:
        raise TypeMismatch(f"{element.type_name} has no attribute {command.attribute_name!r}")
    value = coerce_attribute_value(command.value, spec, element.type_name, TypeMismatch)
    old = element.attributes[spec.name]
    return [_SetAttr(element.id, spec.name, old=old, new=value)], [element.id]


def _plan_add_allocation(session, command):
    table = _require(session, command.element_id)
    if table.type_name != ALLOCATION_TABLE:
        raise InvariantViolation(f"{command.element_id!r} is not an allocation table")
    requirement = _require(session, command.source_id)
    component = _require(session, command.target_id)
    if requirement.type_name != REQUIREMENT:
        raise InvariantViolation("allocation source must be a Requirement")
    if component.type_name != COMPONENT:
        raise InvariantViolation("allocation target must be a Component")
    for entry in table.children:
        if (
            entry.cross_refs.get(REF_REQUIREMENT) == [requirement.id]
            and entry.cross_refs.get(REF_COMPONENT) == [component.id]
        ):
            raise InvariantViolation("this requirement is already allocated to this component")
    entry = session.context.meta_registry.instantiate(ALLOCATION_ENTRY)
    entry.cross_refs[REF_REQUIREMENT] = [requirement.id]
    entry.cross_refs[REF_COMPONENT] = [component.id]
    return [_Attach(table.id, len(table.children), entry)], [table.id, entry.id]


def _plan_remove_allocation(session, command):
    table = _require(session, command.element_id)
    if table.type_name != ALLOCATION_TABLE:
        raise InvariantViolation(f"{command.element_id!r} is not an allocation table")
    for index, entry in enumerate(table.children):
        if (
            entry.cross_refs.get(REF_REQUIREMENT) == [command.source_id]
            and entry.cross_refs.get(REF_COMPONENT) == [command.target_id]
        ):
            return [_Detach(table.id, index, entry)], [table.id, entry.id]
    raise InvariantViolation("no allocation entry matches the given requirement and component")


def _plan_set_bounds(session, command):
    element = _require(session, command.element_id)
    old = session.layout.get(element.id)
    return [_SetLayout(element.id, old=old, new=command.bounds)], [element.id]


def _plan_add_channel(session, command):
    source = _require(session, command.source_id)
    target = _require(session, command.target_id)
    if source.type_name != COMPONENT or target.type_name != COMPONENT:
        raise InvariantViolation("channel endpoints must be components")
    parent = find_parent(session.root, source.id)
    if parent is None or parent is not find_parent(session.root, target.id):
        raise InvariantViolation("channel endpoints must be siblings under one parent component")
    if not session.context.composition.can_compose(parent.type_name, CHANNEL):
        raise CompositionForbidden(f"{CHANNEL!r} cannot be added under {parent.type_name!r}")
    channel = session.context.meta_registry.instantiate(CHANNEL)
    channel.cross_refs[REF_SOURCE] = [source.id]
    channel.cross_refs[REF_TARGET] = [target.id]
    return [_Attach(parent.id, len(parent.children), channel)], [parent.id, channel.id]
