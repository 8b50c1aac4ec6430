"""Diagram pipeline: semantic model plus layout in, renderer-facing graph out.

Two stages with deliberately different lifetimes: the source loader runs
once when a diagram is opened and pins the (model, scope) pair; the graph
factory runs on the initial build and again after every operation or patch
that touches the scope. Both stages count their invocations so the stage
discipline is observable.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from .diagnostics import Diagnostic
from .errors import InvalidScope, InvariantViolation, ParseError, StaleScope, UnknownElement
from .meta import Bounds, ModelObject, find_by_id, find_parent
from .names import (
    ATTR_NAME,
    COMPONENT,
    COMPONENT_ARCHITECTURE,
    REF_SOURCE,
    REF_TARGET,
    TAG_EDGE_CHANNEL,
    TAG_GRAPH,
    TAG_LABEL_NAME,
    TAG_NODE_COMPONENT,
)
from .store import (
    KIND_ADD_CHANNEL,
    KIND_ADD_CHILD,
    KIND_REMOVE_ELEMENT,
    KIND_SET_BOUNDS,
    Command,
    ModelSession,
    Patch,
    Workspace,
)
from .validation import detect_weak_causality_cycles

DEFAULT_NODE_WIDTH = 120
DEFAULT_NODE_HEIGHT = 60
_GRID_ORIGIN = (20, 20)
_GRID_PITCH = (160, 100)
_GRID_COLUMNS = 4

OP_CREATE_NODE = "createNode"
OP_CHANGE_BOUNDS = "changeBounds"
OP_DELETE_ELEMENT = "deleteElement"
OP_CREATE_EDGE = "createEdge"

OPERATION_KINDS = (OP_CREATE_NODE, OP_CHANGE_BOUNDS, OP_DELETE_ELEMENT, OP_CREATE_EDGE)


@dataclass
class DiagramConfiguration:
    """Maps diagram type tags to metaclass names (nodes, edges) and attributes (labels)."""

    diagram_type: str
    type_tags: dict[str, str]

    def node_tags(self) -> dict[str, str]:
        return {tag: t for tag, t in self.type_tags.items() if tag.startswith("node:")}

    def edge_tags(self) -> dict[str, str]:
        return {tag: t for tag, t in self.type_tags.items() if tag.startswith("edge:")}

    def label_tags(self) -> dict[str, str]:
        return {tag: t for tag, t in self.type_tags.items() if tag.startswith("label:")}


# -- graph model -----------------------------------------------------------------

@dataclass(frozen=True)
class GLabel:
    id: str
    type_tag: str
    text: str

    def to_wire(self) -> dict:
        return {"id": self.id, "type": self.type_tag, "text": self.text}


@dataclass(frozen=True)
class GNode:
    id: str
    type_tag: str
    x: int | float
    y: int | float
    width: int | float
    height: int | float
    labels: tuple[GLabel, ...]

    def to_wire(self) -> dict:
        return {
            "id": self.id,
            "type": self.type_tag,
            "position": {"x": self.x, "y": self.y},
            "size": {"width": self.width, "height": self.height},
            "children": [label.to_wire() for label in self.labels],
        }


@dataclass(frozen=True)
class GEdge:
    id: str
    type_tag: str
    source_id: str
    target_id: str

    def to_wire(self) -> dict:
        return {
            "id": self.id,
            "type": self.type_tag,
            "sourceId": self.source_id,
            "targetId": self.target_id,
        }


@dataclass(frozen=True)
class GGraph:
    id: str
    nodes: tuple[GNode, ...]
    edges: tuple[GEdge, ...]

    def to_wire(self) -> dict:
        return {
            "id": self.id,
            "type": TAG_GRAPH,
            "children": [n.to_wire() for n in self.nodes] + [e.to_wire() for e in self.edges],
        }


@dataclass(frozen=True)
class DiagramOperation:
    kind: str
    node_type: str | None = None
    position: tuple[int | float, int | float] | None = None
    element_id: str | None = None
    bounds: Bounds | None = None
    source_id: str | None = None
    target_id: str | None = None

    @staticmethod
    def from_wire(obj: object) -> "DiagramOperation":
        if not isinstance(obj, dict):
            raise ParseError("diagram operation must be a JSON object")
        kind = obj.get("kind")
        if kind == OP_CREATE_NODE:
            _expect_keys(obj, {"kind", "nodeType", "position"})
            position = obj["position"]
            if (
                not isinstance(position, dict)
                or set(position) != {"x", "y"}
                or not all(_finite_number(position[k]) for k in ("x", "y"))
            ):
                raise ParseError("createNode position must be an object with numeric x and y")
            node_type = obj["nodeType"]
            if not isinstance(node_type, str):
                raise ParseError("createNode nodeType must be a string tag")
            return DiagramOperation(kind, node_type=node_type, position=(position["x"], position["y"]))
        if kind == OP_CHANGE_BOUNDS:
            _expect_keys(obj, {"kind", "elementId", "bounds"})
            return DiagramOperation(
                kind,
                element_id=_string_field(obj, "elementId"),
                bounds=_bounds_field(obj["bounds"]),
            )
        if kind == OP_DELETE_ELEMENT:
            _expect_keys(obj, {"kind", "elementId"})
            return DiagramOperation(kind, element_id=_string_field(obj, "elementId"))
        if kind == OP_CREATE_EDGE:
            _expect_keys(obj, {"kind", "sourceId", "targetId"})
            return DiagramOperation(
                kind,
                source_id=_string_field(obj, "sourceId"),
                target_id=_string_field(obj, "targetId"),
            )
        raise ParseError(f"unknown diagram operation kind {kind!r}")


def _expect_keys(obj: dict, expected: set[str]) -> None:
    if set(obj) != expected:
        raise ParseError(f"operation must have exactly the fields {sorted(expected)}")


def _string_field(obj: dict, key: str) -> str:
    value = obj[key]
    if not isinstance(value, str) or not value:
        raise ParseError(f"{key} must be a non-empty string")
    return value


def _finite_number(value: object) -> bool:
    return not isinstance(value, bool) and isinstance(value, (int, float)) and math.isfinite(value)


def _bounds_field(value: object) -> Bounds:
    if not isinstance(value, dict) or set(value) != {"x", "y", "width", "height"}:
        raise ParseError("bounds must be an object with keys x, y, width, height")
    if not all(_finite_number(v) for v in value.values()):
        raise ParseError("bounds values must be finite numbers")
    if value["width"] <= 0 or value["height"] <= 0:
        raise ParseError("bounds width and height must be positive")
    return Bounds(x=value["x"], y=value["y"], width=value["width"], height=value["height"])


# -- pipeline state ---------------------------------------------------------------

@dataclass
class SourceModelState:
    """Pinned (model, scope) pair of one open diagram, plus stage counters."""

    model_uri: str
    scope_element_id: str
    snapshot_revision: int
    loader_runs: int = 1
    factory_runs: int = 0
    stale: bool = False
    graph: GGraph | None = field(default=None, repr=False)
    applying: bool = field(default=False, repr=False)
    subscription: object = field(default=None, repr=False)


class DiagramService:
    """Opens diagrams, builds graph models and applies diagram operations."""

    def __init__(self, workspace: Workspace):
        self.workspace = workspace
        self.config: DiagramConfiguration = workspace.context.diagram_config
        self._states: dict[tuple[str, str], SourceModelState] = {}
        self._lock = threading.Lock()

    # stage one: runs once per (model uri, scope element)
    def open(self, model_uri: str, scope_element_id: str) -> SourceModelState:
        with self._lock:
            state = self._states.get((model_uri, scope_element_id))
            if state is not None:
                if not state.stale:
                    return state
                # the scope was deleted while this diagram was open; if an undo
                # brought it back, the reopen starts a fresh pipeline
                if state.subscription is not None:
                    state.subscription.cancel()
                del self._states[(model_uri, scope_element_id)]
            session = self.workspace.load(model_uri)
            scope = find_by_id(session.root, scope_element_id)
            if scope is None:
                raise InvalidScope(f"no element with id {scope_element_id!r}")
            if scope.type_name not in (COMPONENT, COMPONENT_ARCHITECTURE):
                raise InvalidScope(
                    f"{scope.type_name!r} cannot host a {self.config.diagram_type}"
                )
            state = SourceModelState(
                model_uri=model_uri,
                scope_element_id=scope_element_id,
                snapshot_revision=session.revision,
            )
            self._states[(model_uri, scope_element_id)] = state
            state.subscription = session.subscribe(
                lambda patch: self._on_patch(state, session, patch)
            )
            return state

    def graph(self, state: SourceModelState) -> GGraph:
        if state.stale:
            raise StaleScope(f"scope element {state.scope_element_id!r} was deleted")
        if state.graph is None:
            session = self.workspace.load(state.model_uri)
            state.graph = self._run_factory(state, session)
        return state.graph

    def apply(self, state: SourceModelState, operation: DiagramOperation) -> GGraph:
        """Translate a diagram operation into store commands, then rebuild once."""
        if state.stale:
            raise StaleScope(f"scope element {state.scope_element_id!r} was deleted")
        session = self.workspace.load(state.model_uri)
        state.applying = True
        try:
            self._translate(state, session, operation)
        finally:
            state.applying = False
        state.graph = self._run_factory(state, session)
        return state.graph

    def validate_scope(self, state: SourceModelState) -> list[Diagnostic]:
        session = self.workspace.load(state.model_uri)
        with session.lock:
            scope = find_by_id(session.root, state.scope_element_id)
            if scope is None:
                raise StaleScope(f"scope element {state.scope_element_id!r} was deleted")
            return detect_weak_causality_cycles(scope)

    # stage two: runs on first build and after every scope-affecting change
    def _run_factory(self, state: SourceModelState, session: ModelSession) -> GGraph:
        state.factory_runs += 1
        with session.lock:
            scope = find_by_id(session.root, state.scope_element_id)
            if scope is None:
                state.stale = True
                state.graph = None
                raise StaleScope(f"scope element {state.scope_element_id!r} was deleted")
            state.snapshot_revision = session.revision
            return self._build_graph(scope, session)

    def _build_graph(self, scope: ModelObject, session: ModelSession) -> GGraph:
        label_attribute = self.config.label_tags().get(TAG_LABEL_NAME, ATTR_NAME)
        node_type = self.config.node_tags()[TAG_NODE_COMPONENT]
        edge_type = self.config.edge_tags()[TAG_EDGE_CHANNEL]

        nodes = []
        node_ids = set()
        components = [c for c in scope.children if c.type_name == node_type]
        for index, component in enumerate(components):
            bounds = session.layout.get(component.id) or _grid_bounds(index)
            nodes.append(
                GNode(
                    id=component.id,
                    type_tag=TAG_NODE_COMPONENT,
                    x=bounds.x,
                    y=bounds.y,
                    width=bounds.width,
                    height=bounds.height,
                    labels=(
                        GLabel(
                            id=component.id + "_label",
                            type_tag=TAG_LABEL_NAME,
                            text=component.attributes.get(label_attribute, ""),
                        ),
                    ),
                )
            )
            node_ids.add(component.id)

        edges = []
        for child in scope.children:
            if child.type_name != edge_type:
                continue
            sources = child.cross_refs.get(REF_SOURCE, [])
            targets = child.cross_refs.get(REF_TARGET, [])
            # an edge is drawable only when both endpoints are drawn
            if sources and targets and sources[0] in node_ids and targets[0] in node_ids:
                edges.append(
                    GEdge(
                        id=child.id,
                        type_tag=TAG_EDGE_CHANNEL,
                        source_id=sources[0],
                        target_id=targets[0],
                    )
                )
        return GGraph(id=scope.id, nodes=tuple(nodes), edges=tuple(edges))

    def _translate(self, state: SourceModelState, session: ModelSession, op: DiagramOperation) -> None:
        if op.kind == OP_CREATE_NODE:
            type_name = self.config.node_tags().get(op.node_type)
            if type_name is None:
                raise ParseError(f"unknown node type tag {op.node_type!r}")
            patch = session.execute(
                Command(KIND_ADD_CHILD, parent_id=state.scope_element_id, type_name=type_name)
            )
            new_id = patch.affected_ids[1]
            session.execute(
                Command(
                    KIND_SET_BOUNDS,
                    element_id=new_id,
                    bounds=Bounds(
                        x=op.position[0],
                        y=op.position[1],
                        width=DEFAULT_NODE_WIDTH,
                        height=DEFAULT_NODE_HEIGHT,
                    ),
                )
            )
        elif op.kind == OP_CHANGE_BOUNDS:
            session.execute(Command(KIND_SET_BOUNDS, element_id=op.element_id, bounds=op.bounds))
        elif op.kind == OP_DELETE_ELEMENT:
            session.execute(Command(KIND_REMOVE_ELEMENT, element_id=op.element_id))
        else:
            with session.lock:
                scope = find_by_id(session.root, state.scope_element_id)
                if scope is None:
                    raise StaleScope(f"scope element {state.scope_element_id!r} was deleted")
                for endpoint in (op.source_id, op.target_id):
                    element = find_by_id(session.root, endpoint)
                    if element is None:
                        raise UnknownElement(f"no element with id {endpoint!r}")
                    if find_parent(session.root, endpoint) is not scope:
                        raise InvariantViolation(
                            f"element {endpoint!r} is not a direct child of the diagram scope"
                        )
            session.execute(Command(KIND_ADD_CHANNEL, source_id=op.source_id, target_id=op.target_id))

    def _on_patch(self, state: SourceModelState, session: ModelSession, patch: Patch) -> None:
        if state.applying or state.stale:
            return
        if not self._affects_scope(state, session, patch):
            return
        try:
            state.graph = self._run_factory(state, session)
        except StaleScope:
            pass

    def _affects_scope(self, state: SourceModelState, session: ModelSession, patch: Patch) -> bool:
        watched = {state.scope_element_id}
        if state.graph is not None:
            watched.update(node.id for node in state.graph.nodes)
            watched.update(edge.id for edge in state.graph.edges)
        with session.lock:
            scope = find_by_id(session.root, state.scope_element_id)
            if scope is None:
                state.stale = True
                state.graph = None
                return False
            watched.update(child.id for child in scope.children)
        return any(affected in watched for affected in patch.affected_ids)


def _grid_bounds(index: int) -> Bounds:
    """Deterministic fallback placement for components without stored layout."""
    column = index % _GRID_COLUMNS
    row = index // _GRID_COLUMNS
    return Bounds(
        x=_GRID_ORIGIN[0] + column * _GRID_PITCH[0],
        y=_GRID_ORIGIN[1] + row * _GRID_PITCH[1],
        width=DEFAULT_NODE_WIDTH,
        height=DEFAULT_NODE_HEIGHT,
    )
