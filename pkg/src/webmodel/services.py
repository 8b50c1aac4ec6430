"""Kernel service registries: composition rules, element handlers, introspection.

Also hosts the startup sanity check that cross-validates every registry
against the metamodel so misconfigured deployments refuse to start instead
of failing deep inside a request.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import DuplicateType, NoHandler
from .meta import MetaRegistry, ModelObject
from .validation import ValidationRegistry

if TYPE_CHECKING:
    from .diagram import DiagramConfiguration
    from .store import Workspace


@dataclass(frozen=True)
class Compositor:
    """Permission for elements of child_type to be added under parent_type."""

    parent_type: str
    child_type: str


class CompositionService:
    def __init__(self, compositors: list[Compositor]):
        self._pairs = {(c.parent_type, c.child_type) for c in compositors}

    def can_compose(self, parent_type: str, child_type: str) -> bool:
        return (parent_type, child_type) in self._pairs

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self._pairs)

    def child_types(self) -> set[str]:
        return {child for _, child in self._pairs}

    def child_types_for(self, parent_type: str) -> list[str]:
        return sorted(child for parent, child in self._pairs if parent == parent_type)


@dataclass(frozen=True)
class ElementHandler:
    """Display metadata for one element type."""

    type_name: str
    label_attribute: str
    icon_id: str
    description_attribute: str | None = None


class HandlerService:
    def __init__(self, handlers: list[ElementHandler]):
        self._handlers: dict[str, ElementHandler] = {}
        for handler in handlers:
            if handler.type_name in self._handlers:
                raise DuplicateType(f"handler for {handler.type_name!r} is already registered")
            self._handlers[handler.type_name] = handler

    def get(self, type_name: str) -> ElementHandler | None:
        return self._handlers.get(type_name)

    def type_names(self) -> list[str]:
        return sorted(self._handlers)

    def all(self) -> list[ElementHandler]:
        return [self._handlers[name] for name in self.type_names()]

    def display_info(self, element: ModelObject) -> dict:
        """Label, description and icon for an element; label falls back to the type name."""
        handler = self._handlers.get(element.type_name)
        if handler is None:
            raise NoHandler(f"no element handler registered for {element.type_name!r}")
        label = element.attributes.get(handler.label_attribute, "")
        description = ""
        if handler.description_attribute is not None:
            description = element.attributes.get(handler.description_attribute, "")
        return {
            "label": label if label else element.type_name,
            "description": description,
            "iconId": handler.icon_id,
        }


@dataclass
class ToolContext:
    """Everything a running server needs besides the workspace itself."""

    meta_registry: MetaRegistry
    composition: CompositionService
    handlers: HandlerService
    validation: ValidationRegistry
    diagram_config: "DiagramConfiguration"


# -- startup sanity checks ------------------------------------------------------

@dataclass(frozen=True)
class InconsistencyReport:
    kind: str
    subject: str
    message: str


def verify_registries(
    meta_registry: MetaRegistry,
    composition: CompositionService,
    handlers: HandlerService,
    validation: ValidationRegistry,
    diagram_config: "DiagramConfiguration",
) -> list[InconsistencyReport]:
    """Cross-check every registry entry against the metamodel.

    Reports, never raises: unknown metaclasses referenced by compositors,
    handlers or diagram type tags; attribute validator ids with no registered
    validator; handler attributes missing from their metaclass; composable
    child types without a handler. An empty result means consistent.
    """
    reports: list[InconsistencyReport] = []

    def unknown_metaclass(subject: str, type_name: str):
        reports.append(
            InconsistencyReport(
                kind="unknown-metaclass",
                subject=subject,
                message=f"{subject} references unregistered metaclass {type_name!r}",
            )
        )

    for parent, child in composition.pairs():
        subject = f"compositor {parent}->{child}"
        if parent not in meta_registry:
            unknown_metaclass(subject, parent)
        if child not in meta_registry:
            unknown_metaclass(subject, child)

    for handler in handlers.all():
        subject = f"handler {handler.type_name}"
        if handler.type_name not in meta_registry:
            unknown_metaclass(subject, handler.type_name)
            continue
        cls = meta_registry.get(handler.type_name)
        for attribute in filter(None, (handler.label_attribute, handler.description_attribute)):
            if cls.attribute(attribute) is None:
                reports.append(
                    InconsistencyReport(
                        kind="unknown-attribute",
                        subject=subject,
                        message=f"{subject} uses attribute {attribute!r} missing on {cls.name}",
                    )
                )

    node_types = []
    for tag, target in sorted(diagram_config.type_tags.items()):
        subject = f"diagram tag {tag}"
        if tag.startswith("label:"):
            continue  # checked against node metaclasses below
        if target not in meta_registry:
            unknown_metaclass(subject, target)
        elif tag.startswith("node:"):
            node_types.append(target)
    for tag, attribute in sorted(diagram_config.label_tags().items()):
        for node_type in node_types:
            if meta_registry.get(node_type).attribute(attribute) is None:
                reports.append(
                    InconsistencyReport(
                        kind="unknown-attribute",
                        subject=f"diagram tag {tag}",
                        message=f"diagram tag {tag} uses attribute {attribute!r} missing on {node_type}",
                    )
                )

    for name in meta_registry.names():
        for spec in meta_registry.get(name).attributes:
            if spec.validator_id is not None and not validation.has_simple(spec.validator_id):
                reports.append(
                    InconsistencyReport(
                        kind="unknown-validator",
                        subject=f"attribute {name}.{spec.name}",
                        message=f"{name}.{spec.name} names unregistered validator {spec.validator_id!r}",
                    )
                )

    for child_type in sorted(composition.child_types()):
        if child_type in meta_registry and handlers.get(child_type) is None:
            reports.append(
                InconsistencyReport(
                    kind="missing-handler",
                    subject=f"metaclass {child_type}",
                    message=f"composable metaclass {child_type} has no element handler",
                )
            )

    return reports


# -- introspection -----------------------------------------------------------------

@dataclass(frozen=True)
class IntrospectionSnapshot:
    compositors: list[tuple[str, str]]
    handlers: list[str]
    validators: list[str]
    open_models: list[dict]
    server_info: dict

    def to_wire(self) -> dict:
        return {
            "openModels": self.open_models,
            "registeredCompositors": [list(pair) for pair in self.compositors],
            "registeredHandlers": list(self.handlers),
            "registeredValidators": list(self.validators),
            "serverInfo": dict(self.server_info),
        }


def introspect(workspace: "Workspace", started_at: str, version: str) -> IntrospectionSnapshot:
    """Live state of the registries and open model sessions."""
    context = workspace.context
    open_models = [
        {"dirty": session.dirty, "revision": session.revision, "uri": session.uri}
        for session in workspace.open_sessions()
    ]
    return IntrospectionSnapshot(
        compositors=context.composition.pairs(),
        handlers=context.handlers.type_names(),
        validators=context.validation.ids(),
        open_models=open_models,
        server_info={"startTime": started_at, "version": version},
    )
