"""The shipped modeling language: requirements, component architecture, allocation.

Builds the sealed metamodel registry, the service registries wired for it,
and the example model seeded into fresh workspaces.
"""

from __future__ import annotations

from . import names
from .diagram import DiagramConfiguration
from .meta import (
    AttributeSpec,
    Bounds,
    LayoutTable,
    MetaClass,
    MetaRegistry,
    ModelObject,
    ReferenceSpec,
)
from .services import CompositionService, Compositor, ElementHandler, HandlerService, ToolContext
from .validation import (
    ComplexValidator,
    SimpleValidator,
    ValidationRegistry,
    check_allocation_references,
    detect_weak_causality_cycles,
    validate_email,
)

EXAMPLE_MODEL_URI = "example" + names.MODEL_FILE_SUFFIX


def _text(name: str, validator_id: str | None = None) -> AttributeSpec:
    return AttributeSpec(name, "text", validator_id)


def _child(target_type: str, many: bool = True) -> ReferenceSpec:
    return ReferenceSpec(name=target_type, target_type=target_type, many=many)


def build_mvp_registry() -> MetaRegistry:
    """The sealed metamodel: project, requirements, components, channels, allocation."""
    registry = MetaRegistry()
    registry.register(
        MetaClass(
            names.PROJECT,
            attributes=(_text(names.ATTR_NAME),),
            containments=(
                _child(names.REQUIREMENTS_PACKAGE, many=False),
                _child(names.COMPONENT_ARCHITECTURE, many=False),
                _child(names.ALLOCATION_TABLE, many=False),
            ),
        )
    )
    registry.register(
        MetaClass(
            names.REQUIREMENTS_PACKAGE,
            attributes=(_text(names.ATTR_NAME),),
            containments=(_child(names.REQUIREMENT),),
        )
    )
    registry.register(
        MetaClass(
            names.REQUIREMENT,
            attributes=(
                _text(names.ATTR_NAME),
                _text(names.ATTR_DESCRIPTION),
                _text(names.ATTR_AUTHOR_EMAIL, validator_id=names.VALIDATOR_EMAIL),
            ),
        )
    )
    registry.register(
        MetaClass(
            names.COMPONENT_ARCHITECTURE,
            attributes=(_text(names.ATTR_NAME),),
            containments=(_child(names.COMPONENT),),
        )
    )
    registry.register(
        MetaClass(
            names.COMPONENT,
            attributes=(
                _text(names.ATTR_NAME),
                _text(names.ATTR_COMMENT),
                AttributeSpec(names.ATTR_STRONGLY_CAUSAL, "boolean"),
            ),
            containments=(_child(names.COMPONENT), _child(names.CHANNEL)),
        )
    )
    registry.register(
        MetaClass(
            names.CHANNEL,
            attributes=(_text(names.ATTR_NAME),),
            cross_references=(
                ReferenceSpec(names.REF_SOURCE, names.COMPONENT, many=False),
                ReferenceSpec(names.REF_TARGET, names.COMPONENT, many=False),
            ),
        )
    )
    registry.register(
        MetaClass(
            names.ALLOCATION_TABLE,
            attributes=(_text(names.ATTR_NAME),),
            containments=(_child(names.ALLOCATION_ENTRY),),
        )
    )
    registry.register(
        MetaClass(
            names.ALLOCATION_ENTRY,
            attributes=(_text(names.ATTR_NAME),),
            cross_references=(
                ReferenceSpec(names.REF_REQUIREMENT, names.REQUIREMENT, many=False),
                ReferenceSpec(names.REF_COMPONENT, names.COMPONENT, many=False),
            ),
        )
    )
    registry.seal()
    return registry


def build_mvp_composition() -> CompositionService:
    # Project sections are fixed; allocation entries are created only through
    # the dedicated addAllocation command, so neither appears here.
    return CompositionService(
        [
            Compositor(names.REQUIREMENTS_PACKAGE, names.REQUIREMENT),
            Compositor(names.COMPONENT_ARCHITECTURE, names.COMPONENT),
            Compositor(names.COMPONENT, names.COMPONENT),
            Compositor(names.COMPONENT, names.CHANNEL),
        ]
    )


def build_mvp_handlers() -> HandlerService:
    return HandlerService(
        [
            ElementHandler(names.PROJECT, names.ATTR_NAME, "project"),
            ElementHandler(names.REQUIREMENTS_PACKAGE, names.ATTR_NAME, "folder"),
            ElementHandler(
                names.REQUIREMENT, names.ATTR_NAME, "requirement",
                description_attribute=names.ATTR_DESCRIPTION,
            ),
            ElementHandler(names.COMPONENT_ARCHITECTURE, names.ATTR_NAME, "architecture"),
            ElementHandler(
                names.COMPONENT, names.ATTR_NAME, "component",
                description_attribute=names.ATTR_COMMENT,
            ),
            ElementHandler(names.CHANNEL, names.ATTR_NAME, "channel"),
            ElementHandler(names.ALLOCATION_TABLE, names.ATTR_NAME, "table"),
            ElementHandler(names.ALLOCATION_ENTRY, names.ATTR_NAME, "allocation"),
        ]
    )


def build_mvp_validation() -> ValidationRegistry:
    registry = ValidationRegistry()
    registry.register_simple(SimpleValidator(names.VALIDATOR_EMAIL, validate_email))
    registry.register_complex(
        ComplexValidator(
            names.VALIDATOR_WEAK_CAUSALITY,
            scope_type=names.COMPONENT,
            check=lambda scope, root: detect_weak_causality_cycles(scope),
        )
    )
    registry.register_complex(
        ComplexValidator(
            names.VALIDATOR_ALLOCATION,
            scope_type=names.ALLOCATION_TABLE,
            check=check_allocation_references,
        )
    )
    return registry


def build_mvp_diagram_config() -> DiagramConfiguration:
    return DiagramConfiguration(
        diagram_type=names.DIAGRAM_TYPE,
        type_tags={
            names.TAG_NODE_COMPONENT: names.COMPONENT,
            names.TAG_EDGE_CHANNEL: names.CHANNEL,
            names.TAG_LABEL_NAME: names.ATTR_NAME,
        },
    )


def build_mvp_context() -> ToolContext:
    return ToolContext(
        meta_registry=build_mvp_registry(),
        composition=build_mvp_composition(),
        handlers=build_mvp_handlers(),
        validation=build_mvp_validation(),
        diagram_config=build_mvp_diagram_config(),
    )


def build_example_model(registry: MetaRegistry | None = None) -> tuple[ModelObject, LayoutTable]:
    """The example project seeded into fresh workspaces.

    Contains two requirements, a two-level component hierarchy whose inner
    level has a feedback loop of weakly causal components (so validation has
    something to report), and allocation entries for both requirements.

    Element ids are deterministic (uuid-shaped, counter-based) so the shipped
    example is reproducible byte for byte.
    """
    registry = registry or build_mvp_registry()
    counter = iter(range(1_000_000))

    def make(type_name: str, name: str) -> ModelObject:
        element = registry.instantiate(type_name)
        element.id = f"00000000-0000-4000-8000-{next(counter):012d}"
        element.attributes[names.ATTR_NAME] = name
        return element

    project = make(names.PROJECT, "Brake System")

    requirements = make(names.REQUIREMENTS_PACKAGE, "Requirements")
    r1 = make(names.REQUIREMENT, "Brake on demand")
    r1.attributes[names.ATTR_DESCRIPTION] = "Pressing the pedal shall engage the brake actuator."
    r1.attributes[names.ATTR_AUTHOR_EMAIL] = "alice@example.org"
    r2 = make(names.REQUIREMENT, "Monitor braking")
    r2.attributes[names.ATTR_DESCRIPTION] = "Brake activity shall be supervised and reported."
    r2.attributes[names.ATTR_AUTHOR_EMAIL] = "bob@example.org"
    requirements.children.extend([r1, r2])

    architecture = make(names.COMPONENT_ARCHITECTURE, "Architecture")
    system = make(names.COMPONENT, "BrakeSystem")
    system.attributes[names.ATTR_COMMENT] = "Top-level system"
    controller = make(names.COMPONENT, "Controller")
    actuator = make(names.COMPONENT, "Actuator")
    monitor = make(names.COMPONENT, "Monitor")
    monitor.attributes[names.ATTR_STRONGLY_CAUSAL] = True

    def channel(name: str, source: ModelObject, target: ModelObject) -> ModelObject:
        element = make(names.CHANNEL, name)
        element.cross_refs[names.REF_SOURCE] = [source.id]
        element.cross_refs[names.REF_TARGET] = [target.id]
        return element

    # Controller <-> Actuator are both weakly causal: a reportable cycle.
    # The loop through Monitor is broken by Monitor being strongly causal.
    system.children.extend(
        [
            controller,
            actuator,
            monitor,
            channel("command", controller, actuator),
            channel("feedback", actuator, controller),
            channel("status", actuator, monitor),
            channel("alarm", monitor, controller),
        ]
    )
    architecture.children.append(system)

    table = make(names.ALLOCATION_TABLE, "Allocation")

    def allocation(requirement: ModelObject, component: ModelObject) -> ModelObject:
        entry = make(names.ALLOCATION_ENTRY, "")
        entry.cross_refs[names.REF_REQUIREMENT] = [requirement.id]
        entry.cross_refs[names.REF_COMPONENT] = [component.id]
        return entry

    table.children.extend([allocation(r1, actuator), allocation(r2, monitor)])

    project.children.extend([requirements, architecture, table])

    layout: LayoutTable = {
        system.id: Bounds(x=20, y=20, width=560, height=320),
        controller.id: Bounds(x=40, y=60, width=120, height=60),
        actuator.id: Bounds(x=260, y=60, width=120, height=60),
        monitor.id: Bounds(x=150, y=200, width=120, height=60),
    }
    return project, layout
