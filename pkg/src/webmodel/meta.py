"""Generic metamodel runtime.

Hosts the type registry, element instantiation, the containment tree and the
canonical model (de)serialization. The runtime knows nothing about any
concrete modeling language; concrete type sets are registered on top of it
and the registry is sealed before use.

Serialization contract: UTF-8 JSON, all object keys sorted, children in
containment order, compact separators. Identical models produce identical
bytes. Cross-reference maps omit empty entries so serialized form is
canonical.
"""

from __future__ import annotations

import json
import math
import uuid
from dataclasses import dataclass, field
from typing import Iterator

from .diagnostics import SEVERITY_WARNING, Diagnostic
from .errors import (
    DuplicateId,
    DuplicateType,
    InvariantViolation,
    ParseError,
    RegistrySealed,
    UnknownType,
)
from .names import VALIDATOR_LOADER

VALUE_TYPES = ("text", "integer", "real", "boolean")

_DEFAULTS = {"text": "", "integer": 0, "real": 0.0, "boolean": False}

AttributeValue = str | int | float | bool


def value_kind(value: object) -> str | None:
    """Classify a value into one of the attribute value types.

    bool must be checked before int because bool subclasses int.
    """
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "real"
    if isinstance(value, str):
        return "text"
    return None


def default_value(value_type: str) -> AttributeValue:
    return _DEFAULTS[value_type]


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    value_type: str
    validator_id: str | None = None

    def __post_init__(self):
        if self.value_type not in VALUE_TYPES:
            raise ValueError(f"unknown value type: {self.value_type!r}")


@dataclass(frozen=True)
class ReferenceSpec:
    """A containment or cross-reference slot on a metaclass."""

    name: str
    target_type: str
    many: bool = True


@dataclass(frozen=True)
class MetaClass:
    name: str
    attributes: tuple[AttributeSpec, ...] = ()
    containments: tuple[ReferenceSpec, ...] = ()
    cross_references: tuple[ReferenceSpec, ...] = ()

    def attribute(self, name: str) -> AttributeSpec | None:
        for spec in self.attributes:
            if spec.name == name:
                return spec
        return None

    def cross_reference(self, name: str) -> ReferenceSpec | None:
        for spec in self.cross_references:
            if spec.name == name:
                return spec
        return None

    def allows_child_type(self, type_name: str) -> bool:
        return any(spec.target_type == type_name for spec in self.containments)


@dataclass
class ModelObject:
    """A typed model element: identity, attributes, children, cross-references.

    Containment forms a tree (an element lives in at most one ``children``
    list); cross-references are non-owning links by id. Equality is
    structural and recursive.
    """

    id: str
    type_name: str
    attributes: dict[str, AttributeValue] = field(default_factory=dict)
    children: list["ModelObject"] = field(default_factory=list)
    cross_refs: dict[str, list[str]] = field(default_factory=dict)


class MetaRegistry:
    """Runtime registry of metaclasses: mutable while building, immutable after seal()."""

    def __init__(self):
        self._classes: dict[str, MetaClass] = {}
        self._sealed = False

    @property
    def sealed(self) -> bool:
        return self._sealed

    def register(self, cls: MetaClass) -> None:
        if self._sealed:
            raise RegistrySealed("cannot register types in a sealed registry")
        if cls.name in self._classes:
            raise DuplicateType(f"metaclass {cls.name!r} is already registered")
        self._classes[cls.name] = cls

    def seal(self) -> None:
        for cls in self._classes.values():
            for ref in cls.containments + cls.cross_references:
                if ref.target_type not in self._classes:
                    raise UnknownType(
                        f"{cls.name}.{ref.name} targets unregistered type {ref.target_type!r}"
                    )
        self._sealed = True

    def get(self, name: str) -> MetaClass:
        try:
            return self._classes[name]
        except KeyError:
            raise UnknownType(f"unknown metaclass {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._classes

    def names(self) -> list[str]:
        return sorted(self._classes)

    def instantiate(self, type_name: str) -> ModelObject:
        """Create a fresh element with a new unique id and default attribute values."""
        if not self._sealed:
            raise InvariantViolation("registry must be sealed before instantiating elements")
        cls = self.get(type_name)
        attrs = {spec.name: default_value(spec.value_type) for spec in cls.attributes}
        return ModelObject(id=str(uuid.uuid4()), type_name=type_name, attributes=attrs)


@dataclass(frozen=True)
class Bounds:
    x: int | float
    y: int | float
    width: int | float
    height: int | float

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("bounds width and height must be positive")


LayoutTable = dict[str, Bounds]


# -- tree navigation -------------------------------------------------------

def iter_elements(root: ModelObject) -> Iterator[ModelObject]:
    """Depth-first preorder walk over the containment tree."""
    stack = [root]
    while stack:
        element = stack.pop()
        yield element
        stack.extend(reversed(element.children))


def find_by_id(root: ModelObject, element_id: str) -> ModelObject | None:
    for element in iter_elements(root):
        if element.id == element_id:
            return element
    return None


def find_parent(root: ModelObject, element_id: str) -> ModelObject | None:
    for element in iter_elements(root):
        for child in element.children:
            if child.id == element_id:
                return element
    return None


def collect_ids(root: ModelObject) -> set[str]:
    return {element.id for element in iter_elements(root)}


# -- serialization -----------------------------------------------------------

def serialize_model(root: ModelObject, layout: LayoutTable) -> str:
    """Serialize a model and its layout to the canonical on-disk JSON form."""
    doc = {
        "layout": {
            element_id: {"height": b.height, "width": b.width, "x": b.x, "y": b.y}
            for element_id, b in layout.items()
        },
        "root": _element_to_doc(root),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def _element_to_doc(element: ModelObject) -> dict:
    doc: dict = {
        "attributes": dict(element.attributes),
        "children": [_element_to_doc(child) for child in element.children],
        "id": element.id,
        "type": element.type_name,
    }
    refs = {name: list(ids) for name, ids in element.cross_refs.items() if ids}
    if refs:
        doc["crossRefs"] = refs
    return doc


@dataclass
class LoadedModel:
    root: ModelObject
    layout: LayoutTable
    warnings: list[Diagnostic]


_ELEMENT_KEYS = {"attributes", "children", "crossRefs", "id", "type"}
_BOUNDS_KEYS = {"height", "width", "x", "y"}


def deserialize_model(text: str, registry: MetaRegistry) -> LoadedModel:
    """Parse canonical model text back into a model; inverse of serialize_model.

    Dangling cross-references and layout entries for unknown elements are
    dropped and reported as warning diagnostics instead of failing the load.
    """
    if not registry.sealed:
        raise InvariantViolation("registry must be sealed before loading models")
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except ValueError as exc:
        raise ParseError(f"malformed model text: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"layout", "root"}:
        raise ParseError("model document must be an object with keys 'layout' and 'root'")

    seen_ids: set[str] = set()
    root = _element_from_doc(doc["root"], registry, seen_ids)

    warnings: list[Diagnostic] = []
    _drop_dangling_refs(root, seen_ids, warnings)
    layout = _layout_from_doc(doc["layout"], root.id, seen_ids, warnings)
    return LoadedModel(root=root, layout=layout, warnings=warnings)


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name} is not allowed")


def _element_from_doc(doc: object, registry: MetaRegistry, seen_ids: set[str]) -> ModelObject:
    if not isinstance(doc, dict):
        raise ParseError("model element must be an object")
    unknown = set(doc) - _ELEMENT_KEYS
    if unknown:
        raise ParseError(f"unexpected element keys: {sorted(unknown)}")
    for required in ("attributes", "children", "id", "type"):
        if required not in doc:
            raise ParseError(f"model element is missing key {required!r}")

    element_id = doc["id"]
    if not isinstance(element_id, str) or not element_id:
        raise ParseError("element id must be a non-empty string")
    if element_id in seen_ids:
        raise DuplicateId(f"duplicate element id {element_id!r}")
    seen_ids.add(element_id)

    type_name = doc["type"]
    if not isinstance(type_name, str):
        raise ParseError("element type must be a string")
    cls = registry.get(type_name)

    attributes = _attributes_from_doc(doc["attributes"], cls)
    cross_refs = _cross_refs_from_doc(doc.get("crossRefs", {}), cls)

    raw_children = doc["children"]
    if not isinstance(raw_children, list):
        raise ParseError("element children must be an array")
    children = [_element_from_doc(child, registry, seen_ids) for child in raw_children]

    return ModelObject(
        id=element_id,
        type_name=type_name,
        attributes=attributes,
        children=children,
        cross_refs=cross_refs,
    )


def _attributes_from_doc(raw: object, cls: MetaClass) -> dict[str, AttributeValue]:
    if not isinstance(raw, dict):
        raise ParseError(f"attributes of {cls.name} must be an object")
    known = {spec.name for spec in cls.attributes}
    unknown = set(raw) - known
    if unknown:
        raise ParseError(f"{cls.name} has no attributes {sorted(unknown)}")
    attributes: dict[str, AttributeValue] = {}
    for spec in cls.attributes:
        if spec.name not in raw:
            attributes[spec.name] = default_value(spec.value_type)
            continue
        attributes[spec.name] = coerce_attribute_value(raw[spec.name], spec, cls.name, ParseError)
    return attributes


def coerce_attribute_value(value, spec: AttributeSpec, owner: str, error_cls) -> AttributeValue:
    """Check a value against an attribute spec; integers are widened for real attributes."""
    kind = value_kind(value)
    if spec.value_type == "real" and kind == "integer":
        value, kind = float(value), "real"
    if kind != spec.value_type:
        raise error_cls(
            f"{owner}.{spec.name} expects {spec.value_type}, got {kind or type(value).__name__}"
        )
    if kind == "real" and not math.isfinite(value):
        raise error_cls(f"{owner}.{spec.name} must be finite")
    if kind == "text":
        # JSON escapes can smuggle lone surrogates, which would poison every
        # later UTF-8 encode (save, responses); refuse them at the gate
        try:
            value.encode("utf-8")
        except UnicodeEncodeError:
            raise error_cls(f"{owner}.{spec.name} must be valid unicode text") from None
    return value


def _cross_refs_from_doc(raw: object, cls: MetaClass) -> dict[str, list[str]]:
    if not isinstance(raw, dict):
        raise ParseError(f"crossRefs of {cls.name} must be an object")
    cross_refs: dict[str, list[str]] = {}
    for name, ids in raw.items():
        spec = cls.cross_reference(name)
        if spec is None:
            raise ParseError(f"{cls.name} has no cross-reference {name!r}")
        if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
            raise ParseError(f"{cls.name}.{name} must be an array of element ids")
        if not spec.many and len(ids) > 1:
            raise ParseError(f"{cls.name}.{name} admits at most one target")
        if ids:
            cross_refs[name] = list(ids)
    return cross_refs


def _drop_dangling_refs(root: ModelObject, known_ids: set[str], warnings: list[Diagnostic]) -> None:
    for element in iter_elements(root):
        for name in list(element.cross_refs):
            kept = []
            for target in element.cross_refs[name]:
                if target in known_ids:
                    kept.append(target)
                else:
                    warnings.append(
                        Diagnostic(
                            severity=SEVERITY_WARNING,
                            element_id=element.id,
                            message=f"dropped dangling reference {name} -> {target}",
                            validator_id=VALIDATOR_LOADER,
                        )
                    )
            if kept:
                element.cross_refs[name] = kept
            else:
                del element.cross_refs[name]


def _layout_from_doc(
    raw: object, root_id: str, known_ids: set[str], warnings: list[Diagnostic]
) -> LayoutTable:
    if not isinstance(raw, dict):
        raise ParseError("layout must be an object")
    layout: LayoutTable = {}
    for element_id, entry in raw.items():
        if not isinstance(entry, dict) or set(entry) != _BOUNDS_KEYS:
            raise ParseError(f"layout entry for {element_id!r} must have keys height, width, x, y")
        values = {}
        for key in ("x", "y", "width", "height"):
            value = entry[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ParseError(f"layout entry for {element_id!r}: {key} must be a finite number")
            values[key] = value
        if values["width"] <= 0 or values["height"] <= 0:
            raise ParseError(f"layout entry for {element_id!r} must have positive width and height")
        if element_id not in known_ids:
            warnings.append(
                Diagnostic(
                    severity=SEVERITY_WARNING,
                    element_id=root_id,
                    message=f"dropped layout entry for unknown element {element_id}",
                    validator_id=VALIDATOR_LOADER,
                )
            )
            continue
        layout[element_id] = Bounds(**values)
    return layout
