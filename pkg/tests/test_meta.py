from __future__ import annotations

import json
import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genmodel import random_model
from webmodel.errors import (
    DuplicateId,
    DuplicateType,
    InvariantViolation,
    ParseError,
    RegistrySealed,
    UnknownType,
)
from webmodel.meta import (
    AttributeSpec,
    Bounds,
    MetaClass,
    MetaRegistry,
    ReferenceSpec,
    coerce_attribute_value,
    deserialize_model,
    find_by_id,
    find_parent,
    serialize_model,
    value_kind,
)
from webmodel.mvp import build_mvp_registry


def plain_registry() -> MetaRegistry:
    """A minimal registry exercising all four value types."""
    registry = MetaRegistry()
    registry.register(
        MetaClass(
            "Box",
            attributes=(
                AttributeSpec("label", "text"),
                AttributeSpec("count", "integer"),
                AttributeSpec("ratio", "real"),
                AttributeSpec("active", "boolean"),
            ),
            containments=(ReferenceSpec("Box", "Box"),),
            cross_references=(ReferenceSpec("peers", "Box"),),
        )
    )
    registry.seal()
    return registry


# -- registry ---------------------------------------------------------------

def test_register_and_get():
    registry = MetaRegistry()
    registry.register(MetaClass("Component"))
    assert "Component" in registry
    assert registry.get("Component").name == "Component"


def test_register_duplicate_rejected():
    registry = MetaRegistry()
    registry.register(MetaClass("Component"))
    with pytest.raises(DuplicateType):
        registry.register(MetaClass("Component"))


def test_register_after_seal_rejected():
    registry = MetaRegistry()
    registry.register(MetaClass("Component"))
    registry.seal()
    with pytest.raises(RegistrySealed):
        registry.register(MetaClass("Other"))


def test_seal_requires_reference_targets():
    registry = MetaRegistry()
    registry.register(MetaClass("A", containments=(ReferenceSpec("b", "B"),)))
    with pytest.raises(UnknownType):
        registry.seal()


# -- instantiate ----------------------------------------------------------------

def test_instantiate_defaults():
    box = plain_registry().instantiate("Box")
    assert box.attributes == {"label": "", "count": 0, "ratio": 0.0, "active": False}
    assert isinstance(box.attributes["ratio"], float)
    assert isinstance(box.attributes["active"], bool)
    assert box.children == [] and box.cross_refs == {}


def test_instantiate_unknown_type():
    with pytest.raises(UnknownType):
        plain_registry().instantiate("Nope")


def test_instantiate_distinct_ids():
    registry = plain_registry()
    first, second = registry.instantiate("Box"), registry.instantiate("Box")
    assert first.id != second.id
    assert len(first.id) == 36


def test_instantiate_requires_sealed():
    registry = MetaRegistry()
    registry.register(MetaClass("Box"))
    with pytest.raises(InvariantViolation):
        registry.instantiate("Box")


def test_mvp_component_defaults():
    element = build_mvp_registry().instantiate("Component")
    assert element.type_name == "Component"
    assert element.attributes["stronglyCausal"] is False


# -- value kinds -------------------------------------------------------------------

def test_value_kind_distinguishes_bool_from_int():
    assert value_kind(True) == "boolean"
    assert value_kind(1) == "integer"
    assert value_kind(1.0) == "real"
    assert value_kind("1") == "text"
    assert value_kind(None) is None


@pytest.mark.parametrize(
    "value_type,good,bad",
    [
        ("text", "hi", 1),
        ("integer", 3, "3"),
        ("integer", -7, 3.0),
        ("integer", 0, True),
        ("real", 2.5, "2.5"),
        ("real", 1.5, True),
        ("boolean", True, 1),
        ("boolean", False, "false"),
    ],
)
def test_type_safety_per_value_type(value_type, good, bad):
    spec = AttributeSpec("a", value_type)
    assert coerce_attribute_value(good, spec, "T", ParseError) == good
    with pytest.raises(ParseError):
        coerce_attribute_value(bad, spec, "T", ParseError)


def test_integer_widens_to_real():
    spec = AttributeSpec("a", "real")
    value = coerce_attribute_value(5, spec, "T", ParseError)
    assert value == 5.0 and isinstance(value, float)


def test_non_finite_real_rejected():
    spec = AttributeSpec("a", "real")
    with pytest.raises(ParseError):
        coerce_attribute_value(float("nan"), spec, "T", ParseError)


def test_lone_surrogate_text_rejected():
    # JSON string escapes can produce unpaired surrogates; they would poison
    # every later utf-8 encode, so the attribute gate refuses them
    spec = AttributeSpec("a", "text")
    with pytest.raises(ParseError):
        coerce_attribute_value("\ud800", spec, "T", ParseError)
    assert coerce_attribute_value("日本 ok", spec, "T", ParseError) == "日本 ok"


# -- tree navigation -----------------------------------------------------------------

def test_find_by_id_identity_child_and_missing():
    registry = plain_registry()
    root, child = registry.instantiate("Box"), registry.instantiate("Box")
    grand = registry.instantiate("Box")
    child.children.append(grand)
    root.children.append(child)
    assert find_by_id(root, root.id) is root
    assert find_by_id(root, grand.id) is grand
    assert find_by_id(root, "missing") is None
    assert find_parent(root, grand.id) is child
    assert find_parent(root, root.id) is None


# -- serialization ----------------------------------------------------------------------

def test_empty_project_serialization_shape():
    root = build_mvp_registry().instantiate("Project")
    text = serialize_model(root, {})
    expected = (
        '{"layout":{},"root":{"attributes":{"name":""},"children":[],'
        f'"id":"{root.id}","type":"Project"}}}}'
    )
    assert text == expected


def test_serialize_is_deterministic():
    registry = build_mvp_registry()
    root = registry.instantiate("Project")
    root.children.append(registry.instantiate("RequirementsPackage"))
    layout = {root.id: Bounds(1, 2, 3, 4)}
    assert serialize_model(root, layout) == serialize_model(root, layout)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_round_trip_random_models(seed):
    registry = build_mvp_registry()
    root, layout = random_model(random.Random(seed), registry)
    text = serialize_model(root, layout)
    loaded = deserialize_model(text, registry)
    assert loaded.root == root
    assert loaded.layout == layout
    assert loaded.warnings == []
    assert serialize_model(loaded.root, loaded.layout) == text


def test_deserialize_malformed_text():
    with pytest.raises(ParseError):
        deserialize_model("{not json", build_mvp_registry())


def test_deserialize_rejects_nan():
    registry = plain_registry()
    box = registry.instantiate("Box")
    text = serialize_model(box, {})
    with pytest.raises(ParseError):
        deserialize_model(text.replace('"ratio":0.0', '"ratio":NaN'), registry)


def test_deserialize_unknown_type():
    registry = build_mvp_registry()
    text = serialize_model(registry.instantiate("Project"), {})
    with pytest.raises(UnknownType):
        deserialize_model(text.replace('"Project"', '"Ghost"'), registry)


def test_deserialize_duplicate_id():
    registry = build_mvp_registry()
    root = registry.instantiate("Project")
    package = registry.instantiate("RequirementsPackage")
    package.id = root.id
    root.children.append(package)
    with pytest.raises(DuplicateId):
        deserialize_model(serialize_model(root, {}), registry)


def test_deserialize_unknown_attribute():
    registry = build_mvp_registry()
    text = serialize_model(registry.instantiate("Project"), {})
    bad = text.replace('"attributes":{"name":""}', '"attributes":{"name":"","nope":1}')
    with pytest.raises(ParseError):
        deserialize_model(bad, registry)


def test_deserialize_wrong_attribute_kind():
    registry = build_mvp_registry()
    text = serialize_model(registry.instantiate("Project"), {})
    with pytest.raises(ParseError):
        deserialize_model(text.replace('"name":""', '"name":3'), registry)


def test_deserialize_fills_missing_attributes():
    registry = build_mvp_registry()
    root = registry.instantiate("Project")
    text = serialize_model(root, {}).replace('"attributes":{"name":""}', '"attributes":{}')
    loaded = deserialize_model(text, registry)
    assert loaded.root.attributes == {"name": ""}


def test_deserialize_unknown_cross_reference_name():
    registry = build_mvp_registry()
    text = serialize_model(registry.instantiate("Project"), {})
    bad = text.replace('"children":[]', '"children":[]').replace(
        '"id"', '"crossRefs":{"nope":[]},"id"', 1
    )
    with pytest.raises(ParseError):
        deserialize_model(bad, registry)


def test_deserialize_single_valued_reference_multiplicity():
    registry = build_mvp_registry()
    channel = registry.instantiate("Channel")
    channel.cross_refs["source"] = ["a", "b"]
    # wrap in a component so the ids could in principle resolve
    with pytest.raises(ParseError):
        deserialize_model(serialize_model(channel, {}), registry)


def test_dangling_reference_dropped_with_warning():
    registry = build_mvp_registry()
    root = registry.instantiate("Project")
    table = registry.instantiate("AllocationTable")
    entry = registry.instantiate("AllocationEntry")
    entry.cross_refs["requirement"] = ["00000000-0000-4000-8000-000000000bad"]
    table.children.append(entry)
    root.children.append(table)
    loaded = deserialize_model(serialize_model(root, {}), registry)
    assert loaded.warnings and loaded.warnings[0].severity == "warning"
    assert loaded.warnings[0].element_id == entry.id
    loaded_entry = find_by_id(loaded.root, entry.id)
    assert loaded_entry.cross_refs == {}


def test_layout_for_unknown_element_dropped_with_warning():
    registry = build_mvp_registry()
    root = registry.instantiate("Project")
    layout = {"00000000-0000-4000-8000-00000000dead": Bounds(1, 1, 10, 10)}
    loaded = deserialize_model(serialize_model(root, layout), registry)
    assert loaded.layout == {}
    assert [w.element_id for w in loaded.warnings] == [root.id]


def test_layout_with_bad_bounds_rejected():
    registry = build_mvp_registry()
    root = registry.instantiate("Project")
    text = serialize_model(root, {root.id: Bounds(0, 0, 5, 5)})
    with pytest.raises(ParseError):
        deserialize_model(text.replace('"width":5', '"width":0'), registry)
    with pytest.raises(ParseError):
        deserialize_model(text.replace('"width":5', '"width":true'), registry)


def test_bounds_must_be_positive():
    with pytest.raises(ValueError):
        Bounds(0, 0, 0, 10)
    with pytest.raises(ValueError):
        Bounds(0, 0, 10, -1)


def test_model_file_format_keys_are_sorted():
    registry = build_mvp_registry()
    root, layout = random_model(random.Random(7), registry)
    doc = json.loads(serialize_model(root, layout))
    assert list(doc) == ["layout", "root"]

    def check(element):
        keys = list(element)
        assert keys == sorted(keys)
        assert set(keys) <= {"attributes", "children", "crossRefs", "id", "type"}
        for child in element["children"]:
            check(child)

    check(doc["root"])
    for entry in doc["layout"].values():
        assert list(entry) == ["height", "width", "x", "y"]


def test_serialized_ids_look_like_uuids():
    registry = build_mvp_registry()
    root = registry.instantiate("Project")
    assert re.fullmatch(r"[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}", root.id)
