from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import expected_cycle_groups
from webmodel import names
from webmodel.meta import ModelObject
from webmodel.mvp import build_example_model, build_mvp_registry, build_mvp_validation
from webmodel.validation import (
    ValidationRegistry,
    check_allocation_references,
    component_graph,
    cyclic_weak_groups,
    detect_weak_causality_cycles,
    run_validators,
    validate_email,
)

REGISTRY = build_mvp_registry()


# -- email ------------------------------------------------------------------

@pytest.mark.parametrize("value", ["a@b.co", "", "x.y@sub.example.org", "a+b@c.d"])
def test_email_accepted(value):
    assert validate_email(value) is None


@pytest.mark.parametrize(
    "value",
    ["not-an-email", "a@b", "@b.co", "a@", "a b@c.de", "a@b c.de", "a@@b.co", "a@b@c.de", " a@b.co"],
)
def test_email_rejected(value):
    assert validate_email(value) == "invalid email address"


# -- cycle detection ------------------------------------------------------------

def component_with_graph(
    weak_flags: list[bool], arcs: list[tuple[int, int]]
) -> tuple[ModelObject, list[str]]:
    """A Component whose sub-components and channels realize the given graph."""
    parent = REGISTRY.instantiate(names.COMPONENT)
    subs = []
    for index, weak in enumerate(weak_flags):
        sub = REGISTRY.instantiate(names.COMPONENT)
        sub.attributes[names.ATTR_NAME] = f"c{index}"
        sub.attributes[names.ATTR_STRONGLY_CAUSAL] = not weak
        subs.append(sub)
        parent.children.append(sub)
    for source, target in arcs:
        channel = REGISTRY.instantiate(names.CHANNEL)
        channel.cross_refs[names.REF_SOURCE] = [subs[source].id]
        channel.cross_refs[names.REF_TARGET] = [subs[target].id]
        parent.children.append(channel)
    return parent, [sub.id for sub in subs]


def detector_groups(weak_flags, arcs) -> set[frozenset[int]]:
    component, ids = component_with_graph(weak_flags, arcs)
    position = {element_id: index for index, element_id in enumerate(ids)}
    diagnostics = detect_weak_causality_cycles(component)
    groups = set()
    for diagnostic in diagnostics:
        members = diagnostic.message.split(": ")[1].split(", ")
        groups.add(frozenset(position[m] for m in members))
        assert diagnostic.element_id == min(members)
        assert diagnostic.severity == "error"
        assert diagnostic.validator_id == names.VALIDATOR_WEAK_CAUSALITY
    return groups


def test_two_cycle_both_weak_flagged():
    assert detector_groups([True, True], [(0, 1), (1, 0)]) == {frozenset({0, 1})}


def test_two_cycle_with_strong_member_clean():
    assert detector_groups([True, False], [(0, 1), (1, 0)]) == set()


def test_single_component_no_channels_clean():
    assert detector_groups([True], []) == set()


def test_self_loop_is_a_cycle():
    assert detector_groups([True], [(0, 0)]) == {frozenset({0})}


def test_self_loop_on_strong_component_clean():
    assert detector_groups([False], [(0, 0)]) == set()


def test_two_separate_cycles_give_two_diagnostics():
    groups = detector_groups([True] * 4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    assert groups == {frozenset({0, 1}), frozenset({2, 3})}


def test_overlapping_cycles_merge_into_one_group():
    groups = detector_groups([True] * 3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    assert groups == {frozenset({0, 1, 2})}


def test_diagnostics_sorted_by_anchor_id():
    component, ids = component_with_graph([True] * 4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    diagnostics = detect_weak_causality_cycles(component)
    assert [d.element_id for d in diagnostics] == sorted(d.element_id for d in diagnostics)


def test_channels_with_unresolved_endpoints_ignored():
    component, ids = component_with_graph([True, True], [(0, 1), (1, 0)])
    for child in component.children:
        if child.type_name == names.CHANNEL:
            child.cross_refs[names.REF_SOURCE] = ["00000000-0000-4000-8000-000000000bad"]
            break
    vertices, weak, arcs = component_graph(component)
    assert len(arcs) == 1


def exhaustive_cases(vertex_count: int):
    pairs = [(u, v) for u in range(vertex_count) for v in range(vertex_count)]
    for edge_bits in range(2 ** len(pairs)):
        arcs = [pairs[i] for i in range(len(pairs)) if edge_bits >> i & 1]
        for weak_bits in range(2**vertex_count):
            weak = {v for v in range(vertex_count) if weak_bits >> v & 1}
            yield weak, arcs


@pytest.mark.parametrize("vertex_count", [0, 1, 2, 3])
def test_core_matches_oracle_exhaustively_small(vertex_count):
    for weak, arcs in exhaustive_cases(vertex_count):
        actual = {frozenset(g) for g in cyclic_weak_groups(vertex_count, weak, arcs)}
        assert actual == expected_cycle_groups(weak, arcs), (weak, arcs)


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_full_path_matches_oracle_random_graphs(seed):
    rng = random.Random(seed)
    vertex_count = rng.randint(1, 6)
    weak_flags = [rng.random() < 0.7 for _ in range(vertex_count)]
    arcs = [
        (rng.randrange(vertex_count), rng.randrange(vertex_count))
        for _ in range(rng.randint(0, vertex_count * 2))
    ]
    weak = {v for v, flag in enumerate(weak_flags) if flag}
    assert detector_groups(weak_flags, arcs) == expected_cycle_groups(weak, set(arcs))


# -- allocation references ----------------------------------------------------------

def build_allocation_model():
    root = REGISTRY.instantiate(names.PROJECT)
    package = REGISTRY.instantiate(names.REQUIREMENTS_PACKAGE)
    architecture = REGISTRY.instantiate(names.COMPONENT_ARCHITECTURE)
    table = REGISTRY.instantiate(names.ALLOCATION_TABLE)
    requirement = REGISTRY.instantiate(names.REQUIREMENT)
    component = REGISTRY.instantiate(names.COMPONENT)
    package.children.append(requirement)
    architecture.children.append(component)
    root.children.extend([package, architecture, table])
    return root, table, requirement, component


def add_entry(table, requirement_id, component_id):
    entry = REGISTRY.instantiate(names.ALLOCATION_ENTRY)
    entry.cross_refs[names.REF_REQUIREMENT] = [requirement_id]
    entry.cross_refs[names.REF_COMPONENT] = [component_id]
    table.children.append(entry)
    return entry


def test_allocation_both_present_clean():
    root, table, requirement, component = build_allocation_model()
    add_entry(table, requirement.id, component.id)
    assert check_allocation_references(table, root) == []


def test_allocation_ghost_requirement_flagged_on_table():
    root, table, requirement, component = build_allocation_model()
    add_entry(table, "00000000-0000-4000-8000-000000000bad", component.id)
    diagnostics = check_allocation_references(table, root)
    assert len(diagnostics) == 1
    assert diagnostics[0].element_id == table.id
    assert diagnostics[0].severity == "error"


def test_allocation_wrong_type_flagged():
    root, table, requirement, component = build_allocation_model()
    add_entry(table, component.id, component.id)  # a component is not a requirement
    assert len(check_allocation_references(table, root)) == 1


def test_allocation_empty_table_clean():
    root, table, _, _ = build_allocation_model()
    assert check_allocation_references(table, root) == []


def test_allocation_one_error_per_entry_even_if_both_sides_bad():
    root, table, _, _ = build_allocation_model()
    add_entry(table, "00000000-0000-4000-8000-000000000bad", "00000000-0000-4000-8000-00000000dead")
    assert len(check_allocation_references(table, root)) == 1


# -- whole-model run ------------------------------------------------------------------

def test_example_model_reports_seeded_cycle():
    root, _ = build_example_model(REGISTRY)
    diagnostics = run_validators(root, REGISTRY, build_mvp_validation())
    cycle_errors = [d for d in diagnostics if d.validator_id == names.VALIDATOR_WEAK_CAUSALITY]
    assert len(cycle_errors) >= 1
    # derived from the oracle over the example's own graph
    system = root.children[1].children[0]
    vertices, weak, arcs = component_graph(system)
    index = {v: i for i, v in enumerate(vertices)}
    oracle = expected_cycle_groups(
        {index[v] for v in weak}, [(index[s], index[t]) for s, t in arcs]
    )
    assert len(cycle_errors) == len(oracle) == 1


def test_bad_email_reported_on_requirement():
    root, _ = build_example_model(REGISTRY)
    requirement = root.children[0].children[0]
    requirement.attributes[names.ATTR_AUTHOR_EMAIL] = "x"
    diagnostics = run_validators(root, REGISTRY, build_mvp_validation())
    email_errors = [d for d in diagnostics if d.validator_id == names.VALIDATOR_EMAIL]
    assert [d.element_id for d in email_errors] == [requirement.id]
    assert "invalid email address" in email_errors[0].message


def test_empty_project_is_clean():
    root = REGISTRY.instantiate(names.PROJECT)
    assert run_validators(root, REGISTRY, build_mvp_validation()) == []


def test_validation_is_pure_and_deterministic():
    root, _ = build_example_model(REGISTRY)
    validators = build_mvp_validation()
    first = run_validators(root, REGISTRY, validators)
    second = run_validators(root, REGISTRY, validators)
    assert first == second


def test_order_is_depth_first_then_validator_id():
    root, _ = build_example_model(REGISTRY)
    # poison every element that carries an email validator and seed a cycle
    for element in [root.children[0].children[0], root.children[0].children[1]]:
        element.attributes[names.ATTR_AUTHOR_EMAIL] = "bad"
    diagnostics = run_validators(root, REGISTRY, build_mvp_validation())
    order = [(d.validator_id, d.element_id) for d in diagnostics]
    # requirements precede the architecture subtree in depth-first order
    assert order[0][0] == names.VALIDATOR_EMAIL
    assert order[1][0] == names.VALIDATOR_EMAIL
    assert order[2][0] == names.VALIDATOR_WEAK_CAUSALITY


def test_validators_discovered_via_registry_not_hardwired():
    root, _ = build_example_model(REGISTRY)
    empty = ValidationRegistry()
    assert run_validators(root, REGISTRY, empty) == []
