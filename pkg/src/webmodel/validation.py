"""Two-tier model validation.

Simple validators check single attribute values as entered in forms; complex
validators inspect whole model regions. Validator bodies live here and are
registered externally, never inside metaclass definitions; the runner
discovers them through the registry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .diagnostics import SEVERITY_ERROR, Diagnostic
from .errors import DuplicateType
from .meta import MetaRegistry, ModelObject, iter_elements
from .names import (
    ATTR_STRONGLY_CAUSAL,
    CHANNEL,
    COMPONENT,
    REF_COMPONENT,
    REF_REQUIREMENT,
    REF_SOURCE,
    REF_TARGET,
    REQUIREMENT,
    VALIDATOR_ALLOCATION,
    VALIDATOR_WEAK_CAUSALITY,
)


@dataclass(frozen=True)
class SimpleValidator:
    """Pure check on a single attribute value; returns a message on failure."""

    id: str
    check: Callable[[str], str | None]


@dataclass(frozen=True)
class ComplexValidator:
    """Pure whole-model check run once per element of its scope type."""

    id: str
    scope_type: str
    check: Callable[[ModelObject, ModelObject], list[Diagnostic]]


class ValidationRegistry:
    def __init__(self):
        self._simple: dict[str, SimpleValidator] = {}
        self._complex: dict[str, ComplexValidator] = {}

    def register_simple(self, validator: SimpleValidator) -> None:
        if validator.id in self._simple:
            raise DuplicateType(f"simple validator {validator.id!r} is already registered")
        self._simple[validator.id] = validator

    def register_complex(self, validator: ComplexValidator) -> None:
        if validator.id in self._complex:
            raise DuplicateType(f"complex validator {validator.id!r} is already registered")
        self._complex[validator.id] = validator

    def has_simple(self, validator_id: str) -> bool:
        return validator_id in self._simple

    def simple(self, validator_id: str) -> SimpleValidator | None:
        return self._simple.get(validator_id)

    def complex_for_scope(self, type_name: str) -> list[ComplexValidator]:
        found = [v for v in self._complex.values() if v.scope_type == type_name]
        return sorted(found, key=lambda v: v.id)

    def ids(self) -> list[str]:
        return sorted([*self._simple, *self._complex])


# -- simple validators --------------------------------------------------------

def validate_email(value: str) -> str | None:
    """Accept the empty string (unset field) or local@domain with a dotted domain."""
    if value == "":
        return None
    if any(ch.isspace() for ch in value) or value.count("@") != 1:
        return "invalid email address"
    local, domain = value.split("@")
    if not local or not domain or "." not in domain:
        return "invalid email address"
    return None


# -- weak-causality cycle detection -------------------------------------------

def cyclic_weak_groups(
    vertex_count: int, weak: set[int], arcs: Iterable[tuple[int, int]]
) -> list[list[int]]:
    """Strongly connected vertex sets of the weak-induced subgraph that contain a cycle.

    Vertices are 0..vertex_count-1; only arcs whose both endpoints are weak
    take part. A set counts as cyclic when it has two or more members, or a
    single member with a self-loop. Returns sorted member lists, ordered by
    smallest member.
    """
    adjacency: list[list[int]] = [[] for _ in range(vertex_count)]
    self_loops: set[int] = set()
    for u, v in arcs:
        if u in weak and v in weak:
            if u == v:
                self_loops.add(u)
            else:
                adjacency[u].append(v)

    groups = [
        scc
        for scc in _tarjan_sccs(adjacency, weak)
        if len(scc) >= 2 or scc[0] in self_loops
    ]
    return sorted(sorted(group) for group in groups)


def _tarjan_sccs(adjacency: list[list[int]], vertices: Iterable[int]) -> list[list[int]]:
    """Iterative Tarjan over the given vertex subset."""
    index_of: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0

    for root in vertices:
        if root in index_of:
            continue
        work: list[list[int]] = [[root, 0]]
        while work:
            frame = work[-1]
            v, edge_index = frame
            if edge_index == 0:
                index_of[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            descended = False
            neighbors = adjacency[v]
            while edge_index < len(neighbors):
                w = neighbors[edge_index]
                edge_index += 1
                if w not in index_of:
                    frame[1] = edge_index
                    work.append([w, 0])
                    descended = True
                    break
                if w in on_stack and index_of[w] < lowlink[v]:
                    lowlink[v] = index_of[w]
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if lowlink[v] < lowlink[parent]:
                    lowlink[parent] = lowlink[v]
            if lowlink[v] == index_of[v]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc.append(w)
                    if w == v:
                        break
                sccs.append(scc)
    return sccs


def component_graph(component: ModelObject) -> tuple[list[str], set[str], list[tuple[str, str]]]:
    """Extract the sub-component graph of one hierarchy level.

    Returns (component ids in containment order, ids of weakly causal ones,
    channel arcs as (source id, target id)). Channels with an unresolved
    endpoint are skipped.
    """
    vertex_ids = [child.id for child in component.children if child.type_name == COMPONENT]
    known = set(vertex_ids)
    weak = {
        child.id
        for child in component.children
        if child.type_name == COMPONENT and not child.attributes.get(ATTR_STRONGLY_CAUSAL, False)
    }
    arcs = []
    for child in component.children:
        if child.type_name != CHANNEL:
            continue
        sources = child.cross_refs.get(REF_SOURCE, [])
        targets = child.cross_refs.get(REF_TARGET, [])
        if sources and targets and sources[0] in known and targets[0] in known:
            arcs.append((sources[0], targets[0]))
    return vertex_ids, weak, arcs


def detect_weak_causality_cycles(component: ModelObject) -> list[Diagnostic]:
    """One error per cyclic group of weakly causal sub-components of ``component``.

    The diagnostic is anchored on the lexicographically smallest member id and
    its message lists every member; results are sorted by anchor id.
    """
    vertex_ids, weak, arcs = component_graph(component)
    index = {vertex_id: i for i, vertex_id in enumerate(vertex_ids)}
    groups = cyclic_weak_groups(
        len(vertex_ids),
        {index[v] for v in weak},
        [(index[s], index[t]) for s, t in arcs],
    )
    diagnostics = []
    for group in groups:
        members = sorted(vertex_ids[i] for i in group)
        diagnostics.append(
            Diagnostic(
                severity=SEVERITY_ERROR,
                element_id=members[0],
                message="cycle of weakly causal components: " + ", ".join(members),
                validator_id=VALIDATOR_WEAK_CAUSALITY,
            )
        )
    return sorted(diagnostics, key=lambda d: d.element_id)


# -- allocation reference check ------------------------------------------------

def check_allocation_references(table: ModelObject, root: ModelObject) -> list[Diagnostic]:
    """One error per allocation entry whose endpoints do not resolve correctly."""
    by_id = {element.id: element for element in iter_elements(root)}
    diagnostics = []
    for entry in table.children:
        requirement = _resolve(entry, REF_REQUIREMENT, by_id)
        component = _resolve(entry, REF_COMPONENT, by_id)
        problems = []
        if requirement is None or requirement.type_name != REQUIREMENT:
            problems.append("requirement reference is missing or not a Requirement")
        if component is None or component.type_name != COMPONENT:
            problems.append("component reference is missing or not a Component")
        if problems:
            diagnostics.append(
                Diagnostic(
                    severity=SEVERITY_ERROR,
                    element_id=table.id,
                    message=f"allocation entry {entry.id}: " + "; ".join(problems),
                    validator_id=VALIDATOR_ALLOCATION,
                )
            )
    return diagnostics


def _resolve(entry: ModelObject, ref_name: str, by_id: dict[str, ModelObject]) -> ModelObject | None:
    ids = entry.cross_refs.get(ref_name, [])
    return by_id.get(ids[0]) if ids else None


# -- whole-model run -------------------------------------------------------------

def run_validators(
    root: ModelObject, meta_registry: MetaRegistry, validators: ValidationRegistry
) -> list[Diagnostic]:
    """Run every applicable validator over the model.

    Order is deterministic: elements depth-first, then validator id per
    element (simple attribute checks and complex checks merged).
    """
    diagnostics: list[Diagnostic] = []
    for element in iter_elements(root):
        batch: list[tuple[str, int, list[Diagnostic]]] = []
        cls = meta_registry.get(element.type_name)
        for position, spec in enumerate(cls.attributes):
            if spec.validator_id is None:
                continue
            simple = validators.simple(spec.validator_id)
            if simple is None:
                continue
            message = simple.check(element.attributes[spec.name])
            found = []
            if message is not None:
                found.append(
                    Diagnostic(
                        severity=SEVERITY_ERROR,
                        element_id=element.id,
                        message=f"{spec.name}: {message}",
                        validator_id=simple.id,
                    )
                )
            batch.append((simple.id, position, found))
        for validator in validators.complex_for_scope(element.type_name):
            batch.append((validator.id, len(cls.attributes), validator.check(element, root)))
        batch.sort(key=lambda item: (item[0], item[1]))
        for _, _, found in batch:
            diagnostics.extend(found)
    return diagnostics


def validate_model(session) -> list[Diagnostic]:
    """Validate a model session; see run_validators for ordering."""
    context = session.context
    return run_validators(session.root, context.meta_registry, context.validation)
