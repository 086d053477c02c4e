from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oodq.errors import CyclicInheritance, DuplicateClassName
from oodq.model import (
    ClassModel,
    TypeRef,
    ancestors_of,
    depth_of_inheritance,
    descendants_of,
    resolve_project,
    subclasses_of,
)


def cls(name: str, *supers: str, kind: str = "class") -> ClassModel:
    pkg = name.rpartition(".")[0]
    return ClassModel(name, kind=kind, supertypes=[TypeRef(s) for s in supers], package=pkg)


def names(classes) -> list[str]:
    return [c.qualified_name for c in classes]


def test_direct_supertype_resolves():
    p = resolve_project([cls("A"), cls("B", "A")])
    assert p.get("B").supertypes[0].resolved == "A"


def test_unknown_supertype_stays_external():
    p = resolve_project([cls("C", "External")])
    ref = p.get("C").supertypes[0]
    assert ref.resolved is None and ref.is_external
    assert ancestors_of(p, p.get("C")) == []


def test_two_cycle_is_reported():
    with pytest.raises(CyclicInheritance) as info:
        resolve_project([cls("A", "B"), cls("B", "A")])
    assert set(info.value.cycle) == {"A", "B"}


def test_duplicate_names_rejected():
    with pytest.raises(DuplicateClassName):
        resolve_project([cls("p.A"), cls("p.A")])


def test_subclasses_are_direct_and_sorted():
    p = resolve_project([cls("A"), cls("C", "A"), cls("B", "A"), cls("D", "B")])
    assert names(subclasses_of(p, p.get("A"))) == ["B", "C"]
    assert subclasses_of(p, p.get("D")) == []
    assert names(descendants_of(p, p.get("A"))) == ["B", "C", "D"]


def test_ancestors_union_classes_and_interfaces():
    p = resolve_project([cls("A"), cls("B", "A"), cls("I", kind="interface"), cls("D", "B", "I")])
    assert names(ancestors_of(p, p.get("D"))) == ["A", "B", "I"]
    assert names(ancestors_of(p, p.get("A"))) == []
    assert depth_of_inheritance(p, p.get("D")) == 2


def test_simple_name_prefers_same_package():
    p = resolve_project([cls("x.Util"), cls("y.Util"), cls("y.User", "Util")])
    assert p.get("y.User").supertypes[0].resolved == "y.Util"


def test_ambiguous_simple_name_stays_external():
    p = resolve_project([cls("x.Util"), cls("y.Util"), cls("z.User", "Util")])
    assert p.get("z.User").supertypes[0].resolved is None


def test_qualified_reference_resolves():
    p = resolve_project([cls("x.Util"), cls("y.Util"), cls("z.User", "x.Util")])
    assert p.get("z.User").supertypes[0].resolved == "x.Util"


def test_enum_supertypes_dropped():
    p = resolve_project([cls("I", kind="interface"), cls("E", "I", kind="enum")])
    assert ancestors_of(p, p.get("E")) == []


@st.composite
def forests(draw):
    """Random acyclic class graphs: each class may extend earlier ones."""
    n = draw(st.integers(1, 12))
    classes = []
    for i in range(n):
        parents = draw(st.sets(st.integers(0, i - 1), max_size=2)) if i else set()
        classes.append(cls(f"C{i}", *[f"C{j}" for j in sorted(parents)]))
    return classes


@settings(max_examples=60, deadline=None)
@given(forests())
def test_child_relation_mirrors_supertypes(classes):
    p = resolve_project(classes)
    for x in p.classes:
        direct = {r.resolved for r in x.supertypes if r.resolved}
        for y in p.classes:
            assert (x in subclasses_of(p, y)) == (y.qualified_name in direct)
        assert x.qualified_name not in names(ancestors_of(p, x))


@settings(max_examples=40, deadline=None)
@given(forests())
def test_resolution_is_idempotent(classes):
    once = resolve_project(classes)
    twice = resolve_project(list(once.classes))
    assert once == twice
