from __future__ import annotations

import json

import pytest

from oodq.errors import DuplicateClassName, SchemaViolation
from oodq.interchange import emit_class_model_json, load_class_model_json
from oodq.java import parse_source_tree


def test_empty_document_gives_empty_project():
    assert load_class_model_json('{"classes": []}').classes == []


def test_round_trip_of_audit_fixture(fixtures):
    project, _ = parse_source_tree(fixtures / "audit15")
    text = emit_class_model_json(project)
    again = load_class_model_json(text)
    assert again == project
    assert emit_class_model_json(again) == text


def test_duplicate_classes_rejected():
    doc = {"classes": [{"qualified_name": "A"}, {"qualified_name": "A"}]}
    with pytest.raises(DuplicateClassName):
        load_class_model_json(json.dumps(doc))


@pytest.mark.parametrize(
    "doc, where",
    [
        ({"classes": [{"qualified_name": "A", "kind": "struct"}]}, "/classes/0/kind"),
        ({"classes": [{"qualified_name": "A", "line_span": [5, 2]}]}, "/classes/0/line_span"),
        ({"classes": [{"qualified_name": "A", "bogus": 1}]}, "/classes/0"),
        (
            {"classes": [{"qualified_name": "A", "attributes": [
                {"name": "x", "declared_type": {"name": "int"}},
                {"name": "x", "declared_type": {"name": "int"}},
            ]}]},
            "/classes/0/attributes/1/name",
        ),
    ],
)
def test_schema_violations_carry_a_pointer(doc, where):
    with pytest.raises(SchemaViolation) as info:
        load_class_model_json(json.dumps(doc))
    assert info.value.location == where


def test_invalid_json_is_a_schema_violation():
    with pytest.raises(SchemaViolation):
        load_class_model_json("{not json")
