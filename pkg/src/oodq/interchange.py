"""Neutral JSON interchange format for class models."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from .codec import from_jsonable, to_jsonable
from .errors import SchemaViolation
from .model import ClassModel, LineTally, ProjectModel, resolve_project

SCHEMA_VERSION = 1


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict[str, Any]:
    text = resources.files("oodq.schemas").joinpath(name).read_text(encoding="utf-8")
    return json.loads(text)


def validate(doc: Any, schema_name: str) -> None:
    schema = load_schema(schema_name)
    validator = jsonschema.Draft202012Validator(schema)
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise SchemaViolation(_pointer(error.absolute_path), error.message)


def _pointer(path: Any) -> str:
    return "".join(f"/{p}" for p in path)


def project_to_dict(project: ProjectModel) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "name": project.name,
        "source_root": project.source_root,
        "file_tallies": {k: to_jsonable(v) for k, v in sorted(project.file_tallies.items())},
        "classes": [to_jsonable(c, omit_defaults=True) for c in project.classes],
    }


def emit_class_model_json(project: ProjectModel) -> str:
    return json.dumps(project_to_dict(project), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def load_class_model_json(doc: str) -> ProjectModel:
    """Parse, validate and resolve an interchange document.

    Raises SchemaViolation (with a JSON-pointer location) or
    DuplicateClassName / CyclicInheritance from resolution.
    """
    try:
        data = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("", f"invalid JSON: {exc}") from exc
    validate(data, "class_model.schema.json")

    classes = []
    for i, raw in enumerate(data["classes"]):
        cls = from_jsonable(ClassModel, raw)
        _check_class(cls, f"/classes/{i}")
        classes.append(cls)
    tallies = {k: from_jsonable(LineTally, v) for k, v in data.get("file_tallies", {}).items()}
    return resolve_project(
        classes,
        name=data.get("name", ""),
        source_root=data.get("source_root", ""),
        file_tallies=tallies,
    )


def _check_class(cls: ClassModel, where: str) -> None:
    start, end = cls.line_span
    if start > end:
        raise SchemaViolation(f"{where}/line_span", "start line after end line")
    names: set[str] = set()
    for j, attr in enumerate(cls.attributes):
        if attr.name in names:
            raise SchemaViolation(f"{where}/attributes/{j}/name", f"attribute {attr.name!r} repeats")
        names.add(attr.name)
    for j, m in enumerate(cls.methods):
        if m.is_abstract and m.body is not None:
            raise SchemaViolation(f"{where}/methods/{j}/body", "abstract method has a body")
