"""Dataclass <-> JSON-compatible value conversion driven by type hints."""

from __future__ import annotations

import dataclasses
import math
import sys
import types
import typing
from functools import lru_cache
from typing import Any, Union


def to_jsonable(obj: Any, omit_defaults: bool = False) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {}
        for f in dataclasses.fields(obj):
            value = getattr(obj, f.name)
            if omit_defaults and _is_default(f, value):
                continue
            out[f.name] = to_jsonable(value, omit_defaults)
        return out
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, omit_defaults) for v in obj]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, omit_defaults) for k, v in obj.items()}
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def _is_default(f: dataclasses.Field, value: Any) -> bool:
    if f.default is not dataclasses.MISSING:
        return value == f.default
    if f.default_factory is not dataclasses.MISSING:  # type: ignore[misc]
        return value == f.default_factory()  # type: ignore[misc]
    return False


@lru_cache(maxsize=None)
def _hints(cls: type) -> dict[str, Any]:
    module = sys.modules[cls.__module__]
    return typing.get_type_hints(cls, vars(module))


def from_jsonable(tp: Any, data: Any) -> Any:
    """Rebuild a value of type ``tp`` from :func:`to_jsonable` output."""
    origin = typing.get_origin(tp)
    if origin is Union or (hasattr(types, "UnionType") and origin is getattr(types, "UnionType")):
        args = [a for a in typing.get_args(tp) if a is not type(None)]
        if data is None:
            return None
        return from_jsonable(args[0], data)
    if dataclasses.is_dataclass(tp):
        hints = _hints(tp)
        kwargs = {}
        for f in dataclasses.fields(tp):
            if f.name in data:
                kwargs[f.name] = from_jsonable(hints[f.name], data[f.name])
        return tp(**kwargs)
    if origin is list:
        (item,) = typing.get_args(tp)
        return [from_jsonable(item, v) for v in data]
    if origin is tuple:
        args = typing.get_args(tp)
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(from_jsonable(args[0], v) for v in data)
        return tuple(from_jsonable(a, v) for a, v in zip(args, data))
    if origin is dict:
        _, val = typing.get_args(tp)
        return {k: from_jsonable(val, v) for k, v in data.items()}
    if tp is float:
        return float(data)  # also accepts "inf" / "-inf"
    if tp is Any:
        return data
    return data
