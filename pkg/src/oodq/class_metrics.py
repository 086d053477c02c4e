"""Per-class metric vectors: the 13 threshold-checked class metrics and CK."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Mapping

from .cfg import method_ids
from .loc import comment_rate, statement_count
from .model import ClassModel, ProjectModel, TypeRef, ancestors_of, depth_of_inheritance, subclasses_of, walk

CLASS_METRICS = (
    "cl_comf",
    "cl_comm",
    "cl_data",
    "cl_data_publ",
    "cl_func",
    "cl_func_publ",
    "cl_line",
    "cl_stat",
    "cl_wmc",
    "cu_cdused",
    "cu_cdusers",
    "in_bases",
    "in_noc",
)


@dataclass
class ClassMetricVector:
    cl_comf: float = 0.0
    cl_comm: int = 0
    cl_data: int = 0
    cl_data_publ: int = 0
    cl_func: int = 0
    cl_func_publ: int = 0
    cl_line: int = 0
    cl_stat: int = 0
    cl_wmc: int = 0
    cu_cdused: int = 0
    cu_cdusers: int = 0
    in_bases: int = 0
    in_noc: int = 0

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass
class CKVector:
    wmc: int = 0
    dit: int = 0
    noc: int = 0
    cbo: int = 0
    rfc: int = 0
    lcom: int = 0


def _use_refs(cls: ClassModel, ancestors: frozenset[str] = frozenset()):
    """Type references that count as use.

    Supertypes, catch clauses and calls dispatched to an ancestor (``super``
    calls, inherited statics) belong to inheritance, not use.
    """
    for a in cls.attributes:
        yield a.declared_type
    for m in cls.methods:
        yield from m.parameters
        if m.return_type is not None:
            yield m.return_type
        for s in walk(m.body or []):
            if s.decl_type is not None:
                yield s.decl_type
            for e in s.exprs():
                yield from e.instantiations
                for call in e.calls:
                    ref = call.receiver_type
                    if ref is not None and ref.resolved not in ancestors:
                        yield ref


class ReferenceIndex:
    """Project-wide used/users relation over project classes.

    Built once; read-only afterwards.
    """

    def __init__(self, project: ProjectModel):
        self.used: dict[str, frozenset[str]] = {}
        users: dict[str, set[str]] = {c.qualified_name: set() for c in project.classes}
        for cls in project.classes:
            q = cls.qualified_name
            ancestors = frozenset(a.qualified_name for a in ancestors_of(project, cls))
            refs = _use_refs(cls, ancestors)
            targets = {r.resolved for r in refs if r.resolved is not None and r.resolved != q}
            self.used[q] = frozenset(targets)
            for t in targets:
                users.setdefault(t, set()).add(q)
        self.users = {q: frozenset(s) for q, s in users.items()}


def _index(project: ProjectModel) -> ReferenceIndex:
    idx = getattr(project, "_reference_index", None)
    if idx is None:
        idx = ReferenceIndex(project)
        project._reference_index = idx  # type: ignore[attr-defined]
    return idx


def weighted_methods(cls: ClassModel, complexities: Mapping[str, int]) -> int:
    """Sum of v(G) over concrete methods; methods without a value count 0."""
    return sum(complexities.get(mid, 0) for m, mid in zip(cls.methods, method_ids(cls)) if m.is_concrete)


def class_metrics(cls: ClassModel, project: ProjectModel, complexities: Mapping[str, int]) -> ClassMetricVector:
    idx = _index(project)
    q = cls.qualified_name
    start, end = cls.line_span
    return ClassMetricVector(
        cl_comf=comment_rate(cls.line_tally),
        cl_comm=cls.line_tally.scomm,
        cl_data=len(cls.attributes),
        cl_data_publ=sum(1 for a in cls.attributes if a.visibility == "public"),
        cl_func=len(cls.methods),
        cl_func_publ=sum(1 for m in cls.methods if m.visibility == "public"),
        cl_line=end - start + 1,
        cl_stat=sum(statement_count(m.body) for m in cls.methods),
        cl_wmc=weighted_methods(cls, complexities),
        cu_cdused=len(idx.used.get(q, ())),
        cu_cdusers=len(idx.users.get(q, ())),
        in_bases=len(ancestors_of(project, cls)),
        in_noc=len(subclasses_of(project, cls)),
    )


def attribute_usage(cls: ClassModel, include_static: bool = False) -> list[frozenset[str]]:
    """Instance attributes referenced by each concrete method, by name."""
    fields = {a.name for a in cls.attributes if include_static or not a.is_static}
    usage = []
    for m in cls.methods:
        if not m.is_concrete:
            continue
        names = {n for s in walk(m.body or []) for e in s.exprs() for n in e.names}
        usage.append(frozenset(names & fields))
    return usage


def lack_of_cohesion(usage: list[frozenset[str]]) -> int:
    p = q = 0
    for a, b in combinations(usage, 2):
        if a & b:
            q += 1
        else:
            p += 1
    return max(p - q, 0)


def response_set(cls: ClassModel) -> int:
    own = {m.signature for m in cls.methods}
    q = cls.qualified_name
    external: set[tuple[str, int]] = set()
    for m in cls.methods:
        for call in m.invocations:
            ref: TypeRef | None = call.receiver_type
            on_self = ref is None or ref.resolved == q
            if on_self and (call.target_name, call.arity) in own:
                continue
            if on_self and call.target_name == "<init>" and ref is not None:
                continue
            external.add((call.target_name, call.arity))
    return len(cls.methods) + len(external)


def ck_metrics(
    cls: ClassModel,
    project: ProjectModel,
    complexities: Mapping[str, int],
    unit_wmc: bool = False,
    include_static: bool = False,
) -> CKVector:
    idx = _index(project)
    q = cls.qualified_name
    return CKVector(
        wmc=len(cls.methods) if unit_wmc else weighted_methods(cls, complexities),
        dit=depth_of_inheritance(project, cls),
        noc=len(subclasses_of(project, cls)),
        cbo=len(idx.used.get(q, frozenset()) | idx.users.get(q, frozenset())),
        rfc=response_set(cls),
        lcom=lack_of_cohesion(attribute_usage(cls, include_static)),
    )
