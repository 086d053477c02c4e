"""Language-neutral domain model of an analyzed project.

Every metric in the package reads only these types.  Parsers build
``ClassModel`` values, :func:`resolve_project` links their type references,
and from then on the model is treated as read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import CyclicInheritance, DuplicateClassName

CLASS_KINDS = ("class", "interface", "enum")
VISIBILITIES = ("public", "protected", "package", "private")

# Statement kinds that only group other statements.
GROUPING_KINDS = frozenset({"block", "sequence"})
STATEMENT_KINDS = frozenset(
    {
        "sequence",
        "block",
        "if",
        "if-else",
        "while",
        "do-while",
        "for",
        "switch",
        "try",
        "return",
        "throw",
        "break",
        "continue",
        "expression",
        "local-declaration",
    }
)


@dataclass
class TypeRef:
    """A by-name reference to a type; ``resolved`` holds the qualified name
    of the project class it points to, or None for external types."""

    name: str
    resolved: Optional[str] = None

    @property
    def is_external(self) -> bool:
        return self.resolved is None


@dataclass
class CallSite:
    target_name: str
    arity: int
    # None when the receiver expression could not be typed.
    receiver_type: Optional[TypeRef] = None
    line: int = 0


@dataclass
class ExprInfo:
    """What the metrics need to know about one expression."""

    short_circuit: int = 0
    conditional: int = 0
    calls: list[CallSite] = field(default_factory=list)
    instantiations: list[TypeRef] = field(default_factory=list)
    # Non-local simple names and ``this.x`` field names the expression reads or writes.
    names: list[str] = field(default_factory=list)

    @property
    def decisions(self) -> int:
        return self.short_circuit + self.conditional


@dataclass
class SwitchCase:
    labels: int
    is_default: bool = False
    body: list[Stmt] = field(default_factory=list)


@dataclass
class CatchClause:
    types: list[TypeRef] = field(default_factory=list)
    body: list[Stmt] = field(default_factory=list)


@dataclass
class Stmt:
    """One node of a method's statement tree.

    Field use depends on ``kind``:

    * ``if`` / ``if-else``: ``expr`` is the condition, ``body`` the then
      branch, ``orelse`` the else branch.
    * ``while`` / ``do-while``: ``expr`` condition, ``body`` loop body.
    * ``for``: ``init`` statements, ``expr`` condition (None for ``for(;;)``
      and the iterable for enhanced for), ``update``, ``body``; ``foreach``
      marks the enhanced form, whose loop variable type is ``decl_type``.
    * ``switch``: ``expr`` selector, ``cases``.
    * ``try``: ``body``, ``catches``, ``finalbody`` (None when absent).
    * ``break`` / ``continue``: ``target`` is the label, if any.
    * ``local-declaration``: ``decl_type`` and initializer ``expr``.
    * ``block`` / ``sequence``: ``body``.

    ``label`` names a labeled statement (``outer: while (...)``).
    """

    kind: str
    line: int = 0
    expr: Optional[ExprInfo] = None
    body: list[Stmt] = field(default_factory=list)
    orelse: list[Stmt] = field(default_factory=list)
    init: list[Stmt] = field(default_factory=list)
    update: Optional[ExprInfo] = None
    foreach: bool = False
    cases: list[SwitchCase] = field(default_factory=list)
    catches: list[CatchClause] = field(default_factory=list)
    finalbody: Optional[list[Stmt]] = None
    label: Optional[str] = None
    target: Optional[str] = None
    decl_type: Optional[TypeRef] = None
    declared: list[str] = field(default_factory=list)

    @property
    def labeled(self) -> bool:
        return self.target is not None

    def children(self) -> Iterator[Stmt]:
        yield from self.init
        yield from self.body
        yield from self.orelse
        for case in self.cases:
            yield from case.body
        for catch in self.catches:
            yield from catch.body
        if self.finalbody:
            yield from self.finalbody

    def exprs(self) -> Iterator[ExprInfo]:
        if self.expr is not None:
            yield self.expr
        if self.update is not None:
            yield self.update


def walk(stmts: list[Stmt]) -> Iterator[Stmt]:
    """Pre-order traversal over a statement list."""
    stack = list(reversed(stmts))
    while stack:
        s = stack.pop()
        yield s
        stack.extend(reversed(list(s.children())))


@dataclass
class LineTally:
    sline: int = 0
    scomm: int = 0
    sblank: int = 0
    ssbra: int = 0
    sloc: int = 0
    # Comment-only lines; the remaining comment lines also carry code.
    scomm_only: int = 0

    @property
    def eloc(self) -> int:
        return self.sloc - self.ssbra

    def __add__(self, other: LineTally) -> LineTally:
        return LineTally(
            self.sline + other.sline,
            self.scomm + other.scomm,
            self.sblank + other.sblank,
            self.ssbra + other.ssbra,
            self.sloc + other.sloc,
            self.scomm_only + other.scomm_only,
        )


@dataclass
class AttributeModel:
    name: str
    declared_type: TypeRef
    visibility: str = "package"
    is_static: bool = False


@dataclass
class MethodModel:
    name: str
    parameters: list[TypeRef] = field(default_factory=list)
    return_type: Optional[TypeRef] = None
    visibility: str = "package"
    is_static: bool = False
    is_abstract: bool = False
    is_constructor: bool = False
    body: Optional[list[Stmt]] = None
    invocations: list[CallSite] = field(default_factory=list)
    line_span: tuple[int, int] = (1, 1)

    @property
    def arity(self) -> int:
        return len(self.parameters)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.name, len(self.parameters))

    @property
    def is_concrete(self) -> bool:
        return self.body is not None


@dataclass
class ClassModel:
    qualified_name: str
    kind: str = "class"
    supertypes: list[TypeRef] = field(default_factory=list)
    attributes: list[AttributeModel] = field(default_factory=list)
    methods: list[MethodModel] = field(default_factory=list)
    line_span: tuple[int, int] = (1, 1)
    line_tally: LineTally = field(default_factory=LineTally)
    package: str = ""
    path: str = ""

    @property
    def simple_name(self) -> str:
        return self.qualified_name.rsplit(".", 1)[-1]


@dataclass
class ProjectModel:
    classes: list[ClassModel] = field(default_factory=list)
    name: str = ""
    source_root: str = ""
    # Per-file line tallies, keyed by path relative to source_root.
    file_tallies: dict[str, LineTally] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._index: dict[str, ClassModel] = {}
        self._children: dict[str, list[str]] = {}
        self._reindex()

    def _reindex(self) -> None:
        self._index = {c.qualified_name: c for c in self.classes}
        children: dict[str, list[str]] = {}
        for c in self.classes:
            for ref in c.supertypes:
                if ref.resolved is not None:
                    children.setdefault(ref.resolved, []).append(c.qualified_name)
        self._children = {k: sorted(set(v)) for k, v in children.items()}

    def get(self, qualified_name: str) -> Optional[ClassModel]:
        return self._index.get(qualified_name)

    def __contains__(self, qualified_name: str) -> bool:
        return qualified_name in self._index

    def parents(self, cls: ClassModel) -> list[ClassModel]:
        """Direct resolved supertypes, declaration order, deduplicated."""
        seen: list[str] = []
        for ref in cls.supertypes:
            if ref.resolved is not None and ref.resolved not in seen:
                seen.append(ref.resolved)
        return [self._index[q] for q in seen]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProjectModel):
            return NotImplemented
        return (
            self.classes == other.classes
            and self.name == other.name
            and self.source_root == other.source_root
            and self.file_tallies == other.file_tallies
        )


def iter_typerefs(cls: ClassModel) -> Iterator[TypeRef]:
    """Every TypeRef reachable from a class, including statement trees."""
    yield from cls.supertypes
    for a in cls.attributes:
        yield a.declared_type
    for m in cls.methods:
        yield from m.parameters
        if m.return_type is not None:
            yield m.return_type
        for call in m.invocations:
            if call.receiver_type is not None:
                yield call.receiver_type
        for s in walk(m.body or []):
            if s.decl_type is not None:
                yield s.decl_type
            for c in s.catches:
                yield from c.types
            for e in s.exprs():
                yield from e.instantiations
                for call in e.calls:
                    if call.receiver_type is not None:
                        yield call.receiver_type


class _Resolver:
    def __init__(self, classes: list[ClassModel]):
        self.by_qname = {c.qualified_name: c for c in classes}
        # Every dotted suffix of a qualified name maps to the classes it could denote.
        self.by_suffix: dict[str, list[ClassModel]] = {}
        for c in classes:
            parts = c.qualified_name.split(".")
            for i in range(len(parts)):
                self.by_suffix.setdefault(".".join(parts[i:]), []).append(c)

    def resolve(self, name: str, context: ClassModel) -> Optional[str]:
        if name in self.by_qname:
            return name
        candidates = self.by_suffix.get(name, [])
        if len(candidates) == 1:
            return candidates[0].qualified_name
        if len(candidates) > 1:
            # Nested classes of the referencing class win, then same package.
            inner = [c for c in candidates if c.qualified_name == f"{context.qualified_name}.{name}"]
            if len(inner) == 1:
                return inner[0].qualified_name
            local = [c for c in candidates if c.package == context.package]
            if len(local) == 1:
                return local[0].qualified_name
        return None


def resolve_project(
    classes: list[ClassModel],
    name: str = "",
    source_root: str = "",
    file_tallies: Optional[dict[str, LineTally]] = None,
) -> ProjectModel:
    """Link every TypeRef to a project class where the name is unambiguous.

    Raises DuplicateClassName or CyclicInheritance.
    """
    seen: set[str] = set()
    for c in classes:
        if c.qualified_name in seen:
            raise DuplicateClassName(c.qualified_name)
        seen.add(c.qualified_name)

    resolver = _Resolver(classes)
    for c in classes:
        for ref in iter_typerefs(c):
            ref.resolved = resolver.resolve(ref.name, c)
        if c.kind == "enum":
            c.supertypes = []

    _check_acyclic(classes)
    return ProjectModel(
        classes=list(classes),
        name=name,
        source_root=source_root,
        file_tallies=dict(file_tallies or {}),
    )


def _check_acyclic(classes: list[ClassModel]) -> None:
    index = {c.qualified_name: c for c in classes}
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    for root in sorted(index):
        if state.get(root) == 2:
            continue
        # Iterative DFS keeping the current path for cycle reporting.
        path: list[str] = []
        stack: list[tuple[str, Iterator[str]]] = []

        def push(q: str) -> None:
            state[q] = 1
            path.append(q)
            parents = [r.resolved for r in index[q].supertypes if r.resolved is not None]
            stack.append((q, iter(parents)))

        push(root)
        while stack:
            q, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[q] = 2
                path.pop()
                stack.pop()
            elif state.get(nxt) == 1:
                raise CyclicInheritance(path[path.index(nxt):])
            elif state.get(nxt) is None:
                push(nxt)


def subclasses_of(project: ProjectModel, cls: ClassModel) -> list[ClassModel]:
    """Direct children, sorted by qualified name."""
    return [project._index[q] for q in project._children.get(cls.qualified_name, [])]


def ancestors_of(project: ProjectModel, cls: ClassModel) -> list[ClassModel]:
    """Transitive resolved supertypes (classes and interfaces), sorted by name."""
    found: dict[str, ClassModel] = {}
    stack = project.parents(cls)
    while stack:
        c = stack.pop()
        if c.qualified_name in found or c.qualified_name == cls.qualified_name:
            continue
        found[c.qualified_name] = c
        stack.extend(project.parents(c))
    return [found[q] for q in sorted(found)]


def descendants_of(project: ProjectModel, cls: ClassModel) -> list[ClassModel]:
    found: dict[str, ClassModel] = {}
    stack = subclasses_of(project, cls)
    while stack:
        c = stack.pop()
        if c.qualified_name in found:
            continue
        found[c.qualified_name] = c
        stack.extend(subclasses_of(project, c))
    return [found[q] for q in sorted(found)]


def depth_of_inheritance(project: ProjectModel, cls: ClassModel, _memo: Optional[dict] = None) -> int:
    """Length in edges of the longest resolved ancestor chain."""
    memo = _memo if _memo is not None else {}
    q = cls.qualified_name
    if q not in memo:
        parents = project.parents(cls)
        memo[q] = 1 + max(depth_of_inheritance(project, p, memo) for p in parents) if parents else 0
    return memo[q]
