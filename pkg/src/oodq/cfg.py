"""Control-flow graphs and the cyclomatic, essential and design complexities.

Graphs are multigraphs: a switch whose cases share a target, or an ``if``
with an empty branch, produces parallel edges.  Edges created by a
break/continue/return/throw that leaves a construct early are labeled
``jump``; control falling from one switch case into the next is labeled
``fallthrough``.  Those two labels mark the edges that make a region
unstructured, and no structured reduction may consume them.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import DomainError, MalformedBody
from .model import CallSite, ClassModel, ExprInfo, MethodModel, ProjectModel, Stmt, TypeRef, ancestors_of

UNSTRUCTURED = frozenset({"jump", "fallthrough"})

QUADRANTS = (
    "reliable_maintainable",
    "reliable_unmaintainable",
    "unreliable_maintainable",
    "unreliable_unmaintainable",
)
V_THRESHOLD = 10
EV_THRESHOLD = 4
IV_THRESHOLD = 7


@dataclass
class Node:
    id: int
    kind: str  # entry | exit | stmt | decision
    line: int = 0
    stmt: str = ""
    calls: list[CallSite] = field(default_factory=list)
    instantiations: list[TypeRef] = field(default_factory=list)


@dataclass
class Edge:
    src: int
    dst: int
    label: str = "seq"


@dataclass
class ControlFlowGraph:
    nodes: dict[int, Node]
    edges: list[Edge]
    entry: int
    exit: int
    diagnostics: list[str] = field(default_factory=list)

    def out_edges(self, n: int) -> list[Edge]:
        return [e for e in self.edges if e.src == n]

    def in_edges(self, n: int) -> list[Edge]:
        return [e for e in self.edges if e.dst == n]

    def successors(self) -> dict[int, list[int]]:
        succ: dict[int, list[int]] = {n: [] for n in self.nodes}
        for e in self.edges:
            succ[e.src].append(e.dst)
        return succ

    def decision_count(self) -> int:
        out = defaultdict(int)
        for e in self.edges:
            out[e.src] += 1
        return sum(max(d - 1, 0) for d in out.values())


# -- construction ------------------------------------------------------------

_EXIT = object()
Pending = list[tuple[int, str]]


@dataclass
class _Target:
    kind: str  # loop | switch | block
    label: Optional[str]
    break_token: object
    continue_token: object = None
    breaks: Pending = field(default_factory=list)
    continues: Pending = field(default_factory=list)


class _Builder:
    def __init__(self, count_operators: bool):
        self.count_operators = count_operators
        self.nodes: dict[int, Node] = {}
        self.edges: list[Edge] = []
        self.targets: list[_Target] = []
        self.diagnostics: list[str] = []

    def node(self, kind: str, line: int = 0, stmt: str = "", preds: Pending = ()) -> int:
        n = len(self.nodes)
        self.nodes[n] = Node(n, kind, line, stmt)
        self.connect(preds, n)
        return n

    def connect(self, preds: Iterable[tuple[int, str]], dst: int) -> None:
        for src, label in preds:
            self.edges.append(Edge(src, dst, label))

    def chain(self, exprs: list[Optional[ExprInfo]], preds: Pending, kind: str, line: int, stmt: str) -> tuple[int, int]:
        """Lower operator decisions of ``exprs`` then a node of ``kind``.

        Each short-circuit or conditional operator becomes a two-way branch
        that rejoins before the statement node.  Returns (first, last) node.
        """
        exprs = [e for e in exprs if e is not None]
        first = None
        if self.count_operators:
            for _ in range(sum(e.decisions for e in exprs)):
                d = self.node("decision", line, "operator", preds)
                first = d if first is None else first
                preds = [(d, "true"), (d, "false")]
        n = self.node(kind, line, stmt, preds)
        for e in exprs:
            self.nodes[n].calls.extend(e.calls)
            self.nodes[n].instantiations.extend(e.instantiations)
        return (n if first is None else first), n

    def stmts(self, body: list[Stmt], preds: Pending, cont: object) -> Pending:
        for i, s in enumerate(body):
            if not preds:
                self.diagnostics.append(f"line {s.line}: unreachable statement dropped")
                break
            preds = self.stmt(s, preds, cont if i == len(body) - 1 else object())
        return preds

    def stmt(self, s: Stmt, preds: Pending, cont: object) -> Pending:
        if s.label is not None and s.kind not in ("while", "do-while", "for"):
            target = _Target("block", s.label, cont)
            self.targets.append(target)
            try:
                out = self._stmt(s, preds, cont)
            finally:
                self.targets.pop()
            return out + target.breaks
        return self._stmt(s, preds, cont)

    def _stmt(self, s: Stmt, preds: Pending, cont: object) -> Pending:
        k = s.kind
        if k in ("expression", "local-declaration"):
            _, n = self.chain([s.expr], preds, "stmt", s.line, k)
            return [(n, "seq")]
        if k in ("block", "sequence"):
            return self.stmts(s.body, preds, cont)
        if k in ("if", "if-else"):
            _, c = self.chain([s.expr], preds, "decision", s.line, k)
            out = self.stmts(s.body, [(c, "true")], cont)
            if k == "if-else":
                return out + self.stmts(s.orelse, [(c, "false")], cont)
            return out + [(c, "false")]
        if k == "while":
            target = self._loop(s, cont)
            first, h = self.chain([s.expr], preds, "decision", s.line, k)
            out = self._loop_body(s, target, [(h, "true")])
            self.connect(out + target.continues, first)
            return [(h, "false")] + target.breaks
        if k == "do-while":
            target = self._loop(s, cont)
            d = self.node("stmt", s.line, "do", preds)
            out = self._loop_body(s, target, [(d, "seq")])
            back = out + target.continues
            if not back:
                self.diagnostics.append(f"line {s.line}: do-while condition unreachable")
                return target.breaks
            _, c = self.chain([s.expr], back, "decision", s.line, k)
            self.edges.append(Edge(c, d, "true"))
            return [(c, "false")] + target.breaks
        if k == "for":
            preds = self.stmts(s.init, preds, object())
            if not preds:
                return []
            target = self._loop(s, cont)
            first, h = self.chain([s.expr], preds, "decision", s.line, k)
            out = self._loop_body(s, target, [(h, "true")])
            back = out + target.continues
            if s.update is not None and back:
                _, u = self.chain([s.update], back, "stmt", s.line, "for-update")
                back = [(u, "seq")]
            self.connect(back, first)
            return [(h, "false")] + target.breaks
        if k == "switch":
            return self._switch(s, preds, cont)
        if k == "try":
            return self._try(s, preds, cont)
        if k in ("return", "throw"):
            _, n = self.chain([s.expr], preds, "stmt", s.line, k)
            self.edges.append(Edge(n, -1, "seq" if cont is _EXIT else "jump"))
            return []
        if k in ("break", "continue"):
            target = self._find_target(s)
            n = self.node("stmt", s.line, k, preds)
            if k == "break":
                target.breaks.append((n, "seq" if cont is target.break_token else "jump"))
            else:
                target.continues.append((n, "seq" if cont is target.continue_token else "jump"))
            return []
        raise MalformedBody(f"unknown statement kind {k!r}", s.line)

    def _loop(self, s: Stmt, cont: object) -> _Target:
        return _Target("loop", s.label, cont, object())

    def _loop_body(self, s: Stmt, target: _Target, preds: Pending) -> Pending:
        self.targets.append(target)
        try:
            return self.stmts(s.body, preds, target.continue_token)
        finally:
            self.targets.pop()

    def _find_target(self, s: Stmt) -> _Target:
        for t in reversed(self.targets):
            if s.target is not None:
                if t.label == s.target and (s.kind == "break" or t.kind == "loop"):
                    return t
            elif t.kind == "loop" or (s.kind == "break" and t.kind == "switch"):
                return t
        what = f"{s.kind} {s.target}" if s.target else s.kind
        raise MalformedBody(f"line {s.line}: '{what}' has no enclosing target", s.line)

    def _switch(self, s: Stmt, preds: Pending, cont: object) -> Pending:
        _, head = self.chain([s.expr], preds, "decision", s.line, "switch")
        target = _Target("switch", s.label, cont)
        self.targets.append(target)
        try:
            carry: Pending = []
            for i, case in enumerate(s.cases):
                entry = [(head, "case")] * case.labels + carry
                last = i == len(s.cases) - 1
                if not case.body and not last:
                    carry = entry
                    continue
                out = self.stmts(case.body, entry, cont)
                carry = out if last else [(src, "fallthrough") for src, _ in out]
            out = carry
        finally:
            self.targets.pop()
        if not any(c.is_default for c in s.cases):
            out = out + [(head, "case")]
        return out + target.breaks

    def _try(self, s: Stmt, preds: Pending, cont: object) -> Pending:
        inner_cont = cont if s.finalbody is None else object()
        if s.catches:
            # Exception edges leave a dispatch node at region entry.
            d = self.node("decision", s.line, "try", preds)
            out = self.stmts(s.body, [(d, "seq")], inner_cont)
            for catch in s.catches:
                out = out + self.stmts(catch.body, [(d, "exception")], inner_cont)
        else:
            out = self.stmts(s.body, preds, inner_cont)
        if s.finalbody is not None and out:
            out = self.stmts(s.finalbody, out, cont)
        return out


def build_cfg(body: list[Stmt], count_operators: bool = True) -> ControlFlowGraph:
    """Lower a statement tree to a basic-block CFG.

    Raises MalformedBody for a break/continue without a target.
    """
    b = _Builder(count_operators)
    entry = b.node("entry")
    out = b.stmts(body, [(entry, "seq")], _EXIT)
    exit_ = b.node("exit", preds=out)
    for e in b.edges:
        if e.dst == -1:
            e.dst = exit_
    cfg = ControlFlowGraph(b.nodes, b.edges, entry, exit_, b.diagnostics)
    return _basic_blocks(cfg)


def _basic_blocks(cfg: ControlFlowGraph) -> ControlFlowGraph:
    """Merge straight-line chains into single nodes."""
    nodes = dict(cfg.nodes)
    edges = list(cfg.edges)
    changed = True
    while changed:
        changed = False
        outs: dict[int, list[Edge]] = defaultdict(list)
        ins: dict[int, list[Edge]] = defaultdict(list)
        for e in edges:
            outs[e.src].append(e)
            ins[e.dst].append(e)
        for e in edges:
            u, w = e.src, e.dst
            if u == w or u == cfg.entry or w == cfg.exit or len(outs[u]) != 1 or len(ins[w]) != 1:
                continue
            head, tail = nodes[u], nodes[w]
            head.calls = head.calls + tail.calls
            head.instantiations = head.instantiations + tail.instantiations
            if tail.kind == "decision":
                head.kind, head.stmt = "decision", tail.stmt
            edges.remove(e)
            for o in outs[w]:
                o.src = u
            del nodes[w]
            changed = True
            break
    ids = {old: new for new, old in enumerate(sorted(nodes))}
    renumbered = {ids[k]: Node(ids[k], n.kind, n.line, n.stmt, n.calls, n.instantiations) for k, n in nodes.items()}
    return ControlFlowGraph(
        renumbered,
        [Edge(ids[e.src], ids[e.dst], e.label) for e in edges],
        ids[cfg.entry],
        ids[cfg.exit],
        cfg.diagnostics,
    )


def cyclomatic(cfg: ControlFlowGraph) -> int:
    return len(cfg.edges) - len(cfg.nodes) + 2


# -- essential complexity ----------------------------------------------------


class _Graph:
    """Mutable multigraph used by the reductions."""

    def __init__(self, cfg: ControlFlowGraph):
        self.entry, self.exit = cfg.entry, cfg.exit
        self.nodes = set(cfg.nodes)
        self.edges: dict[int, tuple[int, int, bool]] = {
            i: (e.src, e.dst, e.label not in UNSTRUCTURED) for i, e in enumerate(cfg.edges)
        }
        self._next = len(self.edges)
        self.out: dict[int, set[int]] = {n: set() for n in self.nodes}
        self.inn: dict[int, set[int]] = {n: set() for n in self.nodes}
        for i, (s, d, _) in self.edges.items():
            self.out[s].add(i)
            self.inn[d].add(i)

    def add(self, s: int, d: int, ok: bool) -> None:
        i = self._next
        self._next += 1
        self.edges[i] = (s, d, ok)
        self.out[s].add(i)
        self.inn[d].add(i)

    def drop(self, i: int) -> None:
        s, d, _ = self.edges.pop(i)
        self.out[s].discard(i)
        self.inn[d].discard(i)

    def drop_node(self, n: int) -> None:
        for i in list(self.out[n] | self.inn[n]):
            if i in self.edges:
                self.drop(i)
        self.nodes.discard(n)
        del self.out[n], self.inn[n]

    def cyclomatic(self) -> int:
        return len(self.edges) - len(self.nodes) + 2


def _reduce_structured(g: _Graph) -> bool:
    """Apply one structured-prime reduction; False when none applies."""

    def arm_ok(b: int, j: int, entries: int, head: int) -> bool:
        # single-entry single-exit region between ``head`` and ``j``
        if b in (g.entry, g.exit) or len(g.inn[b]) != entries or len(g.out[b]) != 1:
            return False
        _, d, ok = g.edges[next(iter(g.out[b]))]
        return ok and d == j and all(g.edges[i][0] == head for i in g.inn[b])

    for n in sorted(g.nodes):
        outs = [g.edges[i] + (i,) for i in g.out[n]]
        # sequence
        if len(outs) == 1:
            _, w, ok, i = outs[0]
            if ok and w != n and w not in (g.exit, g.entry) and len(g.inn[w]) == 1:
                g.drop(i)
                for j in list(g.out[w]):
                    _, d, ok2 = g.edges[j]
                    g.drop(j)
                    g.add(n, n if d == w else d, ok2)
                g.drop_node(w)
                return True
            continue
        if len(outs) < 2 or not all(ok for _, _, ok, _ in outs):
            continue
        arms: dict[int, int] = defaultdict(int)
        for _, d, _, _ in outs:
            arms[d] += 1
        # if/switch: every arm is empty or one region, all meeting at j
        joins = set(arms)
        for b in list(arms):
            if len(g.out[b]) == 1:
                joins.add(g.edges[next(iter(g.out[b]))][1])
        for j in sorted(joins):
            if j == n:
                continue
            regions = {b: k for b, k in arms.items() if b != j}
            if all(arm_ok(b, j, k, n) for b, k in regions.items()):
                for *_, i in outs:
                    g.drop(i)
                for b in regions:
                    g.drop_node(b)
                g.add(n, j, True)
                return True
        # loop: one arm comes back to n, the other leaves
        if len(outs) == 2:
            for body, leave in ((outs[0], outs[1]), (outs[1], outs[0])):
                if leave[1] == n:
                    continue
                if body[1] == n:
                    g.drop(body[3])
                    return True
                if arm_ok(body[1], n, 1, n):
                    g.drop_node(body[1])
                    return True
    return False


def essential(cfg: ControlFlowGraph) -> int:
    """Cyclomatic number of the graph left after structured reduction."""
    g = _Graph(cfg)
    while _reduce_structured(g):
        pass
    return g.cyclomatic()


# -- design complexity -------------------------------------------------------


def is_internal_call(call: CallSite, owner: Optional[ClassModel], project: ProjectModel) -> bool:
    """Whether a call resolves to a method declared by a project class.

    A resolved receiver must declare (or inherit) the name and arity; an
    unknown receiver matches any project declaration.
    """
    ref = call.receiver_type
    if ref is None:
        return (call.target_name, call.arity) in _signature_index(project)
    if ref.resolved is None or ref.resolved not in project:
        return False
    if call.target_name == "<init>":
        return True
    return (call.target_name, call.arity) in _visible_signatures(project, ref.resolved)


def _caches(project: ProjectModel) -> dict:
    cache = getattr(project, "_call_caches", None)
    if cache is None:
        cache = {"visible": {}}
        project._call_caches = cache  # type: ignore[attr-defined]
    return cache


def _signature_index(project: ProjectModel) -> frozenset[tuple[str, int]]:
    cache = _caches(project)
    if "all" not in cache:
        cache["all"] = frozenset(m.signature for c in project.classes for m in c.methods)
    return cache["all"]


def _visible_signatures(project: ProjectModel, qualified_name: str) -> frozenset[tuple[str, int]]:
    visible = _caches(project)["visible"]
    if qualified_name not in visible:
        cls = project.get(qualified_name)
        visible[qualified_name] = frozenset(
            m.signature for c in [cls] + ancestors_of(project, cls) for m in c.methods
        )
    return visible[qualified_name]


def marked_nodes(cfg: ControlFlowGraph, project: ProjectModel, owner: Optional[ClassModel] = None) -> set[int]:
    marked = set()
    for n, node in cfg.nodes.items():
        if any(is_internal_call(c, owner, project) for c in node.calls) or any(
            t.resolved is not None for t in node.instantiations
        ):
            marked.add(n)
    return marked


def design_complexity(cfg: ControlFlowGraph, project: ProjectModel, owner: Optional[ClassModel] = None) -> int:
    """Cyclomatic number after removing control structure that governs no
    call to a project-internal method."""
    return design_reduce(cfg, marked_nodes(cfg, project, owner))


def design_reduce(cfg: ControlFlowGraph, marked: set[int]) -> int:
    """Decisions that no marked node depends on (directly or through a nested
    decision) branch straight to their post-dominator; the remaining graph is
    then simplified without changing what the marked nodes depend on."""
    succ: dict[int, list[int]] = {n: [] for n in cfg.nodes}
    for e in cfg.edges:
        succ[e.src].append(e.dst)
    ipdom = postdominators(cfg)
    deps: dict[int, set[int]] = defaultdict(set)
    for u, targets in succ.items():
        if len(set(targets)) < 2:
            continue
        for s in set(targets):
            runner = s
            while runner != ipdom[u] and runner is not None:
                deps[u].add(runner)
                runner = ipdom[runner]
    relevant: set[int] = set()
    changed = True
    while changed:
        changed = False
        for u, ds in deps.items():
            if u not in relevant and ds & (marked | relevant):
                relevant.add(u)
                changed = True
    edges = []
    for e in cfg.edges:
        if e.src in deps and e.src not in relevant:
            continue
        edges.append(e)
    for u in deps:
        if u not in relevant:
            edges.append(Edge(u, ipdom[u], "seq"))
    reach = {cfg.entry}
    stack = [cfg.entry]
    adj: dict[int, list[int]] = defaultdict(list)
    for e in edges:
        adj[e.src].append(e.dst)
    while stack:
        for d in adj[stack.pop()]:
            if d not in reach:
                reach.add(d)
                stack.append(d)
    pruned = ControlFlowGraph(
        {n: node for n, node in cfg.nodes.items() if n in reach},
        [e for e in edges if e.src in reach],
        cfg.entry,
        cfg.exit,
    )
    g = _Graph(pruned)
    while _reduce_design(g, marked):
        pass
    return g.cyclomatic()


def postdominators(cfg: ControlFlowGraph) -> dict[int, Optional[int]]:
    """Immediate post-dominator of every node; the exit maps to None."""
    preds: dict[int, list[int]] = {n: [] for n in cfg.nodes}
    succ: dict[int, list[int]] = {n: [] for n in cfg.nodes}
    for e in cfg.edges:
        succ[e.src].append(e.dst)
        preds[e.dst].append(e.src)
    # reverse postorder of the reversed graph, rooted at exit
    order: list[int] = []
    seen = {cfg.exit}
    stack = [(cfg.exit, iter(preds[cfg.exit]))]
    while stack:
        n, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            order.append(n)
            stack.pop()
        elif nxt not in seen:
            seen.add(nxt)
            stack.append((nxt, iter(preds[nxt])))
    order.reverse()
    index = {n: i for i, n in enumerate(order)}
    idom: dict[int, Optional[int]] = {cfg.exit: cfg.exit}

    def intersect(a: int, b: int) -> int:
        while a != b:
            while index[a] > index[b]:
                a = idom[a]
            while index[b] > index[a]:
                b = idom[b]
        return a

    changed = True
    while changed:
        changed = False
        for n in order[1:]:
            done = [s for s in succ[n] if s in idom]
            if not done:
                continue
            new = done[0]
            for s in done[1:]:
                new = intersect(s, new)
            if idom.get(n) != new:
                idom[n] = new
                changed = True
    idom[cfg.exit] = None
    return idom


def _reduce_design(g: _Graph, marked: set[int]) -> bool:
    for n in sorted(g.nodes):
        outs = [g.edges[i] + (i,) for i in g.out[n]]
        # unmarked node with a single successor disappears into it
        if n not in marked and n not in (g.entry, g.exit) and len(outs) == 1 and outs[0][1] != n:
            _, w, _, i = outs[0]
            g.drop(i)
            for j in list(g.inn[n]):
                s, _, ok = g.edges[j]
                g.drop(j)
                g.add(s, w, ok)
            g.drop_node(n)
            return True
        by_target: dict[int, list[int]] = defaultdict(list)
        for _, d, _, i in outs:
            by_target[d].append(i)
        for d, ids in sorted(by_target.items()):
            if len(ids) > 1 and d != n:
                for i in ids[1:]:
                    g.drop(i)
                return True
            if d == n and n not in marked:
                g.drop(ids[0])
                return True
    return False


# -- per-method driver -------------------------------------------------------


@dataclass
class MethodComplexity:
    method_id: str
    v: int
    ev: int
    iv: int
    quadrant: str = ""


def method_id(cls: ClassModel, m: MethodModel) -> str:
    params = ",".join(p.name for p in m.parameters)
    return f"{cls.qualified_name}.{m.name}({params})"


def method_ids(cls: ClassModel) -> list[str]:
    """Ids aligned with ``cls.methods``; repeats (e.g. ``f(int)`` and
    ``f(int[])`` after array stripping) get a ``#n`` suffix."""
    seen: dict[str, int] = defaultdict(int)
    out = []
    for m in cls.methods:
        base = method_id(cls, m)
        seen[base] += 1
        out.append(base if seen[base] == 1 else f"{base}#{seen[base]}")
    return out


def method_complexity(
    cls: ClassModel,
    m: MethodModel,
    project: ProjectModel,
    count_operators: bool = True,
    mid: Optional[str] = None,
) -> tuple[MethodComplexity, ControlFlowGraph]:
    cfg = build_cfg(m.body or [], count_operators)
    v = cyclomatic(cfg)
    ev = essential(cfg)
    iv = design_complexity(cfg, project, cls)
    return MethodComplexity(mid or method_id(cls, m), v, ev, iv, scatter_quadrant(v, ev)), cfg


def scatter_quadrant(v: int, ev: int) -> str:
    """Quadrant of a (v, ev) point with boundaries v = 10 and ev = 4."""
    if ev > v:
        raise DomainError(f"essential complexity {ev} exceeds cyclomatic {v}")
    if ev <= EV_THRESHOLD:
        return "reliable_maintainable" if v <= V_THRESHOLD else "reliable_unmaintainable"
    return "unreliable_maintainable" if v <= V_THRESHOLD else "unreliable_unmaintainable"
