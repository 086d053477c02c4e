"""Reference computations that share no code with the analyzer.

``prime_reduction_ev`` searches every order of structured-prime reductions
(sequence, if/switch with a common join, while, repeat-until) and returns the
smallest cyclomatic residue.  It is exponential and only meant for small graphs.
"""

from __future__ import annotations

import random
from collections import Counter
from functools import lru_cache

from oodq.model import ExprInfo, Stmt, SwitchCase, walk

Edge = tuple[int, int, bool]  # src, dst, structured


def _freeze(nodes, edges: Counter):
    return frozenset(nodes), tuple(sorted(edges.elements()))


def prime_reduction_ev(nodes, edges, entry: int, exit: int) -> int:
    """Minimum E - N + 2 over all terminal states of prime reduction."""

    @lru_cache(maxsize=None)
    def search(state) -> int:
        ns, es = state
        best = len(es) - len(ns) + 2
        for nxt in _moves(ns, Counter(es), entry, exit):
            best = min(best, search(nxt))
        return best

    return search(_freeze(nodes, Counter(edges)))


def _moves(ns, es: Counter, entry, exit):
    out: dict[int, list[Edge]] = {n: [] for n in ns}
    inn: dict[int, list[Edge]] = {n: [] for n in ns}
    for e in es.elements():
        out[e[0]].append(e)
        inn[e[1]].append(e)

    def single_exit(b, j, entries: int = 1) -> bool:
        return (
            b not in (entry, exit)
            and len(inn[b]) == entries
            and len(out[b]) == 1
            and out[b][0][1] == j
            and out[b][0][2]
        )

    for a in ns:
        # sequence
        if len(out[a]) == 1:
            _, b, ok = out[a][0]
            if ok and b != a and b not in (entry, exit) and len(inn[b]) == 1:
                new = es.copy()
                new[(a, b, ok)] -= 1
                for e in out[b]:
                    new[e] -= 1
                    new[(a, a if e[1] == b else e[1], e[2])] += 1
                yield _freeze(ns - {b}, +new)
        if len(out[a]) < 2 or not all(e[2] for e in out[a]):
            continue
        # branch: every arm is empty or a single-entry single-exit node to j
        joins = {e[1] for e in out[a]}
        joins |= {out[b][0][1] for b in list(joins) if len(out[b]) == 1}
        for j in joins:
            if j == a:
                continue
            arms = Counter(e[1] for e in out[a] if e[1] != j)
            if all(single_exit(b, j, k) and all(e[0] == a for e in inn[b]) for b, k in arms.items()):
                new = es.copy()
                for e in out[a]:
                    new[e] -= 1
                for b in arms:
                    new[out[b][0]] -= 1
                new[(a, j, True)] += 1
                yield _freeze(ns - set(arms), +new)
        # while: one arm returns to a, the other leaves
        if len(out[a]) == 2:
            for body, leave in (out[a], out[a][::-1]):
                if leave[1] == a:
                    continue
                if body[1] == a or single_exit(body[1], a):
                    new = es.copy()
                    new[body] -= 1
                    removed = set()
                    if body[1] != a:
                        new[out[body[1]][0]] -= 1
                        removed.add(body[1])
                    yield _freeze(ns - removed, +new)
    # repeat: b -> c, c -> b | x
    for b in ns:
        if len(out[b]) != 1 or not out[b][0][2]:
            continue
        c = out[b][0][1]
        if c == b or c in (entry, exit) or len(inn[c]) != 1 or len(out[c]) != 2:
            continue
        if not all(e[2] for e in out[c]):
            continue
        backs = [e for e in out[c] if e[1] == b]
        exits = [e for e in out[c] if e[1] not in (b, c)]
        if len(backs) == 1 and len(exits) == 1:
            new = es.copy()
            new[out[b][0]] -= 1
            new[backs[0]] -= 1
            new[exits[0]] -= 1
            new[(b, exits[0][1], True)] += 1
            yield _freeze(ns - {c}, +new)


def oracle_ev(cfg) -> int:
    from oodq.cfg import UNSTRUCTURED

    edges = [(e.src, e.dst, e.label not in UNSTRUCTURED) for e in cfg.edges]
    return prime_reduction_ev(set(cfg.nodes), edges, cfg.entry, cfg.exit)


def tree_decisions(body: list[Stmt], count_operators: bool = True) -> int:
    """Predicate count read straight off the statement tree."""
    total = 0
    for s in walk(body):
        if s.kind in ("if", "if-else", "while", "do-while", "for"):
            total += 1
        elif s.kind == "switch":
            total += sum(c.labels for c in s.cases if not c.is_default)
            total += sum(c.labels - 1 for c in s.cases if c.is_default)
        elif s.kind == "try":
            total += len(s.catches)
        if count_operators:
            total += sum(e.decisions for e in s.exprs())
    return total


# -- random structured programs ---------------------------------------------


def random_structured_body(rng: random.Random, depth: int = 3, width: int = 3) -> list[Stmt]:
    """Nested if/loop/switch/try code with no early exits or fall-through."""
    out = []
    for _ in range(rng.randint(0, width)):
        out.append(_random_stmt(rng, depth))
    return out


def random_jumpy_body(rng: random.Random, depth: int = 3, width: int = 3, in_loop: bool = False) -> list[Stmt]:
    """Like :func:`random_structured_body` but with guarded break/continue/return
    and switch fall-through."""
    out = []
    for _ in range(rng.randint(0, width)):
        r = rng.random()
        if r < 0.25:
            kinds = ["return"] + (["break", "continue"] if in_loop else [])
            out.append(Stmt("if", expr=_expr(rng), body=[Stmt(rng.choice(kinds))]))
        elif depth and r < 0.5:
            kind = rng.choice(["while", "do-while", "for"])
            out.append(Stmt(kind, expr=ExprInfo(), body=random_jumpy_body(rng, depth - 1, 2, True)))
        elif depth and r < 0.6:
            cases = [
                SwitchCase(1, False, [Stmt("expression")] + ([Stmt("break")] if rng.random() < 0.5 else []))
                for _ in range(rng.randint(1, 3))
            ]
            out.append(Stmt("switch", expr=ExprInfo(), cases=cases))
        elif depth and r < 0.8:
            out.append(Stmt("if-else", expr=_expr(rng), body=random_jumpy_body(rng, depth - 1, 2, in_loop),
                            orelse=random_jumpy_body(rng, depth - 1, 2, in_loop)))
        else:
            out.append(_random_stmt(rng, 0))
    return out


def _expr(rng: random.Random) -> ExprInfo:
    return ExprInfo(short_circuit=rng.choice([0, 0, 0, 1, 2]), conditional=rng.choice([0, 0, 0, 1]))


def _random_stmt(rng: random.Random, depth: int) -> Stmt:
    if depth == 0:
        return Stmt("expression", expr=_expr(rng))
    kind = rng.choice(["expression", "if", "if-else", "while", "do-while", "for", "switch", "try", "block"])
    sub = lambda: random_structured_body(rng, depth - 1, 2)  # noqa: E731
    if kind == "expression":
        return Stmt(kind, expr=_expr(rng))
    if kind in ("if", "while", "do-while"):
        return Stmt(kind, expr=_expr(rng), body=sub())
    if kind == "if-else":
        return Stmt(kind, expr=_expr(rng), body=sub(), orelse=sub())
    if kind == "for":
        return Stmt(kind, expr=_expr(rng) if rng.random() < 0.8 else None, body=sub(), update=_expr(rng))
    if kind == "switch":
        cases = []
        for i in range(rng.randint(1, 4)):
            cases.append(SwitchCase(rng.randint(1, 2), False, sub() + [Stmt("break")]))
        if rng.random() < 0.5:
            cases.append(SwitchCase(1, True, sub()))
        return Stmt(kind, expr=_expr(rng), cases=cases)
    if kind == "try":
        from oodq.model import CatchClause

        catches = [CatchClause(body=sub()) for _ in range(rng.randint(0, 2))]
        return Stmt(kind, body=sub(), catches=catches, finalbody=sub() if rng.random() < 0.5 or not catches else None)
    return Stmt("block", body=sub())
