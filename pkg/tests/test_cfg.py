from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from oodq.cfg import (
    UNSTRUCTURED,
    build_cfg,
    cyclomatic,
    design_complexity,
    essential,
    method_complexity,
    scatter_quadrant,
)
from oodq.errors import DomainError, MalformedBody
from oodq.model import ExprInfo, ProjectModel, Stmt
from oodq.java import parse_source_tree

from conftest import method_body, parse_java
from oracles import oracle_ev, random_jumpy_body, random_structured_body, tree_decisions


def cfg_of(src: str, name: str = "A.m", count_operators: bool = True):
    p = parse_java(src)
    return build_cfg(method_body(p, name), count_operators), p


def metrics(src: str, name: str = "A.m"):
    p = parse_java(src)
    cls_name, m_name = name.rsplit(".", 1)
    cls = p.get(cls_name)
    m = next(m for m in cls.methods if m.name == m_name)
    return method_complexity(cls, m, p)[0]


def reachable(cfg, start, forward=True):
    seen, stack = {start}, [start]
    while stack:
        n = stack.pop()
        for e in cfg.edges:
            a, b = (e.src, e.dst) if forward else (e.dst, e.src)
            if a == n and b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def check_invariants(cfg):
    assert reachable(cfg, cfg.entry) == set(cfg.nodes)
    assert reachable(cfg, cfg.exit, forward=False) == set(cfg.nodes)
    assert not cfg.out_edges(cfg.exit) and not cfg.in_edges(cfg.entry)
    v = cyclomatic(cfg)
    assert v == len(cfg.edges) - len(cfg.nodes) + 2 == cfg.decision_count() + 1
    assert 1 <= essential(cfg) <= v


# -- lowering basics ---------------------------------------------------------


def test_empty_body():
    cfg = build_cfg([])
    assert len(cfg.nodes) == 2 and len(cfg.edges) == 1
    assert cyclomatic(cfg) == essential(cfg) == 1


def test_if_without_else_has_one_two_way_decision():
    cfg, _ = cfg_of("class A { void m(int x) { if (x > 0) x++; } }")
    outs = [len(cfg.out_edges(n)) for n in cfg.nodes]
    assert outs.count(2) == 1 and max(outs) == 2
    assert {e.label for e in cfg.edges} >= {"true", "false"}


def test_switch_three_cases_and_default():
    cfg, _ = cfg_of(
        "class A { void m(int x) { switch (x) { case 1: x++; break; case 2: x--; break;"
        " case 3: x = 0; break; default: x = 9; } } }"
    )
    assert max(len(cfg.out_edges(n)) for n in cfg.nodes) == 4
    assert cyclomatic(cfg) == 4 and essential(cfg) == 1


def test_straight_line_method():
    m = metrics("class A { void m() { int a = 1; a++; System.out.println(a); } }")
    assert (m.v, m.ev, m.iv) == (1, 1, 1)


def test_if_plus_while():
    m = metrics("class A { void m(int x) { if (x > 0) x--; while (x < 5) x++; } }")
    assert (m.v, m.ev) == (3, 1)


def test_nested_structured_code_is_fully_reducible():
    m = metrics(
        """class A { void m(int x) {
            for (int i = 0; i < x; i++) {
                if (i % 2 == 0) { while (x > i) x--; } else { do { x++; } while (x < 3); }
            }
            switch (x) { case 1: case 2: x = 0; break; default: x = 1; }
            try { x = 2; } catch (RuntimeException e) { x = 3; } finally { x = 4; }
        } }"""
    )
    assert m.ev == 1


def test_while_with_conditional_break_and_trailing_if():
    src = """class A { int m(int x) {
        while (x > 0) { if (x == 3) break; x--; }
        if (x < 0) x = 0;
        return x;
    } }"""
    cfg, _ = cfg_of(src)
    assert essential(cfg) == oracle_ev(cfg) == 3
    assert cyclomatic(cfg) == 4


def test_return_inside_if_is_unstructured():
    cfg, _ = cfg_of("class A { int m(int x) { if (x > 0) return 1; return 2; } }")
    assert any(e.label == "jump" for e in cfg.edges)
    assert essential(cfg) == 2


def test_fallthrough_case_is_unstructured():
    cfg, _ = cfg_of("class A { void m(int x) { switch (x) { case 1: x++; case 2: x--; break; default: x = 0; } } }")
    assert any(e.label == "fallthrough" for e in cfg.edges)
    assert essential(cfg) > 1


def test_break_outside_loop_is_malformed():
    with pytest.raises(MalformedBody):
        build_cfg([Stmt("break")])


def test_unreachable_code_dropped_with_diagnostic():
    cfg = build_cfg([Stmt("return"), Stmt("expression", expr=ExprInfo())])
    assert cfg.diagnostics
    check_invariants(cfg)


def test_short_circuit_toggle():
    src = "class A { void m(boolean a, boolean b) { if (a && b) f(); else g(); } void f(){} void g(){} }"
    on, _ = cfg_of(src)
    off, _ = cfg_of(src, count_operators=False)
    assert cyclomatic(on) == 3 and cyclomatic(off) == 2


def test_catches_add_exception_edges():
    cfg, _ = cfg_of(
        "class A { void m() { try { f(); } catch (IllegalStateException e) { g(); }"
        " catch (RuntimeException e) { h(); } } void f(){} void g(){} void h(){} }"
    )
    assert sum(1 for e in cfg.edges if e.label == "exception") == 2
    assert cyclomatic(cfg) == 3


# -- design complexity -------------------------------------------------------


def test_no_calls_design_is_one():
    m = metrics("class A { void m(int x) { if (x > 0) x--; while (x > 1) { if (x == 4) break; x--; } } }")
    assert m.iv == 1


def test_call_bearing_if():
    m = metrics("class A { void m(boolean p) { if (p) call(); else {} } void call() {} }")
    assert (m.v, m.iv) == (2, 2)


def test_library_calls_are_not_design_relevant():
    m = metrics("class A { void m(boolean p) { if (p) System.out.println(1); } }")
    assert m.iv == 1


def test_only_call_guarding_decisions_remain():
    m = metrics(
        """class A { void m(int x) {
            if (x > 0) x--;
            if (x > 5) helper();
            while (x < 9) x++;
        } void helper() {} }"""
    )
    assert (m.v, m.iv) == (4, 2)


def test_every_decision_guarding_a_call_keeps_v():
    m = metrics(
        """class A { void m(int x) {
            if (x > 0) { a(); if (x > 3) b(); else c(); } else { c(); }
            while (x < 9) { a(); x++; }
            switch (x) { case 1: a(); break; case 2: b(); break; default: c(); }
        } void a() {} void b() {} void c() {} }"""
    )
    assert m.iv == m.v == 6


def test_instantiation_of_project_class_is_internal():
    m = metrics("class B {} class A { Object m(boolean p) { if (p) return new B(); return null; } }")
    assert m.iv == 2


# -- oracles and properties --------------------------------------------------


def test_audit_fixture_methods_agree_with_oracles(fixtures):
    project, _ = parse_source_tree(fixtures / "audit15")
    checked = 0
    for cls in project.classes:
        for m in cls.methods:
            if not m.is_concrete:
                continue
            cfg = build_cfg(m.body)
            check_invariants(cfg)
            assert cyclomatic(cfg) == tree_decisions(m.body) + 1
            if len(cfg.nodes) <= 12:
                assert essential(cfg) == oracle_ev(cfg), f"{cls.qualified_name}.{m.name}"
                checked += 1
    assert checked > 20


def test_structured_generator_always_reduces_to_one():
    rng = random.Random(7)
    for _ in range(300):
        body = random_structured_body(rng)
        cfg = build_cfg(body)
        check_invariants(cfg)
        assert essential(cfg) == 1
        assert cyclomatic(cfg) == tree_decisions(body) + 1


def test_jumpy_generator_matches_exhaustive_reduction():
    rng = random.Random(11)
    compared = 0
    while compared < 400:
        body = random_jumpy_body(rng, depth=2, width=3)
        cfg = build_cfg(body)
        check_invariants(cfg)
        if len(cfg.nodes) > 10:
            continue
        assert essential(cfg) == oracle_ev(cfg), body
        compared += 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_adding_top_level_if_adds_one(seed, at_end):
    body = random_structured_body(random.Random(seed))
    extra = Stmt("if", expr=ExprInfo(), body=[Stmt("expression", expr=ExprInfo())])
    grown = body + [extra] if at_end else [extra] + body
    before, after = build_cfg(body), build_cfg(grown)
    assert cyclomatic(after) == cyclomatic(before) + 1
    assert essential(after) == essential(before) == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_design_bounded_by_cyclomatic(seed):
    body = random_jumpy_body(random.Random(seed), depth=2, width=3)
    cfg = build_cfg(body)
    v = cyclomatic(cfg)
    assert 1 <= essential(cfg) <= v
    assert design_complexity(cfg, ProjectModel()) == 1


# -- quadrants ---------------------------------------------------------------


@pytest.mark.parametrize(
    "v, ev, label",
    [
        (5, 2, "reliable_maintainable"),
        (20, 2, "reliable_unmaintainable"),
        (20, 10, "unreliable_unmaintainable"),
        (8, 6, "unreliable_maintainable"),
        (10, 4, "reliable_maintainable"),
        (11, 4, "reliable_unmaintainable"),
        (10, 5, "unreliable_maintainable"),
    ],
)
def test_quadrants(v, ev, label):
    assert scatter_quadrant(v, ev) == label


def test_quadrant_rejects_ev_above_v():
    with pytest.raises(DomainError):
        scatter_quadrant(3, 4)


def test_unstructured_labels_are_known():
    assert UNSTRUCTURED == {"jump", "fallthrough"}
