from __future__ import annotations

import shutil

import pytest

from oodq.errors import CyclicInheritance, IoFailure
from oodq.java import SourceFile, parse_compilation_unit, parse_source_tree
from oodq.model import walk

from conftest import method_body, parse_java


def unit(text: str):
    return parse_compilation_unit(SourceFile("T.java", text))


def test_empty_directory(tmp_path):
    project, diags = parse_source_tree(tmp_path)
    assert project.classes == [] and diags == []


def test_missing_root_raises(tmp_path):
    with pytest.raises(IoFailure):
        parse_source_tree(tmp_path / "nope")


def test_minimal_unit():
    classes, _, diags = unit("class A { int x; void f(){} }")
    assert diags == []
    (a,) = classes
    assert [x.name for x in a.attributes] == ["x"]
    assert [m.name for m in a.methods] == ["f"]


def test_interface_method_is_abstract():
    (i,), _, _ = unit("interface I { void g(); }")
    assert i.kind == "interface"
    (g,) = i.methods
    assert g.is_abstract and g.body is None and g.visibility == "public"


def test_short_circuit_and_calls_recorded():
    p = parse_java("class A { void m(boolean a, boolean b) { if (a && b) f(); else g(); } void f(){} void g(){} }")
    (stmt,) = method_body(p, "A.m")
    assert stmt.kind == "if-else"
    assert stmt.expr.short_circuit == 1
    calls = [c.target_name for s in walk([stmt]) for e in s.exprs() for c in e.calls]
    assert calls == ["f", "g"]


def test_comment_only_file():
    classes, tally, _ = unit("// one\n/* two\n three */\n")
    assert classes == []
    assert tally.scomm == tally.sline == 3


def test_nested_classes_flatten():
    (outer, inner), _, _ = unit("package p; class Outer { static class Inner { int y; } int x; }")
    assert outer.qualified_name == "p.Outer"
    assert inner.qualified_name == "p.Outer.Inner"
    assert [a.name for a in outer.attributes] == ["x"]


def test_generics_stripped_to_raw_names():
    (a,), _, _ = unit("import java.util.*; class A { Map<String, List<Integer>> m; <T> T id(T t) { return t; } }")
    assert a.attributes[0].declared_type.name == "Map"
    assert a.methods[0].name == "id" and a.methods[0].arity == 1


def test_lambda_calls_belong_to_enclosing_method():
    p = parse_java("class A { void run(java.util.List<String> xs) { xs.forEach(x -> show(x)); } void show(String s) {} }")
    run = p.get("A").methods[0]
    assert [c.target_name for c in run.invocations] == ["forEach", "show"]


def test_anonymous_class_statements_attribute_to_method():
    p = parse_java(
        "class A { Runnable r() { return new Runnable() { public void run() { ping(); } }; } void ping() {} }"
    )
    assert [c.target_name for c in p.get("A").methods[0].invocations] == ["ping"]
    assert len(p.classes) == 1


def test_statement_kinds_cover_the_subset():
    src = """
    class A {
      int f(int[] xs) {
        int t = 0;
        for (int i = 0; i < 3; i++) { t++; }
        for (int x : xs) { t += x; }
        while (t > 10) { t--; }
        do { t++; } while (t < 0);
        switch (t) { case 1: case 2: t = 0; break; default: t = 1; }
        try { t = 2; } catch (RuntimeException e) { t = 3; } finally { t = 4; }
        outer:
        for (;;) { if (t > 0) break outer; else continue; }
        if (t < 0) throw new IllegalStateException();
        return t > 0 ? t : -t;
      }
    }
    """
    p = parse_java(src)
    kinds = [s.kind for s in walk(method_body(p, "A.f"))]
    for k in ("local-declaration", "for", "while", "do-while", "switch", "try", "break", "continue",
              "if", "if-else", "throw", "return", "expression"):
        assert k in kinds, k
    ret = [s for s in walk(method_body(p, "A.f")) if s.kind == "return"][0]
    assert ret.expr.conditional == 1
    targets = [s.target for s in walk(method_body(p, "A.f")) if s.kind == "break"]
    assert targets == [None, "outer"]


def test_member_error_recovers_at_next_member():
    classes, _, diags = unit("class A {\n  void bad( {\n  }\n  void good() { }\n  int x;\n}\n")
    assert [d.severity for d in diags] == ["error"]
    assert 1 <= diags[0].line <= 6
    (a,) = classes
    assert "good" in [m.name for m in a.methods]
    assert [x.name for x in a.attributes] == ["x"]


def test_tree_with_one_malformed_file(fixtures, tmp_path):
    tree = tmp_path / "tree"
    shutil.copytree(fixtures / "audit15", tree, ignore=shutil.ignore_patterns("*.csv"))
    shutil.copy(fixtures / "malformed" / "Broken.java", tree / "shop")
    files = sorted(tree.rglob("*.java"))
    assert len(files) == 15
    project, diags = parse_source_tree(tree)
    good, _ = parse_source_tree(fixtures / "audit15")
    assert sorted(c.qualified_name for c in project.classes) == sorted(c.qualified_name for c in good.classes)
    errors = [d for d in diags if d.severity == "error"]
    assert len(errors) == 1 and errors[0].path == "shop/Broken.java"
    assert "Broken" not in [c.simple_name for c in project.classes]


def test_cycle_in_tree_propagates(fixtures):
    with pytest.raises(CyclicInheritance):
        parse_source_tree(fixtures / "cycle")


def test_parsing_is_deterministic(fixtures):
    a, _ = parse_source_tree(fixtures / "audit15")
    b, _ = parse_source_tree(fixtures / "audit15", jobs=4)
    assert a == b


def test_spans_nest(fixtures):
    project, _ = parse_source_tree(fixtures / "audit15")
    for c in project.classes:
        text = (fixtures / "audit15" / c.path).read_text()
        assert 1 <= c.line_span[0] <= c.line_span[1] <= SourceFile(c.path, text).line_count
        for m in c.methods:
            assert c.line_span[0] <= m.line_span[0] <= m.line_span[1] <= c.line_span[1]


def test_call_count_matches_hand_count(fixtures):
    project, _ = parse_source_tree(fixtures / "audit15")
    registry = project.get("shop.Registry")
    assert [c.target_name for c in registry.methods[0].invocations] == ["inc", "get", "inc"]
    proc = project.get("shop.Processor").methods[0]
    assert [c.target_name for c in proc.invocations] == ["add"]


def test_line_count_counts_unterminated_last_line():
    assert SourceFile("x", "a\nb").line_count == 2
    assert SourceFile("x", "a\nb\n").line_count == 2
    assert SourceFile("x", "").line_count == 0
