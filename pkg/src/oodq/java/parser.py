"""Recursive-descent parser for the supported Java subset.

The parser keeps only what the metrics need: declarations, statement
structure, and per-expression facts (calls, instantiations, short-circuit
and conditional operators, referenced names).  Expressions are scanned,
not turned into trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..model import (
    AttributeModel,
    CallSite,
    CatchClause,
    ClassModel,
    ExprInfo,
    MethodModel,
    Stmt,
    SwitchCase,
    TypeRef,
    walk,
)
from .lexer import PRIMITIVES, Token

MODIFIERS = frozenset(
    "public protected private static abstract final native synchronized transient "
    "volatile strictfp default sealed non-sealed".split()
)
# Tokens that can only appear in an expression, never inside type arguments.
_NOT_IN_TYPE_ARGS = frozenset({";", "{", "}", "(", ")", "=", "eof", "&&", "||", "->", "+", "-", "*", "/"})


class ParseError(Exception):
    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.line = line


@dataclass
class Diagnostic:
    path: str
    line: int
    message: str
    severity: str = "error"


@dataclass
class _ClassCtx:
    qualified_name: str
    simple_name: str
    kind: str
    super_name: Optional[str] = None
    field_types: dict[str, str] = field(default_factory=dict)


@dataclass
class _MethodCtx:
    scopes: list[dict[str, str]] = field(default_factory=list)

    def declare(self, name: str, type_name: str) -> None:
        self.scopes[-1][name] = type_name

    def lookup(self, name: str) -> Optional[str]:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None


class JavaParser:
    def __init__(self, tokens: list[Token], path: str = ""):
        self.toks = tokens
        self.pos = 0
        self.path = path
        self.diagnostics: list[Diagnostic] = []
        self.package = ""
        self.classes: list[ClassModel] = []
        self._cls: Optional[_ClassCtx] = None
        self._meth: Optional[_MethodCtx] = None
        # Per-expression collection target; lambdas and anonymous classes
        # redirect here so their calls land on the enclosing method.
        self._expr_stack: list[ExprInfo] = []

    # -- token helpers -------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else self.toks[-1]

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.text == text and t.kind in ("op", "keyword", "ident")

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind in ("string", "char", "eof"):
            raise ParseError(f"expected {text!r}, found {t.text or 'end of file'!r}", t.line)
        return self.advance()

    def expect_ident(self) -> Token:
        t = self.peek()
        if t.kind != "ident":
            raise ParseError(f"expected identifier, found {t.text or 'end of file'!r}", t.line)
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def skip_balanced(self, open_: str, close: str) -> None:
        self.expect(open_)
        depth = 1
        while depth:
            t = self.advance()
            if t.kind == "eof":
                raise ParseError(f"unbalanced {open_!r}", t.line)
            if t.kind == "op":
                if t.text == open_:
                    depth += 1
                elif t.text == close:
                    depth -= 1

    # -- compilation unit ----------------------------------------------

    def parse_unit(self) -> list[ClassModel]:
        self.skip_annotations()
        if self.accept("package"):
            self.package = self.qualified_ident()
            self.expect(";")
        while self.at("import"):
            while not self.accept(";"):
                if self.advance().kind == "eof":
                    raise ParseError("unterminated import", self.peek().line)
        while self.peek().kind != "eof":
            if self.accept(";"):
                continue
            self.type_declaration(outer=None)
        return self.classes

    def qualified_ident(self) -> str:
        parts = [self.expect_ident().text]
        while self.at(".") and self.peek(1).kind == "ident":
            self.advance()
            parts.append(self.advance().text)
        return ".".join(parts)

    def skip_annotations(self) -> None:
        while self.at("@") and not self.at("interface", 1):
            self.advance()
            self.qualified_ident()
            if self.at("("):
                self.skip_balanced("(", ")")

    def modifiers(self) -> set[str]:
        mods: set[str] = set()
        while True:
            self.skip_annotations()
            t = self.peek()
            if t.text in MODIFIERS and (t.kind == "keyword" or (t.kind == "ident" and self.peek(1).kind in ("ident", "keyword"))):
                mods.add(t.text)
                self.advance()
                continue
            return mods

    # -- types ---------------------------------------------------------

    def parse_type(self) -> str:
        self.skip_annotations()
        t = self.peek()
        if t.kind == "keyword" and t.text in PRIMITIVES:
            self.advance()
            name = t.text
        elif t.kind == "ident":
            self.advance()
            parts = [t.text]
            while True:
                if self.at("<"):
                    self.skip_type_args()
                if self.at(".") and self.peek(1).kind == "ident":
                    self.advance()
                    parts.append(self.advance().text)
                    continue
                break
            name = ".".join(parts)
        else:
            raise ParseError(f"expected a type, found {t.text or 'end of file'!r}", t.line)
        self.skip_dims()
        return name

    def skip_dims(self) -> None:
        while True:
            self.skip_annotations()
            if self.at("[") and self.at("]", 1):
                self.advance()
                self.advance()
            else:
                return

    def skip_type_args(self) -> None:
        line = self.peek().line
        self.expect("<")
        depth = 1
        while depth:
            t = self.advance()
            if t.text in _NOT_IN_TYPE_ARGS or t.kind in ("string", "char", "number"):
                raise ParseError("malformed type arguments", line)
            if t.text == "<":
                depth += 1
            elif t.text == ">":
                depth -= 1

    def try_parse(self, fn):
        saved = self.pos
        try:
            return fn()
        except ParseError:
            self.pos = saved
            return None

    # -- declarations --------------------------------------------------

    def type_declaration(self, outer: Optional[_ClassCtx]) -> None:
        start = self.peek()
        self.modifiers()
        if self.at("@") and self.at("interface", 1):
            # Annotation types carry no metric content.
            self.advance()
            self.advance()
            self.expect_ident()
            self.skip_balanced("{", "}")
            return
        t = self.peek()
        if t.text in ("class", "interface", "enum") and t.kind == "keyword":
            self.advance()
            kind = t.text
        elif t.kind == "ident" and t.text == "record" and self.peek(1).kind == "ident":
            raise ParseError("record declarations are not supported", t.line)
        else:
            raise ParseError(f"expected a type declaration, found {t.text or 'end of file'!r}", t.line)
        name = self.expect_ident().text
        if self.at("<"):
            self.skip_type_args()
        supers: list[TypeRef] = []
        super_name = None
        if self.accept("extends"):
            for n in self.type_list():
                supers.append(TypeRef(n))
            if kind == "class" and supers:
                super_name = supers[0].name
        if self.accept("implements"):
            supers.extend(TypeRef(n) for n in self.type_list())
        if self.at("permits"):
            self.advance()
            self.type_list()

        qname = f"{outer.qualified_name}.{name}" if outer else (f"{self.package}.{name}" if self.package else name)
        ctx = _ClassCtx(qname, name, kind, super_name)
        cls = ClassModel(
            qualified_name=qname,
            kind=kind,
            supertypes=[] if kind == "enum" else supers,
            package=self.package,
            path=self.path,
        )
        self.classes.append(cls)
        saved_cls = self._cls
        self._cls = ctx
        try:
            end = self.class_body(cls, ctx)
        finally:
            self._cls = saved_cls
        cls.line_span = (start.line, end)

    def type_list(self) -> list[str]:
        names = [self.parse_type()]
        while self.accept(","):
            names.append(self.parse_type())
        return names

    def class_body(self, cls: ClassModel, ctx: _ClassCtx) -> int:
        self.expect("{")
        if ctx.kind == "enum":
            self.enum_constants(cls, ctx)
        # Field types first, so method bodies can type receivers declared later.
        self._prescan_fields(ctx)
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise ParseError(f"unterminated body of {ctx.simple_name}", self.peek().line)
            member_start = self.pos
            try:
                self.member(cls, ctx)
            except ParseError as exc:
                self.diagnostics.append(Diagnostic(self.path, exc.line, str(exc), "error"))
                self.pos = member_start
                self.recover_member()
        return self.expect("}").line

    def _prescan_fields(self, ctx: _ClassCtx) -> None:
        saved = self.pos
        depth = 0
        while True:
            t = self.peek()
            if t.kind == "eof":
                break
            if t.text in ("{", "(", "[") and t.kind == "op":
                depth += 1
            elif t.text in ("}", ")", "]") and t.kind == "op":
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0 and t.kind == "ident" and self.peek(1).text in ("=", ";", ",") and self.peek(1).kind == "op":
                prev = self.toks[self.pos - 1]
                if prev.kind == "ident" or prev.text in (">", "]") or (prev.kind == "keyword" and prev.text in PRIMITIVES):
                    ctx.field_types.setdefault(t.text, self._type_before(self.pos - 1))
            self.advance()
        self.pos = saved

    def _type_before(self, i: int) -> str:
        """Best-effort raw type name ending at token index ``i``."""
        while i > 0 and self.toks[i].text in ("]", "["):
            i -= 1
        if self.toks[i].text == ">":
            depth = 0
            while i > 0:
                if self.toks[i].text == ">":
                    depth += 1
                elif self.toks[i].text == "<":
                    depth -= 1
                    if depth == 0:
                        i -= 1
                        break
                i -= 1
        return self.toks[i].text

    def recover_member(self) -> None:
        depth = 0
        while True:
            t = self.peek()
            if t.kind == "eof":
                return
            if t.kind == "op" and t.text == "{":
                depth += 1
            elif t.kind == "op" and t.text == "}":
                if depth == 0:
                    return
                depth -= 1
                if depth == 0:
                    self.advance()
                    return
            elif t.kind == "op" and t.text == ";" and depth == 0:
                self.advance()
                return
            self.advance()

    def enum_constants(self, cls: ClassModel, ctx: _ClassCtx) -> None:
        while True:
            self.skip_annotations()
            if self.peek().kind != "ident":
                break
            name = self.advance().text
            if self.at("("):
                self.with_scratch(lambda: self.arguments())
            if self.at("{"):
                self.with_scratch(lambda: self.anonymous_body())
            cls.attributes.append(AttributeModel(name, TypeRef(ctx.simple_name), "public", True))
            if not self.accept(","):
                break
        self.accept(";")

    def with_scratch(self, fn) -> ExprInfo:
        info = ExprInfo()
        self._expr_stack.append(info)
        saved_meth = self._meth
        if self._meth is None:
            self._meth = _MethodCtx([{}])
        try:
            fn()
        finally:
            self._expr_stack.pop()
            self._meth = saved_meth
        return info

    def member(self, cls: ClassModel, ctx: _ClassCtx) -> None:
        if self.accept(";"):
            return
        start = self.peek()
        if self.at("{") or (self.at("static") and self.at("{", 1)):
            self.accept("static")
            # Initializer blocks belong to no method.
            self.with_scratch(lambda: self.block())
            return
        saved = self.pos
        mods = self.modifiers()
        t = self.peek()
        if (t.kind == "keyword" and t.text in ("class", "interface", "enum")) or (
            self.at("@") and self.at("interface", 1)
        ):
            self.pos = saved
            self.type_declaration(outer=ctx)
            return
        if self.at("<"):
            self.skip_type_args()
        in_interface = ctx.kind == "interface"
        visibility = _visibility(mods, in_interface)
        is_static = "static" in mods or (in_interface and self._looks_like_field())

        if self.peek().kind == "ident" and self.at("(", 1):
            name = self.advance().text
            if name != ctx.simple_name:
                raise ParseError(f"method {name!r} lacks a return type", t.line)
            if ctx.kind == "enum" and not (mods & {"public", "protected", "private"}):
                visibility = "private"
            self.method_rest(cls, ctx, start, name, None, visibility, False, False, True)
            return

        type_name = self.parse_type()
        name_tok = self.expect_ident()
        if self.at("("):
            is_abstract = "abstract" in mods or (
                in_interface and not (mods & {"default", "static", "private"})
            )
            self.method_rest(
                cls, ctx, start, name_tok.text, TypeRef(type_name), visibility,
                "static" in mods, is_abstract, False,
            )
            return

        # field declarators
        names = [name_tok.text]
        self.skip_dims()
        while True:
            if self.accept("="):
                self.with_scratch(lambda: self.expression())
            if not self.accept(","):
                break
            names.append(self.expect_ident().text)
            self.skip_dims()
        self.expect(";")
        existing = {a.name for a in cls.attributes}
        for n in names:
            if n in existing:
                raise ParseError(f"duplicate field {n!r}", name_tok.line)
            existing.add(n)
            cls.attributes.append(AttributeModel(n, TypeRef(type_name), visibility, is_static))
            ctx.field_types[n] = type_name

    def _looks_like_field(self) -> bool:
        depth = 0
        for k in range(0, 200):
            t = self.peek(k)
            if t.kind == "eof":
                return False
            if t.text == "<":
                depth += 1
            elif t.text == ">":
                depth -= 1
            elif depth == 0 and t.text == "(":
                return False
            elif depth == 0 and t.text in ("=", ";"):
                return True
        return False

    def method_rest(
        self,
        cls: ClassModel,
        ctx: _ClassCtx,
        start: Token,
        name: str,
        return_type: Optional[TypeRef],
        visibility: str,
        is_static: bool,
        is_abstract: bool,
        is_constructor: bool,
    ) -> None:
        self.expect("(")
        params: list[TypeRef] = []
        meth = _MethodCtx([{}])
        while not self.at(")"):
            self.modifiers()
            ptype = self.parse_type()
            self.accept("...")
            if self.at("this"):
                # receiver parameter
                self.advance()
            else:
                pname = self.expect_ident().text
                self.skip_dims()
                params.append(TypeRef(ptype))
                meth.declare(pname, ptype)
            if not self.accept(","):
                break
        self.expect(")")
        self.skip_dims()
        if self.accept("throws"):
            self.type_list()
        body = None
        saved_meth = self._meth
        self._meth = meth
        try:
            if self.at("{"):
                body = self.block_list()
                end = self.toks[self.pos - 1].line
                is_abstract = False
            else:
                if self.accept("default"):
                    self.with_scratch(lambda: self.expression())
                end = self.expect(";").line
        finally:
            self._meth = saved_meth
        method = MethodModel(
            name=name,
            parameters=params,
            return_type=return_type,
            visibility=visibility,
            is_static=is_static,
            is_abstract=is_abstract and body is None,
            is_constructor=is_constructor,
            body=body,
            line_span=(start.line, end),
        )
        if body is not None:
            method.invocations = [c for s in walk(body) for e in s.exprs() for c in e.calls]
        cls.methods.append(method)

    # -- statements ----------------------------------------------------

    def block_list(self) -> list[Stmt]:
        self.expect("{")
        self._meth.scopes.append({})
        out: list[Stmt] = []
        try:
            while not self.at("}"):
                if self.peek().kind == "eof":
                    raise ParseError("unterminated block", self.peek().line)
                s = self.statement()
                if s is not None:
                    out.append(s)
        finally:
            self._meth.scopes.pop()
        self.expect("}")
        return out

    def block(self) -> Stmt:
        line = self.peek().line
        return Stmt("block", line, body=self.block_list())

    def body_of(self, s: Optional[Stmt]) -> list[Stmt]:
        if s is None:
            return []
        if s.kind == "block" and s.label is None:
            return s.body
        return [s]

    def sub_statement(self) -> list[Stmt]:
        self._meth.scopes.append({})
        try:
            return self.body_of(self.statement())
        finally:
            self._meth.scopes.pop()

    def paren_expr(self) -> ExprInfo:
        self.expect("(")
        e = self.expression()
        self.expect(")")
        return e

    def statement(self) -> Optional[Stmt]:
        t = self.peek()
        line = t.line
        if t.kind == "op":
            if t.text == "{":
                return self.block()
            if t.text == ";":
                self.advance()
                return None
        if t.kind == "ident" and self.at(":", 1):
            self.advance()
            self.advance()
            s = self.statement()
            if s is None:
                s = Stmt("block", line)
            s.label = t.text
            return s
        if t.kind == "keyword":
            kw = t.text
            if kw == "if":
                self.advance()
                cond = self.paren_expr()
                then = self.sub_statement()
                if self.accept("else"):
                    return Stmt("if-else", line, expr=cond, body=then, orelse=self.sub_statement())
                return Stmt("if", line, expr=cond, body=then)
            if kw == "while":
                self.advance()
                cond = self.paren_expr()
                return Stmt("while", line, expr=cond, body=self.sub_statement())
            if kw == "do":
                self.advance()
                body = self.sub_statement()
                self.expect("while")
                cond = self.paren_expr()
                self.expect(";")
                return Stmt("do-while", line, expr=cond, body=body)
            if kw == "for":
                return self.for_statement()
            if kw == "switch":
                return self.switch_statement()
            if kw == "try":
                return self.try_statement()
            if kw == "return":
                self.advance()
                expr = None if self.at(";") else self.expression()
                self.expect(";")
                return Stmt("return", line, expr=expr)
            if kw == "throw":
                self.advance()
                expr = self.expression()
                self.expect(";")
                return Stmt("throw", line, expr=expr)
            if kw in ("break", "continue"):
                self.advance()
                target = self.advance().text if self.peek().kind == "ident" else None
                self.expect(";")
                return Stmt(kw, line, target=target)
            if kw == "synchronized":
                self.advance()
                lock = self.paren_expr()
                inner = self.block()
                inner.body.insert(0, Stmt("expression", line, expr=lock))
                return inner
            if kw == "assert":
                self.advance()
                e = self.expression(stop_colon=True)
                if self.accept(":"):
                    _merge(e, self.expression())
                self.expect(";")
                return Stmt("expression", line, expr=e)
            if kw in ("class", "interface", "enum", "abstract", "final", "static", "strictfp") and self._local_class_ahead():
                # Local classes are attributed to the enclosing method like anonymous ones.
                info = self.with_scratch(lambda: self.local_class())
                return Stmt("expression", line, expr=info) if (info.calls or info.instantiations) else None
        if t.kind == "ident" and t.text == "yield" and self.peek(1).kind != "op":
            self.advance()
            expr = self.expression()
            self.expect(";")
            return Stmt("return", line, expr=expr)
        decl = self.try_parse(self.local_declaration)
        if decl is not None:
            self.expect(";")
            return decl
        expr = self.expression()
        self.expect(";")
        return Stmt("expression", line, expr=expr)

    def _local_class_ahead(self) -> bool:
        k = 0
        while self.peek(k).text in MODIFIERS or self.peek(k).text == "@":
            k += 1
        return self.peek(k).text in ("class", "interface", "enum") and self.peek(k).kind == "keyword"

    def local_class(self) -> None:
        self.modifiers()
        self.advance()
        self.expect_ident()
        if self.at("<"):
            self.skip_type_args()
        for kw in ("extends", "implements"):
            if self.accept(kw):
                self.type_list()
        self.anonymous_body()

    def local_declaration(self) -> Stmt:
        line = self.peek().line
        self.modifiers()
        type_name = self.parse_type()
        if self.peek().kind != "ident" or self.peek(1).text not in ("=", ";", ",", "[", ":"):
            raise ParseError("not a declaration", line)
        info = ExprInfo()
        declared: list[str] = []
        while True:
            name = self.expect_ident().text
            self.skip_dims()
            if self.accept("="):
                _merge(info, self.expression(stop_comma=True))
            declared.append(name)
            self._meth.declare(name, type_name)
            if not self.accept(","):
                break
        return Stmt("local-declaration", line, expr=info, decl_type=TypeRef(type_name), declared=declared)

    def for_statement(self) -> Stmt:
        line = self.advance().line
        self.expect("(")
        self._meth.scopes.append({})
        try:
            saved = self.pos

            def foreach_head():
                self.modifiers()
                tname = self.parse_type()
                vname = self.expect_ident().text
                self.skip_dims()
                self.expect(":")
                return tname, vname

            head = self.try_parse(foreach_head)
            if head is not None:
                tname, vname = head
                self._meth.declare(vname, tname)
                iterable = self.expression()
                self.expect(")")
                body = self.sub_statement()
                return Stmt("for", line, expr=iterable, body=body, foreach=True,
                            decl_type=TypeRef(tname), declared=[vname])
            self.pos = saved
            init: list[Stmt] = []
            if not self.at(";"):
                decl = self.try_parse(self.local_declaration)
                if decl is not None:
                    init.append(decl)
                else:
                    while True:
                        iline = self.peek().line
                        init.append(Stmt("expression", iline, expr=self.expression(stop_comma=True)))
                        if not self.accept(","):
                            break
            self.expect(";")
            cond = None if self.at(";") else self.expression()
            self.expect(";")
            update = None
            if not self.at(")"):
                update = ExprInfo()
                while True:
                    _merge(update, self.expression(stop_comma=True))
                    if not self.accept(","):
                        break
            self.expect(")")
            body = self.sub_statement()
            return Stmt("for", line, expr=cond, init=init, update=update, body=body)
        finally:
            self._meth.scopes.pop()

    def switch_statement(self) -> Stmt:
        line = self.advance().line
        selector = self.paren_expr()
        self.expect("{")
        self._meth.scopes.append({})
        cases: list[SwitchCase] = []
        try:
            while not self.at("}"):
                if not (self.at("case") or self.at("default")):
                    raise ParseError("expected 'case' or 'default'", self.peek().line)
                labels, is_default = 0, False
                while self.at("case") or (self.at("default") and self.at(":", 1)):
                    if self.accept("default"):
                        is_default = True
                        labels += 1
                    else:
                        self.advance()
                        while True:
                            _merge(selector, self.expression(stop_colon=True, stop_comma=True))
                            labels += 1
                            if not self.accept(","):
                                break
                    if self.at("->"):
                        raise ParseError("arrow-form switch is not supported", self.peek().line)
                    self.expect(":")
                body: list[Stmt] = []
                while not (self.at("case") or (self.at("default") and self.at(":", 1)) or self.at("}")):
                    if self.peek().kind == "eof":
                        raise ParseError("unterminated switch", self.peek().line)
                    s = self.statement()
                    if s is not None:
                        body.append(s)
                cases.append(SwitchCase(labels=labels, is_default=is_default, body=body))
        finally:
            self._meth.scopes.pop()
        self.expect("}")
        return Stmt("switch", line, expr=selector, cases=cases)

    def try_statement(self) -> Stmt:
        line = self.advance().line
        self._meth.scopes.append({})
        try:
            resources: list[Stmt] = []
            if self.accept("("):
                while not self.at(")"):
                    r = self.try_parse(self.local_declaration)
                    if r is None:
                        r = Stmt("expression", self.peek().line, expr=self.expression())
                    resources.append(r)
                    if not self.accept(";"):
                        break
                self.expect(")")
            body = resources + self.block_list()
        finally:
            self._meth.scopes.pop()
        catches: list[CatchClause] = []
        while self.at("catch"):
            self.advance()
            self.expect("(")
            self.modifiers()
            types = [TypeRef(self.parse_type())]
            while self.accept("|"):
                types.append(TypeRef(self.parse_type()))
            vname = self.expect_ident().text
            self.expect(")")
            self._meth.scopes.append({vname: types[0].name})
            try:
                catches.append(CatchClause(types=types, body=self.block_list()))
            finally:
                self._meth.scopes.pop()
        finalbody = None
        if self.accept("finally"):
            finalbody = self.block_list()
        if not catches and finalbody is None and not resources:
            raise ParseError("'try' without 'catch' or 'finally'", line)
        return Stmt("try", line, body=body, catches=catches, finalbody=finalbody)

    # -- expressions ---------------------------------------------------

    def expression(self, stop_comma: bool = False, stop_colon: bool = False) -> ExprInfo:
        info = ExprInfo()
        self._expr_stack.append(info)
        try:
            self._scan(stop_comma, stop_colon, count_ops=True)
        finally:
            self._expr_stack.pop()
        info.names = sorted(set(info.names))
        return info

    def _sink(self) -> ExprInfo:
        return self._expr_stack[-1]

    def _scan(self, stop_comma: bool, stop_colon: bool, count_ops: bool) -> None:
        depth = 0
        ternaries: list[int] = []
        start = self.pos
        sink = self._sink()
        while True:
            t = self.peek()
            text, kind = t.text, t.kind
            if kind == "eof":
                raise ParseError("unexpected end of file in expression", t.line)
            if kind == "op":
                if text in ("(", "[", "{"):
                    depth += 1
                    self.advance()
                    continue
                if text in (")", "]", "}"):
                    if depth == 0:
                        break
                    depth -= 1
                    self.advance()
                    continue
                if depth == 0 and text == ";":
                    break
                if depth == 0 and text == "," and stop_comma:
                    break
                if text == "?":
                    ternaries.append(depth)
                    self.advance()
                    continue
                if text == ":":
                    if ternaries and ternaries[-1] == depth:
                        ternaries.pop()
                        if count_ops:
                            sink.conditional += 1
                        self.advance()
                        continue
                    if depth == 0 and stop_colon:
                        break
                    self.advance()
                    continue
                if text in ("&&", "||"):
                    if count_ops:
                        sink.short_circuit += 1
                    self.advance()
                    continue
                if text == "->":
                    self.advance()
                    self._lambda_body()
                    continue
                self.advance()
                continue
            if kind == "keyword":
                if text == "new":
                    if self.pos > start and self.toks[self.pos - 1].text == "::":
                        self.advance()
                        continue
                    self._creator()
                    continue
                if text in ("this", "super") and self.at("(", 1):
                    self.advance()
                    target = self._cls.simple_name if text == "this" else self._cls.super_name
                    call = CallSite("<init>", 0, TypeRef(target) if target else None, t.line)
                    sink.calls.append(call)
                    call.arity = self.arguments()
                    continue
                if text == "this" and self.at(".", 1) and self.peek(2).kind == "ident" and not self.at("(", 3):
                    sink.names.append(self.peek(2).text)
                    self.advance()
                    self.advance()
                    self.advance()
                    continue
                if text == "switch":
                    raise ParseError("switch expressions are not supported", t.line)
                self.advance()
                continue
            if kind == "ident":
                prev = self.toks[self.pos - 1] if self.pos > start else None
                member = prev is not None and prev.kind == "op" and prev.text in (".", "::")
                if self.at("(", 1):
                    call = CallSite(text, 0, self._receiver(member), t.line)
                    sink.calls.append(call)
                    self.advance()
                    call.arity = self.arguments()
                    continue
                if not member and self._meth is not None and self._meth.lookup(text) is None:
                    sink.names.append(text)
                self.advance()
                continue
            self.advance()
        if self.pos == start:
            raise ParseError(f"expected an expression, found {self.peek().text or 'end of file'!r}", self.peek().line)

    def _receiver(self, member: bool) -> Optional[TypeRef]:
        if not member:
            return TypeRef(self._cls.simple_name)
        if self.toks[self.pos - 1].text == "::":
            return None
        before = self.toks[self.pos - 2] if self.pos >= 2 else None
        if before is None:
            return None
        if before.kind == "keyword" and before.text == "this":
            return TypeRef(self._cls.simple_name)
        if before.kind == "keyword" and before.text == "super":
            return TypeRef(self._cls.super_name) if self._cls.super_name else None
        if before.kind == "ident":
            pre = self.toks[self.pos - 3] if self.pos >= 3 else None
            if pre is not None and pre.kind == "op" and pre.text == ".":
                return None
            declared = self._meth.lookup(before.text) if self._meth else None
            if declared is None:
                declared = self._cls.field_types.get(before.text)
            if declared is not None:
                return TypeRef(declared)
            if before.text[:1].isupper():
                return TypeRef(before.text)
        return None

    def arguments(self) -> int:
        self.expect("(")
        arity = 0
        while not self.at(")"):
            self._scan(stop_comma=True, stop_colon=False, count_ops=True)
            arity += 1
            if not self.accept(","):
                break
        self.expect(")")
        return arity

    def _creator(self) -> None:
        line = self.advance().line  # 'new'
        sink = self._sink()
        self.skip_annotations()
        t = self.peek()
        if t.kind == "keyword" and t.text in PRIMITIVES:
            self.advance()
            type_name = None
        else:
            parts = [self.expect_ident().text]
            while True:
                if self.at("<"):
                    self.skip_type_args()
                if self.at(".") and self.peek(1).kind == "ident":
                    self.advance()
                    parts.append(self.advance().text)
                    continue
                break
            type_name = ".".join(parts)
        if self.at("["):
            # Array creation: dimensions and optional initializer are plain expressions.
            while self.at("["):
                self.advance()
                if not self.at("]"):
                    self._scan(stop_comma=False, stop_colon=False, count_ops=True)
                self.expect("]")
            if self.at("{"):
                self.skip_array_initializer()
            return
        if type_name is None:
            raise ParseError("primitive type cannot be instantiated", line)
        self.arguments()
        sink.instantiations.append(TypeRef(type_name))
        if self.at("{"):
            self.anonymous_body()

    def skip_array_initializer(self) -> None:
        self.expect("{")
        while not self.at("}"):
            if self.at("{"):
                self.skip_array_initializer()
            else:
                self._scan(stop_comma=True, stop_colon=False, count_ops=True)
            if not self.accept(","):
                break
        self.expect("}")

    def anonymous_body(self) -> None:
        """Parse a class body whose members' calls attribute to the current expression."""
        sink = self._sink()
        scratch = ClassModel(qualified_name="<anonymous>")
        ctx = _ClassCtx(self._cls.qualified_name if self._cls else "", self._cls.simple_name if self._cls else "",
                        "class", self._cls.super_name if self._cls else None,
                        dict(self._cls.field_types) if self._cls else {})
        saved_classes = self.classes
        saved_meth = self._meth
        self.classes = []
        try:
            self.expect("{")
            while not self.at("}"):
                if self.peek().kind == "eof":
                    raise ParseError("unterminated anonymous class", self.peek().line)
                self.member(scratch, ctx)
            self.expect("}")
        finally:
            self.classes = saved_classes
            self._meth = saved_meth
        for m in scratch.methods:
            for s in walk(m.body or []):
                for e in s.exprs():
                    sink.calls.extend(e.calls)
                    sink.instantiations.extend(e.instantiations)

    def _lambda_body(self) -> None:
        sink = self._sink()
        saved_meth = self._meth
        self._meth = _MethodCtx([{}]) if saved_meth is None else _MethodCtx(saved_meth.scopes + [{}])
        try:
            if self.at("{"):
                stmts = self.block_list()
                for s in walk(stmts):
                    for e in s.exprs():
                        sink.calls.extend(e.calls)
                        sink.instantiations.extend(e.instantiations)
            else:
                inner = ExprInfo()
                self._expr_stack.append(inner)
                try:
                    self._scan(stop_comma=True, stop_colon=False, count_ops=False)
                finally:
                    self._expr_stack.pop()
                sink.calls.extend(inner.calls)
                sink.instantiations.extend(inner.instantiations)
        finally:
            self._meth = saved_meth


def _merge(into: ExprInfo, other: ExprInfo) -> None:
    into.short_circuit += other.short_circuit
    into.conditional += other.conditional
    into.calls.extend(other.calls)
    into.instantiations.extend(other.instantiations)
    into.names = sorted(set(into.names) | set(other.names))


def _visibility(mods: set[str], in_interface: bool) -> str:
    for v in ("public", "protected", "private"):
        if v in mods:
            return v
    return "public" if in_interface else "package"
