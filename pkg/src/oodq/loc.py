"""Physical-line classification and application-level size operands."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .model import GROUPING_KINDS, LineTally, ProjectModel, walk

LONE_BRACES = frozenset({"{", "}", "{;", "};", "};;"})


_TOKEN = re.compile(
    r"""//[^\n]*"""
    r"""|(?s:/\*.*?(?:\*/|\Z))"""
    r"""|(?s:\"\"\"(?:\\.|.)*?(?:\"\"\"|\Z))"""
    r"""|"(?:\\.|[^"\\\n])*"?"""
    r"""|'(?:\\.|[^'\\\n])*'?"""
    r"""|[^/"'\n]+|/|\n"""
)


def scan_lines(text: str) -> list[tuple[str, bool]]:
    """Split ``text`` into physical lines of (code outside comments, has comment).

    String, char and text-block literals are kept as code so that comment
    markers inside them are not mistaken for comments.
    """
    lines: list[tuple[str, bool]] = []
    code: list[str] = []
    has_comment = False
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if tok == "\n":
            lines.append(("".join(code), has_comment))
            code, has_comment = [], False
            continue
        is_comment = tok.startswith("//") or tok.startswith("/*")
        parts = tok.split("\n")
        for k, part in enumerate(parts):
            if k:
                lines.append(("".join(code), has_comment))
                code, has_comment = [], False
            if is_comment:
                has_comment = True
            else:
                code.append(part)
    if text and not text.endswith("\n"):
        lines.append(("".join(code), has_comment))
    return lines


def classify_lines(file_text: str) -> LineTally:
    """Tally blank, comment, lone-brace and code lines.

    A line with code and a comment counts as both code and comment.  A
    lone brace line carrying a comment is counted as ordinary code.
    """
    return tally_lines(scan_lines(file_text))


def tally_lines(lines: list[tuple[str, bool]]) -> LineTally:
    t = LineTally()
    for code, has_comment in lines:
        t.sline += 1
        stripped = "".join(code.split())
        if not stripped:
            if has_comment:
                t.scomm += 1
                t.scomm_only += 1
            else:
                t.sblank += 1
            continue
        t.sloc += 1
        if has_comment:
            t.scomm += 1
        elif stripped in LONE_BRACES:
            t.ssbra += 1
    return t


def comment_rate(tally: LineTally) -> float:
    return tally.scomm / tally.sline if tally.sline else 0.0


def count_physical_lines(text: str) -> int:
    if not text:
        return 0
    return text.count("\n") + (0 if text.endswith("\n") else 1)


@dataclass
class ApplicationMetrics:
    ap_stat: int = 0
    ap_func: int = 0
    ap_sline: int = 0
    ap_vg: int = 0
    ap_wmc: float = 0.0
    ap_eloc: int = 0
    ap_comf: float = 0.0
    ap_inhg_levl: int = 0
    ap_sloc: int = 0
    ap_ssbra: int = 0
    ap_scomm: int = 0


def statement_count(stmts) -> int:
    return sum(1 for s in walk(stmts or []) if s.kind not in GROUPING_KINDS)


def application_metrics(project: ProjectModel, complexities: Mapping[str, int]) -> ApplicationMetrics:
    """Project-wide size operands.

    ``complexities`` maps method ids (see :func:`oodq.cfg.method_id`) to v(G).
    """
    from .model import depth_of_inheritance

    total = LineTally()
    for tally in project.file_tallies.values():
        total = total + tally
    ap_func = sum(len(c.methods) for c in project.classes)
    ap_vg = sum(complexities.values())
    memo: dict = {}
    depth = max((depth_of_inheritance(project, c, memo) for c in project.classes), default=-1)
    return ApplicationMetrics(
        ap_stat=sum(statement_count(m.body) for c in project.classes for m in c.methods),
        ap_func=ap_func,
        ap_sline=total.sline,
        ap_vg=ap_vg,
        ap_wmc=ap_vg / ap_func if ap_func else 0.0,
        ap_eloc=total.eloc,
        ap_comf=comment_rate(total),
        ap_inhg_levl=depth + 1 if project.classes else 0,
        ap_sloc=total.sloc,
        ap_ssbra=total.ssbra,
        ap_scomm=total.scomm,
    )
