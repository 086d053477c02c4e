"""Source-tree and compilation-unit entry points."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..errors import IoFailure
from ..loc import count_physical_lines, scan_lines, tally_lines
from ..model import ClassModel, LineTally, ProjectModel, resolve_project
from .lexer import LexError, tokenize
from .parser import Diagnostic, JavaParser, ParseError

ParseDiagnostic = Diagnostic


@dataclass
class SourceFile:
    path: str
    text: str

    @property
    def line_count(self) -> int:
        return count_physical_lines(self.text)


def parse_compilation_unit(file: SourceFile) -> tuple[list[ClassModel], LineTally, list[Diagnostic]]:
    """Parse one file.  Syntax errors never raise: they become diagnostics.

    A file whose top-level structure cannot be parsed contributes no classes.
    """
    scanned = scan_lines(file.text)
    tally = tally_lines(scanned)
    try:
        tokens = tokenize(file.text)
    except LexError as exc:
        return [], tally, [Diagnostic(file.path, _clamp(exc.line, file), str(exc), "error")]
    parser = JavaParser(tokens, file.path)
    try:
        classes = parser.parse_unit()
    except ParseError as exc:
        diags = parser.diagnostics + [Diagnostic(file.path, _clamp(exc.line, file), str(exc), "error")]
        return [], tally, diags
    for cls in classes:
        start, end = cls.line_span
        cls.line_tally = tally_lines(scanned[start - 1 : end])
    return classes, tally, parser.diagnostics


def _clamp(line: int, file: SourceFile) -> int:
    return max(1, min(line, max(file.line_count, 1)))


def discover(root: Path, pattern: str = "*.java") -> list[Path]:
    return sorted(p for p in root.rglob(pattern) if p.is_file())


def parse_source_tree(
    root: str | os.PathLike,
    pattern: str = "*.java",
    name: Optional[str] = None,
    jobs: int = 1,
) -> tuple[ProjectModel, list[Diagnostic]]:
    """Parse every matching file under ``root`` and resolve the result.

    A file with any error diagnostic contributes no classes; its
    diagnostics are still reported.

    Raises IoFailure when ``root`` is missing; CyclicInheritance and
    DuplicateClassName propagate from resolution.
    """
    base = Path(root)
    if not base.is_dir():
        raise IoFailure(f"source root {str(base)!r} is not a readable directory")

    def load(path: Path):
        rel = path.relative_to(base).as_posix()
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            return [], None, [Diagnostic(rel, 1, f"cannot read file: {exc}", "error")], rel
        classes, tally, diags = parse_compilation_unit(SourceFile(rel, text))
        return classes, tally, diags, rel

    files = discover(base, pattern)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(load, files))
    else:
        results = [load(p) for p in files]

    classes: list[ClassModel] = []
    diagnostics: list[Diagnostic] = []
    tallies: dict[str, LineTally] = {}
    for file_classes, tally, diags, rel in results:
        if not any(d.severity == "error" for d in diags):
            classes.extend(file_classes)
        diagnostics.extend(diags)
        if tally is not None:
            tallies[rel] = tally
    project = resolve_project(
        classes,
        name=name or base.resolve().name,
        source_root=str(base),
        file_tallies=tallies,
    )
    return project, diagnostics
