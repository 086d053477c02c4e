"""Java-subset frontend."""

from .frontend import ParseDiagnostic, SourceFile, parse_compilation_unit, parse_source_tree

__all__ = ["ParseDiagnostic", "SourceFile", "parse_compilation_unit", "parse_source_tree"]
