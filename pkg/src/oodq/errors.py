"""Exception types raised by the analyzer."""

from __future__ import annotations


class AnalysisError(Exception):
    """Base class for errors that make an analysis run fail (CLI exit 1)."""


class CyclicInheritance(AnalysisError):
    def __init__(self, cycle: list[str]):
        self.cycle = list(cycle)
        super().__init__("cyclic inheritance: " + " -> ".join(self.cycle + self.cycle[:1]))


class DuplicateClassName(AnalysisError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate class name: {name}")


class SchemaViolation(AnalysisError):
    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location or '/'}: {message}")


class IoFailure(AnalysisError):
    pass


class MissingBound(AnalysisError):
    def __init__(self, metric: str):
        self.metric = metric
        super().__init__(f"no threshold bound for metric {metric!r}")


class EmptyProject(AnalysisError):
    pass


class MalformedBody(AnalysisError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(message)


class DomainError(ValueError):
    pass
