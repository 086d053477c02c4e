"""Threshold statuses, maintainability criteria and worst-class ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .class_metrics import CLASS_METRICS, ClassMetricVector
from .errors import EmptyProject, MissingBound, SchemaViolation

CATEGORIES = ("EXCELLENT", "GOOD", "FAIR", "POOR")

CRITERIA: dict[str, tuple[str, ...]] = {
    "ANALYZABILITY": ("cl_wmc", "cl_comf", "in_bases", "cu_cdused"),
    "CHANGEABILITY": ("cl_stat", "cl_func", "cl_data"),
    "STABILITY": ("cl_data_publ", "cu_cdusers", "in_noc", "cl_func_publ"),
    "TESTABILITY": ("cl_wmc", "cl_func", "cu_cdused"),
}


@dataclass(frozen=True)
class ThresholdBound:
    metric_name: str
    min: float = -math.inf
    max: float = math.inf

    def __post_init__(self) -> None:
        if self.min > self.max:
            raise ValueError(f"{self.metric_name}: min {self.min} exceeds max {self.max}")


@dataclass
class MetricStatus:
    metric_name: str
    value: float
    status: int


@dataclass
class CriterionResult:
    name: str
    component_statuses: list[MetricStatus] = field(default_factory=list)
    out_count: int = 0
    category: str = "EXCELLENT"


@dataclass
class FactorResult:
    criteria: list[CriterionResult] = field(default_factory=list)
    rank: int = 0
    category: str = "EXCELLENT"
    statuses: list[MetricStatus] = field(default_factory=list)


def _number(text: str) -> float:
    t = text.strip().lower().replace("∞", "inf")
    if t in ("inf", "+inf"):
        return math.inf
    if t == "-inf":
        return -math.inf
    value = float(t)
    if math.isnan(value):
        raise ValueError("nan is not a bound")
    return value


def parse_thresholds(text: str, source: str = "<thresholds>") -> dict[str, ThresholdBound]:
    """Parse ``metric min max`` rows separated by whitespace; ``#`` starts a comment."""
    bounds: dict[str, ThresholdBound] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        where = f"{source}:{lineno}"
        if len(parts) != 3:
            raise SchemaViolation(where, f"expected 'metric min max', got {raw.strip()!r}")
        name = parts[0]
        try:
            bounds[name] = ThresholdBound(name, _number(parts[1]), _number(parts[2]))
        except ValueError as exc:
            raise SchemaViolation(where, str(exc)) from None
    return bounds


def default_thresholds_text() -> str:
    return resources.files("oodq.data").joinpath("thresholds.default.txt").read_text(encoding="utf-8")


def load_thresholds(path: str | Path | None = None) -> dict[str, ThresholdBound]:
    if path is None:
        return parse_thresholds(default_thresholds_text(), "thresholds.default.txt")
    return parse_thresholds(Path(path).read_text(encoding="utf-8"), str(path))


def evaluate_status(value: float, bound: ThresholdBound) -> MetricStatus:
    inside = bound.min <= value <= bound.max
    return MetricStatus(bound.metric_name, value, 0 if inside else -1)


def category_for_outs(out_count: int) -> str:
    return CATEGORIES[min(out_count, 3)]


def criterion_result(name: str, statuses: list[MetricStatus]) -> CriterionResult:
    out = sum(1 for s in statuses if s.status == -1)
    return CriterionResult(name, list(statuses), out, category_for_outs(out))


def factor_category(criteria: Iterable[CriterionResult]) -> str:
    score = sum(CATEGORIES.index(c.category) for c in criteria)
    if score == 0:
        return "EXCELLENT"
    if score <= 2:
        return "GOOD"
    if score <= 5:
        return "FAIR"
    return "POOR"


def factor_result(vector: ClassMetricVector | Mapping[str, float], bounds: Mapping[str, ThresholdBound]) -> FactorResult:
    values = vector.as_dict() if isinstance(vector, ClassMetricVector) else dict(vector)
    statuses: dict[str, MetricStatus] = {}
    for name in CLASS_METRICS:
        if name not in bounds:
            raise MissingBound(name)
        if name not in values:
            raise KeyError(f"class vector lacks {name}")
        statuses[name] = evaluate_status(values[name], bounds[name])
    criteria = [criterion_result(c, [statuses[m] for m in ms]) for c, ms in CRITERIA.items()]
    return FactorResult(
        criteria=criteria,
        rank=sum(1 for s in statuses.values() if s.status == -1),
        category=factor_category(criteria),
        statuses=list(statuses.values()),
    )


def rank_classes(factors: Mapping[str, FactorResult], fair_poor_only: bool = False) -> list[tuple[str, int]]:
    """(class, rank) pairs, worst first, ties by name."""
    rows = [
        (name, f.rank)
        for name, f in factors.items()
        if not fair_poor_only or f.category in ("FAIR", "POOR")
    ]
    return sorted(rows, key=lambda r: (-r[1], r[0]))


def category_distribution(factors: Mapping[str, FactorResult]) -> dict[str, int]:
    """Percentage of classes per factor category, rounded half-up."""
    total = len(factors)
    if not total:
        raise EmptyProject("category distribution needs at least one class")
    counts = {c: 0 for c in CATEGORIES}
    for f in factors.values():
        counts[f.category] += 1
    return {
        c: int((Decimal(100 * n) / Decimal(total)).quantize(Decimal(1), rounding=ROUND_HALF_UP))
        for c, n in counts.items()
    }
