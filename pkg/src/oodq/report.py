"""Quality report assembly and JSON/CSV emission."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .cfg import MethodComplexity, method_complexity, method_ids
from .class_metrics import CLASS_METRICS, CKVector, ClassMetricVector, ck_metrics, class_metrics
from .codec import from_jsonable, to_jsonable
from .errors import MalformedBody
from .loc import ApplicationMetrics, application_metrics
from .model import ProjectModel
from .rollup import CATEGORIES, FactorResult, ThresholdBound, category_distribution, factor_result, rank_classes
from .system_metrics import (
    MOODVector,
    QmoodClassMetrics,
    QmoodDesignProperties,
    QualityIndices,
    mood_metrics,
    qmood_class_metrics,
    qmood_properties,
    quality_indices,
)

REPORT_SCHEMA = 1

# Flagged when a class value exceeds the limit.
CK_LIMITS = {"cbo": 2, "wmc": 14, "rfc": 100, "dit": 7, "noc": 3}
CK_NAMES = ("wmc", "dit", "noc", "cbo", "rfc", "lcom")
QMOOD_NAMES = ("ana", "dam", "dcc", "cam", "moa", "mfa", "nop", "cis", "nom")


@dataclass
class ClassReport:
    qualified_name: str
    metrics: ClassMetricVector
    ck: CKVector
    qmood: QmoodClassMetrics
    factor: FactorResult
    ck_flags: list[str] = field(default_factory=list)


@dataclass
class RankEntry:
    qualified_name: str
    rank: int
    category: str


@dataclass
class AggregateRow:
    metric: str
    total: float
    avg: float


@dataclass
class QualityReport:
    project: str = ""
    schema: int = REPORT_SCHEMA
    classes: list[ClassReport] = field(default_factory=list)
    methods: list[MethodComplexity] = field(default_factory=list)
    application: ApplicationMetrics = field(default_factory=ApplicationMetrics)
    mood: MOODVector = field(default_factory=MOODVector)
    properties: QmoodDesignProperties = field(default_factory=QmoodDesignProperties)
    indices: QualityIndices = field(default_factory=QualityIndices)
    ranking: list[RankEntry] = field(default_factory=list)
    distribution: dict[str, int] = field(default_factory=lambda: {c: 0 for c in CATEGORIES})
    distribution_sums_to_100: bool = True
    ck_aggregates: list[AggregateRow] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class AnalysisOptions:
    count_operators: bool = True
    unit_wmc: bool = False
    fair_poor_only: bool = False
    include_static_in_lcom: bool = False


def ck_aggregates(rows: list[CKVector]) -> list[AggregateRow]:
    out = []
    for name in CK_NAMES:
        total = sum(getattr(r, name) for r in rows)
        out.append(AggregateRow(name, total, total / len(rows) if rows else 0.0))
    return out


def assemble_report(
    project: ProjectModel,
    bounds: Mapping[str, ThresholdBound],
    baseline: Optional[Mapping[str, float]] = None,
    options: Optional[AnalysisOptions] = None,
    diagnostics: Optional[list[str]] = None,
) -> QualityReport:
    """Run every metric over ``project`` and gather the results."""
    opts = options or AnalysisOptions()
    diags = list(diagnostics or [])
    classes = sorted(project.classes, key=lambda c: c.qualified_name)

    methods: list[MethodComplexity] = []
    complexities: dict[str, int] = {}
    for cls in classes:
        for m, mid in zip(cls.methods, method_ids(cls)):
            if not m.is_concrete:
                continue
            try:
                mc, cfg = method_complexity(cls, m, project, opts.count_operators, mid)
            except MalformedBody as exc:
                diags.append(f"{cls.path or cls.qualified_name}: {cls.qualified_name}.{m.name}: {exc}; method skipped")
                continue
            diags.extend(f"{cls.path or cls.qualified_name}: {cls.qualified_name}.{m.name}: {d}" for d in cfg.diagnostics)
            methods.append(mc)
            complexities[mc.method_id] = mc.v

    reports: list[ClassReport] = []
    for cls in classes:
        vector = class_metrics(cls, project, complexities)
        ck = ck_metrics(cls, project, complexities, opts.unit_wmc, opts.include_static_in_lcom)
        reports.append(
            ClassReport(
                cls.qualified_name,
                vector,
                ck,
                qmood_class_metrics(cls, project),
                factor_result(vector, bounds),
                [name for name, limit in CK_LIMITS.items() if getattr(ck, name) > limit],
            )
        )

    report = QualityReport(project=project.name, classes=reports, methods=methods, diagnostics=diags)
    report.application = application_metrics(project, complexities)
    report.ck_aggregates = ck_aggregates([r.ck for r in reports])
    if reports:
        report.mood = mood_metrics(project)
        factors = {r.qualified_name: r.factor for r in reports}
        report.ranking = [
            RankEntry(name, rank, factors[name].category)
            for name, rank in rank_classes(factors, opts.fair_poor_only)
        ]
        report.distribution = category_distribution(factors)
        report.distribution_sums_to_100 = sum(report.distribution.values()) == 100
    report.properties = qmood_properties(project, [r.qmood for r in reports], baseline, report.diagnostics)
    report.indices = quality_indices(report.properties)
    return report


# -- emission ----------------------------------------------------------------


def report_to_dict(report: QualityReport) -> dict[str, Any]:
    return to_jsonable(report)


def emit_json(report: QualityReport) -> str:
    return json.dumps(report_to_dict(report), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def report_from_dict(data: Mapping[str, Any]) -> QualityReport:
    return from_jsonable(QualityReport, data)


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def csv_header() -> list[str]:
    return (
        ["class"]
        + list(CLASS_METRICS)
        + [f"ck_{n}" for n in CK_NAMES]
        + [f"qmood_{n}" for n in QMOOD_NAMES]
        + ["rank", "category", "ck_flags"]
    )


def emit_csv(report: QualityReport) -> str:
    """One row per class; ratios to two decimals."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(csv_header())
    for r in report.classes:
        writer.writerow(
            [r.qualified_name]
            + [_fmt(getattr(r.metrics, n)) for n in CLASS_METRICS]
            + [_fmt(getattr(r.ck, n)) for n in CK_NAMES]
            + [_fmt(getattr(r.qmood, n)) for n in QMOOD_NAMES]
            + [str(r.factor.rank), r.factor.category, ";".join(r.ck_flags)]
        )
    return buf.getvalue()


def emit_system_csv(report: QualityReport) -> str:
    """System-level values as ``section,name,value`` rows; undefined values are empty."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["section", "name", "value"])
    for section, obj in (
        ("application", report.application),
        ("mood", report.mood),
        ("properties", report.properties),
        ("indices", report.indices),
    ):
        for name, value in to_jsonable(obj).items():
            writer.writerow([section, name, _fmt(value)])
    for row in report.ck_aggregates:
        writer.writerow(["ck_total", row.metric, _fmt(row.total)])
        writer.writerow(["ck_avg", row.metric, _fmt(row.avg)])
    for cat, pct in report.distribution.items():
        writer.writerow(["distribution", cat, pct])
    return buf.getvalue()


def format_ck_table(report: QualityReport) -> str:
    """Plain-text Total/Avg table of the CK aggregates."""
    lines = [f"{'metric':<8}{'Total':>10}{'Avg':>8}"]
    for row in report.ck_aggregates:
        lines.append(f"{row.metric.upper():<8}{row.total:>10g}{row.avg:>8.2f}")
    return "\n".join(lines) + "\n"
