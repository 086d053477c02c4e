"""Crosscutting-concern cohesion over use-case scenarios and domain coupling."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from pathlib import Path
from typing import Any, Optional

import yaml

from .errors import DomainError, IoFailure, SchemaViolation
from .interchange import validate


@dataclass(frozen=True)
class MessageEvent:
    name: str
    sender: str
    receiver: str


@dataclass
class ScenarioModel:
    id: str
    events: list[MessageEvent] = field(default_factory=list)
    concepts: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.concepts:
            self.concepts = frozenset(c for e in self.events for c in (e.sender, e.receiver))
        for i, e in enumerate(self.events):
            for c in (e.sender, e.receiver):
                if c not in self.concepts:
                    raise SchemaViolation(f"{self.id}/events/{i}", f"concept {c!r} not declared by the scenario")

    @property
    def message_names(self) -> frozenset[str]:
        return frozenset(e.name for e in self.events)


@dataclass
class UseCase:
    id: str
    scenarios: list[ScenarioModel] = field(default_factory=list)


@dataclass(frozen=True)
class UseCaseRelation:
    kind: str  # include | extend
    source: str
    target: str


@dataclass
class UseCaseModel:
    use_cases: list[UseCase] = field(default_factory=list)
    relations: list[UseCaseRelation] = field(default_factory=list)

    def __post_init__(self) -> None:
        ids = {u.id for u in self.use_cases}
        for r in self.relations:
            for end in (r.source, r.target):
                if end not in ids:
                    raise SchemaViolation("/relations", f"{r.kind} relation names unknown use case {end!r}")


@dataclass
class DomainModel:
    concepts: frozenset[str] = frozenset()
    client_relations: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self) -> None:
        for client, supplier in self.client_relations:
            if client == supplier:
                raise SchemaViolation("/domain/client_relations", f"self relation on {client!r}")
            for c in (client, supplier):
                if c not in self.concepts:
                    raise SchemaViolation("/domain/client_relations", f"unknown concept {c!r}")


def scenario_similarity(a: ScenarioModel, b: ScenarioModel, min_overlap: int = 1) -> bool:
    """Scenarios are similar when they exchange at least ``min_overlap`` common messages."""
    return len(a.message_names & b.message_names) >= min_overlap


def cl_uc(use_case: UseCase, min_overlap: int = 1) -> float:
    pairs = list(combinations(use_case.scenarios, 2))
    if not pairs:
        return 1.0
    similar = sum(1 for a, b in pairs if scenario_similarity(a, b, min_overlap))
    return similar / len(pairs)


def cl_ucm(model: UseCaseModel, min_overlap: int = 1) -> float:
    cases = [u for u in model.use_cases if u.scenarios]
    pairs = [
        (a, b)
        for u, w in combinations(cases, 2)
        for a, b in product(u.scenarios, w.scenarios)
    ]
    if not pairs:
        return 1.0
    similar = sum(1 for a, b in pairs if scenario_similarity(a, b, min_overlap))
    return 1.0 - similar / len(pairs)


def coupling_factor(dm: DomainModel) -> float:
    tc = len(dm.concepts)
    if tc < 2:
        raise DomainError(f"coupling factor needs at least 2 concepts, got {tc}")
    return len(dm.client_relations) / (tc * tc - tc)


@dataclass
class CohesionReport:
    cl_uc: dict[str, float]
    cl_ucm: float
    cf: Optional[float]


def analyze_cohesion(model: UseCaseModel, domain: Optional[DomainModel], min_overlap: int = 1) -> CohesionReport:
    cf = coupling_factor(domain) if domain is not None and len(domain.concepts) >= 2 else None
    return CohesionReport(
        cl_uc={u.id: cl_uc(u, min_overlap) for u in model.use_cases},
        cl_ucm=cl_ucm(model, min_overlap),
        cf=cf,
    )


def model_from_dict(doc: Any) -> tuple[UseCaseModel, Optional[DomainModel]]:
    validate(doc, "usecase.schema.json")
    use_cases = [
        UseCase(
            u["id"],
            [
                ScenarioModel(
                    s["id"],
                    [MessageEvent(e["name"], e["from"], e["to"]) for e in s["events"]],
                    frozenset(s.get("concepts", ())),
                )
                for s in u["scenarios"]
            ],
        )
        for u in doc["use_cases"]
    ]
    relations = [UseCaseRelation(r["kind"], r["from"], r["to"]) for r in doc.get("relations", [])]
    domain = None
    if "domain" in doc:
        d = doc["domain"]
        domain = DomainModel(
            frozenset(d["concepts"]),
            frozenset((c, s) for c, s in d.get("client_relations", [])),
        )
    return UseCaseModel(use_cases, relations), domain


def load_usecase_model(path: str | Path) -> tuple[UseCaseModel, Optional[DomainModel]]:
    """Read a YAML or JSON use-case document (JSON is valid YAML)."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {p}: {exc}") from exc
    try:
        doc = json.loads(text) if p.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise SchemaViolation("", f"cannot parse {p.name}: {exc}") from exc
    return model_from_dict(doc)
