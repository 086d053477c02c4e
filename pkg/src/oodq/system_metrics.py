"""System-level design metrics: MOOD ratios, QMOOD metrics and quality indices."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Mapping, Optional

from .class_metrics import _index
from .errors import EmptyProject, SchemaViolation
from .model import ClassModel, MethodModel, ProjectModel, ancestors_of, descendants_of

HIDDEN = frozenset({"private", "protected", "package"})


@dataclass
class MOODVector:
    mhf: float = 0.0
    ahf: float = 0.0
    mif: float = 0.0
    aif: float = 0.0
    cf: float = 0.0
    pf: Optional[float] = None


@dataclass
class QmoodClassMetrics:
    ana: int = 0
    dam: float = 1.0
    dcc: int = 0
    cam: float = 0.0
    moa: int = 0
    mfa: float = 0.0
    nop: int = 0
    cis: int = 0
    nom: int = 0


@dataclass
class QmoodDesignProperties:
    design_size: float = 0.0
    hierarchies: float = 0.0
    abstraction: float = 0.0
    encapsulation: float = 0.0
    coupling: float = 0.0
    cohesion: float = 0.0
    composition: float = 0.0
    inheritance: float = 0.0
    polymorphism: float = 0.0
    messaging: float = 0.0
    complexity: float = 0.0

    def scaled(self, factor: float) -> QmoodDesignProperties:
        return QmoodDesignProperties(**{k: v * factor for k, v in asdict(self).items()})


PROPERTY_NAMES = tuple(f.name for f in fields(QmoodDesignProperties))

# property <- per-class metric whose mean it takes
PROPERTY_SOURCES = {
    "abstraction": "ana",
    "encapsulation": "dam",
    "coupling": "dcc",
    "cohesion": "cam",
    "composition": "moa",
    "inheritance": "mfa",
    "polymorphism": "nop",
    "messaging": "cis",
    "complexity": "nom",
}


@dataclass
class QualityIndices:
    reusability: float = 0.0
    flexibility: float = 0.0
    understandability: float = 0.0
    functionality: float = 0.0
    extendibility: float = 0.0
    effectiveness: float = 0.0
    tqi: float = 0.0


# -- inheritance helpers -----------------------------------------------------


def _inheritable(m: MethodModel) -> bool:
    return not m.is_constructor and m.visibility != "private"


def inherited_methods(project: ProjectModel, cls: ClassModel) -> dict[tuple[str, int], MethodModel]:
    """Methods visible in ``cls`` through inheritance and not redefined there,
    keyed by (name, arity)."""
    own = {m.signature for m in cls.methods if not m.is_constructor}
    found: dict[tuple[str, int], MethodModel] = {}
    for anc in ancestors_of(project, cls):
        for m in anc.methods:
            if _inheritable(m) and m.signature not in own:
                found.setdefault(m.signature, m)
    return found


def inherited_attributes(project: ProjectModel, cls: ClassModel) -> set[str]:
    own = {a.name for a in cls.attributes}
    return {
        a.name
        for anc in ancestors_of(project, cls)
        for a in anc.attributes
        if a.visibility != "private" and a.name not in own
    }


def _overrides(project: ProjectModel, cls: ClassModel) -> set[tuple[str, int]]:
    """Signatures declared in ``cls`` that redefine an ancestor method."""
    inherited = {
        m.signature
        for anc in ancestors_of(project, cls)
        for m in anc.methods
        if _inheritable(m) and not m.is_static
    }
    return {m.signature for m in cls.methods if not m.is_constructor and not m.is_static and m.signature in inherited}


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


# -- MOOD --------------------------------------------------------------------


def mood_metrics(project: ProjectModel) -> MOODVector:
    if not project.classes:
        raise EmptyProject("MOOD metrics need at least one class")
    methods = [m for c in project.classes for m in c.methods]
    attrs = [a for c in project.classes for a in c.attributes]
    mi = ma = ai = aa = 0
    overrides = 0
    pf_den = 0
    for c in project.classes:
        inh = len(inherited_methods(project, c))
        decl = sum(1 for m in c.methods if not m.is_constructor)
        mi += inh
        ma += inh + decl
        inh_a = len(inherited_attributes(project, c))
        ai += inh_a
        aa += inh_a + len(c.attributes)
        over = _overrides(project, c)
        overrides += len(over)
        new = sum(
            1 for m in c.methods if _inheritable(m) and not m.is_static and m.signature not in over
        )
        pf_den += new * len(descendants_of(project, c))
    tc = len(project.classes)
    idx = _index(project)
    clients = sum(len(idx.used.get(c.qualified_name, ())) for c in project.classes)
    return MOODVector(
        mhf=_ratio(sum(1 for m in methods if m.visibility in HIDDEN), len(methods)),
        ahf=_ratio(sum(1 for a in attrs if a.visibility in HIDDEN), len(attrs)),
        mif=_ratio(mi, ma),
        aif=_ratio(ai, aa),
        cf=_ratio(clients, tc * tc - tc),
        pf=overrides / pf_den if pf_den else None,
    )


# -- QMOOD -------------------------------------------------------------------


def _type_key(ref) -> str:
    return ref.resolved or ref.name


def qmood_class_metrics(cls: ClassModel, project: ProjectModel) -> QmoodClassMetrics:
    q = cls.qualified_name
    attrs = cls.attributes
    related = {r.resolved for r in [a.declared_type for a in attrs] + [p for m in cls.methods for p in m.parameters]}
    related.discard(None)
    related.discard(q)

    n = len(cls.methods)
    if n:
        per_method = [{_type_key(p) for p in m.parameters} | {q} for m in cls.methods]
        universe = set().union(*per_method)
        cam = sum(len(s) for s in per_method) / (n * len(universe))
    else:
        cam = 0.0

    inherited = len(inherited_methods(project, cls))
    declared = sum(1 for m in cls.methods if not m.is_constructor)
    overridden = set()
    for d in descendants_of(project, cls):
        overridden |= {m.signature for m in d.methods if not m.is_constructor}

    return QmoodClassMetrics(
        ana=len(ancestors_of(project, cls)),
        dam=_ratio(sum(1 for a in attrs if a.visibility in ("private", "protected")), len(attrs)) if attrs else 1.0,
        dcc=len(related),
        cam=cam,
        moa=sum(1 for a in attrs if a.declared_type.resolved is not None),
        mfa=_ratio(inherited, inherited + declared),
        nop=sum(
            1
            for m in cls.methods
            if not m.is_constructor and (m.is_abstract or (not m.is_static and m.signature in overridden))
        ),
        cis=sum(1 for m in cls.methods if m.visibility == "public"),
        nom=n,
    )


def hierarchy_count(project: ProjectModel) -> int:
    """Root classes (no resolved parent) with at least one descendant."""
    return sum(1 for c in project.classes if not project.parents(c) and project._children.get(c.qualified_name))


def qmood_properties(
    project: ProjectModel,
    per_class: list[QmoodClassMetrics],
    baseline: Optional[Mapping[str, float]] = None,
    diagnostics: Optional[list[str]] = None,
) -> QmoodDesignProperties:
    props = QmoodDesignProperties(design_size=len(project.classes), hierarchies=hierarchy_count(project))
    if per_class:
        for prop, metric in PROPERTY_SOURCES.items():
            setattr(props, prop, sum(getattr(m, metric) for m in per_class) / len(per_class))
    if baseline:
        for prop, divisor in baseline.items():
            if divisor == 0:
                setattr(props, prop, 0.0)
                if diagnostics is not None:
                    diagnostics.append(f"baseline divisor for {prop} is 0; property set to 0")
            else:
                setattr(props, prop, getattr(props, prop) / divisor)
    return props


def load_baseline(path: str | Path) -> dict[str, float]:
    """Read ``name value`` pairs (``=`` or ``:`` separators allowed, ``#`` comments)."""
    out: dict[str, float] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].replace("=", " ").replace(":", " ").strip()
        if not line:
            continue
        parts = line.split()
        where = f"{path}:{lineno}"
        if len(parts) != 2:
            raise SchemaViolation(where, f"expected 'property value', got {raw.strip()!r}")
        name, value = parts
        if name not in PROPERTY_NAMES:
            raise SchemaViolation(where, f"unknown design property {name!r}")
        try:
            number = float(value)
        except ValueError:
            raise SchemaViolation(where, f"not a number: {value!r}") from None
        if number < 0 or number != number:
            raise SchemaViolation(where, f"divisor must be non-negative, got {value}")
        out[name] = number
    return out


def quality_indices(p: QmoodDesignProperties) -> QualityIndices:
    reusability = -0.25 * p.coupling + 0.25 * p.cohesion + 0.5 * p.messaging + 0.5 * p.design_size
    flexibility = 0.25 * p.encapsulation - 0.25 * p.coupling + 0.5 * p.composition + 0.5 * p.polymorphism
    understandability = 0.33 * (
        -p.abstraction + p.encapsulation - p.coupling + p.cohesion - p.polymorphism - p.complexity - p.design_size
    )
    functionality = (
        0.12 * p.cohesion + 0.22 * p.polymorphism + 0.22 * p.messaging + 0.22 * p.design_size + 0.22 * p.hierarchies
    )
    extendibility = 0.5 * p.abstraction - 0.5 * p.coupling + 0.5 * p.inheritance + 0.5 * p.polymorphism
    effectiveness = 0.2 * (p.abstraction + p.encapsulation + p.composition + p.inheritance + p.polymorphism)
    six = (reusability, flexibility, understandability, functionality, extendibility, effectiveness)
    return QualityIndices(*six, tqi=sum(six))
