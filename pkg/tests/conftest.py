from __future__ import annotations

from pathlib import Path

import pytest

from oodq.java import SourceFile, parse_compilation_unit
from oodq.model import ProjectModel, resolve_project

FIXTURES = Path(__file__).parent / "fixtures"


def parse_java(*sources: str) -> ProjectModel:
    """Parse one or more inline compilation units into a resolved project."""
    classes = []
    tallies = {}
    for i, text in enumerate(sources):
        path = f"Unit{i}.java"
        found, tally, diags = parse_compilation_unit(SourceFile(path, text))
        assert not [d for d in diags if d.severity == "error"], diags
        classes.extend(found)
        tallies[path] = tally
    return resolve_project(classes, name="inline", file_tallies=tallies)


def method_body(project: ProjectModel, qualified: str):
    cls_name, _, meth = qualified.rpartition(".")
    cls = project.get(cls_name)
    return next(m for m in cls.methods if m.name == meth).body


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and not rep.passed):
        return
    status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_line(f"[acceptance] {status}  {marker.args[0]}")
