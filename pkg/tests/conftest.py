from __future__ import annotations

from functools import lru_cache

import pytest

from normtori.catalog import lookup
from normtori.permgrp import subgroup_classes


@lru_cache(maxsize=None)
def group(label):
    return lookup(label)


@lru_cache(maxsize=None)
def table(label):
    return subgroup_classes(group(label))


@pytest.fixture
def cached():
    return group, table


_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""

    def record(name, ok, detail=""):
        _CRITERIA[name] = (bool(ok), detail)
        print(f"{name}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda s: [int(x) if x.isdigit() else x for x in s.replace("(", " ").replace(")", "").split()]):
        ok, detail = _CRITERIA[name]
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'} {detail}")
