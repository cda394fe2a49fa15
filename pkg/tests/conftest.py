from __future__ import annotations

import pytest

from turklfg.lexdb import data_path
from turklfg.pipeline import Parser


# Names for the bundled corpus sentences, in file order.
LABELS = ("their_children", "possessed_children", "canonical_order", "subject_emphasis", "object_emphasis", "indef_object", "stranded_indef_object", "object_then_adverb", "adverb_then_object", "adjective_or_adverb", "little_red_ball", "inverted")


def corpus_sentences() -> list[tuple[str, str]]:
    """(label, sentence) pairs from the bundled golden corpus."""
    lines = [line.strip() for line in data_path("corpus.txt").read_text(encoding="utf-8").splitlines()]
    sentences = [line for line in lines if line and not line.startswith("#")]
    assert len(sentences) == len(LABELS)
    return list(zip(LABELS, sentences))


@pytest.fixture(scope="session")
def parser() -> Parser:
    return Parser.default()


@pytest.fixture(scope="session")
def corpus() -> dict[str, str]:
    return dict(corpus_sentences())


# -- acceptance report -----------------------------------------------------

_criteria: dict[int, dict] = {}
_owner: dict[str, int] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is None:
            continue
        number, title = mark.args
        entry = _criteria.setdefault(number, {"title": title, "passed": 0, "failed": []})
        entry.setdefault("tests", 0)
        entry["tests"] += 1
        _owner[item.nodeid] = number


def pytest_runtest_logreport(report):
    number = _owner.get(report.nodeid)
    if number is None:
        return
    entry = _criteria[number]
    if report.failed:
        entry["failed"].append(report.nodeid.split("::")[-1])
    elif report.when == "call" and report.passed:
        entry["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        ok = not entry["failed"] and entry["passed"] == entry["tests"]
        status = "PASS" if ok else "FAIL"
        line = f"criterion {number}: {status}  {entry['title']} ({entry['passed']}/{entry['tests']} checks)"
        if entry["failed"]:
            line += "  failing: " + ", ".join(entry["failed"])
        terminalreporter.write_line(line)
