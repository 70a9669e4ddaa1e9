import functools
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpus import CONDITIONS, partition_of  # noqa: E402

from promptdelay.logic import parse_formula  # noqa: E402
from promptdelay.strategy import decide  # noqa: E402

CORPUS_BUDGET = 300_000

_criteria: dict = {}
corpus_seconds: dict = {}  # pipeline wall time per corpus entry


@functools.lru_cache(maxsize=None)
def corpus_verdict(i: int):
    """Pipeline verdict for corpus entry ``i`` (computed once per session)."""
    entry = CONDITIONS[i]
    part = partition_of(entry)
    phi = parse_formula(entry[0], part)
    start = time.perf_counter()
    verdict = decide(phi, part, budget=CORPUS_BUDGET)
    corpus_seconds[i] = time.perf_counter() - start
    return phi, part, verdict


@pytest.fixture(scope="session")
def verdict_of():
    return corpus_verdict


@pytest.fixture
def criterion():
    """Record a one-line pass/fail result for an acceptance criterion."""
    def record(number: int, ok: bool, detail: str):
        _criteria[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        ok, detail = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
