import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_RESULTS = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def record():
    """Log one acceptance line; the assertion itself stays in the test."""
    def _record(criterion, ok, detail=""):
        ACCEPTANCE_RESULTS.append((criterion, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
