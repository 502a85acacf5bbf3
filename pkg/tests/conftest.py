import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gapcycles.cycle import build_cycle  # noqa: E402


@pytest.fixture(scope="session")
def cycles():
    """Recursion-built cycles, cached across the session."""
    return build_cycle


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import CRITERIA
    except ImportError:
        return

    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" and outcome != "error":
                continue
            name = rep.nodeid.split("::")[-1]
            if "test_acceptance.py" in rep.nodeid and name in CRITERIA:
                results[name] = outcome == "passed"
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, title in CRITERIA.items():
        if name in results:
            terminalreporter.write_line(f"{'PASS' if results[name] else 'FAIL'}  {title}")
