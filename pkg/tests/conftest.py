import math
import sys

import pytest

from springlinkage import LinkageGeometry, StrokeConfig


@pytest.fixture
def geom():
    return LinkageGeometry(0.05)


@pytest.fixture
def upright():
    return StrokeConfig.from_degrees(179.9, 0.0)


@pytest.fixture
def mid_stroke():
    return StrokeConfig(math.radians(150.0), math.radians(20.0))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted((k for k in mod.RESULTS if isinstance(k, int))):
        parts = mod.RESULTS[key]
        verdict = "PASS" if all(p[1] for p in parts) else "FAIL"
        tr.write_line(f"criterion {key:2d}: {verdict}  " + "; ".join(p[2] for p in parts))
    for key in ("6-report", "backend"):
        for _, _, detail in mod.RESULTS.get(key, []):
            tr.write_line(f"  note: {detail}")
