import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from helpers import F, make_signature  # noqa: E402


@pytest.fixture
def sig():
    return make_signature()


@pytest.fixture
def parse(sig):
    return lambda text: F(text, sig)


from helpers import ACCEPTANCE, PROVED, audit_terminal_segments, record_proofs  # noqa: E402

record_proofs()


_AUDIT: list = []


def pytest_sessionfinish(session, exitstatus):
    _AUDIT[:] = audit_terminal_segments(PROVED)
    if _AUDIT and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
    terminalreporter.write_line(
        f"terminal segment audit: {len(PROVED)} proved results, {len(_AUDIT)} rejected")
    for line in _AUDIT[:20]:
        terminalreporter.write_line(f"  {line}")
