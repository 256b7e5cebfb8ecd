import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("tfdecay", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("tfdecay")

PI_M14 = np.pi ** -0.25


def phi(x):
    return PI_M14 * np.exp(-0.5 * np.asarray(x, dtype=float) ** 2)


@pytest.fixture
def gaussian():
    return phi


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def record(criterion: int, part: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(ok), detail))
    print(f"criterion {criterion} [{part}]: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[k]
        ok = all(p[1] for p in parts)
        failed = [p[0] for p in parts if not p[1]]
        tail = f" (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}{tail}")
