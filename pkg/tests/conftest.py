import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[str, tuple[str, str, str]] = {}


@pytest.fixture
def note(request):
    """Attach a one-line detail to the acceptance summary for this test."""

    def record(text: str) -> None:
        request.node.user_properties.append(("detail", text))

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    criterion = marker.args[0] if marker.args else item.name
    detail = "; ".join(v for k, v in item.user_properties if k == "detail")
    status = "PASS" if rep.passed else "FAIL"
    if not detail and hasattr(rep, "wasxfail"):
        detail = rep.wasxfail
    elif not detail and hasattr(rep.longrepr, "reprcrash"):
        detail = rep.longrepr.reprcrash.message
    _ACCEPTANCE[item.nodeid] = (status, criterion, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, criterion, detail in _ACCEPTANCE.values():
        terminalreporter.write_line(f"{status}  {criterion}: {detail}")
