import contextlib

import pytest

RESULTS = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion as PASS/FAIL for the end-of-run summary."""

    @contextlib.contextmanager
    def record(number, title):
        try:
            yield
        except BaseException as exc:
            RESULTS.append((number, title, False, f"{type(exc).__name__}: {exc}".splitlines()[0]))
            raise
        RESULTS.append((number, title, True, ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, why in sorted(RESULTS):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"
        terminalreporter.write_line(line + (f"  ({why})" if why else ""))
