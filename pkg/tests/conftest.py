import pytest

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def verdict(request):
    """Record the outcome of an acceptance criterion under the given number and title."""

    def _set(number: int, title: str):
        ACCEPTANCE[number] = (title, False)

        def done():
            ACCEPTANCE[number] = (title, True)

        return done

    return _set


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title}")
