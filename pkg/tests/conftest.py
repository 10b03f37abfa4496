import pytest

_CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, title, passed, measured)``."""
    lines = request.config.stash.setdefault(_CRITERIA, {})

    def record(number, title, passed, measured):
        line = f"{'PASS' if passed else 'FAIL'} {number:2d} {title}: {measured}"
        lines[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_CRITERIA, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
