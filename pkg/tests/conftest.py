import pytest

from blockmark import embed
from blockmark.fixtures import canonical_key, checkerboard_mark, gradient_host


@pytest.fixture(scope="session")
def host():
    return gradient_host()


@pytest.fixture(scope="session")
def mark():
    return checkerboard_mark()


@pytest.fixture(scope="session")
def key():
    return canonical_key()


@pytest.fixture(scope="session")
def watermarked(host, mark, key):
    return embed(host, mark, key)


_CRITERIA: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.failed:
        _CRITERIA[label] = "FAIL"
    elif report.when == "call":
        _CRITERIA.setdefault(label, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"{status}  {label}")
