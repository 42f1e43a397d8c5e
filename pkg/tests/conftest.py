import pytest

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(number, title): acceptance criterion exercised by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    label = dict(report.user_properties).get("criterion")
    if label:
        _acceptance.append((label, report.outcome))


@pytest.fixture(autouse=True)
def _record_criterion(request):
    m = request.node.get_closest_marker("criterion")
    if m is not None:
        request.node.user_properties.append(("criterion", f"AC{m.args[0]}: {m.args[1]}"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    merged = {}
    for label, outcome in _acceptance:
        merged[label] = merged.get(label, True) and outcome == "passed"
    for label in sorted(merged, key=lambda s: int(s[2:].split(":")[0])):
        terminalreporter.write_line(f"[{'PASS' if merged[label] else 'FAIL'}] {label}")
