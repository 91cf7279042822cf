import pytest

_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when == "call":
        outcome = "xfailed" if hasattr(report, "wasxfail") else report.outcome
        _acceptance.append((report.nodeid.split("::")[-1], outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        label = {"passed": "PASS", "xfailed": "FAIL (known, xfail)"}.get(outcome, "FAIL")
        terminalreporter.write_line(f"{label}  {name}")


@pytest.fixture
def rng():
    import random

    return random.Random(12345)
