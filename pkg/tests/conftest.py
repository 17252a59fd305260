import pytest

from gelfand_schwarz.catalog import so2_pair, so3_pair, trivial_pair, z2_pair


@pytest.fixture(scope="session")
def z2():
    return z2_pair()


@pytest.fixture(scope="session")
def so2():
    return so2_pair()


@pytest.fixture(scope="session")
def so3():
    return so3_pair()


@pytest.fixture(scope="session")
def trivial():
    return trivial_pair()


# acceptance summary: one line per criterion at the end of the run ------------------------

_CRITERIA = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA.setdefault(props["criterion"], []).append((report.outcome, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=int):
        runs = _CRITERIA[key]
        status = "PASS" if all(o == "passed" for o, _ in runs) else "FAIL"
        detail = "; ".join(d if o == "passed" else f"{d} [failed]" for o, d in runs)
        terminalreporter.write_line(f"{status}  criterion {key}  {detail}")
