import pytest

from nlspec.lexicon import core_lexicon, data_path, ltl_lexicon
from nlspec.targets import load_model

_CRITERIA: dict[int, tuple[str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        number, title = mark.args
        _, outcomes = _CRITERIA.setdefault(number, (title, []))
        outcomes.append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, outcomes = _CRITERIA[number]
        verdict = "PASS" if outcomes and all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")


@pytest.fixture(scope="session")
def core():
    return core_lexicon()


@pytest.fixture(scope="session")
def ltl():
    return ltl_lexicon()


@pytest.fixture(scope="session")
def arith():
    return load_model(data_path("arith.model"))


@pytest.fixture(scope="session")
def core_text():
    return data_path("core.lex").read_text(encoding="utf-8")
