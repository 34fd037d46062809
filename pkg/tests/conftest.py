import functools
import itertools
from pathlib import Path

import pytest

from isct.singularity import SingularityGerm, monodromy_data
from isct.zigzag import ZigZagModel

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"

# n = 3, every exponent in 2..5
CORPUS = tuple(itertools.product(range(2, 6), repeat=4))


@functools.lru_cache(maxsize=None)
def md_for(exponents):
    return monodromy_data(SingularityGerm.brieskorn_pham(exponents))


@functools.lru_cache(maxsize=None)
def model_for(exponents):
    return ZigZagModel.build(md_for(exponents))


@pytest.fixture
def problems_dir():
    return PROBLEMS


_criteria: dict[int, tuple[str, str]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args))


def pytest_runtest_logreport(report):
    found = [v for k, v in report.user_properties if k == "criterion"]
    if not found:
        return
    cid, title = found[0]
    if report.when == "call" or report.failed:
        _criteria[cid] = (title, "PASS" if report.passed else "FAIL")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria):
        title, verdict = _criteria[cid]
        terminalreporter.write_line(f"[{verdict}] criterion {cid}: {title}")
