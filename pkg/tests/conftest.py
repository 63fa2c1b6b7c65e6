import os

import pytest

from qhdevans.model import ModelParams, reference_shock
from qhdevans.profile import coefficient_fields, compute_profile


def pytest_collection_modifyitems(config, items):
    if os.environ.get("QHD_FULL_SCALE") == "1":
        return
    skip = pytest.mark.skip(reason="set QHD_FULL_SCALE=1 to run full-resolution runs")
    for item in items:
        if "full_scale" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def params():
    return ModelParams()


@pytest.fixture(scope="session")
def shock(params):
    return reference_shock(params=params)


@pytest.fixture(scope="session")
def wave(shock, params):
    return compute_profile(shock, params)


@pytest.fixture(scope="session")
def fields(wave, params):
    return coefficient_fields(wave, params)


def pytest_terminal_summary(terminalreporter):
    lines = [value for report in terminalreporter.stats.get("passed", [])
             + terminalreporter.stats.get("failed", [])
             for name, value in getattr(report, "user_properties", ())
             if name == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
