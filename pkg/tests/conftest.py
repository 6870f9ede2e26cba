import os

import pytest

from topswops.bounds import ensure_f_table

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def f19():
    return ensure_f_table(20)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("TSWOPS_EXTENDED") == "1":
        return
    skip = pytest.mark.skip(reason="set TSWOPS_EXTENDED=1 to run the n = 15..17 suite")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
