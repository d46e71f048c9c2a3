import sys
from pathlib import Path

import pytest
from hypothesis import settings

from drawbench import load_dataset, parse_actions

FIXTURES = Path(__file__).parent / "fixtures"

WORKED = {
    "d1": "d1_red_circle",
    "d2": "d2_blue_rectangle",
    "d3": "d3_corner_squares",
    "d4": "d4_circle_above_square",
    "d5": "d5_circle_grid",
    "d6": "d6_house_fill",
}

settings.register_profile("ci", deadline=None)
settings.load_profile("ci")


def worked_text(key: str) -> str:
    return (FIXTURES / f"{WORKED[key]}.actions.json").read_text(encoding="utf-8")


def worked_seq(key: str):
    return parse_actions(worked_text(key))


@pytest.fixture(scope="session")
def worked_tasks():
    return load_dataset(FIXTURES / "worked.tasks.json")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
