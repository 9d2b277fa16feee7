import sys
from fractions import Fraction

import pytest

from dnadecide.decision import DecisionMatrix, build_matrix


def make_ball_game() -> DecisionMatrix:
    """Urn draw with three outcomes (4/9, 1/3, 2/9) and three two-favorable options."""
    return build_matrix(
        outcomes=[
            ("red", Fraction(4, 9)),
            ("black", Fraction(1, 3)),
            ("white", Fraction(2, 9)),
        ],
        options=[
            ("option-1", ["red", "black"]),
            ("option-2", ["red", "white"]),
            ("option-3", ["black", "white"]),
        ],
    )


@pytest.fixture
def ball_game() -> DecisionMatrix:
    return make_ball_game()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance verdicts collected during the run, if any."""
    module = sys.modules.get("test_acceptance")
    if module is None:
        return
    lines = module.verdict_lines()
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)
