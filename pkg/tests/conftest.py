import pytest

from sadattack.attack import Prediction, TargetModel
from sadattack.glyphs import build_default_tables, detect_styled

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def table():
    return build_default_tables()


class ConstantTarget(TargetModel):
    """Always answers the same label; never beatable."""

    def __init__(self, label="positive"):
        super().__init__()
        self.label = label
        self.seen = []

    def _predict(self, text):
        self.seen.append(text)
        return Prediction(label=self.label)


class StyledCountTarget(TargetModel):
    """Flips its label once at least ``k`` styled runs appear in the input."""

    def __init__(self, k, table):
        super().__init__()
        self.k = k
        self.table = table

    def _predict(self, text):
        runs = detect_styled(text, self.table)
        return Prediction(label="flipped" if len(runs) >= self.k else "clean")


@pytest.fixture
def constant_target():
    return ConstantTarget()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
