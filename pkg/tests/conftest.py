import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_LINES: list[str] = []


class Criterion:
    """Collects sub-checks of one acceptance criterion and reports a single line."""

    def __init__(self, name: str):
        self.name = name
        self.checks: list[tuple[str, bool, str]] = []
        self.done = False

    def check(self, what: str, ok, detail: str = "") -> bool:
        self.checks.append((what, bool(ok), detail))
        return bool(ok)

    def line(self) -> str:
        failed = [c for c in self.checks if not c[1]]
        status = "PASS" if self.checks and not failed else "FAIL"
        shown = failed or self.checks
        notes = "; ".join(f"{w}{' [' + d + ']' if d else ''}" for w, _, d in shown[:4])
        if len(shown) > 4:
            notes += f"; ... {len(shown) - 4} more"
        return f"{status} {self.name}: {len(self.checks) - len(failed)}/{len(self.checks)} checks ({notes})"

    def finish(self):
        self.done = True
        text = self.line()
        _LINES.append(text)
        print(text)
        failed = [f"{w} {d}".strip() for w, ok, d in self.checks if not ok]
        assert self.checks and not failed, "; ".join(failed)


@pytest.fixture
def criterion(request):
    crit = Criterion(request.node.name.removeprefix("test_"))
    yield crit
    if not crit.done:
        crit.checks.append(("completed", False, "aborted by an exception"))
        _LINES.append(crit.line())


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for text in _LINES:
            terminalreporter.write_line(text)
