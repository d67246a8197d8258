import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import acceptance_log  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(acceptance_log.LINES, key=lambda line: int(line.split()[2].rstrip(':'))):
        terminalreporter.write_line(line)


@pytest.fixture
def write_lines(tmp_path):
    def _write(name, lines):
        path = tmp_path / name
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        return path

    return _write
