"""Shared pytest glue: the acceptance suite reports one line per criterion."""

_criterion_lines: list[str] = []


def record_criterion(line: str) -> None:
    print(line)
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
