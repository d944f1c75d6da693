import helpers


def pytest_terminal_summary(terminalreporter):
    if helpers.SCOREBOARD:
        terminalreporter.section("acceptance criteria")
        for line in sorted(helpers.SCOREBOARD, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
