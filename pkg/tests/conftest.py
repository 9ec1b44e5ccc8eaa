def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS  # only populated when those tests ran
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])

