import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # replay the acceptance verdict lines where fd capture cannot eat them
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERION_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
