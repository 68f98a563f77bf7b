import pytest

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def criterion():
    from higgspw import checks

    cache = {}

    def get(n):
        if n not in cache:
            crit = checks.CRITERIA[n]()
            cache[n] = crit
            line = crit.line()
            ACCEPTANCE_LINES.append(line)
            print("\n" + line)
        return cache[n]

    return get


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    from higgspw import checks

    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
    n, reason = checks.EXCLUDED
    terminalreporter.write_line(f"criterion {n} [SKIP] {reason}")
