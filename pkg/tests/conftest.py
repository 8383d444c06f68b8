import contextlib

RESULTS = []


@contextlib.contextmanager
def criterion(number, title):
    """Record one acceptance line; failures still raise."""
    try:
        yield
    except BaseException:
        RESULTS.append(f"criterion {number:>2}: FAIL  {title}")
        raise
    RESULTS.append(f"criterion {number:>2}: PASS  {title}")


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
