"""Shared hooks: the acceptance suite reports one line per criterion at the end of the run."""

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[number] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        line = f"criterion {n} {title}: {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
