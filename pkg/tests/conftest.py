def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            name = rep.nodeid.rsplit("::", 1)[-1]
            if rep.when == "call" and name.startswith("test_criterion_"):
                notes = dict(getattr(rep, "user_properties", []))
                rows.append((name, "PASS" if outcome == "passed" else "FAIL", notes.get("note", "")))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, note in sorted(rows):
        num = name.split("_")[2]
        title = " ".join(name.split("_")[3:])
        line = f"criterion {int(num):2d} {status}  {title}"
        terminalreporter.write_line(line + (f"  ({note})" if note else ""))
