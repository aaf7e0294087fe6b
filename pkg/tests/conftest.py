import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[k]
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {mod.DESCRIPTIONS[k]}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
