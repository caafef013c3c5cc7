import pytest

CRITERIA = {
    1: "oracle equivalence, exhaustive 4x4",
    2: "dynamics equals line occupancy",
    3: "exact local balance",
    4: "stationarity battery",
    5: "law of large numbers at n=2000",
    6: "exact tiny expectations",
    7: "geometric last passage",
    8: "Ulam discretization and direct estimate",
    9: "coupling sweep and D_n decay",
}

_results: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str = "") -> bool:
        _results.setdefault(number, []).append((bool(ok), detail))
        status = "PASS" if ok else "FAIL"
        print(f"criterion {number} [{CRITERIA[number]}] {status} {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, name in CRITERIA.items():
        parts = _results.get(number)
        if not parts:
            tr.write_line(f"criterion {number}: NOT RUN  {name}")
            continue
        ok = all(p for p, _ in parts)
        details = "; ".join(d for _, d in parts if d)
        tr.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {name}  ({details})")
