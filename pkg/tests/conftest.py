"""Collects acceptance-criterion outcomes and prints one PASS/FAIL line per
criterion at the end of the run."""
from collections import defaultdict

import pytest

_RESULTS: dict[int, list[tuple[bool, str]]] = defaultdict(list)
_TITLES: dict[int, str] = {}


class _Recorder:
    def __init__(self, number: int, title: str):
        self.number = number
        _TITLES[number] = title
        self.calls = 0

    def __call__(self, ok, detail: str) -> bool:
        self.calls += 1
        _RESULTS[self.number].append((bool(ok), detail))
        return bool(ok)


@pytest.fixture
def criterion(request):
    """``criterion(n, title)`` returns a recorder; each call logs one sub-result."""
    made = []

    def make(number: int, title: str) -> _Recorder:
        rec = _Recorder(number, title)
        made.append(rec)
        return rec

    yield make
    if request.node.rep_call.failed if hasattr(request.node, "rep_call") else False:
        for rec in made:
            if rec.calls == 0:
                _RESULTS[rec.number].append((False, "raised before recording"))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _TITLES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_TITLES):
        rows = _RESULTS.get(n, [])
        ok = bool(rows) and all(r[0] for r in rows)
        tr.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {_TITLES[n]}")
        for sub_ok, detail in rows:
            tr.write_line(f"    {'ok  ' if sub_ok else 'FAIL'} {detail}")
