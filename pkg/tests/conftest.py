import time

import pytest

from c2inv.catalog import get_entry
from c2inv.graph import parse_edge_list

K4_TEXT = "a b\na c\nb c\na d\nc d\nb d\n"


@pytest.fixture
def triangle():
    return parse_edge_list("a b\na c\nb c")


@pytest.fixture
def k4():
    return parse_edge_list(K4_TEXT)


@pytest.fixture
def k5():
    return get_entry("k4").completion


@pytest.fixture
def oct_g():
    return get_entry("oct").decompletion


@pytest.fixture
def oct_k():
    return get_entry("oct").completion


@pytest.fixture
def c7():
    return get_entry("c7").decompletion


# -- acceptance gate reporting ----------------------------------------------------
#
# Each acceptance criterion runs inside ``gate(number, title)``; the outcome is
# printed as one PASS/FAIL line per criterion at the end of the session.

ACCEPTANCE: list[str] = []


class _Gate:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.detail = ""

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        status = "PASS" if exc_type is None else "FAIL"
        note = self.detail if exc_type is None else f"{exc_type.__name__}: {exc}".splitlines()[0]
        line = f"[{status}] criterion {self.number}: {self.title} ({elapsed:.2f} s) {note}".rstrip()
        ACCEPTANCE.append(line)
        print(line)
        return False


@pytest.fixture
def gate():
    return _Gate


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
