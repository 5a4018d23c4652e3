import numpy as np
import pytest

from tanbundle import base_geometry as bg
from tanbundle import weights as wt

BASES = {
    "euclidean": lambda m: bg.euclidean(m),
    "sphere": lambda m: bg.sphere(1.0, m),
    "hyperbolic": lambda m: bg.hyperbolic(-1.0, m),
}
WEIGHTS = {
    "cheeger_gromoll": wt.cheeger_gromoll,
    "almost_kaehler": wt.almost_kaehler,
    "flat": wt.flat,
    "constant": lambda: wt.constant(1.0),
}

# criterion number -> list of (label, passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        rows = ACCEPTANCE[number]
        ok = all(passed for _, passed, _ in rows)
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}")
        for label, passed, detail in rows:
            terminalreporter.write_line(f"    {'pass' if passed else 'FAIL'}  {label}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)
