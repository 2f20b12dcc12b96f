import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from _report import ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{key}] {'PASS' if ok else 'FAIL'}  {detail}")


import pytest

CANONICAL_W = (0.0, 1e-7, 3e-7, 1e-6)
CANONICAL_SEEDS = tuple(range(10))


@pytest.fixture(scope="session")
def canonical_sweep():
    """The desk-scale reproduction: 10x10, T=100000, four pruning rates, ten seeds."""
    import time

    from soma_sim.experiments import RunConfig, sweep

    start = time.perf_counter()
    result = sweep(RunConfig(), CANONICAL_W, CANONICAL_SEEDS, threads=1)
    result.elapsed = time.perf_counter() - start
    return result
