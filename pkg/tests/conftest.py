import json
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

SCENARIOS = HERE / "fixtures" / "scenarios"


@pytest.fixture
def write_scenario(tmp_path):
    def write(data, name="scenario.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return write


_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


ACCEPTANCE_GRID = 512
ACCEPTANCE_TOL = 1e-6


@pytest.fixture(scope="session")
def pipeline_results():
    """Every fixture scenario run once through the full pipeline at the acceptance grid."""
    from poleext.scenario import Scenario, run_pipeline

    out = {}
    for path in sorted(SCENARIOS.glob("*.json")):
        sc = Scenario.load(path).with_overrides(grid_n=ACCEPTANCE_GRID, tol=ACCEPTANCE_TOL)
        out[path.stem] = run_pipeline(sc)
    return out
