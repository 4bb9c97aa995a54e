import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))
import synthetic  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]


def canonical_data_path():
    """Real Steel Plates Faults file, if one has been provided."""
    env = os.environ.get("PLATEFAULT_DATA")
    candidates = [Path(env)] if env else []
    candidates += [ROOT / "data" / "Faults.NNA", ROOT / "data" / "faults.csv"]
    for c in candidates:
        if c.is_file():
            return c
    return None


@pytest.fixture(scope="session")
def synthetic_path(tmp_path_factory):
    """1941 rows with the real per-class counts (1268 positive / 673 negative)."""
    return synthetic.write_file(tmp_path_factory.mktemp("data") / "faults.tsv")


@pytest.fixture(scope="session")
def small_path(tmp_path_factory):
    counts = (12, 10, 20, 8, 6, 24, 40)
    return synthetic.write_file(tmp_path_factory.mktemp("small") / "small.csv", counts=counts, delimiter=",")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
