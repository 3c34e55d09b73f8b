from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"
MAASS_FILE = DATA / "maass_odd_r9.53.txt"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def maass_form():
    from horocycles.forms import load_maass_data

    if not MAASS_FILE.exists():
        pytest.skip("no Maass coefficient file available")
    return load_maass_data(MAASS_FILE.read_bytes())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
