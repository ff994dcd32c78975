# tests/conftest.py
"""
Shared fixtures: reference qubits, bundled configs, isolated working directory
"""

import pytest

from core.qubit_model import QubitSpec
from core.sweep import GridSpec
from utils.helpers import PROJECT_ROOT

RUNS_DIR = PROJECT_ROOT / "config" / "runs"

LOW_FREQ_SLOPES = (-1.44, -1.09, 1.44, 1.09)
HIGH_FREQ_SLOPES = (-1.01, -0.91, 1.01, 0.91)


def make_qubit(slopes=LOW_FREQ_SLOPES, l12=8.4, d02=0.013, d12=0.09, d03=0.1, d13=0.5,
               gamma10=0.6, gamma20=5e-5, gamma32=None, temperature=0.02) -> QubitSpec:
    gaps = {(0, 2): d02, (1, 2): d12, (0, 3): d03, (1, 3): d13}
    return QubitSpec.from_locations(slopes, 0.0, l12, gaps, gamma10, gamma20, gamma32, temperature)


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    """Logs and default outputs land in a per-test directory"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("LZS_THREADS", raising=False)
    return tmp_path


@pytest.fixture
def low_freq_qubit() -> QubitSpec:
    """Low-frequency first-diamond device"""
    return make_qubit()


@pytest.fixture
def moire_qubit() -> QubitSpec:
    """Same device with the second diamond and thermal excitation"""
    return make_qubit(gamma32=0.6)


@pytest.fixture
def high_freq_qubit() -> QubitSpec:
    return make_qubit(slopes=HIGH_FREQ_SLOPES, l12=13.1, d02=0.004)


@pytest.fixture
def small_grid() -> GridSpec:
    return GridSpec(0.0, 10.0, 21, 0.0, 12.0, 13)


@pytest.fixture
def runs_dir():
    return RUNS_DIR


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "out"
    path.mkdir()
    return path


@pytest.fixture
def small_config_file(tmp_path):
    """Low-frequency config on a coarse grid"""
    text = (RUNS_DIR / "fig2.cfg").read_text(encoding="utf-8")
    text += "grid.dphi_steps = 11\ngrid.phi_rf_steps = 7\n"
    path = tmp_path / "small.cfg"
    path.write_text(text, encoding="utf-8")
    return path
