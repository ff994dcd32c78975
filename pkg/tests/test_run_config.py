# tests/test_run_config.py
import pytest

from core.errors import ConfigError
from core.run_config import (
    DEFAULT_GAMMA20, KNOWN_KEYS, RunConfig, bundled_config_path, default_grid,
    echo_parameters, format_config, load_config, parse_config_text,
    run_config_from_metadata, write_config,
)
from core.sweep import GridSpec

MINIMAL = """\
# minimal first-diamond config
slopes.m0 = -1.44
slopes.m1 = -1.09
slopes.m2 = 1.44
slopes.m3 = 1.09
locations.l02 = 0
locations.l12 = 8.4
gaps.d02 = 0.013
gaps.d12 = 0.09
gaps.d03 = 0.1
gaps.d13 = 0.5
rates.gamma10 = 0.6
rates.gamma2 = 0.05
drive.omega = 0.16
"""


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_minimal_config_defaults(tmp_path):
    config = load_config(write(tmp_path, MINIMAL))
    assert config.model == "first_diamond"
    assert config.qubit.gamma20 == DEFAULT_GAMMA20
    assert config.qubit.gamma32 == 0.6
    assert config.qubit.temperature == 0.02
    assert config.grid == GridSpec(0.0, 10.0, 401, 0.0, 12.0, 401)
    assert config.qubit.intercepts == pytest.approx((0.0, 21.252, 0.0, 21.252))
    assert config.output_csv is None


def test_combined_default_grid():
    assert default_grid("combined", steps=11) == GridSpec(0.0, 10.0, 11, 0.0, 25.0, 11)


@pytest.mark.parametrize("name", ["fig2", "fig4", "fig5a", "fig5b.cfg"])
def test_bundled_configs_load(name):
    path = bundled_config_path(name)
    assert path.exists()
    config = load_config(path)
    assert isinstance(config, RunConfig)


def test_bundled_high_frequency_values():
    config = load_config(bundled_config_path("fig5a.cfg"))
    assert config.omega == 1.2
    assert config.gamma2 == 0.05
    assert config.qubit.crossing(0, 2).gap == 0.004
    assert config.qubit.slopes == (-1.01, -0.91, 1.01, 0.91)
    dephased = load_config(bundled_config_path("fig5b"))
    assert dephased.gamma2 == 0.2
    assert dephased.qubit == config.qubit


def test_round_trip_through_canonical_text(tmp_path):
    config = load_config(bundled_config_path("fig4"))
    again = load_config(write_config(config, tmp_path / "copy.cfg"))
    assert again == config
    assert format_config(again) == format_config(config)


def test_round_trip_keeps_outputs(tmp_path):
    config = load_config(write(tmp_path, MINIMAL + "output.csv = maps/a.csv\noutput.pgm = maps/a.pgm\n"))
    assert config.output_csv == "maps/a.csv"
    again = load_config(write_config(config, tmp_path / "copy.cfg"))
    assert again == config


def test_round_trip_through_metadata():
    config = load_config(bundled_config_path("fig4"))
    echo = echo_parameters(config.qubit, config.omega, config.gamma2, config.grid, config.model)
    echo["quantity"] = "p_left"
    echo["mirrored"] = "true"
    assert set(echo) - {"quantity", "mirrored"} <= KNOWN_KEYS
    assert run_config_from_metadata(echo) == config


def test_echo_is_ordered_and_exact(low_freq_qubit):
    grid = GridSpec(0.0, 10.0, 5, 0.0, 12.0, 7)
    echo = echo_parameters(low_freq_qubit, 0.16, 0.05, grid, "first_diamond")
    keys = list(echo)
    assert keys[0] == "model"
    assert keys[1:5] == ["slopes.m0", "slopes.m1", "slopes.m2", "slopes.m3"]
    assert echo["grid.dphi_steps"] == "5"
    assert float(echo["intercepts.e1"]) == low_freq_qubit.intercepts[1]


def test_comments_and_blank_lines_are_ignored():
    entries = parse_config_text("\n# comment\n  model = combined  \n\n")
    assert entries == {"model": ("combined", 3)}


@pytest.mark.parametrize("extra, key, line", [
    ("frequency = 1.0\n", "frequency", 15),
    ("drive.omega = 0.2\n", "drive.omega", 15),
    ("temperature =\n", "temperature", 15),
])
def test_bad_lines_name_key_and_line(tmp_path, extra, key, line):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, MINIMAL + extra))
    assert info.value.key == key
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_line_without_equals(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, MINIMAL + "just words\n"))
    assert info.value.line == 15


def test_missing_required_key(tmp_path):
    text = MINIMAL.replace("drive.omega = 0.16\n", "")
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, text))
    assert info.value.key == "drive.omega"


def test_unparseable_number(tmp_path):
    text = MINIMAL.replace("gaps.d12 = 0.09", "gaps.d12 = ninety")
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, text))
    assert info.value.key == "gaps.d12"
    assert info.value.line == 9


@pytest.mark.parametrize("old, new, key", [
    ("slopes.m0 = -1.44", "slopes.m0 = 1.44", "slopes.m0"),
    ("slopes.m3 = 1.09", "slopes.m3 = -1.09", "slopes.m3"),
    ("gaps.d02 = 0.013", "gaps.d02 = -0.013", "gaps.d02"),
    ("rates.gamma2 = 0.05", "rates.gamma2 = 0", "rates.gamma2"),
    ("drive.omega = 0.16", "drive.omega = -0.16", "drive.omega"),
])
def test_invariant_violations(tmp_path, old, new, key):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, MINIMAL.replace(old, new)))
    assert info.value.key == key


def test_unknown_model(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, "model = third_diamond\n" + MINIMAL))
    assert info.value.key == "model"
    assert info.value.line == 1


def test_intercepts_and_locations_conflict(tmp_path):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, MINIMAL + "intercepts.e0 = 0\n"))


def test_intercept_form(tmp_path):
    text = MINIMAL.replace("locations.l02 = 0\nlocations.l12 = 8.4\n", "")
    text += "intercepts.e0 = 0\nintercepts.e1 = 21.252\nintercepts.e2 = 0\nintercepts.e3 = 21.252\n"
    config = load_config(write(tmp_path, text))
    assert config.qubit.intercepts == (0.0, 21.252, 0.0, 21.252)


def test_invalid_grid(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, MINIMAL + "grid.dphi_steps = 1\n"))
    assert info.value.key == "grid.dphi_steps"
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, MINIMAL + "grid.phi_rf_steps = many\n"))


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")
