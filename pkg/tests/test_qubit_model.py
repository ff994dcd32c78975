# tests/test_qubit_model.py
import math

import numpy as np
import pytest

from core.errors import CrossingNotFoundError, DegenerateGeometryError, DomainError
from core.qubit_model import (
    BOLTZMANN_GHZ_PER_K, CrossingSpec, DiabaticLevel, DriveSpec, QubitSpec, Well,
    build_levels, channel, channel_axis, combined_slope, crossing_location,
    energy_gap, levels_from_locations, thermal_rate, well_of,
)


def test_locations_canonicalize_to_mirror_symmetric_intercepts(low_freq_qubit):
    assert low_freq_qubit.intercepts == pytest.approx((0.0, 21.252, 0.0, 21.252))
    assert low_freq_qubit.slopes == (-1.44, -1.09, 1.44, 1.09)


def test_crossing_locations(low_freq_qubit):
    levels = low_freq_qubit.levels
    assert crossing_location(levels, 0, 2) == pytest.approx(0.0)
    assert crossing_location(levels, 1, 2) == pytest.approx(8.4)
    # mirror image of the (1,2) crossing
    assert crossing_location(levels, 0, 3) == pytest.approx(-8.4)
    assert crossing_location(levels, 1, 3) == pytest.approx(0.0)


def test_parallel_levels_raise():
    levels = build_levels((-1.0, -1.0, 1.0, 1.0), (0.0, 1.0, 0.0, 1.0))
    with pytest.raises(DegenerateGeometryError):
        crossing_location(levels, 0, 1)


def test_channel_detuning_and_amplitude(low_freq_qubit):
    drive = DriveSpec(omega=0.16, phi_rf=2.0, dphi_dc=10.0, gamma2=0.05)
    ch = channel(low_freq_qubit, drive, 1, 2)
    assert ch.combined_slope == pytest.approx(2.53)
    assert ch.location == pytest.approx(8.4)
    assert ch.epsilon == pytest.approx(2.53 * 1.6)
    assert ch.amplitude == pytest.approx(5.06)
    assert ch.crossing.gap == 0.09


def test_channel_axis_matches_channel(low_freq_qubit):
    dphi = np.linspace(-3.0, 12.0, 7)
    eps, amplitude = channel_axis(low_freq_qubit, 0, 2, dphi, 4.0)
    for d, e in zip(dphi, eps):
        ch = channel(low_freq_qubit, DriveSpec(0.16, 4.0, d, 0.05), 0, 2)
        assert e == pytest.approx(ch.epsilon)
        assert amplitude == pytest.approx(ch.amplitude)


def test_energy_gap_is_absolute(low_freq_qubit):
    assert energy_gap(low_freq_qubit, 0, 2, -2.0) == pytest.approx(2.88 * 2.0)
    assert energy_gap(low_freq_qubit, 0, 2, 2.0) == pytest.approx(2.88 * 2.0)


def test_combined_slope(high_freq_qubit):
    assert combined_slope(high_freq_qubit, 0, 2) == pytest.approx(2.02)
    assert combined_slope(high_freq_qubit, 1, 2) == pytest.approx(1.92)


def test_undeclared_crossing(low_freq_qubit):
    with pytest.raises(CrossingNotFoundError) as info:
        low_freq_qubit.crossing(0, 1)
    assert "(0,1)" in str(info.value)
    assert isinstance(info.value, KeyError)


def test_with_gap_copies(low_freq_qubit):
    changed = low_freq_qubit.with_gap(1, 3, 0.25)
    assert changed.crossing(1, 3).gap == 0.25
    assert low_freq_qubit.crossing(1, 3).gap == 0.5
    assert changed.crossing(0, 2) == low_freq_qubit.crossing(0, 2)


def test_gamma32_defaults_to_gamma10(low_freq_qubit):
    assert low_freq_qubit.gamma32 == low_freq_qubit.gamma10


def test_wells():
    assert well_of(0) == Well.RIGHT
    assert well_of(3) == Well.LEFT


@pytest.mark.parametrize("index, slope, well", [
    (0, 1.0, Well.RIGHT),
    (2, -1.0, Well.LEFT),
    (1, 0.0, Well.RIGHT),
    (4, -1.0, Well.RIGHT),
])
def test_invalid_levels(index, slope, well):
    with pytest.raises(DomainError):
        DiabaticLevel(index=index, slope=slope, intercept=0.0, well=well)


def test_invalid_crossings():
    with pytest.raises(DomainError):
        CrossingSpec(2, 0, 0.1)
    with pytest.raises(DomainError):
        CrossingSpec(0, 2, -0.1)


def test_qubit_validation(low_freq_qubit):
    with pytest.raises(DomainError):
        QubitSpec(low_freq_qubit.levels, low_freq_qubit.crossings[:3], 0.6, 5e-5, 0.6, 0.02)
    with pytest.raises(DomainError):
        QubitSpec(low_freq_qubit.levels, low_freq_qubit.crossings, -0.6, 5e-5, 0.6, 0.02)
    with pytest.raises(DomainError):
        QubitSpec(low_freq_qubit.levels, low_freq_qubit.crossings, 0.6, 5e-5, 0.6, 0.0)


def test_drive_validation():
    with pytest.raises(DomainError):
        DriveSpec(omega=0.0, phi_rf=1.0, dphi_dc=0.0, gamma2=0.05)
    with pytest.raises(DomainError):
        DriveSpec(omega=0.16, phi_rf=-1.0, dphi_dc=0.0, gamma2=0.05)
    with pytest.raises(DomainError):
        DriveSpec(omega=0.16, phi_rf=1.0, dphi_dc=0.0, gamma2=0.0)


def test_levels_from_locations_high_freq():
    levels = levels_from_locations((-1.01, -0.91, 1.01, 0.91), 0.0, 13.1)
    assert crossing_location(levels, 1, 2) == pytest.approx(13.1)
    assert levels[3].intercept - levels[2].intercept == pytest.approx(levels[1].intercept)


def test_thermal_rate():
    assert BOLTZMANN_GHZ_PER_K == pytest.approx(20.8366, rel=1e-5)
    kt = BOLTZMANN_GHZ_PER_K * 0.02
    assert thermal_rate(5e-5, 0.0, 0.02) == pytest.approx(5e-5)
    assert thermal_rate(5e-5, kt, 0.02) == pytest.approx(5e-5 / math.e)
    rates = thermal_rate(5e-5, np.array([0.0, 10.0]), 0.02)
    assert rates.shape == (2,)
    assert rates[1] < 1e-12
    with pytest.raises(DomainError):
        thermal_rate(5e-5, 1.0, 0.0)
