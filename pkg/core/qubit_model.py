# core/qubit_model.py
"""
Qubit Model - static four-level flux qubit geometry

Diabatic levels are straight lines E_i(dphi) = slope_i * dphi + intercept_i
(GHz versus mPhi0). Levels 0 and 1 live in the right well (negative slope),
levels 2 and 3 in the left well (positive slope). Every right/left pair
(i, j) forms an avoided crossing with gap Delta_ij that acts as the
Landau-Zener channel between the two states.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import constants

from core.errors import CrossingNotFoundError, DegenerateGeometryError, DomainError

# k_B / h in GHz per kelvin (20.8366...)
BOLTZMANN_GHZ_PER_K = constants.k / constants.h * 1e-9

CROSSING_PAIRS: Tuple[Tuple[int, int], ...] = ((0, 2), (1, 2), (0, 3), (1, 3))


class Well(str, Enum):
    RIGHT = "right"
    LEFT = "left"


def well_of(index: int) -> Well:
    """Well assignment of a level index"""
    return Well.RIGHT if index in (0, 1) else Well.LEFT


@dataclass(frozen=True)
class DiabaticLevel:
    """One diabatic energy level, linear in flux detuning"""

    index: int
    slope: float
    intercept: float
    well: Well

    def __post_init__(self):
        if self.index not in (0, 1, 2, 3):
            raise DomainError(f"Level index must be 0..3, got {self.index}")
        if self.slope == 0:
            raise DomainError(f"Level {self.index} has zero slope")
        if (self.slope < 0) != (self.well == Well.RIGHT):
            raise DomainError(
                f"Level {self.index}: slope {self.slope} inconsistent with {self.well.value} well"
            )

    def energy(self, dphi: float) -> float:
        return self.slope * dphi + self.intercept


@dataclass(frozen=True)
class CrossingSpec:
    """Avoided crossing between right-well level i and left-well level j"""

    i: int
    j: int
    gap: float

    def __post_init__(self):
        if self.i not in (0, 1) or self.j not in (2, 3):
            raise DomainError(f"Crossing ({self.i},{self.j}) must pair i in {{0,1}} with j in {{2,3}}")
        if not self.gap >= 0:
            raise DomainError(f"Crossing ({self.i},{self.j}) gap must be >= 0, got {self.gap}")

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class QubitSpec:
    """Four-level flux qubit: geometry, gaps, relaxation and temperature"""

    levels: Tuple[DiabaticLevel, ...]
    crossings: Tuple[CrossingSpec, ...]
    gamma10: float
    gamma20: float
    gamma32: float
    temperature: float
    _by_pair: Dict[Tuple[int, int], CrossingSpec] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if len(self.levels) != 4:
            raise DomainError(f"Expected 4 levels, got {len(self.levels)}")
        for position, level in enumerate(self.levels):
            if level.index != position:
                raise DomainError(f"Level at position {position} has index {level.index}")
            if level.well != well_of(position):
                raise DomainError(f"Level {position} must be in the {well_of(position).value} well")

        by_pair = {}
        for crossing in self.crossings:
            if crossing.pair in by_pair:
                raise DomainError(f"Crossing {crossing.pair} declared twice")
            by_pair[crossing.pair] = crossing
        missing = [pair for pair in CROSSING_PAIRS if pair not in by_pair]
        if missing:
            raise DomainError(f"Missing crossings: {missing}")

        for name in ("gamma10", "gamma20", "gamma32"):
            value = getattr(self, name)
            if not value >= 0:
                raise DomainError(f"{name} must be >= 0, got {value}")
        if not self.temperature > 0:
            raise DomainError(f"temperature must be > 0, got {self.temperature}")

        object.__setattr__(self, "_by_pair", by_pair)

    def crossing(self, i: int, j: int) -> CrossingSpec:
        """Look up a declared crossing"""
        try:
            return self._by_pair[(i, j)]
        except KeyError:
            raise CrossingNotFoundError(f"Crossing ({i},{j}) is not declared") from None

    def with_gap(self, i: int, j: int, gap: float) -> "QubitSpec":
        """Copy of this qubit with one crossing gap replaced"""
        self.crossing(i, j)
        crossings = tuple(
            CrossingSpec(c.i, c.j, gap) if c.pair == (i, j) else c
            for c in self.crossings
        )
        return replace(self, crossings=crossings)

    @property
    def slopes(self) -> Tuple[float, ...]:
        return tuple(level.slope for level in self.levels)

    @property
    def intercepts(self) -> Tuple[float, ...]:
        return tuple(level.intercept for level in self.levels)

    @classmethod
    def from_intercepts(cls, slopes: Sequence[float], intercepts: Sequence[float],
                        gaps: Dict[Tuple[int, int], float], gamma10: float,
                        gamma20: float, gamma32: Optional[float] = None,
                        temperature: float = 0.02) -> "QubitSpec":
        levels = build_levels(slopes, intercepts)
        crossings = tuple(CrossingSpec(i, j, gaps[(i, j)]) for i, j in CROSSING_PAIRS)
        return cls(
            levels=levels,
            crossings=crossings,
            gamma10=gamma10,
            gamma20=gamma20,
            gamma32=gamma10 if gamma32 is None else gamma32,
            temperature=temperature,
        )

    @classmethod
    def from_locations(cls, slopes: Sequence[float], location02: float,
                       location12: float, gaps: Dict[Tuple[int, int], float],
                       gamma10: float, gamma20: float,
                       gamma32: Optional[float] = None,
                       temperature: float = 0.02) -> "QubitSpec":
        """
        Build a qubit from slopes and the two reported crossing locations

        Args:
            slopes: Signed slopes m0..m3 in GHz/mPhi0
            location02: Flux location of the (0,2) crossing
            location12: Flux location of the (1,2) crossing
            gaps: Gap per crossing pair in GHz
            gamma10, gamma20, gamma32: Relaxation rates in GHz
            temperature: Kelvin
        """
        levels = levels_from_locations(slopes, location02, location12)
        return cls.from_intercepts(
            slopes, [level.intercept for level in levels], gaps,
            gamma10, gamma20, gamma32, temperature,
        )


@dataclass(frozen=True)
class DriveSpec:
    """Microwave drive and operating point"""

    omega: float
    phi_rf: float
    dphi_dc: float
    gamma2: float

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"omega must be > 0, got {self.omega}")
        if not self.phi_rf >= 0:
            raise DomainError(f"phi_rf must be >= 0, got {self.phi_rf}")
        if not self.gamma2 > 0:
            raise DomainError(f"gamma2 must be > 0, got {self.gamma2}")


@dataclass(frozen=True)
class CrossingChannel:
    """Per-crossing energy detuning and drive amplitude at one operating point"""

    crossing: CrossingSpec
    location: float
    combined_slope: float
    epsilon: float
    amplitude: float


def build_levels(slopes: Sequence[float], intercepts: Sequence[float]) -> Tuple[DiabaticLevel, ...]:
    if len(slopes) != 4 or len(intercepts) != 4:
        raise DomainError("Need exactly four slopes and four intercepts")
    return tuple(
        DiabaticLevel(index=k, slope=float(slopes[k]), intercept=float(intercepts[k]), well=well_of(k))
        for k in range(4)
    )


def levels_from_locations(slopes: Sequence[float], location02: float,
                          location12: float) -> Tuple[DiabaticLevel, ...]:
    """
    Canonicalize (slopes, crossing locations) to intercepts

    Uses the mirror-symmetric double well: e0 = 0, the left-well ladder
    spacing equals the right-well one (e3 - e2 = e1 - e0).
    """
    m0, m1, m2, _ = (float(s) for s in slopes)
    e0 = 0.0
    e2 = e0 + (m0 - m2) * location02
    e1 = e2 + (m2 - m1) * location12
    e3 = e2 + (e1 - e0)
    return build_levels(slopes, (e0, e1, e2, e3))


def crossing_location(levels: Sequence[DiabaticLevel], i: int, j: int) -> float:
    """
    Flux detuning where diabatic levels i and j are degenerate

    Raises:
        DegenerateGeometryError: if the levels are parallel
    """
    level_i, level_j = levels[i], levels[j]
    if level_i.slope == level_j.slope:
        raise DegenerateGeometryError(f"Levels {i} and {j} are parallel (slope {level_i.slope})")
    return (level_j.intercept - level_i.intercept) / (level_i.slope - level_j.slope)


def combined_slope(qubit: QubitSpec, i: int, j: int) -> float:
    return abs(qubit.levels[i].slope) + abs(qubit.levels[j].slope)


def channel(qubit: QubitSpec, drive: DriveSpec, i: int, j: int) -> CrossingChannel:
    """
    Energy detuning and amplitude seen by crossing (i, j)

    Args:
        qubit: Qubit description
        drive: Drive and operating point
        i, j: Crossing pair

    Returns:
        CrossingChannel with epsilon = s_ij (dphi_dc - location) and
        amplitude = s_ij phi_rf
    """
    crossing = qubit.crossing(i, j)
    location = crossing_location(qubit.levels, i, j)
    slope = combined_slope(qubit, i, j)
    return CrossingChannel(
        crossing=crossing,
        location=location,
        combined_slope=slope,
        epsilon=slope * (drive.dphi_dc - location),
        amplitude=slope * drive.phi_rf,
    )


def channel_axis(qubit: QubitSpec, i: int, j: int,
                 dphi_values: Union[np.ndarray, Iterable[float]],
                 phi_rf: float) -> Tuple[np.ndarray, float]:
    """Detunings for a row of static fluxes and the shared drive amplitude"""
    qubit.crossing(i, j)
    location = crossing_location(qubit.levels, i, j)
    slope = combined_slope(qubit, i, j)
    dphi = np.asarray(dphi_values, dtype=float)
    return slope * (dphi - location), slope * phi_rf


def energy_gap(qubit: QubitSpec, i: int, j: int, dphi_dc: float) -> float:
    """Diabatic energy separation of levels i and j at a static flux"""
    qubit.crossing(i, j)
    location = crossing_location(qubit.levels, i, j)
    return abs(combined_slope(qubit, i, j) * (dphi_dc - location))


def thermal_rate(gamma20, e02, temperature: float):
    """
    Thermal excitation rate Gamma_02 = Gamma_20 exp(-E_02 / k_B T)

    Works on scalars and numpy arrays of e02.
    """
    if not temperature > 0:
        raise DomainError(f"temperature must be > 0, got {temperature}")
    kt = BOLTZMANN_GHZ_PER_K * temperature
    rate = gamma20 * np.exp(-np.asarray(e02, dtype=float) / kt)
    return float(rate) if np.ndim(rate) == 0 else rate
