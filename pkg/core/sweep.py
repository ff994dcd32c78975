# core/sweep.py
"""
Sweep Engine - population and rate maps over (dphi_dc, phi_rf) grids

Rows of constant phi_rf share one Bessel sweep per channel, so a map is
evaluated row by row. Rows are independent and may run on a thread pool;
results are written back by row index.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import DegenerateSystemError, DomainError
from core.lz_rates import lz_rate_profile
from core.qubit_model import DriveSpec, QubitSpec, channel_axis, combined_slope, crossing_location
from core.steady_state import Regime, classify_regime, default_on_threshold
from models.base_model import RATE_FIELDS, BaseModel
from models.model_loader import get_model

RANGE_TOLERANCE = 1e-9
CONTRAST_SAMPLES = 2001

# p_L below this counts as a missing piece of a fringe
FRINGE_THRESHOLD = 0.01

# Lazy logger initialization
_logger = None


def get_logger():
    global _logger
    if _logger is None:
        from utils.logger import setup_logger
        _logger = setup_logger(__name__)
    return _logger


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid in static flux detuning and drive amplitude (mPhi0)"""

    dphi_min: float
    dphi_max: float
    dphi_steps: int
    phi_rf_min: float
    phi_rf_max: float
    phi_rf_steps: int

    def __post_init__(self):
        for name in ("dphi_steps", "phi_rf_steps"):
            value = getattr(self, name)
            if int(value) != value or value < 2:
                raise DomainError(f"{name} must be an integer >= 2, got {value}")
            object.__setattr__(self, name, int(value))
        if not self.dphi_max > self.dphi_min:
            raise DomainError(f"dphi_max ({self.dphi_max}) must exceed dphi_min ({self.dphi_min})")
        if not self.phi_rf_max > self.phi_rf_min:
            raise DomainError(f"phi_rf_max ({self.phi_rf_max}) must exceed phi_rf_min ({self.phi_rf_min})")
        if self.phi_rf_min < 0:
            raise DomainError(f"phi_rf_min must be >= 0, got {self.phi_rf_min}")

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.phi_rf_steps, self.dphi_steps)

    def dphi_axis(self) -> np.ndarray:
        return np.linspace(self.dphi_min, self.dphi_max, self.dphi_steps)

    def phi_rf_axis(self) -> np.ndarray:
        return np.linspace(self.phi_rf_min, self.phi_rf_max, self.phi_rf_steps)


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """
    One map over a GridSpec

    values[r, c] belongs to phi_rf_axis()[r] and dphi_axis()[c].
    metadata echoes every input parameter as text.
    """

    spec: GridSpec
    model: str
    values: np.ndarray
    metadata: Dict[str, str] = field(default_factory=dict)
    quantity: str = "p_left"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.spec.shape:
            raise DomainError(f"Values shape {values.shape} does not match grid {self.spec.shape}")
        if self.quantity == "p_left":
            if np.any(values < -RANGE_TOLERANCE) or np.any(values > 1 + RANGE_TOLERANCE):
                raise DomainError("Left-well populations must lie in [0, 1]")
            values = np.clip(values, 0.0, 1.0)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class FringeProfile:
    """Left-well population along the n-photon resonance of the (0,2) channel"""

    n: int
    dphi_dc: float
    phi_rf: np.ndarray
    values: np.ndarray
    reachable: np.ndarray
    w02: np.ndarray
    w12: np.ndarray


def resolve_model(model: Union[str, BaseModel]) -> BaseModel:
    return get_model(model) if isinstance(model, str) else model


def _check_drive(omega: float, gamma2: float):
    DriveSpec(omega=omega, phi_rf=0.0, dphi_dc=0.0, gamma2=gamma2)


def evaluate_point(qubit: QubitSpec, drive: DriveSpec, model: Union[str, BaseModel]) -> float:
    """
    Left-well population at one operating point

    A degenerate rate system falls back to the ground state (p_L = 0).
    """
    model = resolve_model(model)
    rates = model.rates_at(qubit, drive)
    try:
        return model.left_population(model.solve(rates))
    except DegenerateSystemError as e:
        get_logger().warning(f"Degenerate point dphi={drive.dphi_dc}, phi_rf={drive.phi_rf}: {e}; using ground state")
        return 0.0


def _run_rows(row_fn, n_rows: int, threads: int) -> List:
    if threads <= 1:
        return [row_fn(r) for r in range(n_rows)]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(row_fn, range(n_rows)))


def _echo(qubit, omega, gamma2, grid, model_name, quantity) -> Dict[str, str]:
    from core.run_config import echo_parameters

    metadata = echo_parameters(qubit, omega, gamma2, grid, model_name)
    metadata["quantity"] = quantity
    return metadata


def sweep_grid(qubit: QubitSpec, omega: float, gamma2: float, grid: GridSpec,
               model: Union[str, BaseModel], threads: int = 1) -> SweepGrid:
    """
    Left-well population map

    Args:
        qubit: Qubit description
        omega: Drive frequency (GHz)
        gamma2: Dephasing rate (GHz)
        grid: Sweep grid
        model: Model name or instance
        threads: Row workers; the result does not depend on it

    Returns:
        SweepGrid with quantity p_left
    """
    _check_drive(omega, gamma2)
    model = resolve_model(model)
    dphi = grid.dphi_axis()
    phi_rf = grid.phi_rf_axis()

    get_logger().info(
        f"Sweeping {model.name} on {grid.phi_rf_steps}x{grid.dphi_steps} grid "
        f"(omega={omega:g}, gamma2={gamma2:g}, threads={threads})"
    )

    def row(r: int):
        return model.evaluate_row(qubit, omega, gamma2, dphi, phi_rf[r])

    values = np.empty(grid.shape)
    degenerate = 0
    for r, (p_left, mask) in enumerate(_run_rows(row, grid.phi_rf_steps, threads)):
        values[r, :] = p_left
        degenerate += int(np.count_nonzero(mask))

    if degenerate:
        get_logger().warning(f"{degenerate} degenerate grid points set to the ground state")
    get_logger().info(f"Sweep done: p_left in [{values.min():.4f}, {values.max():.4f}]")

    return SweepGrid(
        spec=grid,
        model=model.name,
        values=values,
        metadata=_echo(qubit, omega, gamma2, grid, model.name, "p_left"),
    )


def rate_map(qubit: QubitSpec, omega: float, gamma2: float, grid: GridSpec,
             crossing: Tuple[int, int], threads: int = 1,
             model_name: str = "combined") -> SweepGrid:
    """LZ rate W_ij over the grid (GHz); model_name is only echoed"""
    _check_drive(omega, gamma2)
    i, j = crossing
    gap = qubit.crossing(i, j).gap
    dphi = grid.dphi_axis()
    phi_rf = grid.phi_rf_axis()
    quantity = RATE_FIELDS[(i, j)]

    def row(r: int):
        eps, amplitude = channel_axis(qubit, i, j, dphi, phi_rf[r])
        return lz_rate_profile(gap, eps, amplitude, omega, gamma2)

    values = np.vstack(_run_rows(row, grid.phi_rf_steps, threads))
    return SweepGrid(
        spec=grid,
        model=model_name,
        values=values,
        metadata=_echo(qubit, omega, gamma2, grid, model_name, quantity),
        quantity=quantity,
    )


def regime_map(qubit: QubitSpec, omega: float, gamma2: float, grid: GridSpec,
               on_threshold: Optional[float] = None) -> SweepGrid:
    """
    First-diamond regime of every grid point

    Values are Regime codes: 0 closed, 1 two_level, 2 pumped_back.
    """
    theta = default_on_threshold(qubit) if on_threshold is None else on_threshold
    classify_regime(0.0, 0.0, theta)

    w02 = rate_map(qubit, omega, gamma2, grid, (0, 2)).values
    w12 = rate_map(qubit, omega, gamma2, grid, (1, 2)).values
    codes = np.where(
        w02 < theta,
        Regime.CLOSED.code,
        np.where(w12 < theta, Regime.TWO_LEVEL.code, Regime.PUMPED_BACK.code),
    )

    metadata = _echo(qubit, omega, gamma2, grid, "first_diamond", "regime")
    metadata["on_threshold"] = repr(float(theta))
    return SweepGrid(spec=grid, model="first_diamond", values=codes.astype(float),
                     metadata=metadata, quantity="regime")


def mirror_grid(grid: SweepGrid) -> SweepGrid:
    """
    Reflect a map computed for dphi_dc >= 0 onto negative detuning

    Raises:
        DomainError: grid does not start at zero detuning
    """
    spec = grid.spec
    if spec.dphi_min != 0:
        raise DomainError(f"Mirroring needs dphi_min = 0, got {spec.dphi_min}")

    mirrored_spec = replace(spec, dphi_min=-spec.dphi_max, dphi_steps=2 * spec.dphi_steps - 1)
    values = np.hstack([grid.values[:, :0:-1], grid.values])

    metadata = dict(grid.metadata)
    if "grid.dphi_min" in metadata:
        metadata["grid.dphi_min"] = repr(float(mirrored_spec.dphi_min))
        metadata["grid.dphi_steps"] = str(mirrored_spec.dphi_steps)
    metadata["mirrored"] = "true"
    return SweepGrid(spec=mirrored_spec, model=grid.model, values=values,
                     metadata=metadata, quantity=grid.quantity)


def comb_contrast(omega: float, gamma2: float) -> float:
    """
    Peak/valley contrast of an equal-weight Lorentzian comb

    sum_n gamma2 / ((eps - n omega)^2 + gamma2^2) has the closed form
    (pi / omega) sinh(u) / (cosh(u) - cos(2 pi eps / omega)) with
    u = 2 pi gamma2 / omega. Peak (eps = n omega) and valley
    (eps = (n + 1/2) omega) then give a contrast of exactly sech(u).
    """
    _check_drive(omega, gamma2)
    u = 2.0 * np.pi * gamma2 / omega
    decay = np.exp(-u)
    return float(2.0 * decay / (1.0 + decay * decay))


def resonance_contrast(qubit: QubitSpec, omega: float, gamma2: float,
                       crossing: Tuple[int, int], phi_rf: float, n: int,
                       normalized: bool = False) -> float:
    """
    Visibility of the n-photon resonance comb at fixed drive amplitude

    W is sampled over detunings eps in [n omega, (n+1) omega] and the
    contrast (W_peak - W_valley) / (W_peak + W_valley) is returned.

    The raw contrast also sees the Bessel envelope J_k(A/omega)^2, which
    dominates once the lines overlap (omega < gamma2). With normalized=True
    W is divided by that envelope first; what is left is the equal-weight
    comb, whose contrast comb_contrast gives in closed form. It is
    monotone in omega / gamma2.

    Raises:
        DomainError: n < 1, or the amplitude does not reach eps = (n+1) omega
    """
    _check_drive(omega, gamma2)
    if int(n) != n or n < 1:
        raise DomainError(f"Resonance index must be an integer >= 1, got {n}")
    i, j = crossing
    gap = qubit.crossing(i, j).gap
    amplitude = combined_slope(qubit, i, j) * phi_rf
    if amplitude < (n + 1) * omega:
        raise DomainError(
            f"Amplitude {amplitude:g} GHz does not reach the window up to {(n + 1) * omega:g} GHz"
        )
    if normalized:
        return comb_contrast(omega, gamma2)

    eps = np.linspace(n * omega, (n + 1) * omega, CONTRAST_SAMPLES)
    w = lz_rate_profile(gap, eps, amplitude, omega, gamma2)
    peak, valley = float(w.max()), float(w.min())
    if peak + valley <= 0:
        return 0.0
    return min(max((peak - valley) / (peak + valley), 0.0), 1.0)


def study_matrix(qubit: QubitSpec, omegas: Sequence[float], gamma2s: Sequence[float],
                 grid: GridSpec, model: Union[str, BaseModel],
                 threads: int = 1) -> List[SweepGrid]:
    """Sweeps for every (gamma2, omega) pair, gamma2 outer and omega inner"""
    if not omegas or not gamma2s:
        raise DomainError("Study needs at least one omega and one gamma2")
    return [
        sweep_grid(qubit, omega, gamma2, grid, model, threads)
        for gamma2 in gamma2s
        for omega in omegas
    ]


def fringe_profile(qubit: QubitSpec, omega: float, gamma2: float, n: int,
                   phi_rf_values, model: Union[str, BaseModel]) -> FringeProfile:
    """
    Left-well population along the line eps_02 = n omega

    The static flux is fixed on the n-th resonance of the (0,2) crossing
    and the drive amplitude is swept.
    """
    _check_drive(omega, gamma2)
    model = resolve_model(model)
    slope = combined_slope(qubit, 0, 2)
    dphi_dc = crossing_location(qubit.levels, 0, 2) + n * omega / slope
    phi_rf = np.asarray(phi_rf_values, dtype=float)
    dphi = np.array([dphi_dc])

    values = np.empty(phi_rf.size)
    w02 = np.empty(phi_rf.size)
    w12 = np.empty(phi_rf.size)
    for k, amplitude in enumerate(phi_rf):
        p_left, _ = model.evaluate_row(qubit, omega, gamma2, dphi, amplitude)
        values[k] = p_left[0]
        for pair, target in (((0, 2), w02), ((1, 2), w12)):
            eps, a = channel_axis(qubit, pair[0], pair[1], dphi, amplitude)
            target[k] = lz_rate_profile(qubit.crossing(*pair).gap, eps, a, omega, gamma2)[0]

    reachable = slope * phi_rf >= abs(n) * omega
    return FringeProfile(n=n, dphi_dc=dphi_dc, phi_rf=phi_rf, values=values,
                         reachable=reachable, w02=w02, w12=w12)


def gapped_fraction(profile, reachable_mask, threshold: float = FRINGE_THRESHOLD) -> float:
    """Share of the reachable part of a fringe that stays below threshold"""
    values = np.asarray(profile, dtype=float)
    mask = np.asarray(reachable_mask, dtype=bool)
    if values.shape != mask.shape:
        raise DomainError("Profile and reachability mask differ in shape")
    if not mask.any():
        return 0.0
    return float(np.count_nonzero(values[mask] < threshold)) / float(np.count_nonzero(mask))


def interior_gaps(profile, reachable_mask,
                  threshold: float = FRINGE_THRESHOLD) -> List[Tuple[int, int]]:
    """
    Runs [start, stop) of a fringe that drop below threshold in its middle

    A run counts only when it lies inside the reachable part and has a
    reachable sample at or above threshold on both sides.
    """
    values = np.asarray(profile, dtype=float)
    mask = np.asarray(reachable_mask, dtype=bool)
    if values.shape != mask.shape:
        raise DomainError("Profile and reachability mask differ in shape")

    gaps = []
    lit, start = False, None
    for k in range(values.size):
        if not mask[k]:
            lit, start = False, None
        elif values[k] < threshold:
            if lit and start is None:
                start = k
        else:
            if start is not None:
                gaps.append((start, k))
            lit, start = True, None
    return gaps


def max_difference(a: SweepGrid, b: SweepGrid) -> float:
    """Largest absolute difference between two maps on the same grid"""
    if a.spec != b.spec:
        raise DomainError("Cannot compare maps on different grids")
    return float(np.max(np.abs(a.values - b.values)))
