# runners/simulation_runner.py
"""
Simulation Runner - executes one CLI command against a run configuration
"""

import math
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from core.dynamics import MAX_STEPS, integrate, relaxation_horizon, stable_step
from core.errors import ConfigError
from core.lz_rates import RateParams, lz_rate
from core.qubit_model import DriveSpec, channel
from core.run_config import RunConfig
from core.steady_state import PopulationVector
from core.sweep import SweepGrid, mirror_grid, rate_map, study_matrix, sweep_grid
from models.model_loader import get_model, model_names
from utils.grid_writer import write_grid_csv, write_grid_pgm, write_trajectory_csv
from utils.helpers import load_settings

# Default frequency/dephasing study (GHz)
STUDY_OMEGAS = (0.16, 0.879, 0.8886)
STUDY_GAMMA2S = (0.05, 0.2, 0.4)

FORMATS = ('csv', 'pgm', 'both')

# Lazy logger initialization
_logger = None


def get_logger():
    global _logger
    if _logger is None:
        from utils.logger import setup_logger
        _logger = setup_logger(__name__)
    return _logger


def parse_crossing(text: str) -> Tuple[int, int]:
    """'02' or '0,2' -> (0, 2)"""
    digits = [c for c in text if c.isdigit()]
    if len(digits) != 2:
        raise ValueError(f"Crossing must name two levels, got {text!r}")
    return int(digits[0]), int(digits[1])


class SimulationRunner:
    """Runs simulation commands for one RunConfig"""

    def __init__(self, config: RunConfig, threads: int = 1, model: Optional[str] = None):
        self.settings = load_settings()
        if model and model not in model_names():
            raise ConfigError(f"Unknown model {model!r}, choose from {', '.join(model_names())}",
                              key="model")
        self.config = replace(config, model=model) if model else config
        self.model = get_model(self.config.model)
        self.threads = threads
        self.output_dir = Path(self.settings['paths']['output'])

        logger = get_logger()
        qubit = self.config.qubit
        logger.info("=" * 60)
        logger.info(f"🚀 Simulation: model {self.model.name}")
        logger.info(f"📡 Drive: omega={self.config.omega:g} GHz, gamma2={self.config.gamma2:g} GHz")
        logger.info(f"📉 Relaxation: G10={qubit.gamma10:g}, G20={qubit.gamma20:g}, G32={qubit.gamma32:g} GHz, T={qubit.temperature:g} K")
        logger.info(f"🔢 Threads: {self.threads}")
        logger.info("=" * 60)

    def drive(self, dphi_dc: float, phi_rf: float) -> DriveSpec:
        return DriveSpec(omega=self.config.omega, phi_rf=phi_rf, dphi_dc=dphi_dc,
                         gamma2=self.config.gamma2)

    def rate(self, crossing: Tuple[int, int], dphi_dc: float, phi_rf: float) -> float:
        """LZ rate of one channel at one operating point"""
        ch = channel(self.config.qubit, self.drive(dphi_dc, phi_rf), *crossing)
        return lz_rate(RateParams(
            gap=ch.crossing.gap, epsilon=ch.epsilon, amplitude=ch.amplitude,
            omega=self.config.omega, gamma2=self.config.gamma2,
        ))

    def steady(self, dphi_dc: float, phi_rf: float) -> PopulationVector:
        """Stationary populations at one operating point"""
        rates = self.model.rates_at(self.config.qubit, self.drive(dphi_dc, phi_rf))
        return self.model.solve(rates)

    def dynamics(self, dphi_dc: float, phi_rf: float, out: Optional[str] = None,
                 t_max: Optional[float] = None, dt: Optional[float] = None) -> Path:
        """Relax from the ground state and write the trajectory CSV"""
        rates = self.model.rates_at(self.config.qubit, self.drive(dphi_dc, phi_rf))
        generator = self.model.build_generator(rates)

        horizon = t_max is None
        t_max = relaxation_horizon(generator) if horizon else t_max
        if dt is None:
            limit = stable_step(generator)
            dt = limit if math.isfinite(limit) else max(t_max, 1.0)

        # far-tail and thermal rates push the horizon past the step budget
        capped = (MAX_STEPS - 1) * dt
        if horizon and t_max > capped:
            get_logger().warning(
                f"⚠️ Relaxation horizon {t_max:.4g} ns needs more than {MAX_STEPS} steps, "
                f"stopping at {capped:.4g} ns"
            )
            t_max = capped

        trajectory = integrate(generator, PopulationVector.ground(), dt, t_max)
        path = write_trajectory_csv(trajectory, out or self.output_dir / 'trajectory.csv')
        get_logger().info(f"✅ Trajectory ({len(trajectory)} states, t_max={t_max:g} ns) written to {path}")
        return path

    def _write(self, grid: SweepGrid, out: Optional[str], fmt: str, stem: str,
               vmax: float = 1.0) -> List[Path]:
        if fmt not in FORMATS:
            raise ValueError(f"Unknown format {fmt!r}")

        if out:
            target = Path(out)
            csv_path = target.with_suffix('.csv') if target.suffix == '.pgm' else target
            pgm_path = target if target.suffix == '.pgm' else target.with_suffix('.pgm')
        else:
            csv_path = Path(self.config.output_csv or self.output_dir / f"{stem}.csv")
            pgm_path = Path(self.config.output_pgm or csv_path.with_suffix('.pgm'))

        written = []
        if fmt in ('csv', 'both'):
            written.append(write_grid_csv(grid, csv_path))
        if fmt in ('pgm', 'both'):
            written.append(write_grid_pgm(grid, pgm_path, 0.0, vmax))
        for path in written:
            get_logger().info(f"💾 Wrote {path}")
        return written

    def sweep(self, out: Optional[str] = None, fmt: str = 'csv', mirror: bool = False) -> List[Path]:
        """Left-well population map"""
        c = self.config
        grid = sweep_grid(c.qubit, c.omega, c.gamma2, c.grid, self.model, self.threads)
        if mirror:
            grid = mirror_grid(grid)
        return self._write(grid, out, fmt, f"sweep_{self.model.name}")

    def ratemap(self, crossing: Tuple[int, int], out: Optional[str] = None, fmt: str = 'csv',
                mirror: bool = False) -> List[Path]:
        """LZ rate map of one channel"""
        c = self.config
        grid = rate_map(c.qubit, c.omega, c.gamma2, c.grid, crossing, self.threads, self.model.name)
        if mirror:
            grid = mirror_grid(grid)
        peak = float(grid.values.max())
        return self._write(grid, out, fmt, f"rate_{grid.quantity}", vmax=peak if peak > 0 else 1.0)

    def study(self, out_dir: Optional[str] = None, fmt: str = 'csv',
              omegas: Sequence[float] = STUDY_OMEGAS,
              gamma2s: Sequence[float] = STUDY_GAMMA2S) -> List[Path]:
        """Frequency/dephasing matrix of sweeps, one file per (gamma2, omega)"""
        c = self.config
        directory = Path(out_dir) if out_dir else self.output_dir / 'study'
        grids = study_matrix(c.qubit, list(omegas), list(gamma2s), c.grid, self.model, self.threads)

        written = []
        pairs = [(g2, om) for g2 in gamma2s for om in omegas]
        for (gamma2, omega), grid in zip(pairs, grids):
            stem = f"gamma2_{gamma2:g}_omega_{omega:g}"
            written += self._write(grid, str(directory / f"{stem}.csv"), fmt, stem)
        get_logger().info(f"✅ Study done: {len(grids)} grids in {directory}")
        return written
