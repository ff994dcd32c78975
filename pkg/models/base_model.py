# models/base_model.py
"""
Base Model Class - All rate-equation models must inherit from this
"""

from abc import ABC, abstractmethod
from typing import Dict, Tuple, Union

import numpy as np

from core.lz_rates import lz_rate_profile
from core.qubit_model import DriveSpec, QubitSpec, channel_axis, thermal_rate
from core.steady_state import PopulationVector, TransitionRates, stationary_solve_batch

RATE_FIELDS: Dict[Tuple[int, int], str] = {
    (0, 2): "w02",
    (1, 2): "w12",
    (0, 3): "w03",
    (1, 3): "w13",
}


class BaseModel(ABC):
    """Base class for the stationary rate-equation models"""

    def __init__(self, name: str, n_levels: int,
                 channels: Tuple[Tuple[int, int], ...], uses_thermal: bool = False):
        """
        Initialize model

        Args:
            name: Model name used on the command line and in output metadata
            n_levels: Size of the generator
            channels: LZ crossings feeding the model
            uses_thermal: Whether thermal excitation Gamma02 is included
        """
        self.name = name
        self.n_levels = n_levels
        self.channels = channels
        self.uses_thermal = uses_thermal

    @abstractmethod
    def build_generator(self, rates: TransitionRates) -> np.ndarray:
        """
        Rate generator for one or many operating points

        Args:
            rates: Transition rates; array fields broadcast

        Returns:
            Array of shape (..., n_levels, n_levels)
        """
        pass

    @abstractmethod
    def solve(self, rates: TransitionRates) -> PopulationVector:
        """
        Stationary populations for scalar rates

        Raises:
            DegenerateSystemError: no unique stationary state
        """
        pass

    def left_population(self, populations: Union[PopulationVector, np.ndarray]):
        """Population of the left well, p2 + p3 (p3 is zero for three levels)"""
        if isinstance(populations, PopulationVector):
            return populations.left
        populations = np.asarray(populations)
        return populations[..., 2] + populations[..., 3]

    def transition_rates(self, qubit: QubitSpec, omega: float, gamma2: float,
                         dphi_values, phi_rf: float) -> TransitionRates:
        """
        Rates of every channel this model uses along a row of static fluxes

        Args:
            qubit: Qubit description
            omega: Drive frequency (GHz)
            gamma2: Dephasing rate (GHz)
            dphi_values: Static flux detunings (mPhi0)
            phi_rf: Drive amplitude shared by the row (mPhi0)
        """
        dphi = np.asarray(dphi_values, dtype=float)
        rates = {}
        for i, j in self.channels:
            eps, amplitude = channel_axis(qubit, i, j, dphi, phi_rf)
            gap = qubit.crossing(i, j).gap
            rates[RATE_FIELDS[(i, j)]] = lz_rate_profile(gap, eps, amplitude, omega, gamma2)

        if self.uses_thermal:
            eps02, _ = channel_axis(qubit, 0, 2, dphi, 0.0)
            rates["g02"] = thermal_rate(qubit.gamma20, np.abs(eps02), qubit.temperature)

        return TransitionRates(
            g10=qubit.gamma10, g20=qubit.gamma20, g32=qubit.gamma32, **rates
        )

    def evaluate_row(self, qubit: QubitSpec, omega: float, gamma2: float,
                     dphi_values, phi_rf: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Left-well population along one row of a sweep

        Returns:
            (p_left, degenerate mask); degenerate points hold the ground state
        """
        rates = self.transition_rates(qubit, omega, gamma2, dphi_values, phi_rf)
        n_points = np.asarray(dphi_values).size
        generators = np.broadcast_to(
            self.build_generator(rates), (n_points, self.n_levels, self.n_levels)
        )
        populations, degenerate = stationary_solve_batch(generators)
        return self.left_population(populations), degenerate

    def rates_at(self, qubit: QubitSpec, drive: DriveSpec) -> TransitionRates:
        """Scalar rates at a single operating point"""
        rates = self.transition_rates(
            qubit, drive.omega, drive.gamma2, np.array([drive.dphi_dc]), drive.phi_rf
        )
        return TransitionRates(**{
            name: float(np.asarray(getattr(rates, name)).reshape(-1)[0])
            for name in ("w02", "w12", "w03", "w13", "g10", "g20", "g32", "g02")
        })

    def __str__(self) -> str:
        return f"{self.name}"

    def __repr__(self) -> str:
        return f"<Model: {self.name}>"
