# models/second_diamond.py
"""
Second Diamond - four levels fed by the (0,3) and (1,2) crossings
"""

import numpy as np

from core.steady_state import (
    PopulationVector, TransitionRates, second_diamond_generator, second_diamond_solve,
)
from models.base_model import BaseModel


class SecondDiamondModel(BaseModel):
    """Population inversion through W03 with intra-well relaxation in both wells"""

    def __init__(self):
        super().__init__(
            name="second_diamond",
            n_levels=4,
            channels=((0, 3), (1, 2)),
        )

    def build_generator(self, rates: TransitionRates) -> np.ndarray:
        return second_diamond_generator(rates.w03, rates.w12, rates.g10, rates.g20, rates.g32)

    def solve(self, rates: TransitionRates) -> PopulationVector:
        return second_diamond_solve(rates.w03, rates.w12, rates.g10, rates.g20, rates.g32)
