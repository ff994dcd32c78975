# models/first_diamond.py
"""
First Diamond - three levels fed by the (0,2) and (1,2) crossings
"""

import numpy as np

from core.steady_state import (
    PopulationVector, TransitionRates, first_diamond_generator, first_diamond_solve,
)
from models.base_model import BaseModel


class FirstDiamondModel(BaseModel):
    """Levels 0, 1, 2 with LZ pumping W02, W12 and relaxation G10, G20"""

    def __init__(self):
        super().__init__(
            name="first_diamond",
            n_levels=3,
            channels=((0, 2), (1, 2)),
        )

    def build_generator(self, rates: TransitionRates) -> np.ndarray:
        return first_diamond_generator(rates.w02, rates.w12, rates.g10, rates.g20)

    def solve(self, rates: TransitionRates) -> PopulationVector:
        return first_diamond_solve(rates.w02, rates.w12, rates.g10, rates.g20)
