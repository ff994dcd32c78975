# models/combined.py
"""
Combined Model - every LZ channel plus thermal excitation out of |0>
"""

import numpy as np

from core.steady_state import PopulationVector, TransitionRates, combined_generator, combined_solve
from models.base_model import BaseModel


class CombinedModel(BaseModel):
    """Full four-level model used for the moire and second-diamond maps"""

    def __init__(self):
        super().__init__(
            name="combined",
            n_levels=4,
            channels=((0, 2), (1, 2), (0, 3), (1, 3)),
            uses_thermal=True,
        )

    def build_generator(self, rates: TransitionRates) -> np.ndarray:
        return combined_generator(rates)

    def solve(self, rates: TransitionRates) -> PopulationVector:
        return combined_solve(rates)
