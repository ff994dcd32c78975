# core/steady_state.py
"""
Steady State - rate-equation models and their stationary populations

Generator convention: dp/dt = Q p with Q[j, i] the rate from level i to
level j (i != j) and every column summing to zero. Three models are built:

* first diamond   (levels 0,1,2):   W02, W12, Gamma10, Gamma20
* second diamond  (levels 0..3):    W03, W12, Gamma10, Gamma20, Gamma32
* combined        (levels 0..3):    all four LZ channels, relaxation and
                                    thermal excitation Gamma02
"""

from dataclasses import dataclass, fields
from enum import Enum
from typing import Tuple, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from core.errors import DegenerateSystemError, DomainError

ArrayLike = Union[float, np.ndarray]

N_LEVELS = 4
SUM_TOLERANCE = 1e-9
NEGATIVE_TOLERANCE = 1e-12
RESIDUAL_TOLERANCE = 1e-10

# Lazy logger initialization
_logger = None


def get_logger():
    global _logger
    if _logger is None:
        from utils.logger import setup_logger
        _logger = setup_logger(__name__)
    return _logger


@dataclass(frozen=True)
class PopulationVector:
    """Occupations p0..p3 of the four lowest levels"""

    p: Tuple[float, float, float, float]

    def __post_init__(self):
        values = tuple(float(v) for v in self.p)
        if len(values) != N_LEVELS:
            raise DomainError(f"Expected {N_LEVELS} occupations, got {len(values)}")
        if any(not np.isfinite(v) for v in values):
            raise DomainError(f"Non-finite occupation in {values}")
        if min(values) < -NEGATIVE_TOLERANCE:
            raise DomainError(f"Negative occupation in {values}")
        clipped = tuple(max(v, 0.0) for v in values)
        if abs(sum(clipped) - 1.0) > SUM_TOLERANCE:
            raise DomainError(f"Occupations sum to {sum(clipped)!r}, not 1")
        object.__setattr__(self, "p", clipped)

    @classmethod
    def ground(cls) -> "PopulationVector":
        return cls((1.0, 0.0, 0.0, 0.0))

    @classmethod
    def from_array(cls, values) -> "PopulationVector":
        padded = np.zeros(N_LEVELS)
        values = np.asarray(values, dtype=float)
        padded[:values.shape[0]] = values
        return cls(tuple(padded))

    def as_array(self) -> np.ndarray:
        return np.array(self.p)

    @property
    def p0(self) -> float:
        return self.p[0]

    @property
    def p1(self) -> float:
        return self.p[1]

    @property
    def p2(self) -> float:
        return self.p[2]

    @property
    def p3(self) -> float:
        return self.p[3]

    @property
    def left(self) -> float:
        """Left-well population p2 + p3"""
        return self.p[2] + self.p[3]


@dataclass(frozen=True)
class TransitionRates:
    """All rates entering the combined model (GHz); fields may be arrays"""

    w02: ArrayLike = 0.0
    w12: ArrayLike = 0.0
    w03: ArrayLike = 0.0
    w13: ArrayLike = 0.0
    g10: ArrayLike = 0.0
    g20: ArrayLike = 0.0
    g32: ArrayLike = 0.0
    g02: ArrayLike = 0.0

    def __post_init__(self):
        for item in fields(self):
            value = getattr(self, item.name)
            if not np.all(np.asarray(value) >= 0):
                raise DomainError(f"Rate {item.name} must be >= 0")


class Regime(str, Enum):
    CLOSED = "closed"
    TWO_LEVEL = "two_level"
    PUMPED_BACK = "pumped_back"

    @property
    def code(self) -> int:
        return list(Regime).index(self)


def _empty_generator(n: int, *rates) -> np.ndarray:
    shape = np.broadcast(*[np.asarray(r, dtype=float) for r in rates]).shape
    return np.zeros(shape + (n, n))


def _finish_generator(q: np.ndarray) -> np.ndarray:
    n = q.shape[-1]
    idx = np.arange(n)
    q[..., idx, idx] = 0.0
    q[..., idx, idx] = -q.sum(axis=-2)
    return q


def first_diamond_generator(w02, w12, g10, g20) -> np.ndarray:
    """Three-level generator of the first-diamond rate equations"""
    q = _empty_generator(3, w02, w12, g10, g20)
    q[..., 2, 0] = w02
    q[..., 0, 2] = np.add(w02, g20)
    q[..., 0, 1] = g10
    q[..., 1, 2] = w12
    q[..., 2, 1] = w12
    return _finish_generator(q)


def second_diamond_generator(w03, w12, g10, g20, g32) -> np.ndarray:
    """Four-level generator of the second-diamond rate equations"""
    q = _empty_generator(4, w03, w12, g10, g20, g32)
    q[..., 3, 0] = w03
    q[..., 0, 3] = w03
    q[..., 0, 1] = g10
    q[..., 0, 2] = g20
    q[..., 1, 2] = w12
    q[..., 2, 1] = w12
    q[..., 2, 3] = g32
    return _finish_generator(q)


def combined_generator(rates: TransitionRates) -> np.ndarray:
    """Four-level generator with every LZ channel, relaxation and Gamma02"""
    r = rates
    q = _empty_generator(4, r.w02, r.w12, r.w03, r.w13, r.g10, r.g20, r.g32, r.g02)
    q[..., 2, 0] = np.add(r.w02, r.g02)
    q[..., 3, 0] = r.w03
    q[..., 0, 1] = r.g10
    q[..., 2, 1] = r.w12
    q[..., 3, 1] = r.w13
    q[..., 0, 2] = np.add(r.w02, r.g20)
    q[..., 1, 2] = r.w12
    q[..., 0, 3] = r.w03
    q[..., 1, 3] = r.w13
    q[..., 2, 3] = r.g32
    return _finish_generator(q)


def residual(generator: np.ndarray, p) -> float:
    """Infinity norm of Q p"""
    q = np.asarray(generator, dtype=float)
    if isinstance(p, PopulationVector):
        p = p.as_array()
    vec = np.asarray(p, dtype=float)[:q.shape[0]]
    return float(np.max(np.abs(q @ vec))) if q.size else 0.0


def _check_generator(q: np.ndarray):
    if q.ndim != 2 or q.shape[0] != q.shape[1] or not 1 <= q.shape[0] <= N_LEVELS:
        raise DomainError(f"Generator must be square with at most {N_LEVELS} levels, got {q.shape}")
    off = q - np.diag(np.diag(q))
    if np.any(off < 0):
        raise DomainError("Generator has negative off-diagonal rates")
    scale = max(float(np.max(np.abs(q))), 1.0)
    if np.any(np.abs(q.sum(axis=0)) > 1e-12 * scale * q.shape[0]):
        raise DomainError("Generator columns do not sum to zero")


def _active_levels(q: np.ndarray) -> np.ndarray:
    """Levels coupled to anything else by at least one rate"""
    off = q - np.diag(np.diag(q))
    return np.flatnonzero((off.sum(axis=0) > 0) | (off.sum(axis=1) > 0))


def _closed_class_count(q: np.ndarray) -> int:
    # edge i -> j whenever Q[j, i] > 0
    adjacency = (q.T > 0) & ~np.eye(q.shape[0], dtype=bool)
    n_classes, labels = connected_components(
        csr_matrix(adjacency.astype(float)), directed=True, connection="strong"
    )
    leaving = np.zeros(n_classes, dtype=bool)
    for source, target in zip(*np.nonzero(adjacency)):
        if labels[source] != labels[target]:
            leaving[labels[source]] = True
    return int(np.count_nonzero(~leaving))


def _augmented(q: np.ndarray) -> np.ndarray:
    a = np.array(q, dtype=float, copy=True)
    a[..., 0, :] = 1.0
    return a


def stationary_solve(generator) -> PopulationVector:
    """
    Stationary populations of a rate generator

    Levels with no rate in or out are left empty. The rest must form a
    chain with exactly one closed communicating class; the balance row of
    the first active level is replaced by the normalization and the system
    is solved by LU with partial pivoting.

    Args:
        generator: n x n generator (n <= 4), columns summing to zero

    Returns:
        PopulationVector padded to four levels

    Raises:
        DegenerateSystemError: no unique stationary state
    """
    q = np.asarray(generator, dtype=float)
    _check_generator(q)

    active = _active_levels(q)
    if active.size == 0:
        raise DegenerateSystemError("Generator has no transitions; stationary state is not unique")

    reduced = q[np.ix_(active, active)]
    if _closed_class_count(reduced) != 1:
        raise DegenerateSystemError("Generator has more than one closed class of levels")

    rhs = np.zeros(active.size)
    rhs[0] = 1.0
    try:
        solution = np.linalg.solve(_augmented(reduced), rhs)
    except np.linalg.LinAlgError as e:
        raise DegenerateSystemError(f"Singular stationary system: {e}") from e

    p = np.zeros(N_LEVELS)
    p[active] = solution
    _check_residual(q, p)
    return _to_population(p)


def _check_residual(q: np.ndarray, p: np.ndarray):
    max_rate = float(np.max(np.abs(q)))
    res = residual(q, p)
    if res > RESIDUAL_TOLERANCE * max_rate:
        get_logger().warning(f"Stationary residual {res:.3e} above {RESIDUAL_TOLERANCE:g} x max rate {max_rate:.3e}")


def _to_population(p: np.ndarray) -> PopulationVector:
    if np.min(p) < -NEGATIVE_TOLERANCE:
        get_logger().warning(f"Clipping negative occupation {np.min(p):.3e}")
        p = np.clip(p, 0.0, None)
    return PopulationVector(tuple(p))


def stationary_solve_batch(generators: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Stationary populations for a stack of generators

    Args:
        generators: Array (k, n, n)

    Returns:
        (populations (k, 4), degenerate mask (k,)). Degenerate points hold
        the ground state.
    """
    q = np.asarray(generators, dtype=float)
    k, n = q.shape[0], q.shape[-1]
    populations = np.zeros((k, N_LEVELS))
    degenerate = np.zeros(k, dtype=bool)

    rhs = np.zeros((k, n, 1))
    rhs[:, 0, 0] = 1.0
    try:
        solved = np.linalg.solve(_augmented(q), rhs)[..., 0]
        good = np.all(np.isfinite(solved), axis=1) & np.all(solved >= -NEGATIVE_TOLERANCE, axis=1)
        good &= np.abs(solved.sum(axis=1) - 1.0) <= SUM_TOLERANCE
    except np.linalg.LinAlgError:
        solved = np.zeros((k, n))
        good = np.zeros(k, dtype=bool)

    populations[good, :n] = np.clip(solved[good], 0.0, None)

    for index in np.flatnonzero(~good):
        try:
            populations[index] = stationary_solve(q[index]).as_array()
        except DegenerateSystemError:
            populations[index] = PopulationVector.ground().as_array()
            degenerate[index] = True

    return populations, degenerate


def first_diamond_closed_form(w02: float, w12: float, g10: float, g20: float) -> float:
    """
    Left-well population p2 of the first-diamond model in closed form

    Exact stationary solution of the three-level equations:

        p2 = W02 (W12 + G10) / [W12 (3 W02 + G20) + G10 (2 W02 + W12 + G20)]
    """
    _check_rates(w02=w02, w12=w12, g10=g10, g20=g20)
    numerator = w02 * (w12 + g10)
    denominator = w12 * (3.0 * w02 + g20) + g10 * (2.0 * w02 + w12 + g20)
    if denominator > 0:
        return numerator / denominator

    # level 1 decoupled: plain exchange between 0 and 2
    if w12 == 0 and g10 == 0 and 2.0 * w02 + g20 > 0:
        return w02 / (2.0 * w02 + g20)
    raise DegenerateSystemError("First-diamond closed form is undefined for these rates")


def first_diamond_solve(w02: float, w12: float, g10: float, g20: float) -> PopulationVector:
    """Stationary populations of the first-diamond model (p3 = 0)"""
    _check_rates(w02=w02, w12=w12, g10=g10, g20=g20)
    return stationary_solve(first_diamond_generator(w02, w12, g10, g20))


def classify_regime(w02: float, w12: float, on_threshold: float) -> Regime:
    """Which of the three first-diamond regimes a pair of rates falls in"""
    if not on_threshold > 0:
        raise DomainError(f"on_threshold must be > 0, got {on_threshold}")
    if w02 < on_threshold:
        return Regime.CLOSED
    if w12 < on_threshold:
        return Regime.TWO_LEVEL
    return Regime.PUMPED_BACK


def default_on_threshold(qubit) -> float:
    """A channel counts as on once it outruns inter-well relaxation"""
    return qubit.gamma20


def second_diamond_solve(w03: float, w12: float, g10: float, g20: float,
                         g32: float) -> PopulationVector:
    """Stationary populations of the second-diamond model"""
    _check_rates(w03=w03, w12=w12, g10=g10, g20=g20, g32=g32)
    return stationary_solve(second_diamond_generator(w03, w12, g10, g20, g32))


def second_diamond_approx(w03: float, w12: float, g20: float) -> float:
    """Left-well population when intra-well relaxation dominates"""
    _check_rates(w03=w03, w12=w12, g20=g20)
    denominator = w03 + w12 + g20
    if denominator <= 0:
        raise DegenerateSystemError("Second-diamond approximation is undefined for zero rates")
    return w03 / denominator


def combined_solve(rates: TransitionRates) -> PopulationVector:
    """Stationary populations of the combined four-level model"""
    return stationary_solve(combined_generator(rates))


def _check_rates(**rates):
    for name, value in rates.items():
        if not value >= 0:
            raise DomainError(f"Rate {name} must be >= 0, got {value}")
