# core/dynamics.py
"""
Dynamics - fixed-step RK4 integration of dp/dt = Q p

Used as an independent oracle for the stationary solvers. Because the
equations are linear, one RK4 step is a fixed matrix (the propagator) and
long runs are done by repeated squaring of that matrix.
"""

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from core.errors import ConvergenceError, DomainError, StepSizeError
from core.steady_state import N_LEVELS, PopulationVector, SUM_TOLERANCE, residual

STABILITY_FACTOR = 0.1
HORIZON_FACTOR = 50.0
MAX_STEPS = 10_000_000
MAX_RECORDS = 10_000

# Lazy logger initialization
_logger = None


def get_logger():
    global _logger
    if _logger is None:
        from utils.logger import setup_logger
        _logger = setup_logger(__name__)
    return _logger


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: times (ns) and one row of p0..p3 per time"""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if times.ndim != 1 or states.shape != (times.size, N_LEVELS):
            raise DomainError(f"Trajectory shape mismatch: times {times.shape}, states {states.shape}")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise DomainError("Trajectory times must be strictly increasing")
        drift = np.max(np.abs(states.sum(axis=1) - 1.0)) if times.size else 0.0
        if drift > SUM_TOLERANCE:
            raise DomainError(f"Trajectory violates conservation by {drift:.3e}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return self.times.size

    def populations(self) -> Iterator[PopulationVector]:
        for row in self.states:
            yield PopulationVector(tuple(row))

    @property
    def final(self) -> PopulationVector:
        return PopulationVector(tuple(self.states[-1]))


def _padded(generator) -> np.ndarray:
    q = np.asarray(generator, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] > N_LEVELS:
        raise DomainError(f"Generator must be square with at most {N_LEVELS} levels, got {q.shape}")
    full = np.zeros((N_LEVELS, N_LEVELS))
    full[:q.shape[0], :q.shape[0]] = q
    return full


def _state(p) -> np.ndarray:
    if isinstance(p, PopulationVector):
        return p.as_array()
    return PopulationVector.from_array(p).as_array()


def max_outflow(generator) -> float:
    """Largest total outflow rate out of any level"""
    q = _padded(generator)
    return float(np.max(-np.diag(q)))


def stable_step(generator) -> float:
    """Largest step allowed by the stability precondition (inf if nothing moves)"""
    outflow = max_outflow(generator)
    return math.inf if outflow <= 0 else STABILITY_FACTOR / outflow


def relaxation_horizon(generator) -> float:
    """Time after which the populations are stationary: 50 / slowest rate"""
    q = _padded(generator)
    off = q - np.diag(np.diag(q))
    rates = off[off > 0]
    return 0.0 if rates.size == 0 else HORIZON_FACTOR / float(rates.min())


def rk4_step(generator, p, dt: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step"""
    q = _padded(generator)
    p = np.asarray(p, dtype=float)
    k1 = q @ p
    k2 = q @ (p + 0.5 * dt * k1)
    k3 = q @ (p + 0.5 * dt * k2)
    k4 = q @ (p + dt * k3)
    return p + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_propagator(generator, dt: float) -> np.ndarray:
    """Matrix applied by one RK4 step of a linear system"""
    m = dt * _padded(generator)
    m2 = m @ m
    m3 = m2 @ m
    return np.eye(N_LEVELS) + m + m2 / 2.0 + m3 / 6.0 + (m3 @ m) / 24.0


def integrate(generator, p_init, dt: float, t_max: float,
              max_records: int = MAX_RECORDS) -> Trajectory:
    """
    Integrate the rate equations with fixed-step RK4

    The interval is split into K = ceil(t_max / dt) equal steps, so the step
    actually taken never exceeds dt. At most max_records states are kept
    (evenly strided, the final state always included).

    Args:
        generator: Rate generator (n <= 4)
        p_init: Initial occupations
        dt: Requested step (ns)
        t_max: End time (ns)

    Raises:
        StepSizeError: dt above 0.1 / max outflow, or not positive
    """
    q = _padded(generator)
    if not dt > 0:
        raise StepSizeError(f"dt must be > 0, got {dt}")
    if not t_max >= 0:
        raise DomainError(f"t_max must be >= 0, got {t_max}")
    limit = stable_step(q)
    if dt > limit:
        raise StepSizeError(f"dt = {dt:g} ns exceeds stability limit {limit:g} ns")

    p = _state(p_init)
    n_steps = int(math.ceil(t_max / dt)) if t_max > 0 else 0
    if n_steps > MAX_STEPS:
        raise StepSizeError(f"{n_steps} steps requested, budget is {MAX_STEPS}")
    if n_steps == 0:
        return Trajectory(np.array([0.0]), p[np.newaxis, :])

    h = t_max / n_steps
    stride = max(1, int(math.ceil(n_steps / max(max_records - 1, 1))))
    step = rk4_propagator(q, h)
    block = np.linalg.matrix_power(step, stride)

    times = [0.0]
    states = [p]
    done = 0
    while done < n_steps:
        count = min(stride, n_steps - done)
        p = (block if count == stride else np.linalg.matrix_power(step, count)) @ p
        done += count
        times.append(done * h)
        states.append(p)

    get_logger().debug(f"Integrated {n_steps} RK4 steps of {h:.4g} ns, kept {len(times)} states")
    return Trajectory(np.array(times), np.array(states))


def converge(generator, p_init, tol: float = 1e-12,
             max_steps: int = MAX_STEPS) -> PopulationVector:
    """
    Run the rate equations until they are stationary

    Steps at the stable step size. After each block the residual
    ||Q p||_inf is compared against tol * max rate and the block length
    is doubled by squaring its propagator.

    Raises:
        ConvergenceError: not stationary after max_steps steps
    """
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    q = _padded(generator)
    p = _state(p_init)
    scale = float(np.max(np.abs(q)))
    if scale == 0 or residual(q, p) < tol * scale:
        return PopulationVector(tuple(p))

    block = rk4_propagator(q, stable_step(q))
    block_steps = 1
    total = 0
    while total + block_steps <= max_steps:
        p = block @ p
        total += block_steps
        if residual(q, p) < tol * scale:
            get_logger().debug(f"Converged after {total} steps")
            return PopulationVector(tuple(np.clip(p, 0.0, None) / np.clip(p, 0.0, None).sum()))
        block = block @ block
        block_steps *= 2

    raise ConvergenceError(f"Residual {residual(q, p):.3e} still above {tol:g} x {scale:.3e} after {total} steps")
