# core/lz_rates.py
"""
LZ Rates - dephasing-broadened multiphoton Landau-Zener transition rate

    W = (Delta^2 / 2) * sum_n Gamma2 J_n(x)^2 / ((eps - n omega)^2 + Gamma2^2)

with x = A / omega. All quantities in GHz (ordinary frequency). The sum over
all integers n is truncated at |n| <= truncation_order(x); past n ~ x the
Bessel weights decay faster than any Lorentzian tail grows.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from core.errors import DomainError

MAX_ORDER = 2000
MAX_ARGUMENT = 1000.0

# Miller recurrence rescaling thresholds
_BIG = 1.0e250
_BIG_INV = 1.0e-250


@dataclass(frozen=True)
class RateParams:
    """Inputs of one LZ rate evaluation"""

    gap: float
    epsilon: float
    amplitude: float
    omega: float
    gamma2: float

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"omega must be > 0, got {self.omega}")
        if not self.gamma2 > 0:
            raise DomainError(f"gamma2 must be > 0, got {self.gamma2}")
        if not self.amplitude >= 0:
            raise DomainError(f"amplitude must be >= 0, got {self.amplitude}")
        if not self.gap >= 0:
            raise DomainError(f"gap must be >= 0, got {self.gap}")

    @property
    def x(self) -> float:
        return self.amplitude / self.omega


def _check_argument(x: float):
    if not (0.0 <= x <= MAX_ARGUMENT):
        raise DomainError(f"Bessel argument must be in [0, {MAX_ARGUMENT:g}], got {x}")


def _miller_start(n_max: int, x: float) -> int:
    reach = max(n_max, int(math.ceil(x)), 1)
    start = reach + int(math.ceil(2.0 * math.sqrt(40.0 * reach))) + 20
    return start + (start % 2)


def bessel_j_orders(n_max: int, x: float) -> np.ndarray:
    """
    J_0(x) .. J_n_max(x) from one downward (Miller) recurrence

    The recurrence J_{k-1} = (2k/x) J_k - J_{k+1} is started far above
    max(n_max, x) from an arbitrary seed and normalized with
    J_0 + 2 sum_k J_2k = 1.

    Args:
        n_max: Highest order needed (>= 0)
        x: Argument in [0, 1000]

    Returns:
        Array of length n_max + 1
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    _check_argument(x)

    values = np.zeros(n_max + 1)
    if x == 0.0:
        values[0] = 1.0
        return values

    start = _miller_start(n_max, x)
    column = [0.0] * (start + 2)
    column[start] = 1.0e-30
    two_over_x = 2.0 / x

    for k in range(start, 0, -1):
        value = k * two_over_x * column[k] - column[k + 1]
        column[k - 1] = value
        if abs(value) > _BIG:
            for m in range(k - 1, start + 1):
                column[m] *= _BIG_INV

    norm = column[0] + 2.0 * math.fsum(column[2:start + 1:2])
    values[:] = np.asarray(column[:n_max + 1]) / norm
    return values


def bessel_j(n: int, x: float) -> float:
    """
    Bessel function of the first kind J_n(x) for integer n

    Args:
        n: Order, |n| <= 2000 (negative orders by J_-n = (-1)^n J_n)
        x: Argument in [0, 1000]

    Raises:
        DomainError: outside the supported range
    """
    if int(n) != n or abs(n) > MAX_ORDER:
        raise DomainError(f"Order must be an integer with |n| <= {MAX_ORDER}, got {n}")
    _check_argument(x)

    order = abs(int(n))
    value = float(bessel_j_orders(order, x)[order])
    if n < 0 and order % 2 == 1:
        return -value
    return value


def bessel_j_series(n: int, x: float, tolerance: Fraction = Fraction(1, 10**40)) -> float:
    """
    Power-series J_n(x) summed in exact rational arithmetic

    Slow; meant as a reference for moderate arguments (x <= ~30).
    """
    if n < 0:
        sign = -1 if n % 2 else 1
        return sign * bessel_j_series(-n, x, tolerance)

    half = Fraction(x) / 2
    half_sq = half * half
    term = half ** n / math.factorial(n)
    total = term
    k = 0
    while True:
        k += 1
        term = -term * half_sq / (k * (k + n))
        total += term
        if k > x and abs(term) < tolerance:
            break
    return float(total)


def truncation_order(x: float) -> int:
    """Number of photon orders kept on each side of the rate sum"""
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    return int(math.ceil(x + 10.0 * x ** (1.0 / 3.0) + 20.0))


def lz_rate_profile(gap: float, epsilons, amplitude: float, omega: float,
                    gamma2: float, order: Optional[int] = None) -> np.ndarray:
    """
    LZ rate for many static detunings sharing one drive amplitude

    Args:
        gap: Avoided-crossing gap Delta_ij (GHz)
        epsilons: Static energy detunings (GHz), any shape
        amplitude: Energy drive amplitude A_ij (GHz)
        omega: Drive frequency (GHz)
        gamma2: Dephasing rate (GHz)
        order: Photon-order cutoff; defaults to truncation_order(A/omega)

    Returns:
        Array of rates with the shape of epsilons
    """
    RateParams(gap=gap, epsilon=0.0, amplitude=amplitude, omega=omega, gamma2=gamma2)

    eps = np.abs(np.asarray(epsilons, dtype=float))
    x = amplitude / omega
    n_max = truncation_order(x) if order is None else int(order)
    if n_max > MAX_ORDER:
        raise DomainError(f"Photon-order cutoff {n_max} exceeds {MAX_ORDER}")

    weights = bessel_j_orders(n_max, x) ** 2
    photons = np.arange(1, n_max + 1) * omega
    g2 = gamma2 * gamma2

    flat = eps.reshape(-1, 1)
    below = flat - photons
    above = flat + photons
    side = weights[1:] * (gamma2 / (below * below + g2) + gamma2 / (above * above + g2))
    total = weights[0] * gamma2 / (flat[:, 0] * flat[:, 0] + g2) + side.sum(axis=1)

    prefactor = 0.5 * gap * gap
    return (prefactor * total).reshape(eps.shape)


def lz_rate(params: RateParams) -> float:
    """LZ transition rate W_ij for one operating point (GHz)"""
    return float(lz_rate_profile(
        params.gap, params.epsilon, params.amplitude, params.omega, params.gamma2
    ))
