# core/verification.py
"""
Verification - built-in oracle checks behind the `verify` command

* dynamics oracle: RK4 relaxation agrees with the stationary linear solve
* closed forms: first-diamond closed form, second-diamond approximation
* Bessel kernel: exact values, rational power series, rate-sum truncation
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from core.dynamics import converge
from core.lz_rates import bessel_j, bessel_j_orders, bessel_j_series, lz_rate_profile, truncation_order
from core.steady_state import (
    PopulationVector, TransitionRates, first_diamond_closed_form, first_diamond_solve,
    second_diamond_approx, second_diamond_solve, stationary_solve,
)
from models.model_loader import get_model

ORACLE_TOLERANCE = 1e-6
CLOSED_FORM_TOLERANCE = 1e-10
APPROX_TOLERANCE = 0.05
BESSEL_TOLERANCE = 1e-12
TAIL_TOLERANCE = 1e-10
FIRST_ZERO_J0 = 2.404826

# Lazy logger initialization
_logger = None


def get_logger():
    global _logger
    if _logger is None:
        from utils.logger import setup_logger
        _logger = setup_logger(__name__, run_type="verify")
    return _logger


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification check"""

    name: str
    passed: bool
    worst: float
    tolerance: float
    samples: int
    detail: str = ""

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: worst {self.worst:.3e} (tol {self.tolerance:g}, {self.samples} samples)"
        return f"{text} {self.detail}".rstrip()


def _log_uniform(rng: np.random.Generator, low: float, high: float, size=None):
    return np.exp(rng.uniform(np.log(low), np.log(high), size))


def random_rates(rng: np.random.Generator, low: float = 1e-3, high: float = 1.0) -> TransitionRates:
    """All eight rates drawn log-uniformly from [low, high] GHz"""
    values = _log_uniform(rng, low, high, 8)
    return TransitionRates(*(float(v) for v in values))


def check_dynamics_oracle(n_sets: int = 200, seed: int = 0, tol: float = 1e-12) -> List[CheckResult]:
    """RK4 relaxation versus stationary solve for every model"""
    results = []
    for name in ("first_diamond", "second_diamond", "combined"):
        model = get_model(name)
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(n_sets):
            generator = model.build_generator(random_rates(rng))
            expected = stationary_solve(generator).as_array()
            relaxed = converge(generator, PopulationVector.ground(), tol).as_array()
            worst = max(worst, float(np.max(np.abs(relaxed - expected))))
        results.append(CheckResult(
            name=f"dynamics_oracle[{name}]",
            passed=worst <= ORACLE_TOLERANCE,
            worst=worst,
            tolerance=ORACLE_TOLERANCE,
            samples=n_sets,
        ))
    return results


def check_closed_forms(n_sets: int = 1000, seed: int = 0) -> List[CheckResult]:
    """First-diamond closed form (exact) and second-diamond approximation (fast relaxation)"""
    rng = np.random.default_rng(seed)

    worst_exact = 0.0
    worst_bound = 0.0
    for _ in range(n_sets):
        w02, w12, g10, g20 = _log_uniform(rng, 1e-3, 1.0, 4)
        solved = first_diamond_solve(w02, w12, g10, g20).p2
        closed = first_diamond_closed_form(w02, w12, g10, g20)
        worst_exact = max(worst_exact, abs(solved - closed) / abs(closed))
        worst_bound = max(worst_bound, solved - 0.5)

    worst_approx = 0.0
    for _ in range(n_sets):
        w03, w12 = _log_uniform(rng, 1e-4, 1e-1, 2)
        g10, g32 = 100.0 * (w03 + w12) * rng.uniform(1.0, 10.0, 2)
        # inter-well decay well below both intra-well rates
        g20 = min(g10, g32) * float(_log_uniform(rng, 1e-4, 1e-2))
        solved = second_diamond_solve(w03, w12, g10, g20, g32).left
        approx = second_diamond_approx(w03, w12, g20)
        worst_approx = max(worst_approx, abs(solved - approx) / approx)

    return [
        CheckResult("first_diamond_closed_form", worst_exact <= CLOSED_FORM_TOLERANCE,
                    worst_exact, CLOSED_FORM_TOLERANCE, n_sets),
        CheckResult("first_diamond_half_bound", worst_bound <= 1e-12,
                    max(worst_bound, 0.0), 1e-12, n_sets, "(p2 - 1/2)"),
        CheckResult("second_diamond_approximation", worst_approx <= APPROX_TOLERANCE,
                    worst_approx, APPROX_TOLERANCE, n_sets),
    ]


def check_bessel_kernel(n_sets: int = 100, seed: int = 0) -> List[CheckResult]:
    """Exact values, power-series oracle (n <= 50, x <= 20) and truncation tail"""
    rng = np.random.default_rng(seed)

    exact = abs(bessel_j(0, 0.0) - 1.0) + abs(bessel_j(3, 0.0))
    zero = abs(bessel_j(0, FIRST_ZERO_J0))

    worst_series = 0.0
    for _ in range(n_sets):
        x = float(rng.uniform(0.0, 20.0))
        orders = bessel_j_orders(50, x)
        for n in rng.choice(51, size=3, replace=False):
            worst_series = max(worst_series, abs(orders[n] - bessel_j_series(int(n), x)))

    worst_tail = 0.0
    for _ in range(n_sets):
        omega = float(_log_uniform(rng, 0.05, 2.0))
        x = float(rng.uniform(0.0, 500.0))
        gamma2 = float(_log_uniform(rng, 0.01, 0.5))
        amplitude = x * omega
        eps = float(rng.uniform(-amplitude - 5 * omega, amplitude + 5 * omega))
        order = truncation_order(x)
        base = float(lz_rate_profile(0.1, eps, amplitude, omega, gamma2, order=order))
        doubled = float(lz_rate_profile(0.1, eps, amplitude, omega, gamma2, order=2 * order))
        worst_tail = max(worst_tail, abs(doubled - base) / doubled)

    return [
        CheckResult("bessel_exact_values", exact == 0.0, exact, 0.0, 2),
        CheckResult("bessel_first_zero", zero < 1e-6, zero, 1e-6, 1),
        CheckResult("bessel_power_series", worst_series <= BESSEL_TOLERANCE,
                    worst_series, BESSEL_TOLERANCE, 3 * n_sets),
        CheckResult("lz_rate_truncation_tail", worst_tail < TAIL_TOLERANCE,
                    worst_tail, TAIL_TOLERANCE, n_sets),
    ]


def run_verification(settings: Optional[Dict[str, Any]] = None) -> List[CheckResult]:
    """
    Run every oracle check with the sizes from the verify settings

    Returns:
        All check results; the suite passes when every result passed
    """
    if settings is None:
        from utils.helpers import load_settings
        settings = load_settings()
    verify = settings.get('verify', {})
    seed = int(verify.get('seed', 0))

    logger = get_logger()
    logger.info(f"🔍 Running verification suite (seed {seed})")

    results: List[CheckResult] = []
    results += check_dynamics_oracle(int(verify.get('dynamics_sets', 200)), seed,
                                     float(verify.get('converge_tol', 1e-12)))
    results += check_closed_forms(int(verify.get('closed_form_sets', 1000)), seed)
    results += check_bessel_kernel(int(verify.get('tail_sets', 100)), seed)

    for result in results:
        if result.passed:
            logger.info(result.summary())
        else:
            logger.error(result.summary())

    failed = sum(not r.passed for r in results)
    if failed:
        logger.error(f"❌ {failed} of {len(results)} checks failed")
    else:
        logger.info(f"✅ All {len(results)} checks passed")
    return results
