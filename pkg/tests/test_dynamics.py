# tests/test_dynamics.py
import math

import numpy as np
import pytest

from core.dynamics import (
    MAX_RECORDS, Trajectory, converge, integrate, max_outflow, relaxation_horizon,
    rk4_propagator, rk4_step, stable_step,
)
from core.errors import ConvergenceError, DomainError, StepSizeError
from core.steady_state import (
    PopulationVector, TransitionRates, combined_generator, first_diamond_generator,
    second_diamond_generator, stationary_solve,
)


def two_state(w: float) -> np.ndarray:
    """Symmetric exchange between levels 0 and 2 only"""
    return first_diamond_generator(w, 0.0, 0.0, 0.0)


def test_two_state_relaxation_matches_exponential():
    w = 0.2
    q = two_state(w)
    trajectory = integrate(q, PopulationVector.ground(), 0.005 / w, 20.0)
    expected = 0.5 * (1.0 - np.exp(-2.0 * w * trajectory.times))
    assert np.allclose(trajectory.states[:, 2], expected, atol=1e-9)
    assert np.allclose(trajectory.states.sum(axis=1), 1.0, atol=1e-12)


def test_halving_the_step_is_fourth_order():
    w, t_max = 0.2, 10.0
    exact = 0.5 * (1.0 - math.exp(-2.0 * w * t_max))
    errors = [
        abs(integrate(two_state(w), PopulationVector.ground(), dt, t_max).final.p2 - exact)
        for dt in (0.4, 0.2)
    ]
    assert errors[1] > 0
    assert 12.0 < errors[0] / errors[1] < 20.0


def test_step_and_propagator_agree():
    q = first_diamond_generator(0.1, 0.2, 0.6, 5e-5)
    p = np.array([0.7, 0.1, 0.2, 0.0])
    dt = 0.1
    assert np.allclose(rk4_step(q, p, dt), rk4_propagator(q, dt) @ p, atol=1e-15)


def test_stable_step_and_horizon():
    q = first_diamond_generator(0.1, 0.2, 0.6, 5e-5)
    assert max_outflow(q) == pytest.approx(0.8)
    assert stable_step(q) == pytest.approx(0.1 / 0.8)
    assert relaxation_horizon(q) == pytest.approx(50.0 / 0.1)
    assert stable_step(np.zeros((3, 3))) == math.inf
    assert relaxation_horizon(np.zeros((3, 3))) == 0.0


def test_step_size_precondition():
    q = first_diamond_generator(0.1, 0.2, 0.6, 5e-5)
    with pytest.raises(StepSizeError):
        integrate(q, PopulationVector.ground(), 1.0, 10.0)
    with pytest.raises(StepSizeError):
        integrate(q, PopulationVector.ground(), 0.0, 10.0)
    with pytest.raises(DomainError):
        integrate(q, PopulationVector.ground(), 0.1, -1.0)


def test_zero_horizon_returns_initial_state():
    q = first_diamond_generator(0.1, 0.2, 0.6, 5e-5)
    trajectory = integrate(q, PopulationVector.ground(), 0.1, 0.0)
    assert len(trajectory) == 1
    assert trajectory.final == PopulationVector.ground()


def test_last_step_lands_on_t_max():
    q = first_diamond_generator(0.1, 0.2, 0.6, 5e-5)
    trajectory = integrate(q, PopulationVector.ground(), 0.1, 1.05)
    assert trajectory.times[-1] == pytest.approx(1.05)
    assert np.all(np.diff(trajectory.times) > 0)


def test_records_are_capped():
    q = two_state(0.2)
    trajectory = integrate(q, PopulationVector.ground(), 0.01, 1000.0)
    assert len(trajectory) <= MAX_RECORDS + 1
    assert trajectory.times[-1] == pytest.approx(1000.0)
    full = integrate(q, PopulationVector.ground(), 0.01, 1000.0, max_records=200_000)
    assert np.allclose(trajectory.final.as_array(), full.final.as_array(), atol=1e-12)


def test_populations_stay_physical():
    rates = TransitionRates(0.3, 0.02, 0.5, 0.01, 0.6, 5e-5, 0.6, 1e-6)
    q = combined_generator(rates)
    trajectory = integrate(q, PopulationVector.ground(), stable_step(q), 30.0)
    assert np.all(trajectory.states >= -1e-12)
    for p in trajectory.populations():
        assert sum(p.p) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("build", [
    lambda: first_diamond_generator(0.12, 0.04, 0.6, 5e-5),
    lambda: second_diamond_generator(0.08, 0.01, 0.6, 5e-5, 0.6),
    lambda: combined_generator(TransitionRates(0.1, 0.05, 0.2, 0.01, 0.6, 0.003, 0.6, 1e-4)),
])
def test_converge_matches_stationary_solve(build):
    q = build()
    expected = stationary_solve(q).as_array()
    relaxed = converge(q, PopulationVector.ground(), tol=1e-12).as_array()
    assert np.allclose(relaxed, expected, atol=1e-8)


def test_converge_from_stationary_state_returns_it():
    q = first_diamond_generator(0.12, 0.04, 0.6, 5e-5)
    p = stationary_solve(q)
    assert np.allclose(converge(q, p).as_array(), p.as_array(), atol=1e-15)


def test_converge_budget():
    q = first_diamond_generator(0.12, 0.04, 0.6, 5e-5)
    with pytest.raises(ConvergenceError):
        converge(q, PopulationVector.ground(), tol=1e-12, max_steps=3)
    with pytest.raises(DomainError):
        converge(q, PopulationVector.ground(), tol=0.0)


def test_trajectory_validation():
    with pytest.raises(DomainError):
        Trajectory(np.array([0.0, 0.0]), np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]]))
    with pytest.raises(DomainError):
        Trajectory(np.array([0.0]), np.array([[0.5, 0, 0, 0]]))
    with pytest.raises(DomainError):
        Trajectory(np.array([0.0, 1.0]), np.array([[1.0, 0, 0, 0]]))
