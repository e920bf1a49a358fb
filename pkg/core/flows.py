"""
Classical Runge-Kutta integration for autonomous vector fields.

`integrate` takes fixed steps. `integrate_conserving` watches a first integral of
the field and halves the step until its drift per unit time is below a bound.
"""
import logging
from typing import Callable
import numpy as np

from core.errors import ConsistencyError, DomainError, NumericalError

logger = logging.getLogger(__name__)

VectorField = Callable[[np.ndarray], np.ndarray]
Invariant = Callable[[np.ndarray], float]

MAX_DRIFT = 1e-6
MAX_HALVINGS = 6


def rk4_step(field: VectorField, state: np.ndarray, h: float) -> np.ndarray:
    k1 = field(state) * h
    k2 = field(state + 0.5 * k1) * h
    k3 = field(state + 0.5 * k2) * h
    k4 = field(state + k3) * h
    return state + (k1 + 2.0 * (k2 + k3) + k4) / 6.0


def integrate(field: VectorField, state0, step: float, n: int) -> np.ndarray:
    """Returns the (n + 1, dim) array of states, initial state first."""
    if step <= 0 or n < 1:
        raise DomainError(f"Need step > 0 and n >= 1, got step={step}, n={n}")
    states = np.empty((n + 1, np.asarray(state0).shape[0]))
    states[0] = np.asarray(state0, dtype=float)
    for i in range(n):
        states[i + 1] = rk4_step(field, states[i], step)
        if not np.all(np.isfinite(states[i + 1])):
            raise NumericalError(f"Integration blew up at step {i + 1} (t = {(i + 1) * step:g})")
    logger.debug("integrated %d steps of size %g", n, step)
    return states


def drift_rate(invariant: Invariant, states: np.ndarray, duration: float) -> float:
    """max |I(s) − I(s₀)| over the states, per unit time."""
    values = np.array([invariant(s) for s in states])
    return float(np.max(np.abs(values - values[0]))) / duration


def integrate_conserving(field: VectorField, state0, step: float, n: int, invariant: Invariant,
                         max_drift: float = MAX_DRIFT, max_halvings: int = MAX_HALVINGS) -> np.ndarray:
    """
    Like `integrate`, but the internal step is step / 2^k for the smallest k ≤ max_halvings
    that keeps the invariant's drift rate at or below max_drift. The returned states are
    always the n + 1 states at t = i · step.

    Raises ConsistencyError when even the finest step drifts too much.
    """
    if max_drift <= 0 or max_halvings < 0:
        raise DomainError(f"Need max_drift > 0 and max_halvings >= 0, got {max_drift}, {max_halvings}")
    duration = step * n
    rate = float("inf")
    for k in range(max_halvings + 1):
        sub = 2 ** k
        states = integrate(field, state0, step / sub, n * sub)[::sub]
        rate = drift_rate(invariant, states, duration)
        if rate <= max_drift:
            if k:
                logger.info("step refined %d times to %g: drift %.3g per unit time", k, step / sub, rate)
            return states
        logger.debug("drift %.3g per unit time at step %g exceeds %g, halving", rate, step / sub, max_drift)
    raise ConsistencyError(
        f"First integral drifts by {rate:.3g} per unit time after {max_halvings} halvings "
        f"(step {step / 2 ** max_halvings:g}), bound {max_drift:g}"
    )
