"""
Purpose: Levenberg-Marquardt for small dense least-squares problems.
What it does:

Minimises sum(r(theta)**2) given a residual function and its Jacobian:

- damped step: argmin ||J s + r||^2 + lambda * ||diag(scale) s||^2, solved
  as an augmented least-squares system (no explicit J^T J)
- scale: running max of Jacobian column norms (Marquardt scaling)
- accept the step only if the cost strictly drops; lambda /= down on accept,
  lambda *= up on reject
- a residual function may return None to mark a trial point as invalid
  (e.g. a denominator at the floor); such steps are rejected like uphill ones

Stops on: relative cost decrease < cost_tolerance, step norm below
step_tolerance, lambda above max_damping, or max_iterations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import StartAbortedError
from .models import ConvergenceReason
from .policy import FitOptions

ResidualFn = Callable[[np.ndarray], Optional[np.ndarray]]
JacobianFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class LMResult:
    theta: np.ndarray
    initial_cost: float
    final_cost: float
    iterations: int
    reason: ConvergenceReason
    cost_history: Tuple[float, ...]


def levenberg_marquardt(
    residuals: ResidualFn,
    jacobian: JacobianFn,
    theta0: np.ndarray,
    options: FitOptions,
) -> LMResult:
    theta = np.array(theta0, dtype=float)
    r = residuals(theta)
    if r is None or not np.all(np.isfinite(r)):
        raise StartAbortedError("initial point is invalid or gives a non-finite cost")

    cost = float(r @ r)
    initial_cost = cost
    history: List[float] = [cost]
    damping = options.initial_damping
    scale = np.zeros(theta.size)
    reason = ConvergenceReason.MAX_ITER
    iterations = 0

    while iterations < options.max_iterations:
        if cost == 0.0:
            reason = ConvergenceReason.TOLERANCE
            break

        iterations += 1
        J = jacobian(theta)
        if not np.all(np.isfinite(J)):
            raise StartAbortedError(f"non-finite Jacobian at iteration {iterations}")

        scale = np.maximum(scale, np.sqrt(np.einsum("ij,ij->j", J, J)))

        # Inner loop: raise damping until a step is accepted.
        while True:
            step = _damped_step(J, r, damping, scale)
            if np.linalg.norm(step) <= options.step_tolerance * (np.linalg.norm(theta) + options.step_tolerance):
                reason = ConvergenceReason.TOLERANCE
                break

            trial = theta + step
            r_trial = residuals(trial)
            cost_trial = float(r_trial @ r_trial) if r_trial is not None else np.inf

            if np.isfinite(cost_trial) and cost_trial < cost:
                relative_drop = (cost - cost_trial) / cost
                theta, r, cost = trial, r_trial, cost_trial
                history.append(cost)
                damping = max(damping / options.damping_down, np.finfo(float).tiny)
                if relative_drop < options.cost_tolerance:
                    reason = ConvergenceReason.TOLERANCE
                break

            damping *= options.damping_up
            if damping > options.max_damping:
                reason = ConvergenceReason.TOLERANCE
                break

        if reason is ConvergenceReason.TOLERANCE:
            break

    return LMResult(
        theta=theta,
        initial_cost=initial_cost,
        final_cost=cost,
        iterations=iterations,
        reason=reason,
        cost_history=tuple(history),
    )


def _damped_step(J: np.ndarray, r: np.ndarray, damping: float, scale: np.ndarray) -> np.ndarray:
    p = J.shape[1]
    augmented = np.vstack([J, np.sqrt(damping) * np.diag(scale)])
    rhs = np.concatenate([-r, np.zeros(p)])
    step, *_ = np.linalg.lstsq(augmented, rhs, rcond=None)
    return step
