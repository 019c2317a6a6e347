"""
Purpose: Central configuration for parameter estimation (single source of truth).
What it does:

Stores all tunable thresholds/caps for the fitters:

MAX_ITERATIONS = 200 (Levenberg-Marquardt iterations per start)

COST_TOLERANCE = 1e-10 (relative decrease of the sum of squared residuals)

STEP_TOLERANCE = 1e-12

INITIAL_DAMPING = 1e-3, x10 on a rejected step, /10 on an accepted one

MULTISTART_COUNT = 5 (seeded, perturbation x(1 + 0.1 * N(0, 1)))

MLP = 3 -> 16 -> 1 tanh, 500 epochs, batch 32, step 1e-2

Rule: No logic here, just parameters so you can tune without rewriting code.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from telemetry.models import CLIENT_FRAME_SIZE, MODEL_FEATURES


@dataclass(frozen=True)
class MLPOptions:
    """
    Mini-batch gradient descent settings for the MLP baseline.
    """
    hidden: int = 16
    epochs: int = 500
    batch_size: int = 32
    step_size: float = 1e-2

    # Training stops with an error once the epoch cost exceeds
    # divergence_factor * initial cost.
    divergence_factor: float = 1e6

    def validate(self) -> None:
        if self.hidden < 1:
            raise ValueError("hidden must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.step_size <= 0:
            raise ValueError("step_size must be > 0")
        if self.divergence_factor <= 1:
            raise ValueError("divergence_factor must be > 1")


@dataclass(frozen=True)
class FitOptions:
    """
    Central configuration for all fitters.

    Notes:
    - Cost is the sum of squared residuals (SSR) on the training rows.
    - A step is accepted only if it strictly lowers the cost; trial points
      whose denominator reaches the floor on a training row count as rejected.
    - Multistart perturbs the canonical start multiplicatively; parameters
      that start at exactly 0 get an additive kick scaled to their feature.
    """

    # --- Iteration budget ---
    max_iterations: int = 200

    # --- Stopping rules ---
    cost_tolerance: float = 1e-10
    step_tolerance: float = 1e-12

    # --- Damping schedule ---
    initial_damping: float = 1e-3
    damping_up: float = 10.0
    damping_down: float = 10.0
    # Give up on a start once damping grows past this (no descent left).
    max_damping: float = 1e16

    # --- Multistart ---
    seed: int = 0
    multistart_count: int = 5
    perturbation_scale: float = 0.1

    # --- Family-specific ---
    # Feature read by the univariate rational family.
    univariate_feature: str = CLIENT_FRAME_SIZE
    mlp: MLPOptions = field(default_factory=MLPOptions)

    def validate(self) -> None:
        """
        Basic sanity checks. Call once at startup if you want.
        """
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

        if self.cost_tolerance <= 0 or self.step_tolerance <= 0:
            raise ValueError("tolerances must be > 0")

        if self.initial_damping <= 0:
            raise ValueError("initial_damping must be > 0")

        if self.damping_up <= 1 or self.damping_down <= 1:
            raise ValueError("damping factors must be > 1")

        if self.max_damping <= self.initial_damping:
            raise ValueError("max_damping must exceed initial_damping")

        if self.multistart_count < 1:
            raise ValueError("multistart_count must be >= 1")

        if self.perturbation_scale < 0:
            raise ValueError("perturbation_scale must be >= 0")

        if self.univariate_feature not in MODEL_FEATURES:
            raise ValueError(f"univariate_feature must be one of {MODEL_FEATURES}")

        self.mlp.validate()


def default_fit_options() -> FitOptions:
    """
    Convenience factory for the default options.
    """
    p = FitOptions()
    p.validate()
    return p


def quick_fit_options(seed: int = 0) -> FitOptions:
    """
    Smaller budget for smoke runs and interactive exploration.
    """
    p = FitOptions(
        max_iterations=100,
        multistart_count=2,
        seed=seed,
        mlp=MLPOptions(epochs=50),
    )
    p.validate()
    return p
