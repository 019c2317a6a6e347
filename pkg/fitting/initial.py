"""
Purpose: Canonical starting points for every family.
What it does:
- rational / rational_exp: numerator weights from least squares of y on
  (x1, x2, x3) with b = 0, c = 0, d = 0 (the model is exactly a . x there)
- univariate rational: power law from a log-log fit, a3 = 0, a4 = 1
- sigmoid: L = 1.1 * max(y), (w, beta) from least squares of logit(y / L)
  clipped to +-6
- mlp: seeded N(0, 1) / sqrt(3) hidden weights, zero hidden bias, zero
  output weights, output bias = mean(y)
- linear / polynomial2: the closed-form solution itself
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.special import logit

from delay_models.errors import DomainError
from delay_models.params import (
    N_INPUTS,
    Family,
    MLPParams,
    ModelParams,
    RationalExpParams,
    RationalParams,
    SigmoidParams,
    UnivariateRationalParams,
)
from telemetry.models import FeatureMatrix

from .errors import InsufficientRowsError
from .linear import fit_linear, solve_least_squares
from .policy import FitOptions, default_fit_options

LOGIT_CLIP = 6.0
SIGMOID_HEADROOM = 1.1


def init_guess(family, M: FeatureMatrix, opts: Optional[FitOptions] = None) -> ModelParams:
    family = Family.parse(family)
    opts = opts or default_fit_options()
    if M.n_rows == 0:
        raise InsufficientRowsError("cannot initialise from an empty matrix")

    if family is Family.RATIONAL_EXP:
        return RationalExpParams(a=_numerator_weights(M))
    if family is Family.RATIONAL:
        return RationalParams(a=_numerator_weights(M))
    if family is Family.UNIVARIATE_RATIONAL:
        return _univariate_init(M, opts.univariate_feature)
    if family is Family.SIGMOID:
        return _sigmoid_init(M)
    if family is Family.MLP:
        return mlp_init(opts.mlp.hidden, M.y, np.random.default_rng(opts.seed))
    if family is Family.LINEAR:
        return fit_linear(M, degree=1)
    return fit_linear(M, degree=2)


def mlp_init(hidden: int, y: np.ndarray, rng: np.random.Generator) -> MLPParams:
    """
    Hidden weights are drawn from `rng`; output weights start at zero so the
    untrained network predicts mean(y) on every row.
    """
    return MLPParams(
        W=rng.standard_normal((N_INPUTS, hidden)) / math.sqrt(N_INPUTS),
        b=np.zeros(hidden),
        w_out=np.zeros(hidden),
        b_out=float(np.mean(y)) if len(y) else 0.0,
    )


# -----------------------------
# Internal helpers
# -----------------------------

def _numerator_weights(M: FeatureMatrix):
    if np.ptp(M.y) == 0:
        # Constant target: numerator starts at zero and LM takes it from there.
        return (0.0, 0.0, 0.0)
    a = solve_least_squares(M.model_inputs, M.y)
    return (float(a[0]), float(a[1]), float(a[2]))


def _univariate_init(M: FeatureMatrix, feature: str) -> UnivariateRationalParams:
    X = M.column(feature)
    if np.any(X <= 0):
        raise DomainError(f"univariate rational needs {feature} > 0 on every row")

    y = M.y
    if np.all(y > 0) and np.ptp(X) > 0 and M.n_rows >= 2:
        design = np.column_stack([np.ones_like(X), np.log(X)])
        log_a1, a2 = solve_least_squares(design, np.log(y))
        return UnivariateRationalParams(float(np.exp(log_a1)), float(a2), 0.0, 1.0, feature=feature)
    return UnivariateRationalParams(float(np.mean(y)), 0.0, 0.0, 1.0, feature=feature)


def _sigmoid_init(M: FeatureMatrix) -> SigmoidParams:
    peak = float(np.max(np.abs(M.y)))
    L = SIGMOID_HEADROOM * peak if peak > 0 else 1.0
    ratio = np.clip(M.y / L, 1e-12, 1.0 - 1e-12)
    z = np.clip(logit(ratio), -LOGIT_CLIP, LOGIT_CLIP)
    design = np.column_stack([np.ones(M.n_rows), M.model_inputs])
    coef = solve_least_squares(design, z)
    return SigmoidParams(L=L, w=(float(coef[1]), float(coef[2]), float(coef[3])), beta=float(coef[0]))
