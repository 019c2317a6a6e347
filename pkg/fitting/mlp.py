"""
Purpose: Train the single-hidden-layer MLP baseline.
What it does:
Fixed-step mini-batch gradient descent on mean squared error.
One numpy Generator (seeded) draws the initial weights and then one
permutation per epoch, so a (seed, data, options) triple always produces the
same parameters.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from delay_models.params import MLPParams
from telemetry.models import FeatureMatrix

from .errors import InsufficientRowsError, MLPDivergenceError
from .initial import mlp_init
from .policy import MLPOptions

logger = logging.getLogger(__name__)


def fit_mlp(M: FeatureMatrix, options: Optional[MLPOptions] = None, seed: int = 0) -> MLPParams:
    options = options or MLPOptions()
    options.validate()

    X = np.asarray(M.model_inputs, dtype=float)
    y = np.asarray(M.y, dtype=float)
    n = y.shape[0]
    if n < options.batch_size:
        raise InsufficientRowsError(f"need at least one batch ({options.batch_size} rows), got {n}")

    rng = np.random.default_rng(seed)
    start = mlp_init(options.hidden, y, rng)
    if options.epochs == 0:
        return start

    W = np.array(start.W)
    b = np.array(start.b)
    w_out = np.array(start.w_out)
    b_out = start.b_out

    initial = _mse(X, y, W, b, w_out, b_out)
    limit = options.divergence_factor * max(initial, np.finfo(float).tiny)
    step = options.step_size

    for epoch in range(1, options.epochs + 1):
        order = rng.permutation(n)
        for offset in range(0, n, options.batch_size):
            rows = order[offset:offset + options.batch_size]
            xb, yb = X[rows], y[rows]

            hidden = np.tanh(xb @ W + b)
            error = hidden @ w_out + b_out - yb
            grad_out = 2.0 * error / rows.size

            grad_hidden = np.outer(grad_out, w_out) * (1.0 - hidden * hidden)
            w_out = w_out - step * (hidden.T @ grad_out)
            b_out = b_out - step * float(grad_out.sum())
            W = W - step * (xb.T @ grad_hidden)
            b = b - step * grad_hidden.sum(axis=0)

        cost = _mse(X, y, W, b, w_out, b_out)
        if not np.isfinite(cost) or cost > limit:
            raise MLPDivergenceError(epoch, cost, limit)
        if epoch % 100 == 0:
            logger.debug("mlp epoch %d: mse %.6g", epoch, cost)

    return MLPParams(W=W, b=b, w_out=w_out, b_out=float(b_out))


def _mse(X, y, W, b, w_out, b_out) -> float:
    residual = np.tanh(X @ W + b) @ w_out + b_out - y
    return float(np.mean(residual * residual))
