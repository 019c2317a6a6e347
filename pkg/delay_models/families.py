"""
Purpose: Prediction functions (and analytic Jacobians) for every family.
What it does:
- Every predict_* takes a parameter container and either one (x1, x2, x3)
  triple (returns a float) or an (n, 3) array of rows (returns an n-vector).
- Rational families refuse to evaluate where the denominator is at or below
  EPS_DEN and name the first offending row.
- scalar_kernel builds a plain-float closure per family for single-sample
  inference, where numpy call overhead would dominate.

Rule: Pure functions. No fitting, no I/O.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.special import expit

from .errors import DenominatorSingularityError, DomainError, ModelError
from .params import (
    N_INPUTS,
    Family,
    LinearParams,
    MLPParams,
    ModelParams,
    PolynomialParams,
    RationalExpParams,
    RationalParams,
    SigmoidParams,
    UnivariateRationalParams,
    family_of,
)

EPS_DEN = 1e-6


# -----------------------------
# Input handling
# -----------------------------

def _rows(x) -> Tuple[np.ndarray, bool]:
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.ndim != 2 or X.shape[1] < N_INPUTS:
        raise ModelError(f"expected rows of at least {N_INPUTS} features, got shape {np.shape(x)}")
    if not np.all(np.isfinite(X[:, :N_INPUTS])):
        raise ModelError("inputs must be finite")
    return X[:, :N_INPUTS], single


def _finish(values: np.ndarray, single: bool):
    return float(values[0]) if single else values


def _finish_jacobian(J: np.ndarray, single: bool) -> np.ndarray:
    return J[0] if single else J


def _require_denominator(D: np.ndarray) -> None:
    bad = np.flatnonzero(~(D > EPS_DEN))
    if bad.size:
        row = int(bad[0])
        raise DenominatorSingularityError(row=row, value=float(D[row]))


def rational_terms(a: Sequence[float], b: Sequence[float], c: float, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Numerator N = a . x and denominator D = 1 + b . x + c, row-wise."""
    x1, x2, x3 = X[:, 0], X[:, 1], X[:, 2]
    N = a[0] * x1 + a[1] * x2 + a[2] * x3
    D = 1.0 + b[0] * x1 + b[1] * x2 + b[2] * x3 + c
    return N, D


def denominator_rational(p, x) -> np.ndarray:
    """D over the given rows, for hull checks. Works for rational and rational_exp params."""
    X, _ = _rows(x)
    return rational_terms(p.a, p.b, p.c, X)[1]


# -----------------------------
# Rational-exponential / rational
# -----------------------------

def predict_rational_exp(p: RationalExpParams, x):
    X, single = _rows(x)
    N, D = rational_terms(p.a, p.b, p.c, X)
    _require_denominator(D)
    E = np.exp(p.d * X[:, 2])
    return _finish(N / D * E, single)


def jacobian_rational_exp(p: RationalExpParams, x) -> np.ndarray:
    """
    Columns: a1 a2 a3 b1 b2 b3 c d.
    """
    X, single = _rows(x)
    N, D = rational_terms(p.a, p.b, p.c, X)
    _require_denominator(D)
    E = np.exp(p.d * X[:, 2])
    q = E / D
    y = N * q
    g = -y / D
    J = np.column_stack([
        X[:, 0] * q, X[:, 1] * q, X[:, 2] * q,
        X[:, 0] * g, X[:, 1] * g, X[:, 2] * g,
        g,
        X[:, 2] * y,
    ])
    return _finish_jacobian(J, single)


def predict_rational(p: RationalParams, x):
    X, single = _rows(x)
    N, D = rational_terms(p.a, p.b, p.c, X)
    _require_denominator(D)
    return _finish(N / D, single)


def jacobian_rational(p: RationalParams, x) -> np.ndarray:
    J = jacobian_rational_exp(p.with_exponent(0.0), x)
    return J[..., :7]


# -----------------------------
# Univariate rational
# -----------------------------

def _positive(values) -> Tuple[np.ndarray, bool]:
    X = np.asarray(values, dtype=float)
    single = X.ndim == 0
    X = np.atleast_1d(X)
    if not np.all(np.isfinite(X)):
        raise ModelError("inputs must be finite")
    bad = np.flatnonzero(X <= 0)
    if bad.size:
        raise DomainError(f"univariate rational needs X > 0, got {X[bad[0]]!r} at row {int(bad[0])}")
    return X, single


def predict_univariate_rational(p: UnivariateRationalParams, X):
    """X is the chosen feature (scalar or vector), not a full row."""
    X, single = _positive(X)
    D = 1.0 + p.a3 * X ** p.a4
    _require_denominator(D)
    return _finish(p.a1 * X ** p.a2 / D, single)


def jacobian_univariate_rational(p: UnivariateRationalParams, X) -> np.ndarray:
    X, single = _positive(X)
    P = X ** p.a2
    Q = X ** p.a4
    log_x = np.log(X)
    D = 1.0 + p.a3 * Q
    _require_denominator(D)
    J = np.column_stack([
        P / D,
        p.a1 * P * log_x / D,
        -p.a1 * P * Q / D ** 2,
        -p.a1 * P * p.a3 * Q * log_x / D ** 2,
    ])
    return _finish_jacobian(J, single)


# -----------------------------
# Closed-form baselines
# -----------------------------

def polynomial_design(x) -> np.ndarray:
    """[1, x1, x2, x3, x1^2, x2^2, x3^2, x1x2, x1x3, x2x3] per row."""
    X, _ = _rows(x)
    x1, x2, x3 = X[:, 0], X[:, 1], X[:, 2]
    return np.column_stack([
        np.ones_like(x1), x1, x2, x3,
        x1 * x1, x2 * x2, x3 * x3,
        x1 * x2, x1 * x3, x2 * x3,
    ])


def predict_polynomial2(p: PolynomialParams, x):
    single = np.ndim(x) == 1
    return _finish(polynomial_design(x) @ p.to_vector(), single)


def predict_linear(p: LinearParams, x):
    X, single = _rows(x)
    return _finish(p.w0 + X @ np.asarray(p.w, dtype=float), single)


# -----------------------------
# Sigmoid / MLP
# -----------------------------

def predict_sigmoid(p: SigmoidParams, x):
    X, single = _rows(x)
    z = X @ np.asarray(p.w, dtype=float) + p.beta
    return _finish(p.L * expit(z), single)


def jacobian_sigmoid(p: SigmoidParams, x) -> np.ndarray:
    """Columns: L w1 w2 w3 beta."""
    X, single = _rows(x)
    s = expit(X @ np.asarray(p.w, dtype=float) + p.beta)
    slope = p.L * s * (1.0 - s)
    J = np.column_stack([s, X[:, 0] * slope, X[:, 1] * slope, X[:, 2] * slope, slope])
    return _finish_jacobian(J, single)


def mlp_forward(p: MLPParams, x):
    X, single = _rows(x)
    hidden = np.tanh(X @ p.W + p.b)
    return _finish(hidden @ p.w_out + p.b_out, single)


# -----------------------------
# Family dispatch
# -----------------------------

def predict(params: ModelParams, x):
    """Evaluate any family on model-input rows (x1, x2, x3)."""
    family = family_of(params)
    if family is Family.UNIVARIATE_RATIONAL:
        X, single = _rows(x)
        return _finish(predict_univariate_rational(params, X[:, params.feature_index]), single)
    return _PREDICTORS[family](params, x)


_PREDICTORS = {
    Family.RATIONAL_EXP: predict_rational_exp,
    Family.RATIONAL: predict_rational,
    Family.POLYNOMIAL2: predict_polynomial2,
    Family.LINEAR: predict_linear,
    Family.SIGMOID: predict_sigmoid,
    Family.MLP: mlp_forward,
}


def scalar_kernel(params: ModelParams) -> Callable[[Sequence[float]], float]:
    """
    Single-sample evaluator over plain floats (or numpy for the MLP matmul).
    Same formulas as the vectorised predictors.
    """
    family = family_of(params)

    if family in (Family.RATIONAL_EXP, Family.RATIONAL):
        a1, a2, a3 = (float(v) for v in params.a)
        b1, b2, b3 = (float(v) for v in params.b)
        c = float(params.c)
        d = float(getattr(params, "d", 0.0))
        exp = math.exp

        def rational_kernel(x: Sequence[float]) -> float:
            x1, x2, x3 = x[0], x[1], x[2]
            den = 1.0 + b1 * x1 + b2 * x2 + b3 * x3 + c
            if not den > EPS_DEN:
                raise DenominatorSingularityError(row=0, value=den)
            return (a1 * x1 + a2 * x2 + a3 * x3) / den * exp(d * x3)

        return rational_kernel

    if family is Family.UNIVARIATE_RATIONAL:
        a1, a2, a3, a4 = params.a1, params.a2, params.a3, params.a4
        index = params.feature_index

        def univariate_kernel(x: Sequence[float]) -> float:
            value = x[index]
            if value <= 0:
                raise DomainError(f"univariate rational needs X > 0, got {value!r}")
            den = 1.0 + a3 * value ** a4
            if not den > EPS_DEN:
                raise DenominatorSingularityError(row=0, value=den)
            return a1 * value ** a2 / den

        return univariate_kernel

    if family is Family.LINEAR:
        w0 = params.w0
        w1, w2, w3 = params.w
        return lambda x: w0 + w1 * x[0] + w2 * x[1] + w3 * x[2]

    if family is Family.POLYNOMIAL2:
        k = params.coefficients

        def polynomial_kernel(x: Sequence[float]) -> float:
            x1, x2, x3 = x[0], x[1], x[2]
            return (k[0] + k[1] * x1 + k[2] * x2 + k[3] * x3
                    + k[4] * x1 * x1 + k[5] * x2 * x2 + k[6] * x3 * x3
                    + k[7] * x1 * x2 + k[8] * x1 * x3 + k[9] * x2 * x3)

        return polynomial_kernel

    if family is Family.SIGMOID:
        L, beta = params.L, params.beta
        w1, w2, w3 = params.w

        def sigmoid_kernel(x: Sequence[float]) -> float:
            z = w1 * x[0] + w2 * x[1] + w3 * x[2] + beta
            if z >= 0:
                return L / (1.0 + math.exp(-z))
            ez = math.exp(z)
            return L * ez / (1.0 + ez)

        return sigmoid_kernel

    W, b, w_out, b_out = params.W, params.b, params.w_out, params.b_out

    def mlp_kernel(x: Sequence[float]) -> float:
        hidden = np.tanh(np.asarray(x[:N_INPUTS], dtype=float) @ W + b)
        return float(hidden @ w_out + b_out)

    return mlp_kernel
