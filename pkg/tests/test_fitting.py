from dataclasses import replace

import numpy as np
import pytest

from delay_models.families import predict
from delay_models.params import Family, family_of, params_from_vector
from evaluation.metrics import metrics
from fitting.engine import fit_family, fit_nonlinear
from fitting.errors import (
    FitFailedError,
    InsufficientRowsError,
    MLPDivergenceError,
    RankDeficiencyError,
)
from fitting.initial import init_guess, mlp_init
from fitting.linear import fit_linear, solve_least_squares
from fitting.mlp import fit_mlp
from fitting.models import ConvergenceReason
from fitting.policy import FitOptions, MLPOptions, default_fit_options, quick_fit_options
from simulation.generator import generate
from simulation.policy import DEFAULT_HIDDEN_PARAMS, rational_exp_config
from telemetry.features import build_feature_matrix

from .conftest import make_matrix


def uniform_rows(n, seed=0, high=2.0):
    return np.random.default_rng(seed).uniform(0.0, high, size=(n, 3))


def finite_difference_jacobian(params, X):
    theta = params.to_vector()
    family = family_of(params)
    columns = []
    for i in range(theta.size):
        h = 1e-6 * max(1.0, abs(theta[i]))
        up, down = theta.copy(), theta.copy()
        up[i] += h
        down[i] -= h
        columns.append(
            (predict(params_from_vector(family, up), X) - predict(params_from_vector(family, down), X)) / (2 * h)
        )
    return np.column_stack(columns)


# -----------------------------
# Closed form
# -----------------------------

def test_linear_fit_recovers_exact_coefficients():
    """
    y depends on x1 only; the other two columns vary but get zero weight.
    """
    X = uniform_rows(50)
    M = make_matrix(X, 0.2 + 0.5 * X[:, 0])

    p = fit_linear(M, degree=1)

    assert p.w0 == pytest.approx(0.2, abs=1e-10)
    np.testing.assert_allclose(p.w, (0.5, 0.0, 0.0), atol=1e-10)


def test_linear_fit_on_constant_target():
    M = make_matrix(uniform_rows(40, seed=1), np.full(40, 0.07))

    p = fit_linear(M, degree=1)

    assert p.w0 == pytest.approx(0.07, abs=1e-10)
    np.testing.assert_allclose(p.w, 0.0, atol=1e-10)


def test_least_squares_matches_normal_equations():
    rng = np.random.default_rng(4)
    A = rng.normal(size=(200, 6))
    y = rng.normal(size=200)

    w = solve_least_squares(A, y)
    brute = np.linalg.solve(A.T @ A, A.T @ y)

    cost = float(np.sum((A @ w - y) ** 2))
    brute_cost = float(np.sum((A @ brute - y) ** 2))
    assert cost == pytest.approx(brute_cost, rel=1e-8)
    # Residual is orthogonal to the column space.
    np.testing.assert_allclose(A.T @ (A @ w - y), 0.0, atol=1e-9)


def test_linear_fit_errors():
    X = uniform_rows(20)
    X[:, 2] = X[:, 1]
    with pytest.raises(RankDeficiencyError):
        fit_linear(make_matrix(X, X[:, 0]), degree=1)

    with pytest.raises(InsufficientRowsError):
        fit_linear(make_matrix(uniform_rows(3), [0.1, 0.2, 0.3]), degree=1)

    with pytest.raises(InsufficientRowsError):
        fit_linear(make_matrix(uniform_rows(9), np.arange(9.0)), degree=2)


# -----------------------------
# Initial guesses
# -----------------------------

def test_rational_init_is_already_good_on_linear_data():
    X = uniform_rows(300, seed=2)
    y = 0.5 * X[:, 0] + 0.2 * X[:, 1] + 0.1 * X[:, 2]
    M = make_matrix(X, y)

    start = init_guess(Family.RATIONAL_EXP, M)

    assert metrics(y, predict(start, X)).r2 >= 0.95
    assert start.b == (0.0, 0.0, 0.0) and start.c == 0.0 and start.d == 0.0


def test_init_on_constant_target_and_mlp_determinism():
    M = make_matrix(uniform_rows(30), np.full(30, 0.2))

    assert init_guess(Family.RATIONAL, M).a == (0.0, 0.0, 0.0)

    first = init_guess(Family.MLP, M, FitOptions(seed=7))
    second = init_guess(Family.MLP, M, FitOptions(seed=7))
    np.testing.assert_array_equal(first.to_vector(), second.to_vector())
    assert first.b_out == pytest.approx(0.2)


# -----------------------------
# Levenberg-Marquardt
# -----------------------------

def test_noiseless_rational_exp_data_is_recovered(exact_dataset, exact_matrix):
    """
    Predictions (not parameters, which are only defined up to scale) match
    the hidden process.
    """
    _, truth = exact_dataset

    model, report = fit_family(Family.RATIONAL_EXP, exact_matrix, default_fit_options())

    predicted = model.predict_matrix(exact_matrix)
    rmse = float(np.sqrt(np.mean((predicted - truth.noiseless) ** 2)))
    assert rmse < 1e-6 * float(np.mean(exact_matrix.y))
    assert report.final_cost <= report.initial_cost


def test_rational_exp_contains_the_linear_subfamily():
    X = uniform_rows(200, seed=3)
    M = make_matrix(X, 0.3 * X[:, 0] + 0.1 * X[:, 1] + 0.05 * X[:, 2])

    linear = fit_family(Family.LINEAR, M)[1]
    rational_exp = fit_nonlinear(Family.RATIONAL_EXP, M, quick_fit_options())

    assert rational_exp.final_cost <= linear.final_cost + 1e-10


def test_cost_history_strictly_decreases(saturating_matrix):
    report = fit_nonlinear(Family.RATIONAL, saturating_matrix, quick_fit_options())

    history = np.array(report.cost_history)
    assert history[0] == pytest.approx(report.initial_cost)
    assert history[-1] == pytest.approx(report.final_cost)
    assert np.all(np.diff(history) < 0)
    assert report.reason in (ConvergenceReason.TOLERANCE, ConvergenceReason.MAX_ITER)


def test_rational_exp_never_worse_than_rational(saturating_matrix):
    opts = quick_fit_options(seed=3)

    rational = fit_nonlinear(Family.RATIONAL, saturating_matrix, opts)
    rational_exp = fit_nonlinear(Family.RATIONAL_EXP, saturating_matrix, opts)

    assert rational_exp.final_cost <= rational.final_cost + 1e-9
    # Warm start from the rational solution is the extra, last start.
    assert len(rational_exp.start_costs) == opts.multistart_count + 1


def test_rational_matches_rational_exp_when_exponent_is_zero():
    """
    With d = 0 the hidden process is itself rational, so dropping the
    exponential costs (almost) nothing in R².
    """
    hidden = replace(DEFAULT_HIDDEN_PARAMS, d=0.0)
    samples, _ = generate(rational_exp_config(n=2000, seed=0, noise_fraction=0.01, params=hidden))
    M = build_feature_matrix(samples)

    rational, _ = fit_family(Family.RATIONAL, M, quick_fit_options())
    rational_exp, _ = fit_family(Family.RATIONAL_EXP, M, quick_fit_options())

    r2_rational = metrics(M.y, rational.predict_matrix(M)).r2
    r2_rational_exp = metrics(M.y, rational_exp.predict_matrix(M)).r2
    assert abs(r2_rational - r2_rational_exp) <= 0.01


def test_multistart_is_deterministic(saturating_matrix):
    opts = quick_fit_options(seed=11)
    M = saturating_matrix.take(range(1000))

    first = fit_nonlinear(Family.RATIONAL_EXP, M, opts)
    second = fit_nonlinear(Family.RATIONAL_EXP, M, opts)

    assert first.to_dict() == second.to_dict()


def test_winner_keeps_denominator_positive_on_training_rows(saturating_matrix):
    report = fit_nonlinear(Family.RATIONAL_EXP, saturating_matrix, quick_fit_options())

    p = report.params
    X = saturating_matrix.model_inputs
    D = 1.0 + X @ np.asarray(p.b) + p.c
    assert np.all(D > 1e-6)
    assert report.start_costs[report.winning_start] == report.final_cost


def test_finite_difference_jacobian_reaches_same_cost(saturating_matrix):
    M = saturating_matrix.take(range(1500))
    opts = FitOptions(multistart_count=1)

    analytic = fit_nonlinear(Family.RATIONAL, M, opts)
    numeric = fit_nonlinear(Family.RATIONAL, M, opts, jacobian=finite_difference_jacobian)

    assert numeric.final_cost == pytest.approx(analytic.final_cost, rel=1e-6)


def test_all_starts_rejected_raises():
    X = uniform_rows(50)
    M = make_matrix(X, 0.1 + X[:, 0])

    def broken(params, rows):
        return np.full((rows.shape[0], 7), np.nan)

    with pytest.raises(FitFailedError, match="rejected"):
        fit_nonlinear(Family.RATIONAL, M, quick_fit_options(), jacobian=broken)


def test_nonlinear_needs_more_rows_than_parameters():
    with pytest.raises(InsufficientRowsError):
        fit_nonlinear(Family.RATIONAL_EXP, make_matrix(uniform_rows(8), np.ones(8)))


def test_constant_target_fit_succeeds():
    M = make_matrix(uniform_rows(100, seed=5) + 0.5, np.full(100, 0.05))

    report = fit_nonlinear(Family.RATIONAL_EXP, M, quick_fit_options())

    assert report.final_cost <= report.initial_cost


def test_univariate_and_sigmoid_fit_their_own_data():
    X = uniform_rows(400, seed=8) + 0.1

    power = make_matrix(X, 2.0 * X[:, 0] ** 1.5)
    univariate = fit_nonlinear(Family.UNIVARIATE_RATIONAL, power, quick_fit_options())
    assert univariate.final_cost < 1e-12

    logistic = 1.0 / (1.0 + np.exp(-(X @ np.array([1.0, 0.5, -0.5]))))
    sigmoid = fit_nonlinear(Family.SIGMOID, make_matrix(X, logistic), default_fit_options())
    assert metrics(logistic, predict(sigmoid.params, X)).r2 > 0.999


def test_fit_family_wraps_model_and_metadata(saturating_matrix):
    model, report = fit_family("polynomial2", saturating_matrix)

    assert model.family is Family.POLYNOMIAL2
    assert report.reason is ConvergenceReason.CLOSED_FORM
    assert model.scaling == saturating_matrix.scaling
    assert model.metadata["n_train"] == saturating_matrix.n_rows
    assert model.metadata["fit_report"]["family"] == "polynomial2"
    assert len(model.metadata["training_digest"]) == 64


# -----------------------------
# MLP
# -----------------------------

def test_mlp_learns_a_constant():
    X = np.random.default_rng(0).uniform(0.0, 1.0, size=(1024, 3))
    M = make_matrix(X, np.full(1024, 0.5))

    params = fit_mlp(M, MLPOptions(), seed=0)

    assert np.max(np.abs(predict(params, X) - 0.5)) < 1e-2


def test_mlp_init_starts_at_the_target_mean():
    X = uniform_rows(200, seed=9)
    y = 0.1 + 0.3 * X[:, 2]

    start = mlp_init(16, y, np.random.default_rng(9))

    np.testing.assert_allclose(predict(start, X), np.mean(y), atol=1e-12)
    # Hidden units still differ from each other.
    assert len({tuple(column) for column in start.W.T}) == 16


def test_mlp_is_deterministic_and_zero_epochs_is_the_init():
    X = uniform_rows(256, seed=4)
    M = make_matrix(X, 0.1 + 0.05 * X[:, 0])
    options = MLPOptions(epochs=3)

    first = fit_mlp(M, options, seed=4)
    second = fit_mlp(M, options, seed=4)
    np.testing.assert_array_equal(first.to_vector(), second.to_vector())

    untrained = fit_mlp(M, MLPOptions(epochs=0), seed=4)
    expected = mlp_init(16, M.y, np.random.default_rng(4))
    np.testing.assert_array_equal(untrained.to_vector(), expected.to_vector())


def test_mlp_divergence_names_the_epoch():
    X = uniform_rows(64, seed=6)
    M = make_matrix(X, np.random.default_rng(6).uniform(0, 1, 64))

    with pytest.raises(MLPDivergenceError, match="epoch 1") as exc:
        fit_mlp(M, MLPOptions(step_size=1e4, epochs=5), seed=0)
    assert exc.value.epoch == 1


def test_mlp_needs_one_full_batch():
    with pytest.raises(InsufficientRowsError):
        fit_mlp(make_matrix(uniform_rows(10), np.ones(10)), MLPOptions(batch_size=32))
