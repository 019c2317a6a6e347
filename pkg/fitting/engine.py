"""
Purpose: The fitting "orchestrator" (single entry point).
What it does:

Coordinates parameter estimation end-to-end:

- closed-form families (linear, polynomial2) -> linear.py
- least-squares families (rational_exp, rational, univariate_rational,
  sigmoid) -> multistart Levenberg-Marquardt (levenberg.py)
- mlp -> mini-batch gradient descent (mlp.py)

and wraps the result into a FittedModel + FitReport.

Typical public function signature:

- fit_family(family, M, opts) -> (FittedModel, FitReport)

Rule: Engine is the only file other modules should call directly for fitting.
"""

from __future__ import annotations

import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from delay_models.artifact import FittedModel, build_metadata
from delay_models.errors import DenominatorSingularityError, DomainError, ModelError
from delay_models.families import (
    EPS_DEN,
    jacobian_rational,
    jacobian_rational_exp,
    jacobian_sigmoid,
    jacobian_univariate_rational,
    predict,
    rational_terms,
)
from delay_models.params import (
    Family,
    ModelParams,
    RationalExpParams,
    SigmoidParams,
    UnivariateRationalParams,
    params_from_vector,
)
from telemetry.models import FeatureMatrix

from .errors import FitFailedError, InsufficientRowsError, StartAbortedError
from .initial import init_guess
from .levenberg import LMResult, levenberg_marquardt
from .linear import fit_linear
from .mlp import fit_mlp
from .models import ConvergenceReason, FitReport
from .policy import FitOptions, default_fit_options

logger = logging.getLogger(__name__)

# (params, model-input rows) -> Jacobian rows. Lets tests swap in finite differences.
JacobianProvider = Callable[[ModelParams, np.ndarray], np.ndarray]


def fit_family(family, M: FeatureMatrix, opts: Optional[FitOptions] = None) -> Tuple[FittedModel, FitReport]:
    """
    Main fitting entry point.

    Parameters
    ----------
    family:
        Family tag (enum or string such as "rational_exp").
    M:
        Training rows; the model stores M.scaling and M.feature_names.
    opts:
        FitOptions (defaults if omitted). opts.seed drives every random choice.

    Returns
    -------
    (FittedModel, FitReport)
    """
    family = Family.parse(family)
    opts = opts or default_fit_options()
    opts.validate()

    if family.is_closed_form:
        params = fit_linear(M, degree=1 if family is Family.LINEAR else 2)
        cost = _ssr(params, M)
        report = FitReport(family, params, cost, cost, 0, ConvergenceReason.CLOSED_FORM, start_costs=(cost,))
    elif family is Family.MLP:
        start = init_guess(Family.MLP, M, opts)
        params = fit_mlp(M, opts.mlp, seed=opts.seed)
        report = FitReport(
            family, params, _ssr(start, M), _ssr(params, M), opts.mlp.epochs, ConvergenceReason.EPOCHS,
        )
    else:
        report = fit_nonlinear(family, M, opts)
        params = report.params

    logger.info("fitted %s on %d rows: SSR %.6g (%s)", family.value, M.n_rows, report.final_cost, report.reason.value)
    model = FittedModel(
        params=params,
        scaling=M.scaling,
        retained_features=M.feature_names,
        metadata=build_metadata(M, opts.seed, report.to_dict()),
    )
    return model, report


def fit_nonlinear(
    family,
    M: FeatureMatrix,
    opts: Optional[FitOptions] = None,
    *,
    jacobian: Optional[JacobianProvider] = None,
) -> FitReport:
    """
    Multistart Levenberg-Marquardt for rational_exp, rational,
    univariate_rational and sigmoid.

    Starts: the canonical init, then multistart_count - 1 seeded
    perturbations of it; rational_exp additionally starts from the fitted
    rational solution (d = 0), so it can never end above the rational cost.
    The lowest final cost among starts that satisfy the family invariants
    on the training rows wins.
    """
    family = Family.parse(family)
    opts = opts or default_fit_options()
    if not family.is_least_squares:
        raise ValueError(f"{family.value} is not fitted by Levenberg-Marquardt")

    problem = _Problem(family, M, opts, jacobian)
    if M.n_rows <= problem.size:
        raise InsufficientRowsError(f"{family.value} needs more than {problem.size} rows, got {M.n_rows}")

    start = init_guess(family, M, opts).to_vector()
    starts = [start] + _perturbed_starts(start, problem.perturbation_scales(), opts)
    if family is Family.RATIONAL_EXP:
        try:
            rational = fit_nonlinear(Family.RATIONAL, M, opts)
        except FitFailedError as exc:
            logger.warning("rational warm start unavailable: %s", exc)
        else:
            starts.append(np.append(rational.params.to_vector(), 0.0))

    results: List[Optional[LMResult]] = []
    for index, theta0 in enumerate(starts):
        try:
            result = levenberg_marquardt(problem.residuals, problem.jacobian, theta0, opts)
        except StartAbortedError as exc:
            logger.debug("%s start %d aborted: %s", family.value, index, exc)
            results.append(None)
            continue
        if not problem.acceptable(result.theta):
            logger.debug("%s start %d rejected: invariant violated on training rows", family.value, index)
            results.append(None)
            continue
        logger.debug("%s start %d: SSR %.6g after %d iterations", family.value, index, result.final_cost,
                     result.iterations)
        results.append(result)

    start_costs = tuple(None if r is None else r.final_cost for r in results)
    survivors = [i for i, r in enumerate(results) if r is not None]
    if not survivors:
        raise FitFailedError(
            f"{family.value}: all {len(starts)} starts rejected ({ConvergenceReason.REJECTED_SINGULAR.value})"
        )

    best = min(survivors, key=lambda i: (results[i].final_cost, i))
    winner = results[best]
    return FitReport(
        family=family,
        params=problem.to_params(winner.theta),
        initial_cost=winner.initial_cost,
        final_cost=winner.final_cost,
        iterations=winner.iterations,
        reason=winner.reason,
        start_costs=start_costs,
        winning_start=best,
        rejected_starts=len(starts) - len(survivors),
        cost_history=winner.cost_history,
    )


# -----------------------------
# Internal helpers
# -----------------------------

class _Problem:
    """
    Residual / Jacobian closures for one family on one training matrix.
    """

    def __init__(self, family: Family, M: FeatureMatrix, opts: FitOptions, jacobian: Optional[JacobianProvider]):
        self.family = family
        self.X = np.asarray(M.model_inputs, dtype=float)
        self.y = np.asarray(M.y, dtype=float)
        self.feature = opts.univariate_feature
        self._jacobian = jacobian or _ANALYTIC_JACOBIANS[family]
        self.size = _SIZES[family]

    def to_params(self, theta: np.ndarray) -> ModelParams:
        return params_from_vector(self.family, theta, feature=self.feature)

    def residuals(self, theta: np.ndarray) -> Optional[np.ndarray]:
        try:
            predicted = predict(self.to_params(theta), self.X)
        except (DenominatorSingularityError, DomainError):
            return None
        residual = np.atleast_1d(predicted) - self.y
        return residual if np.all(np.isfinite(residual)) else None

    def jacobian(self, theta: np.ndarray) -> np.ndarray:
        try:
            return np.atleast_2d(self._jacobian(self.to_params(theta), self.X))
        except ModelError as exc:
            raise StartAbortedError(str(exc)) from exc

    def acceptable(self, theta: np.ndarray) -> bool:
        if not np.all(np.isfinite(theta)):
            return False
        params = self.to_params(theta)
        if isinstance(params, SigmoidParams):
            return params.L > 0
        if isinstance(params, UnivariateRationalParams):
            X = self.X[:, params.feature_index]
            return bool(np.all(1.0 + params.a3 * X ** params.a4 > EPS_DEN))
        # Affine denominator: its minimum over the training hull sits on a training row.
        _, D = rational_terms(params.a, params.b, params.c, self.X)
        return bool(np.all(D > EPS_DEN))

    def perturbation_scales(self) -> np.ndarray:
        """Additive kick size for parameters that start at exactly zero."""
        reach = 1.0 + np.max(np.abs(self.X), axis=0)
        level = float(np.mean(np.abs(self.y))) or 1.0
        if self.family in (Family.RATIONAL_EXP, Family.RATIONAL):
            scales = [level / reach[0], level / reach[1], level / reach[2],
                      1.0 / reach[0], 1.0 / reach[1], 1.0 / reach[2], 1.0]
            if self.family is Family.RATIONAL_EXP:
                scales.append(1.0 / reach[2])
            return np.array(scales)
        if self.family is Family.SIGMOID:
            return np.array([level, 1.0 / reach[0], 1.0 / reach[1], 1.0 / reach[2], 1.0])
        return np.ones(4)


def _perturbed_starts(start: np.ndarray, zero_scales: np.ndarray, opts: FitOptions) -> List[np.ndarray]:
    rng = np.random.default_rng(opts.seed)
    starts = []
    for _ in range(opts.multistart_count - 1):
        z = rng.standard_normal(start.size)
        kick = opts.perturbation_scale * z
        starts.append(np.where(start != 0.0, start * (1.0 + kick), kick * zero_scales))
    return starts


def _ssr(params: ModelParams, M: FeatureMatrix) -> float:
    residual = np.atleast_1d(predict(params, M.model_inputs)) - M.y
    return float(residual @ residual)


def _jacobian_univariate(params: UnivariateRationalParams, X: np.ndarray) -> np.ndarray:
    return jacobian_univariate_rational(params, X[:, params.feature_index])


_ANALYTIC_JACOBIANS = {
    Family.RATIONAL_EXP: jacobian_rational_exp,
    Family.RATIONAL: jacobian_rational,
    Family.UNIVARIATE_RATIONAL: _jacobian_univariate,
    Family.SIGMOID: jacobian_sigmoid,
}

_SIZES = {
    Family.RATIONAL_EXP: len(RationalExpParams.NAMES),
    Family.RATIONAL: len(RationalExpParams.NAMES) - 1,
    Family.UNIVARIATE_RATIONAL: len(UnivariateRationalParams.NAMES),
    Family.SIGMOID: len(SigmoidParams.NAMES),
}
