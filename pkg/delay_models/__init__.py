"""
Delay model families.

Public API:
- Family tags and parameter containers (params.py)
- predict_* / jacobian_* functions, EPS_DEN (families.py)
- FittedModel, load_model (artifact.py)
"""

from .artifact import MODEL_FORMAT_VERSION, FittedModel, build_metadata, load_model, matrix_digest
from .errors import (
    DenominatorSingularityError,
    DomainError,
    ModelError,
    ModelFormatError,
    SchemaMismatchError,
    UnknownFamilyError,
)
from .families import (
    EPS_DEN,
    denominator_rational,
    jacobian_rational,
    jacobian_rational_exp,
    jacobian_sigmoid,
    jacobian_univariate_rational,
    mlp_forward,
    polynomial_design,
    predict,
    predict_linear,
    predict_polynomial2,
    predict_rational,
    predict_rational_exp,
    predict_sigmoid,
    predict_univariate_rational,
    scalar_kernel,
)
from .params import (
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
    params_from_vector,
)

__all__ = [
    "Family",
    "RationalExpParams",
    "RationalParams",
    "UnivariateRationalParams",
    "PolynomialParams",
    "LinearParams",
    "SigmoidParams",
    "MLPParams",
    "ModelParams",
    "family_of",
    "params_from_vector",
    "EPS_DEN",
    "predict",
    "predict_rational_exp",
    "jacobian_rational_exp",
    "predict_rational",
    "jacobian_rational",
    "predict_univariate_rational",
    "jacobian_univariate_rational",
    "predict_polynomial2",
    "polynomial_design",
    "predict_linear",
    "predict_sigmoid",
    "jacobian_sigmoid",
    "mlp_forward",
    "denominator_rational",
    "scalar_kernel",
    "FittedModel",
    "load_model",
    "build_metadata",
    "matrix_digest",
    "MODEL_FORMAT_VERSION",
    "ModelError",
    "DenominatorSingularityError",
    "DomainError",
    "UnknownFamilyError",
    "ModelFormatError",
    "SchemaMismatchError",
]
