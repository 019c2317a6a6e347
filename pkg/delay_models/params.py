"""
Purpose: Parameter containers for every delay model family.
What it does:
Defines the Family tag enum and one frozen dataclass per family, each able to
round-trip through a flat float vector in a documented order:

- RationalExpParams   a1 a2 a3 b1 b2 b3 c d
- RationalParams      a1 a2 a3 b1 b2 b3 c
- UnivariateRational  a1 a2 a3 a4 (+ the single feature it reads)
- PolynomialParams    w0, x1 x2 x3, x1^2 x2^2 x3^2, x1x2 x1x3 x2x3
- LinearParams        w0 w1 w2 w3
- SigmoidParams       L w1 w2 w3 beta
- MLPParams           W (3 x H, row-major), b (H), w_out (H), b_out

Rule: No prediction math here. Containers only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, List, Sequence, Tuple, Union

import numpy as np

from telemetry.models import CLIENT_FRAME_SIZE, MODEL_FEATURES

from .errors import ModelError, UnknownFamilyError

Triple = Tuple[float, float, float]

N_INPUTS = len(MODEL_FEATURES)
DEFAULT_HIDDEN = 16


class Family(str, Enum):
    """
    Model family tags (also used in model files and on the CLI).
    """
    RATIONAL_EXP = "rational_exp"
    RATIONAL = "rational"
    UNIVARIATE_RATIONAL = "univariate_rational"
    POLYNOMIAL2 = "polynomial2"
    LINEAR = "linear"
    SIGMOID = "sigmoid"
    MLP = "mlp"

    @classmethod
    def parse(cls, tag: Union[str, Family]) -> Family:
        if isinstance(tag, Family):
            return tag
        try:
            return cls(str(tag).strip().lower().replace("-", "_"))
        except ValueError:
            known = ", ".join(f.value for f in cls)
            raise UnknownFamilyError(f"unknown model family '{tag}' (known: {known})") from None

    @property
    def is_closed_form(self) -> bool:
        return self in (Family.LINEAR, Family.POLYNOMIAL2)

    @property
    def is_least_squares(self) -> bool:
        """Fitted by Levenberg-Marquardt."""
        return self in (Family.RATIONAL_EXP, Family.RATIONAL, Family.UNIVARIATE_RATIONAL, Family.SIGMOID)

    @property
    def has_denominator(self) -> bool:
        return self in (Family.RATIONAL_EXP, Family.RATIONAL, Family.UNIVARIATE_RATIONAL)


def _finite(values: Sequence[float], what: str) -> None:
    if not all(math.isfinite(float(v)) for v in values):
        raise ModelError(f"{what} parameters must all be finite")


def _triple(values: Sequence[float]) -> Triple:
    a, b, c = (float(v) for v in values)
    return (a, b, c)


@dataclass(frozen=True)
class RationalExpParams:
    """
    ((a . x) / (1 + b . x + c)) * exp(d * x3)
    """
    a: Triple
    b: Triple = (0.0, 0.0, 0.0)
    c: float = 0.0
    d: float = 0.0

    NAMES: ClassVar[Tuple[str, ...]] = ("a1", "a2", "a3", "b1", "b2", "b3", "c", "d")

    def to_vector(self) -> np.ndarray:
        return np.array([*self.a, *self.b, self.c, self.d], dtype=float)

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> RationalExpParams:
        v = [float(x) for x in v]
        if len(v) != 8:
            raise ModelError(f"rational_exp expects 8 parameters, got {len(v)}")
        return cls(a=_triple(v[0:3]), b=_triple(v[3:6]), c=v[6], d=v[7])

    def rescaled(self, k: float) -> RationalExpParams:
        """Same predictions, different coefficients: a -> ka, b -> kb, c -> k(1+c)-1."""
        return RationalExpParams(
            a=_triple(k * ai for ai in self.a),
            b=_triple(k * bi for bi in self.b),
            c=k * (1.0 + self.c) - 1.0,
            d=self.d,
        )

    def without_exponent(self) -> RationalParams:
        return RationalParams(a=self.a, b=self.b, c=self.c)

    def validate(self) -> None:
        _finite(self.to_vector(), "rational_exp")


@dataclass(frozen=True)
class RationalParams:
    """
    Rational-exponential with d frozen at 0.
    """
    a: Triple
    b: Triple = (0.0, 0.0, 0.0)
    c: float = 0.0

    NAMES: ClassVar[Tuple[str, ...]] = ("a1", "a2", "a3", "b1", "b2", "b3", "c")

    def to_vector(self) -> np.ndarray:
        return np.array([*self.a, *self.b, self.c], dtype=float)

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> RationalParams:
        v = [float(x) for x in v]
        if len(v) != 7:
            raise ModelError(f"rational expects 7 parameters, got {len(v)}")
        return cls(a=_triple(v[0:3]), b=_triple(v[3:6]), c=v[6])

    def with_exponent(self, d: float = 0.0) -> RationalExpParams:
        return RationalExpParams(a=self.a, b=self.b, c=self.c, d=d)

    def validate(self) -> None:
        _finite(self.to_vector(), "rational")


@dataclass(frozen=True)
class UnivariateRationalParams:
    """
    a1 * X**a2 / (1 + a3 * X**a4) over a single feature X > 0.
    """
    a1: float
    a2: float
    a3: float
    a4: float
    feature: str = CLIENT_FRAME_SIZE

    NAMES: ClassVar[Tuple[str, ...]] = ("a1", "a2", "a3", "a4")

    @property
    def feature_index(self) -> int:
        return MODEL_FEATURES.index(self.feature)

    def to_vector(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3, self.a4], dtype=float)

    @classmethod
    def from_vector(cls, v: Sequence[float], feature: str = CLIENT_FRAME_SIZE) -> UnivariateRationalParams:
        v = [float(x) for x in v]
        if len(v) != 4:
            raise ModelError(f"univariate_rational expects 4 parameters, got {len(v)}")
        return cls(v[0], v[1], v[2], v[3], feature=feature)

    def validate(self) -> None:
        _finite(self.to_vector(), "univariate_rational")
        if self.feature not in MODEL_FEATURES:
            raise ModelError(f"univariate feature must be one of {MODEL_FEATURES}, got '{self.feature}'")


@dataclass(frozen=True)
class PolynomialParams:
    coefficients: Tuple[float, ...]

    NAMES: ClassVar[Tuple[str, ...]] = (
        "w0", "x1", "x2", "x3", "x1^2", "x2^2", "x3^2", "x1*x2", "x1*x3", "x2*x3",
    )

    def to_vector(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=float)

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> PolynomialParams:
        v = tuple(float(x) for x in v)
        if len(v) != 10:
            raise ModelError(f"polynomial2 expects 10 parameters, got {len(v)}")
        return cls(coefficients=v)

    def validate(self) -> None:
        _finite(self.coefficients, "polynomial2")


@dataclass(frozen=True)
class LinearParams:
    w0: float
    w: Triple

    NAMES: ClassVar[Tuple[str, ...]] = ("w0", "w1", "w2", "w3")

    def to_vector(self) -> np.ndarray:
        return np.array([self.w0, *self.w], dtype=float)

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> LinearParams:
        v = [float(x) for x in v]
        if len(v) != 4:
            raise ModelError(f"linear expects 4 parameters, got {len(v)}")
        return cls(w0=v[0], w=_triple(v[1:4]))

    def validate(self) -> None:
        _finite(self.to_vector(), "linear")


@dataclass(frozen=True)
class SigmoidParams:
    """
    L / (1 + exp(-(w . x + beta)))
    """
    L: float
    w: Triple
    beta: float

    NAMES: ClassVar[Tuple[str, ...]] = ("L", "w1", "w2", "w3", "beta")

    def to_vector(self) -> np.ndarray:
        return np.array([self.L, *self.w, self.beta], dtype=float)

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> SigmoidParams:
        v = [float(x) for x in v]
        if len(v) != 5:
            raise ModelError(f"sigmoid expects 5 parameters, got {len(v)}")
        return cls(L=v[0], w=_triple(v[1:4]), beta=v[4])

    def validate(self) -> None:
        _finite(self.to_vector(), "sigmoid")
        if self.L <= 0:
            raise ModelError("sigmoid amplitude L must be > 0")


@dataclass(frozen=True, eq=False)
class MLPParams:
    """
    One hidden tanh layer: w_out . tanh(x @ W + b) + b_out.
    W has shape (3, H).
    """
    W: np.ndarray
    b: np.ndarray
    w_out: np.ndarray
    b_out: float

    def __post_init__(self) -> None:
        for array in (self.W, self.b, self.w_out):
            array.setflags(write=False)

    @property
    def hidden(self) -> int:
        return int(self.b.shape[0])

    @property
    def names(self) -> Tuple[str, ...]:
        h = self.hidden
        return (
            tuple(f"W[{i}][{j}]" for i in range(N_INPUTS) for j in range(h))
            + tuple(f"b[{j}]" for j in range(h))
            + tuple(f"w_out[{j}]" for j in range(h))
            + ("b_out",)
        )

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.W.ravel(), self.b, self.w_out, [self.b_out]]).astype(float)

    @classmethod
    def from_vector(cls, v: Sequence[float], hidden: int = DEFAULT_HIDDEN) -> MLPParams:
        v = np.asarray(v, dtype=float)
        expected = mlp_size(hidden)
        if v.shape != (expected,):
            raise ModelError(f"mlp with H={hidden} expects {expected} parameters, got {v.size}")
        split_w = N_INPUTS * hidden
        return cls(
            W=v[:split_w].reshape(N_INPUTS, hidden).copy(),
            b=v[split_w:split_w + hidden].copy(),
            w_out=v[split_w + hidden:split_w + 2 * hidden].copy(),
            b_out=float(v[-1]),
        )

    def validate(self) -> None:
        if self.hidden < 1:
            raise ModelError("mlp needs at least one hidden unit")
        if self.W.shape != (N_INPUTS, self.hidden) or self.w_out.shape != (self.hidden,):
            raise ModelError("mlp weight shapes are inconsistent")
        if not np.all(np.isfinite(self.to_vector())):
            raise ModelError("mlp parameters must all be finite")


ModelParams = Union[
    RationalExpParams,
    RationalParams,
    UnivariateRationalParams,
    PolynomialParams,
    LinearParams,
    SigmoidParams,
    MLPParams,
]

_PARAM_TYPES = {
    Family.RATIONAL_EXP: RationalExpParams,
    Family.RATIONAL: RationalParams,
    Family.UNIVARIATE_RATIONAL: UnivariateRationalParams,
    Family.POLYNOMIAL2: PolynomialParams,
    Family.LINEAR: LinearParams,
    Family.SIGMOID: SigmoidParams,
    Family.MLP: MLPParams,
}


def mlp_size(hidden: int) -> int:
    return N_INPUTS * hidden + 2 * hidden + 1


def param_type(family: Family):
    return _PARAM_TYPES[Family.parse(family)]


def family_of(params: ModelParams) -> Family:
    for family, kind in _PARAM_TYPES.items():
        if type(params) is kind:
            return family
    raise UnknownFamilyError(f"no family for parameter type {type(params).__name__}")


def parameter_names(params: ModelParams) -> List[str]:
    if isinstance(params, MLPParams):
        return list(params.names)
    return list(type(params).NAMES)


def params_from_vector(family: Family, v: Sequence[float], *, feature: str = CLIENT_FRAME_SIZE,
                       hidden: int = DEFAULT_HIDDEN) -> ModelParams:
    family = Family.parse(family)
    if family is Family.UNIVARIATE_RATIONAL:
        return UnivariateRationalParams.from_vector(v, feature=feature)
    if family is Family.MLP:
        return MLPParams.from_vector(v, hidden=hidden)
    return _PARAM_TYPES[family].from_vector(v)
