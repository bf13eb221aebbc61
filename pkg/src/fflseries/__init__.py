"""Pellarin L-series over A = F_q[θ] in exact arithmetic."""

from .errors import (
    CapExceededError,
    DivergenceError,
    FFLError,
    FieldMismatchError,
    FieldZeroDivisionError,
    HypothesisError,
    InconsistencyError,
    PrecisionError,
)
from .kernels import BACKEND
from .lseries import LSeriesJob, SPoint, lseries_eval, power_sum
from .rings import LaurentSeries, ThetaPoly, ThetaTPoly
from .scalars import FieldElem, FieldSpec, PadicInt, get_field
from .special import SpecialPolynomial, special_poly

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapExceededError",
    "DivergenceError",
    "FFLError",
    "FieldElem",
    "FieldMismatchError",
    "FieldSpec",
    "FieldZeroDivisionError",
    "HypothesisError",
    "InconsistencyError",
    "LSeriesJob",
    "LaurentSeries",
    "PadicInt",
    "PrecisionError",
    "SPoint",
    "SpecialPolynomial",
    "ThetaPoly",
    "ThetaTPoly",
    "get_field",
    "lseries_eval",
    "power_sum",
    "special_poly",
]
