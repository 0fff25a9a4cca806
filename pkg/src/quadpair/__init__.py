"""quadpair: counting and exponential-sum experiments for pairs of diagonal forms."""

from ._kernels import BACKEND
from .forms import (
    CANONICAL_PAIR,
    CompatibilityReport,
    DiagonalForm,
    DualForm,
    FormPair,
    PencilCoeffs,
    check_compatibility,
    dual_form,
    eval_form,
    is_perfect_square,
    pencil,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CANONICAL_PAIR",
    "CompatibilityReport",
    "DiagonalForm",
    "DualForm",
    "FormPair",
    "PencilCoeffs",
    "check_compatibility",
    "dual_form",
    "eval_form",
    "is_perfect_square",
    "pencil",
    "__version__",
]
