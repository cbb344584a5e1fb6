"""Monogenic function theory over real alternative *-algebras."""

from .algebra import (
    AlgebraElement,
    AlgebraError,
    AlgebraSpec,
    associator,
    build_algebra,
    check_algebra_axioms,
    cone_membership,
    inverse_in_M,
)
from .integration import (
    SampledFunction,
    cauchy_integral,
    cauchy_pompeiu,
    cauchy_transform,
    derivative_formula,
    gauss_residual,
    integrate,
    mean_value,
    taylor_evaluate,
    teodorescu,
)
from .kernel import RadialRationalFunction, cauchy_kernel, differentiate_kernel, surface_area_sigma
from .polynomials import (
    AlgebraPolynomial,
    apply_operator,
    ck_extension,
    fueter_polynomial,
    fueter_variable,
    partial_derivative,
)
from .quadrature import QuadratureRule, build_quadrature

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "AlgebraError",
    "AlgebraPolynomial",
    "AlgebraSpec",
    "QuadratureRule",
    "RadialRationalFunction",
    "SampledFunction",
    "apply_operator",
    "associator",
    "build_algebra",
    "build_quadrature",
    "cauchy_integral",
    "cauchy_kernel",
    "cauchy_pompeiu",
    "cauchy_transform",
    "check_algebra_axioms",
    "ck_extension",
    "cone_membership",
    "derivative_formula",
    "differentiate_kernel",
    "fueter_polynomial",
    "fueter_variable",
    "gauss_residual",
    "integrate",
    "inverse_in_M",
    "mean_value",
    "partial_derivative",
    "surface_area_sigma",
    "taylor_evaluate",
    "teodorescu",
]
