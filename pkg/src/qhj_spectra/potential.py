"""Generalized Sinh-Gordon potential: parameters, evaluation, symmetry classification.

The real family is V(x) = V1 sinh^2(alpha x) + V2 cosh(alpha x) with hbar = 2m = 1.
Two complex variants (with the frequency fixed at 2) attach a factor i to either
the cosh or the sinh^2 coefficient; both are classified here but neither admits
a physical quasi-exactly-solvable branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegeneratePotentialError

# The complex variants are defined with this fixed inverse-length scale.
COMPLEX_VARIANT_ALPHA = 2.0


class Variant(Enum):
    """Which member of the potential family is meant."""

    REAL_SINH_GORDON = "real"
    IMAG_COSH = "i-cosh"
    IMAG_SINH = "i-sinh"


@dataclass(frozen=True)
class PotentialParams:
    """The triple (V1, V2, alpha); the single source of physical truth.

    alpha is normalized positive at construction (the potential only depends
    on it through even combinations).  v1 > 0 is required for the QES
    analysis but not for mere evaluation.
    """

    v1: float
    v2: float
    alpha: float = 1.0

    def __post_init__(self):
        for name in ("v1", "v2", "alpha"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.alpha == 0.0:
            raise ValueError("alpha must be nonzero")
        object.__setattr__(self, "alpha", abs(float(self.alpha)))
        object.__setattr__(self, "v1", float(self.v1))
        object.__setattr__(self, "v2", float(self.v2))

    @property
    def s(self) -> float:
        """sqrt(V1)/alpha, the dimensionless well-strength parameter."""
        if self.v1 <= 0.0:
            raise DegeneratePotentialError(
                f"s = sqrt(V1)/alpha needs V1 > 0, got V1 = {self.v1}"
            )
        return math.sqrt(self.v1) / self.alpha


@dataclass(frozen=True)
class SymmetryReport:
    """PT classification of one variant plus its infinity exponent."""

    variant: Variant
    pt_symmetric: bool
    lambda_value: complex
    lambda_candidates: tuple[complex, complex]
    physical_qes_possible: bool
    note: str


def evaluate_potential(params: PotentialParams, variant: Variant, x):
    """Evaluate the chosen variant at x (scalar or array); always complex-valued.

    The real variant returns values with imaginary part exactly zero.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("x must be finite")
    if variant is Variant.REAL_SINH_GORDON:
        a = params.alpha
        value = params.v1 * np.sinh(a * x) ** 2 + params.v2 * np.cosh(a * x) + 0j
    elif variant is Variant.IMAG_COSH:
        a = COMPLEX_VARIANT_ALPHA
        value = params.v1 * np.sinh(a * x) ** 2 + 1j * params.v2 * np.cosh(a * x)
    elif variant is Variant.IMAG_SINH:
        a = COMPLEX_VARIANT_ALPHA
        value = 1j * params.v1 * np.sinh(a * x) ** 2 + params.v2 * np.cosh(a * x)
    else:  # pragma: no cover
        raise ValueError(f"unknown variant {variant!r}")
    value = np.asarray(value, dtype=complex)
    if value.ndim == 0:
        return complex(value)
    return value


def classify_symmetry(params: PotentialParams, variant: Variant) -> SymmetryReport:
    """PT classification plus the infinity exponent lambda for one variant.

    lambda comes from matching the large-y expansion of the transformed
    Riccati equation on the normalizable branch a0 = -sqrt(v1_coeff)/alpha,
    where (v1_coeff, v2_coeff) are the (possibly imaginary) coefficients of
    sinh^2 and cosh for the variant.
    """
    if params.v1 == 0.0:
        raise DegeneratePotentialError(
            "V1 = 0: no sinh^2 term, the fixed-pole structure degenerates"
        )

    if variant is Variant.REAL_SINH_GORDON:
        pt = True
        if params.v1 > 0.0:
            lam = complex(-params.v2 / (2.0 * math.sqrt(params.v1) * params.alpha))
        else:
            lam = -params.v2 / (2.0 * cmath.sqrt(params.v1) * params.alpha)
        note = "real coefficients: PT symmetric; QES possible when lambda > 0"
    elif variant is Variant.IMAG_COSH:
        pt = True
        a = COMPLEX_VARIANT_ALPHA
        if params.v1 > 0.0:
            lam = complex(0.0, -params.v2 / (2.0 * math.sqrt(params.v1) * a))
        else:
            lam = -1j * params.v2 / (2.0 * cmath.sqrt(params.v1) * a)
        note = (
            "imaginary cosh coefficient: PT symmetric under the shifted "
            "reflection, but the infinity exponent is imaginary, so no "
            "physical bound-state branch exists"
        )
    elif variant is Variant.IMAG_SINH:
        pt = False
        a = COMPLEX_VARIANT_ALPHA
        lam = -params.v2 / (2.0 * cmath.sqrt(1j * params.v1) * a)
        note = (
            "imaginary sinh^2 coefficient: not PT symmetric; the infinity "
            "exponent is complex, so no physical bound-state branch exists"
        )
    else:  # pragma: no cover
        raise ValueError(f"unknown variant {variant!r}")

    physical = lam.imag == 0.0 and lam.real > 0.0
    return SymmetryReport(
        variant=variant,
        pt_symmetric=pt,
        lambda_value=lam,
        lambda_candidates=(lam, -lam),
        physical_qes_possible=physical,
        note=note,
    )
