"""Pole analysis of the transformed Riccati equation.

After the change of variable y = cosh(alpha x) and the usual logarithmic-
derivative substitutions, the bound-state problem becomes

    chi'(y) + chi(y)^2 + G(y) = 0,

where G carries two fixed double poles at y = +1 and y = -1 and a linear-in-E
part.  This module extracts the exact fixed-pole residues, the constant and
1/y coefficients of chi at infinity, and enumerates the admissible residue
combinations (the QES sets) for a given infinity exponent lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ComplexResidueError, UnsupportedBranchError
from .potential import PotentialParams

_QUARTER = Fraction(1, 4)
_THREE_QUARTERS = Fraction(3, 4)

# Residue pair (b1 at y=+1, b1' at y=-1) for each set index.  Sets 3 and 4
# follow the convention in which set 3 is the even-parity member (b1 = 1/4);
# this is the assignment consistent with the closed-form energies
# -alpha^2/4 -/+ alpha sqrt(V1) for sets 3/4.
SET_RESIDUES: dict[int, tuple[Fraction, Fraction]] = {
    1: (_QUARTER, _QUARTER),
    2: (_THREE_QUARTERS, _THREE_QUARTERS),
    3: (_QUARTER, _THREE_QUARTERS),
    4: (_THREE_QUARTERS, _QUARTER),
}


@dataclass(frozen=True)
class RiccatiFixedTerm:
    """The fixed term G(y; E), stored as E-free and E-linear parts.

    G(y; E) = (y^2 + 2) / (4 (y^2 - 1)^2)
              + (E - V1 y^2 - V2 y + V1) / (alpha^2 (y^2 - 1))
    """

    v1: float
    v2: float
    alpha: float

    def energy_free(self, y):
        """The E-independent part of G, evaluable at complex y != +-1."""
        q = y * y - 1.0
        return (y * y + 2.0) / (4.0 * q * q) + (
            -self.v1 * y * y - self.v2 * y + self.v1
        ) / (self.alpha**2 * q)

    def energy_linear(self, y):
        """Coefficient of E in G."""
        return 1.0 / (self.alpha**2 * (y * y - 1.0))

    def evaluate(self, y, energy):
        return self.energy_free(y) + energy * self.energy_linear(y)

    def double_pole_coefficient(self, location: int) -> Fraction:
        """Exact coefficient of 1/(y - location)^2; equals 3/16 at both poles.

        Only the first term of G contributes (the second has simple poles),
        so the value is independent of E, V1, V2 and alpha.
        """
        if location not in (1, -1):
            raise ValueError(f"fixed poles sit at y = +-1, got {location}")
        return Fraction(location * location + 2, 4 * (2 * location) ** 2)


@dataclass(frozen=True)
class FixedPoleAnalysis:
    """Residue data at one fixed pole y0 in {+1, -1}."""

    location: int
    residues: tuple[Fraction, Fraction]
    double_pole_coefficient: Fraction
    # Constant Laurent coefficient candidates +-sqrt(V1)/alpha (sign fixed
    # only by the behavior at infinity).
    a0_candidates: tuple[float, float]


@dataclass(frozen=True)
class InfinityAnalysis:
    """Constant and 1/y coefficients of chi at large y."""

    c_candidates: tuple[float, float]
    c_physical: float
    lam: float
    m_paper: float


@dataclass(frozen=True)
class QesSet:
    """One admissible residue combination with its polynomial degree n."""

    set_index: int
    b1: Fraction
    b1_prime: Fraction
    n: int

    @property
    def p1(self) -> Fraction:
        return self.b1 - _QUARTER

    @property
    def p2(self) -> Fraction:
        return self.b1_prime - _QUARTER

    @property
    def parity(self) -> str:
        return "odd" if self.b1 == _THREE_QUARTERS else "even"


@dataclass(frozen=True)
class QesClassification:
    """All admissible sets for a given infinity exponent."""

    lam: float
    sets: tuple[QesSet, ...]
    total_levels: int


def _require_positive_v1(params: PotentialParams) -> None:
    if params.v1 <= 0.0:
        raise UnsupportedBranchError(
            f"the pole analysis needs V1 > 0, got V1 = {params.v1}"
        )


def riccati_fixed_term(params: PotentialParams) -> RiccatiFixedTerm:
    """Build G(y; E) for the real variant; requires V1 > 0."""
    _require_positive_v1(params)
    return RiccatiFixedTerm(v1=params.v1, v2=params.v2, alpha=params.alpha)


def _exact_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def indicial_residues(coefficient):
    """Both roots of b^2 - b + coefficient = 0, ascending.

    Exact Fractions when the discriminant is a perfect rational square,
    floats otherwise.
    """
    if isinstance(coefficient, (Fraction, int)):
        c = Fraction(coefficient)
        disc = 1 - 4 * c
        if disc < 0:
            raise ComplexResidueError(
                f"discriminant 1 - 4*{c} < 0: complex residues"
            )
        root = _exact_sqrt(disc)
        if root is not None:
            return ((1 - root) / 2, (1 + root) / 2)
        r = math.sqrt(float(disc))
        return ((1.0 - r) / 2.0, (1.0 + r) / 2.0)
    disc = 1.0 - 4.0 * float(coefficient)
    if disc < 0.0:
        raise ComplexResidueError(
            f"discriminant 1 - 4*{coefficient} < 0: complex residues"
        )
    r = math.sqrt(disc)
    return ((1.0 - r) / 2.0, (1.0 + r) / 2.0)


def fixed_pole_analysis(term: RiccatiFixedTerm, location: int) -> FixedPoleAnalysis:
    """Exact residues {1/4, 3/4} at the fixed pole y = location."""
    g2 = term.double_pole_coefficient(location)
    residues = indicial_residues(g2)
    s = math.sqrt(term.v1) / term.alpha
    return FixedPoleAnalysis(
        location=location,
        residues=residues,
        double_pole_coefficient=g2,
        a0_candidates=(s, -s),
    )


def infinity_analysis(params: PotentialParams) -> InfinityAnalysis:
    """Match chi = a0 + lam/y + ... at large y.

    Order 1 gives a0 = +-sqrt(V1)/alpha; the normalizable branch is
    a0 = C = -sqrt(V1)/alpha, on which the 1/y order gives
    lam = -V2 / (2 sqrt(V1) alpha).  lam > 0 (hence QES) requires V2 < 0.
    """
    _require_positive_v1(params)
    s = params.s
    lam = -params.v2 / (2.0 * math.sqrt(params.v1) * params.alpha)
    return InfinityAnalysis(
        c_candidates=(s, -s),
        c_physical=-s,
        lam=lam,
        m_paper=2.0 * lam,
    )


def enumerate_qes_sets(lam: float, tolerance: float = 1e-9) -> QesClassification:
    """Admit each residue pair whose n = lam - b1 - b1' is a nonnegative integer.

    Half-odd lam admits sets 1 and 2, integer lam admits sets 3 and 4;
    anything else yields an empty classification.
    """
    if not math.isfinite(lam):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    if tolerance < 0.0:
        raise ValueError("tolerance must be nonnegative")
    sets = []
    for index in sorted(SET_RESIDUES):
        b1, b1p = SET_RESIDUES[index]
        n_real = lam - float(b1) - float(b1p)
        n = round(n_real)
        if n >= 0 and abs(n_real - n) <= tolerance:
            sets.append(QesSet(set_index=index, b1=b1, b1_prime=b1p, n=n))
    total = sum(q.n + 1 for q in sets)
    return QesClassification(lam=lam, sets=tuple(sets), total_levels=total)


def qes_target_v2(qes_set: QesSet, v1: float, alpha: float) -> float:
    """The unique (negative) V2 making this set admissible for given V1, alpha."""
    if v1 <= 0.0:
        raise UnsupportedBranchError(f"V1 must be positive, got {v1}")
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    lam = qes_set.b1 + qes_set.b1_prime + qes_set.n
    return -2.0 * math.sqrt(v1) * alpha * float(lam)
