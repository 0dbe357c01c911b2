"""Finite secular pencil, QES energies, closed-form wavefunctions, QMF diagnostics.

With p1 = b1 - 1/4, p2 = b1' - 1/4 and s = sqrt(V1)/alpha, the bound states
in the QES block take the form

    psi(y) = (y - 1)^p1 (y + 1)^p2 exp(-s y) P_n(y),   y = cosh(alpha x),

extended to x < 0 by parity (odd when p1 = 1/2).  Substituting this into the
Schrodinger equation and matching powers of y yields a four-diagonal matrix H
whose eigenvalues give E = -alpha^2 * eig(H) and whose eigenvectors are the
coefficients of P_n.  Every release must pass the residual and oracle checks
in the test suite; the recursion below is validated there, not trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import (
    ContourCollisionError,
    InadmissibleParametersError,
    InvariantViolationError,
    QmfPoleError,
)
from .potential import PotentialParams, Variant, evaluate_potential
from .qhj import QesClassification, QesSet, enumerate_qes_sets, qes_target_v2

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class SpectralPencil:
    """The (n+1) x (n+1) secular matrix H, dimensionless; E = -alpha^2 eig(H)."""

    matrix: np.ndarray
    qes_set: QesSet
    s: float

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class QesLevel:
    """One analytic eigenvalue with its polynomial, parity and node count."""

    energy: float
    coefficients: tuple[float, ...]  # c0..cn, leading coefficient 1
    qes_set: QesSet
    node_count: int
    parity: str
    s: float
    alpha: float


@dataclass(frozen=True)
class ClosedFormWavefunction:
    """Evaluable closed form; decays like exp(c_rate * cosh(alpha x)), c_rate < 0."""

    p1: float
    p2: float
    c_rate: float  # -sqrt(V1)/alpha
    coefficients: tuple[float, ...]
    alpha: float
    parity: str
    log_norm: float  # max of log|psi| on the default grid; fixes the scale


def build_pencil(qes_set: QesSet, params: PotentialParams) -> SpectralPencil:
    """Assemble H for one set; params must satisfy the set's QES condition."""
    target = qes_target_v2(qes_set, params.v1, params.alpha)
    if abs(params.v2 - target) > 1e-9 * max(1.0, abs(target)):
        raise InadmissibleParametersError(
            f"set {qes_set.set_index} with n = {qes_set.n} needs "
            f"V2 = {target!r}, got V2 = {params.v2!r}"
        )
    n = qes_set.n
    s = params.s
    sigma = float(qes_set.p1 + qes_set.p2)
    delta = float(qes_set.p1 - qes_set.p2)
    matrix = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        matrix[k, k] = k * (k - 1) + (2.0 * sigma + 1.0) * k + sigma**2 - 2.0 * s * delta
        if k + 1 <= n:
            matrix[k, k + 1] = 2.0 * (k + 1) * (delta + s)
        if k + 2 <= n:
            matrix[k, k + 2] = -(k + 2) * (k + 1)
        if k >= 1:
            matrix[k, k - 1] = 2.0 * s * (n - k + 1)
    matrix.setflags(write=False)
    return SpectralPencil(matrix=matrix, qes_set=qes_set, s=s)


def _polynomial_roots(coefficients: tuple[float, ...]) -> np.ndarray:
    """Roots of P(y) = sum c_k y^k; empty for degree 0."""
    if len(coefficients) == 1:
        return np.empty(0, dtype=complex)
    return np.roots(np.asarray(coefficients[::-1], dtype=float))


def _node_count(coefficients: tuple[float, ...], parity: str) -> int:
    """Real-line node count: 2 per real polynomial root in y > 1, +1 if odd."""
    roots = _polynomial_roots(coefficients)
    count = 0
    for r in roots:
        if abs(r.imag) > 1e-9 * (1.0 + abs(r)):
            continue
        if abs(r.real - 1.0) < 1e-9:
            raise InvariantViolationError(
                "polynomial root collides with the fixed pole y = 1"
            )
        if r.real > 1.0:
            count += 1
    return 2 * count + (1 if parity == "odd" else 0)


def solve_levels(pencil: SpectralPencil, params: PotentialParams) -> list[QesLevel]:
    """Energies and polynomial coefficients for one set, sorted by energy."""
    n = pencil.size - 1
    if n == 0:
        mus = np.array([pencil.matrix[0, 0]])
        vectors = np.ones((1, 1))
    else:
        mus, vectors = np.linalg.eig(pencil.matrix)
        scale = max(1.0, float(np.max(np.abs(mus))))
        if np.max(np.abs(mus.imag)) > 1e-10 * scale:
            raise InvariantViolationError(
                f"complex pencil eigenvalue: max imaginary part "
                f"{np.max(np.abs(mus.imag))!r}"
            )
        mus = mus.real
        vectors = vectors.real

    levels = []
    for j in np.argsort(-mus):  # E = -alpha^2 mu: largest mu is lowest energy
        vec = vectors[:, j]
        if abs(vec[-1]) < 1e-12 * np.max(np.abs(vec)):
            raise InvariantViolationError(
                "leading polynomial coefficient vanishes; cannot normalize"
            )
        coeffs = tuple(float(c) for c in vec / vec[-1])
        parity = pencil.qes_set.parity
        levels.append(
            QesLevel(
                energy=-params.alpha**2 * float(mus[j]),
                coefficients=coeffs,
                qes_set=pencil.qes_set,
                node_count=_node_count(coeffs, parity),
                parity=parity,
                s=pencil.s,
                alpha=params.alpha,
            )
        )
    levels.sort(key=lambda lvl: lvl.energy)
    return levels


def solve_classification(
    params: PotentialParams, classification: QesClassification
) -> list[QesLevel]:
    """Solve every set in the classification; all levels sorted by energy."""
    levels: list[QesLevel] = []
    for qes_set in classification.sets:
        levels.extend(solve_levels(build_pencil(qes_set, params), params))
    levels.sort(key=lambda lvl: lvl.energy)
    return levels


def _raw_log_abs_sign(wf: ClosedFormWavefunction, x: np.ndarray):
    """Unnormalized log|psi| and sign, accumulated in log space.

    Uses (y-1)^(1/2) = sqrt(2)|sinh(alpha x / 2)| and
    (y+1)^(1/2) = sqrt(2) cosh(alpha x / 2); the odd-parity sign rides on
    the sinh factor.
    """
    half = 0.5 * wf.alpha * x
    y = np.cosh(wf.alpha * x)
    poly = np.polyval(np.asarray(wf.coefficients[::-1]), y)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        log_abs = wf.c_rate * y + np.log(np.abs(poly))
        sign = np.sign(poly)
        if wf.p1 > 0.0:
            sh = np.sinh(half)
            log_abs = log_abs + 2.0 * wf.p1 * (0.5 * _LOG2 + np.log(np.abs(sh)))
            sign = sign * np.sign(sh)
        if wf.p2 > 0.0:
            ch = np.cosh(half)
            log_abs = log_abs + 2.0 * wf.p2 * (0.5 * _LOG2 + np.log(ch))
    return log_abs, sign


def wavefunction(level: QesLevel, params: PotentialParams) -> ClosedFormWavefunction:
    """Closed form for one solved level; normalized so max|psi| = 1 on the grid."""
    if abs(level.alpha - params.alpha) > 1e-12 * params.alpha or abs(
        level.s - params.s
    ) > 1e-12 * max(1.0, params.s):
        raise InadmissibleParametersError(
            "level was solved for different parameters"
        )
    wf = ClosedFormWavefunction(
        p1=float(level.qes_set.p1),
        p2=float(level.qes_set.p2),
        c_rate=-params.s,
        coefficients=level.coefficients,
        alpha=params.alpha,
        parity=level.parity,
        log_norm=0.0,
    )
    grid = np.linspace(-5.0 / params.alpha, 5.0 / params.alpha, 2001)
    log_abs, _ = _raw_log_abs_sign(wf, grid)
    log_norm = float(np.max(log_abs[np.isfinite(log_abs)]))
    return ClosedFormWavefunction(
        p1=wf.p1,
        p2=wf.p2,
        c_rate=wf.c_rate,
        coefficients=wf.coefficients,
        alpha=wf.alpha,
        parity=wf.parity,
        log_norm=log_norm,
    )


def evaluate_wavefunction(wf: ClosedFormWavefunction, x):
    """psi(x), max-normalized; underflow-safe (extreme |x| returns 0)."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("x must be finite")
    log_abs, sign = _raw_log_abs_sign(wf, arr)
    with np.errstate(over="ignore"):
        magnitude = np.where(
            np.isfinite(log_abs), np.exp(log_abs - wf.log_norm), 0.0
        )
    value = sign * magnitude
    if value.ndim == 0:
        return float(value)
    return value


def _poly_scale(coefficients: tuple[float, ...], y: float) -> float:
    return sum(abs(c) for c in coefficients) * max(1.0, abs(y)) ** (
        len(coefficients) - 1
    )


def _log_derivative_pieces(wf: ClosedFormWavefunction, x: float):
    """L = d(ln psi)/dx and L' from the closed form; raises at QMF poles."""
    a = wf.alpha
    y = math.cosh(a * x)
    desc = np.asarray(wf.coefficients[::-1])
    p = float(np.polyval(desc, y))
    dp = float(np.polyval(np.polyder(desc), y)) if len(desc) > 1 else 0.0
    ddp = float(np.polyval(np.polyder(desc, 2), y)) if len(desc) > 2 else 0.0
    if abs(p) < 1e-12 * _poly_scale(wf.coefficients, y):
        raise QmfPoleError(f"moving pole: P(y) = 0 at x = {x!r}")
    if wf.p1 > 0.0 and x == 0.0:
        raise QmfPoleError("moving pole at the origin (odd-parity node)")

    m = wf.c_rate + dp / p
    dm = (ddp * p - dp * dp) / (p * p)
    if wf.p1 > 0.0:
        m += wf.p1 / (y - 1.0)
        dm -= wf.p1 / (y - 1.0) ** 2
    if wf.p2 > 0.0:
        m += wf.p2 / (y + 1.0)
        dm -= wf.p2 / (y + 1.0) ** 2
    sh = math.sinh(a * x)
    big_l = a * sh * m
    big_lp = a * a * y * m + (a * sh) ** 2 * dm
    return big_l, big_lp


def quantum_momentum(
    wf: ClosedFormWavefunction, energy_unused: float, x: float
) -> complex:
    """p(x) = -i psi'/psi; purely imaginary for the real closed form."""
    big_l, _ = _log_derivative_pieces(wf, x)
    return complex(0.0, -big_l)


def quantum_momentum_derivative(wf: ClosedFormWavefunction, x: float) -> complex:
    """dp/dx from the analytic closed form (no finite differences)."""
    _, big_lp = _log_derivative_pieces(wf, x)
    return complex(0.0, -big_lp)


def qhj_residual(
    wf: ClosedFormWavefunction, energy: float, params: PotentialParams, x: float
) -> float:
    """p^2 - i p' - (E - V) at one point; zero for a true bound state."""
    big_l, big_lp = _log_derivative_pieces(wf, x)
    v = evaluate_potential(params, Variant.REAL_SINH_GORDON, x).real
    return (-big_l * big_l - big_lp) - (energy - v)


def schrodinger_residual(
    wf: ClosedFormWavefunction, energy: float, params: PotentialParams, x: float
) -> float:
    """(-psi'' + V psi - E psi)(x) using analytic second derivatives."""
    big_l, big_lp = _log_derivative_pieces(wf, x)
    v = evaluate_potential(params, Variant.REAL_SINH_GORDON, x).real
    psi = evaluate_wavefunction(wf, x)
    return (v - energy - big_lp - big_l * big_l) * psi


def _rectangle_count(
    coefficients: tuple[float, ...], left: float, right: float, half_height: float
) -> complex:
    """(1/2 pi i) * contour integral of P'/P over the rectangle boundary."""
    desc = np.asarray(coefficients[::-1], dtype=float)
    dersc = np.polyder(desc)

    corners = [
        complex(left, -half_height),
        complex(right, -half_height),
        complex(right, half_height),
        complex(left, half_height),
        complex(left, -half_height),
    ]
    total = 0.0 + 0.0j
    for z0, z1 in zip(corners[:-1], corners[1:]):
        dz = z1 - z0

        def integrand(t, z0=z0, dz=dz):
            z = z0 + t * dz
            return np.polyval(dersc, z) / np.polyval(desc, z) * dz

        value, _ = quad(integrand, 0.0, 1.0, complex_func=True, limit=200)
        total += value
    return total / (2.0j * math.pi)


def moving_pole_contour_value(level: QesLevel) -> complex:
    """Raw argument-principle integral over the physical-region rectangle."""
    n = len(level.coefficients) - 1
    if n == 0:
        return 0.0 + 0.0j
    right = 1.0 + (n + 2) * (1.0 + 1.0 / level.s)
    roots = _polynomial_roots(level.coefficients)
    delta, half_height = 1e-6, 0.5
    for _ in range(6):
        left = 1.0 + delta
        edges_ok = True
        for r in roots:
            dist = min(
                abs(r.real - left),
                abs(r.real - right),
                abs(abs(r.imag) - half_height),
            )
            if dist < 1e-8:
                edges_ok = False
                break
        if edges_ok:
            return _rectangle_count(level.coefficients, left, right, half_height)
        delta *= 3.7
        half_height *= 1.13
        right *= 1.01
    raise ContourCollisionError(
        "a polynomial zero stays within 1e-8 of every attempted contour"
    )


def count_moving_poles(level: QesLevel) -> int:
    """Number of P_n zeros in the physical region y > 1 (argument principle)."""
    raw = moving_pole_contour_value(level)
    count = round(raw.real)
    if abs(raw.real - count) > 1e-3 or abs(raw.imag) > 1e-3:
        raise ContourCollisionError(
            f"contour integral {raw!r} is not close to an integer"
        )
    return int(count)


def _format_term(value: float) -> float:
    return float(value)


def reproduce_paper_tables(v1: float, alpha: float) -> dict:
    """Structured reproduction of the three published tables with adjudication.

    Each energy row compares the printed closed form against this package's
    secular solution; a row is flagged 'paper-typo-suspected' when the printed
    value does not appear among the computed energies (the numerical oracle
    independently confirms the computed side in the test suite).  Wavefunction
    prefactor rows are adjudicated structurally.
    """
    params_m3 = PotentialParams(v1=v1, v2=-3.0 * math.sqrt(v1) * alpha, alpha=alpha)
    params_m2 = PotentialParams(v1=v1, v2=-2.0 * math.sqrt(v1) * alpha, alpha=alpha)
    sqrt_v1 = math.sqrt(v1)

    def computed_energies(params: PotentialParams, set_index: int, n: int):
        classification = enumerate_qes_sets(
            -params.v2 / (2.0 * sqrt_v1 * alpha)
        )
        chosen = [q for q in classification.sets if q.set_index == set_index]
        if len(chosen) != 1 or chosen[0].n != n:
            raise InvariantViolationError(
                f"set {set_index} with n = {n} not admissible at V2 = {params.v2}"
            )
        return [lvl.energy for lvl in solve_levels(build_pencil(chosen[0], params), params)]

    def energy_flag(printed: float, computed: list[float]) -> str:
        if any(abs(printed - e) <= 1e-9 * max(1.0, abs(e)) for e in computed):
            return "matches-paper"
        return "paper-typo-suspected"

    table_3_1 = []
    conditions = {
        1: ("M odd, M >= 1", "M = 2n + 1", "(M - 1)/2"),
        2: ("M odd, M >= 3", "M = 2n + 3", "(M - 3)/2"),
        3: ("M even, M >= 2", "M = 2n + 2", "(M - 2)/2"),
        4: ("M even, M >= 2", "M = 2n + 2", "(M - 2)/2"),
    }
    from .qhj import SET_RESIDUES

    for index in sorted(SET_RESIDUES):
        b1, b1p = SET_RESIDUES[index]
        printed_cond, qes_cond, n_formula = conditions[index]
        table_3_1.append(
            {
                "set": index,
                "b1": str(b1),
                "b1_prime": str(b1p),
                "n_from_m": n_formula,
                "printed_m_condition": printed_cond,
                "printed_qes_condition": qes_cond,
                "printed_m_definition": "M = V2 / (2 sqrt(V1) alpha)",
                "reconciled_m_definition": "M = 2 lambda = |V2| / (sqrt(V1) alpha)",
            }
        )

    rows = []

    e_set1 = computed_energies(params_m3, 1, 1)
    printed_set1 = -(alpha**2) / 4.0 + alpha * sqrt_v1
    rows.append(
        {
            "table": "3.2",
            "set": 1,
            "quantity": "energy",
            "printed": _format_term(printed_set1),
            "computed": [_format_term(e) for e in e_set1],
            "flag": energy_flag(printed_set1, e_set1),
        }
    )
    e_set2 = computed_energies(params_m3, 2, 0)
    printed_set2 = -(alpha**2)
    rows.append(
        {
            "table": "3.2",
            "set": 2,
            "quantity": "energy",
            "printed": _format_term(printed_set2),
            "computed": [_format_term(e) for e in e_set2],
            "flag": energy_flag(printed_set2, e_set2),
        }
    )
    rows.append(
        {
            "table": "3.2",
            "set": 2,
            "quantity": "wavefunction",
            "printed": "exp(-(sqrt(V1)/alpha) cosh(alpha x)) sinh(alpha x)",
            "computed": "exp(-(sqrt(V1)/alpha) cosh(alpha x)) sinh(alpha x)",
            "flag": "matches-paper",
        }
    )
    rows.append(
        {
            "table": "3.2",
            "set": 1,
            "quantity": "wavefunction",
            "printed": "exp(-(sqrt(V1)/alpha) cosh(alpha x)) (gamma cosh(alpha x) + beta)",
            "computed": "exp(-(sqrt(V1)/alpha) cosh(alpha x)) (c1 cosh(alpha x) + c0)",
            "flag": "not-adjudicated",
            "note": (
                "same functional shape; the printed gamma expressions depend "
                "on an undefined auxiliary quantity and are not reproduced"
            ),
        }
    )

    e_set3 = computed_energies(params_m2, 3, 0)
    printed_set3 = -(alpha**2) / 4.0 - alpha * sqrt_v1
    rows.append(
        {
            "table": "3.3",
            "set": 3,
            "quantity": "energy",
            "printed": _format_term(printed_set3),
            "computed": [_format_term(e) for e in e_set3],
            "flag": energy_flag(printed_set3, e_set3),
        }
    )
    e_set4 = computed_energies(params_m2, 4, 0)
    printed_set4 = -(alpha**2) / 4.0 - alpha * sqrt_v1  # printed duplicate of set 3
    rows.append(
        {
            "table": "3.3",
            "set": 4,
            "quantity": "energy",
            "printed": _format_term(printed_set4),
            "computed": [_format_term(e) for e in e_set4],
            "flag": energy_flag(printed_set4, e_set4),
        }
    )
    rows.append(
        {
            "table": "3.3",
            "set": "3-4",
            "quantity": "wavefunction",
            "printed": "(cosh(alpha x) +- 1) prefactors",
            "computed": "(cosh(alpha x) +- 1)^(1/2) prefactors",
            "flag": "paper-typo-suspected",
            "note": "the published prefactors are missing the square root",
        }
    )

    flags = [row["flag"] for row in rows]
    return {
        "parameters": {"v1": float(v1), "alpha": float(alpha)},
        "table_3_1": table_3_1,
        "rows": rows,
        "flags_summary": {
            "matches-paper": flags.count("matches-paper"),
            "paper-typo-suspected": flags.count("paper-typo-suspected"),
            "not-adjudicated": flags.count("not-adjudicated"),
        },
    }
