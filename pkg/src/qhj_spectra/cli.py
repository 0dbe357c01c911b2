"""Command-line front end: classify, solve, verify, sample, table.

Outputs are deterministic: JSON with sorted keys and all floating-point
numbers rendered as decimal strings with 12 significant digits; sample emits
RFC-4180 CSV.  Exit codes: 0 success/pass, 1 verification mismatch,
2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from .errors import HardMismatchError, QhjSpectraError
from .oracle import GridSpec, default_grid, verify_qes
from .potential import PotentialParams, Variant, classify_symmetry, evaluate_potential
from .qhj import (
    QesClassification,
    QesSet,
    SET_RESIDUES,
    enumerate_qes_sets,
    infinity_analysis,
    qes_target_v2,
)
from .solver import (
    build_pencil,
    evaluate_wavefunction,
    reproduce_paper_tables,
    solve_levels,
    wavefunction,
)

CONFIG_ENV_VAR = "QHJ_SPECTRA_CONFIG"

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


class UsageError(QhjSpectraError):
    """Bad flags or parameters; maps to exit code 2."""


def _fmt(value: float) -> str:
    return "%.12g" % float(value)


def _jsonable(obj):
    """Recursively convert to JSON-serializable form with stable float strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, complex):
        return {"real": _fmt(obj.real), "imag": _fmt(obj.imag)}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.floating):
        return _fmt(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _emit(document: dict, output_path: str | None) -> None:
    text = json.dumps(_jsonable(document), sort_keys=True, indent=2) + "\n"
    if output_path:
        with open(output_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_config(args) -> dict:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            config = json.load(handle)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    if not isinstance(config, dict):
        raise UsageError(f"config file {path!r} must contain a JSON object")
    return config


class _Settings:
    """Flag values merged over config-file values (flags win)."""

    def __init__(self, args):
        self._args = args
        self._config = _load_config(args)

    def get(self, name, default=None):
        value = getattr(self._args, name, None)
        if value is not None:
            return value
        return self._config.get(name, default)


def _require_number(settings, name, display=None) -> float:
    value = settings.get(name)
    if value is None:
        raise UsageError(f"--{display or name} is required")
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise UsageError(f"--{display or name} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise UsageError(f"--{display or name} must be finite")
    return value


def _variant_from(settings) -> Variant:
    tag = settings.get("variant", "real")
    try:
        return Variant(tag)
    except ValueError:
        valid = ", ".join(v.value for v in Variant)
        raise UsageError(f"unknown variant {tag!r}; expected one of: {valid}")


def _base_params(settings, need_v2: bool = True) -> PotentialParams:
    v1 = _require_number(settings, "v1")
    alpha = _require_number(settings, "alpha")
    if v1 <= 0.0:
        raise UsageError("v1 must be positive")
    if alpha <= 0.0:
        raise UsageError("alpha must be positive")
    v2 = _require_number(settings, "v2") if need_v2 else 0.0
    return PotentialParams(v1=v1, v2=v2, alpha=alpha)


def _working_point(settings) -> tuple[PotentialParams, QesClassification]:
    """Resolve the (params, sets-to-solve) selection for solve/verify/sample.

    Exactly one of --v2, (--set and --n), --lambda selects the working point.
    """
    v1 = _require_number(settings, "v1")
    alpha = _require_number(settings, "alpha")
    if v1 <= 0.0:
        raise UsageError("v1 must be positive")
    if alpha <= 0.0:
        raise UsageError("alpha must be positive")

    v2 = settings.get("v2")
    set_index = settings.get("set")
    n = settings.get("n")
    lam = settings.get("lambda")
    chosen = [v2 is not None, set_index is not None, lam is not None]
    if sum(chosen) != 1:
        raise UsageError(
            "exactly one of --v2, --set/--n, --lambda must select the "
            "working point"
        )

    if set_index is not None:
        if n is None:
            raise UsageError("--set requires --n")
        set_index, n = int(set_index), int(n)
        if set_index not in SET_RESIDUES:
            raise UsageError(f"--set must be 1..4, got {set_index}")
        if n < 0:
            raise UsageError(f"--n must be nonnegative, got {n}")
        b1, b1p = SET_RESIDUES[set_index]
        qes_set = QesSet(set_index=set_index, b1=b1, b1_prime=b1p, n=n)
        target_v2 = qes_target_v2(qes_set, v1, alpha)
        params = PotentialParams(v1=v1, v2=target_v2, alpha=alpha)
        lam_value = float(b1 + b1p) + n
        classification = QesClassification(
            lam=lam_value, sets=(qes_set,), total_levels=n + 1
        )
        return params, classification

    if lam is not None:
        lam = float(lam)
        classification = enumerate_qes_sets(lam)
        if not classification.sets:
            raise UsageError(f"no admissible QES sets for lambda = {lam!r}")
        params = PotentialParams(
            v1=v1, v2=-2.0 * math.sqrt(v1) * alpha * lam, alpha=alpha
        )
        return params, classification

    params = PotentialParams(v1=v1, v2=float(v2), alpha=alpha)
    lam = infinity_analysis(params).lam
    classification = enumerate_qes_sets(lam, tolerance=1e-9)
    if not classification.sets:
        raise UsageError(
            f"no admissible QES sets at V2 = {params.v2!r} (lambda = {lam!r})"
        )
    return params, classification


def _grid_from(settings, params, levels_needed):
    grid = default_grid(params, levels_needed=levels_needed)
    big_l = settings.get("L")
    n_points = settings.get("N")
    if big_l is None and n_points is None:
        return grid
    return GridSpec(
        half_width_L=float(big_l) if big_l is not None else grid.half_width_L,
        point_count_N=int(n_points) if n_points is not None else grid.point_count_N,
    )


def _set_payload(qes_set: QesSet) -> dict:
    return {
        "set": qes_set.set_index,
        "b1": qes_set.b1,
        "b1_prime": qes_set.b1_prime,
        "n": qes_set.n,
        "parity": qes_set.parity,
    }


def _solve_payload(params: PotentialParams, classification: QesClassification):
    levels = []
    for qes_set in classification.sets:
        for level in solve_levels(build_pencil(qes_set, params), params):
            wf = wavefunction(level, params)
            levels.append(
                {
                    "set": qes_set.set_index,
                    "n": qes_set.n,
                    "energy": level.energy,
                    "parity": level.parity,
                    "node_count": level.node_count,
                    "coefficients": list(level.coefficients),
                    "wavefunction": {
                        "p1": wf.p1,
                        "p2": wf.p2,
                        "C": wf.c_rate,
                        "alpha": wf.alpha,
                        "coefficients": list(wf.coefficients),
                        "parity": wf.parity,
                    },
                }
            )
    levels.sort(key=lambda row: float(row["energy"]))
    return levels


def cmd_classify(settings) -> tuple[int, dict]:
    variant = _variant_from(settings)
    params = _base_params(settings)
    report = classify_symmetry(params, variant)
    document = {
        "command": "classify",
        "parameters": {
            "v1": params.v1,
            "v2": params.v2,
            "alpha": params.alpha,
            "variant": variant.value,
        },
        "symmetry": {
            "variant": variant.value,
            "pt_symmetric": report.pt_symmetric,
            "lambda": report.lambda_value,
            "lambda_candidates": list(report.lambda_candidates),
            "physical_qes_possible": report.physical_qes_possible,
            "note": report.note,
        },
    }
    if report.physical_qes_possible:
        classification = enumerate_qes_sets(report.lambda_value.real)
        document["classification"] = {
            "lambda": classification.lam,
            "m_paper": 2.0 * classification.lam,
            "total_levels": classification.total_levels,
            "sets": [_set_payload(q) for q in classification.sets],
        }
    else:
        document["classification"] = {
            "lambda": report.lambda_value,
            "total_levels": 0,
            "sets": [],
        }
    return EXIT_OK, document


def cmd_solve(settings) -> tuple[int, dict]:
    params, classification = _working_point(settings)
    document = {
        "command": "solve",
        "parameters": {"v1": params.v1, "v2": params.v2, "alpha": params.alpha},
        "lambda": classification.lam,
        "sets": [_set_payload(q) for q in classification.sets],
        "levels": _solve_payload(params, classification),
    }
    return EXIT_OK, document


def cmd_verify(settings) -> tuple[int, dict]:
    params, classification = _working_point(settings)
    tolerance = float(settings.get("tol", 1e-6))
    if tolerance <= 0.0:
        raise UsageError("tolerance must be positive")
    total = sum(q.n + 1 for q in classification.sets)
    grid = _grid_from(settings, params, total)

    analytic_levels = None
    adjudication_note = None
    if settings.get("assert_paper_table_33"):
        # Substitute the published Table 3.3 set-4 energy (a duplicate of the
        # set-3 value) and let the oracle decide.
        from .solver import solve_classification

        levels = solve_classification(params, classification)
        printed = -(params.alpha**2) / 4.0 - params.alpha * math.sqrt(params.v1)
        replaced = []
        found = False
        for level in levels:
            if level.qes_set.set_index == 4:
                found = True
                level = QesLevelReplacement(level, printed)
            replaced.append(level)
        if not found:
            raise UsageError(
                "--assert-paper-table-3.3 needs a working point containing "
                "set 4 (integer lambda)"
            )
        analytic_levels = replaced
        adjudication_note = (
            "asserting the published Table 3.3 set-4 energy "
            f"{printed} against the oracle"
        )

    try:
        report = verify_qes(
            params,
            classification,
            tolerance=tolerance,
            grid=grid,
            analytic_levels=analytic_levels,
        )
    except HardMismatchError as exc:
        document = {
            "command": "verify",
            "parameters": {
                "v1": params.v1,
                "v2": params.v2,
                "alpha": params.alpha,
            },
            "lambda": classification.lam,
            "overall_pass": False,
            "hard_mismatch": str(exc),
        }
        if adjudication_note:
            document["adjudication"] = adjudication_note
        return EXIT_MISMATCH, document

    document = {
        "command": "verify",
        "parameters": {"v1": params.v1, "v2": params.v2, "alpha": params.alpha},
        "lambda": classification.lam,
        "tolerance": tolerance,
        "grid": {"L": grid.half_width_L, "N": grid.point_count_N},
        "overall_pass": report.overall_pass,
        "convergence_order_estimate": report.convergence_order_estimate,
        "levels": [
            {
                "set": row.set_index,
                "n": row.n,
                "energy_analytic": row.energy_analytic,
                "energy_oracle": row.energy_oracle,
                "abs_gap": row.abs_gap,
                "gap_h": row.gap_h,
                "gap_half_h": row.gap_half_h,
                "convergence_order": row.convergence_order,
                "node_count_analytic": row.node_count_analytic,
                "node_count_oracle": row.node_count_oracle,
                "parity": row.parity,
                "parity_match": row.parity_match,
            }
            for row in report.rows
        ],
        "unmatched_but_expected": list(report.unmatched_oracle),
    }
    if adjudication_note:
        document["adjudication"] = adjudication_note
    return (EXIT_OK if report.overall_pass else EXIT_MISMATCH), document


class QesLevelReplacement:
    """A QesLevel proxy with a substituted energy (paper-adjudication mode)."""

    def __init__(self, level, energy):
        self._level = level
        self.energy = float(energy)

    def __getattr__(self, name):
        return getattr(self._level, name)


def cmd_sample(settings) -> tuple[int, str]:
    params, classification = _working_point(settings)
    points = int(settings.get("points", 1001))
    if points < 2:
        raise UsageError("--points must be at least 2")
    x_min = settings.get("x_min")
    x_max = settings.get("x_max")
    x_min = float(x_min) if x_min is not None else -5.0 / params.alpha
    x_max = float(x_max) if x_max is not None else 5.0 / params.alpha
    if not x_min < x_max:
        raise UsageError("--x-min must be below --x-max")
    x = np.linspace(x_min, x_max, points)
    v = evaluate_potential(params, Variant.REAL_SINH_GORDON, x).real

    columns = [("x", x), ("V", v)]
    for qes_set in classification.sets:
        for level in solve_levels(build_pencil(qes_set, params), params):
            wf = wavefunction(level, params)
            psi = evaluate_wavefunction(wf, x)
            peak = np.max(np.abs(psi))
            if peak > 0.0:
                psi = psi / peak
            name = (
                f"psi_set{qes_set.set_index}_n{qes_set.n}"
                f"_E{'%.6g' % level.energy}"
            )
            columns.append((name, psi))

    buffer = io.StringIO()
    writer = csv.writer(buffer)  # RFC 4180: CRLF line endings
    writer.writerow([name for name, _ in columns])
    for i in range(points):
        writer.writerow([_fmt(values[i]) for _, values in columns])
    return EXIT_OK, buffer.getvalue()


def cmd_table(settings) -> tuple[int, dict]:
    v1 = settings.get("v1", 1.0)
    alpha = settings.get("alpha", 1.0)
    v1, alpha = float(v1), float(alpha)
    if v1 <= 0.0:
        raise UsageError("v1 must be positive")
    if alpha <= 0.0:
        raise UsageError("alpha must be positive")
    document = reproduce_paper_tables(v1, alpha)
    document["command"] = "table"
    return EXIT_OK, document


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--v1", type=float, default=None)
    parser.add_argument("--v2", type=float, default=None)
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--config", default=None, help="JSON config file; flags win")
    parser.add_argument("--output", default=None, help="write output here instead of stdout")


def _add_working_point(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--set", dest="set", type=int, default=None)
    parser.add_argument("--n", dest="n", type=int, default=None)
    parser.add_argument("--lambda", dest="lambda", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhj-spectra",
        description=(
            "Quasi-exactly-solvable spectra of the generalized Sinh-Gordon "
            "potential with independent numerical verification"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="PT classification and admissible QES sets")
    _add_common(p)
    p.add_argument(
        "--variant", choices=[v.value for v in Variant], default=None
    )

    p = sub.add_parser("solve", help="QES energies and closed-form wavefunctions")
    _add_common(p)
    _add_working_point(p)

    p = sub.add_parser("verify", help="adjudicate analytic levels against the oracle")
    _add_common(p)
    _add_working_point(p)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--L", type=float, default=None, help="override grid half-width")
    p.add_argument("--N", type=int, default=None, help="override grid point count")
    p.add_argument(
        "--assert-paper-table-3.3",
        dest="assert_paper_table_33",
        action="store_true",
        default=None,
        help="assert the published Table 3.3 set-4 energy instead (expected to fail)",
    )

    p = sub.add_parser("sample", help="CSV of V(x) and the QES wavefunctions")
    _add_common(p)
    _add_working_point(p)
    p.add_argument("--x-min", dest="x_min", type=float, default=None)
    p.add_argument("--x-max", dest="x_max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)

    p = sub.add_parser("table", help="reproduce the published tables with adjudication")
    _add_common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _Settings(args)
        output_path = settings.get("output")
        if args.command == "classify":
            code, document = cmd_classify(settings)
        elif args.command == "solve":
            code, document = cmd_solve(settings)
        elif args.command == "verify":
            code, document = cmd_verify(settings)
        elif args.command == "sample":
            code, text = cmd_sample(settings)
            if output_path:
                with open(output_path, "w", encoding="utf-8", newline="") as handle:
                    handle.write(text)
            else:
                sys.stdout.write(text)
            return code
        elif args.command == "table":
            code, document = cmd_table(settings)
        else:  # pragma: no cover
            raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        _emit({"error": {"type": "usage", "message": str(exc)}}, None)
        return EXIT_USAGE
    except QhjSpectraError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, None)
        return EXIT_USAGE
    _emit(document, output_path)
    return code


def entry() -> None:
    raise SystemExit(main())
