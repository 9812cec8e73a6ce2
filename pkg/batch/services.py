"""
batch/services.py

Public services:
  load_config(path)                     → TripletConfig
  parse_config(data, default_name)      → TripletConfig
  build_solution(cfg, tol=None)         → SolitonSolution (settings-driven tolerances)
  verify_solution(sol, level, strict)   → VerificationReport
  write_samples_csv(grid, stream)       → number of data rows
  build_summary_lines(sol)              → list[str]
  report_lines(report)                  → list[str]
  locus_lines(report)                   → list[str]
  exit_code_for(exc)                    → int

Config files are JSON objects with keys ``name`` (optional), ``mu``,
``theta_r`` (optional, may be null), ``A``, ``B`` and ``C``. Complex
numbers are two-element arrays [re, im]; matrices are arrays of rows.
"""

import csv
import json
import logging
from pathlib import Path

import numpy as np
from django.conf import settings

from matrices.services import MatrixError
from quaternions.services import QuaternionError
from quatnls.text_utils import format_complex, format_real, format_verdict
from scattering.models import VerificationReport
from scattering.services import ScatteringError, run_checks
from solitons.models import GridSample, SingularLocusReport, SolitonSolution
from solitons.services import SolitonError, build, gauge_transform, perturb_sylvester_solution
from triplets.models import TripletConfig
from triplets.services import NoSolitonError, TripletValidationError

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("x", "t", "re_q", "im_q", "abs_q", "re_qtilde", "im_qtilde")

REQUIRED_KEYS = ("mu", "A", "B", "C")

# ── Exit codes ─────────────────────────────────────────────────────────────────

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_NO_SOLITON = 2
EXIT_INVALID = 3
EXIT_PARSE = 4


class ConfigParseError(Exception):
    """Raised when a config file or a command-line argument cannot be used as given."""


def exit_code_for(exc: Exception) -> int:
    if isinstance(exc, ConfigParseError):
        return EXIT_PARSE
    if isinstance(exc, NoSolitonError):
        return EXIT_NO_SOLITON
    if isinstance(exc, (TripletValidationError, MatrixError, QuaternionError, SolitonError)):
        return EXIT_INVALID
    if isinstance(exc, ScatteringError):
        return EXIT_VERIFY_FAILED
    raise exc


# ── Config parsing ─────────────────────────────────────────────────────────────

def _complex_entry(value, where: str) -> complex:
    if isinstance(value, bool):
        raise ConfigParseError(f"{where}: expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(part, (int, float)) and not isinstance(part, bool) for part in value
    ):
        return complex(value[0], value[1])
    raise ConfigParseError(f"{where}: expected a number or [re, im], got {value!r}")


def _matrix(data, key: str) -> np.ndarray:
    rows = data[key]
    if not isinstance(rows, list) or not rows or not all(isinstance(row, list) and row for row in rows):
        raise ConfigParseError(f"{key}: expected a non-empty array of rows")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ConfigParseError(f"{key}: rows have different lengths")
    return np.array(
        [[_complex_entry(value, f"{key}[{i}][{j}]") for j, value in enumerate(row)] for i, row in enumerate(rows)],
        dtype=complex,
    )


def parse_config(data, default_name: str = "") -> TripletConfig:
    if not isinstance(data, dict):
        raise ConfigParseError("config must be a JSON object")
    missing = [key for key in REQUIRED_KEYS if key not in data]
    if missing:
        raise ConfigParseError(f"missing key(s): {', '.join(missing)}")

    a, b, c = _matrix(data, "A"), _matrix(data, "B"), _matrix(data, "C")
    n = a.shape[0]
    if a.shape != (n, n) or n % 2:
        raise ConfigParseError(f"A must be 2p×2p, got {a.shape[0]}×{a.shape[1]}")
    if b.shape != (n, 2) or c.shape != (2, n):
        raise ConfigParseError(f"B must be {n}×2 and C 2×{n}, got {b.shape} and {c.shape}")

    mu = data["mu"]
    if isinstance(mu, bool) or not isinstance(mu, (int, float)):
        raise ConfigParseError(f"mu: expected a real number, got {mu!r}")
    theta_r = data.get("theta_r", 0.0)
    if theta_r is not None and (isinstance(theta_r, bool) or not isinstance(theta_r, (int, float))):
        raise ConfigParseError(f"theta_r: expected a real number or null, got {theta_r!r}")
    name = data.get("name", default_name)
    if not isinstance(name, str):
        raise ConfigParseError(f"name: expected a string, got {name!r}")

    return TripletConfig(A=a, B=b, C=c, mu=float(mu), theta_r=theta_r, name=name)


def load_config(path) -> TripletConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path} is not valid JSON: {exc}") from exc
    cfg = parse_config(data, default_name=path.stem)
    logger.debug("load_config: %s p=%d mu=%g", cfg.label, cfg.p, cfg.mu)
    return cfg


# ── Orchestration ──────────────────────────────────────────────────────────────

def build_solution(cfg: TripletConfig, tol: float | None = None) -> SolitonSolution:
    """Build with the tolerances from settings; ``tol`` replaces the admissibility tolerance."""
    return build(
        cfg,
        sigma_tol=settings.QUATNLS_SIGMA_TOL,
        admissibility_tol=tol if tol is not None else settings.QUATNLS_ADMISSIBILITY_TOL,
    )


def verify_solution(sol: SolitonSolution, level: str, strict: bool = False) -> VerificationReport:
    corrupt = settings.QUATNLS_CORRUPT_P
    if corrupt:
        sol = perturb_sylvester_solution(sol, corrupt)
    return run_checks(
        sol,
        level=level,
        strict=strict or settings.QUATNLS_STRICT_DYNAMICS,
        workers=settings.QUATNLS_THREADS,
    )


# ── Output ─────────────────────────────────────────────────────────────────────

def write_samples_csv(grid: GridSample, mu: float, stream) -> int:
    """Rows run over x within each t band; singular points are written as ``nan``."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    rows = 0
    for i, t in enumerate(grid.ts):
        tilde = gauge_transform(grid.q[i], t, mu)
        for j, x in enumerate(grid.xs):
            q, qt = grid.q[i, j], tilde[j]
            writer.writerow(
                [format_real(x), format_real(t), format_real(q.real), format_real(q.imag),
                 format_real(abs(q)), format_real(qt.real), format_real(qt.imag)]
            )
            rows += 1
    return rows


def build_summary_lines(sol: SolitonSolution) -> list[str]:
    spectrum = ", ".join(format_complex(value) for value in sorted(sol.spectrum, key=lambda z: (z.real, z.imag)))
    return [
        f"triplet      : {sol.cfg.label} (p={sol.p})",
        f"spectrum A   : {spectrum}",
        f"mu           : {format_real(sol.mu)}",
        f"q_r          : {format_complex(sol.q_r)}",
        f"q_l          : {format_complex(sol.q_l)}",
        f"theta_r      : {format_real(sol.theta_r)}",
        f"theta_l      : {format_real(sol.theta_l)}",
        f"gamma        : {format_complex(sol.gamma)}",
        f"det P_r      : {format_real(sol.det_P)}",
    ]


def report_lines(report: VerificationReport) -> list[str]:
    lines = [
        f"report  : {report.label}",
        f"level   : {report.level}",
        f"strict  : {str(report.strict).lower()}",
    ]
    if report.case:
        lines.append(f"case    : {report.case}")
    for check in report.checks:
        role = "gating" if check.gating else "advisory"
        line = (
            f"check   : {check.name:<34} {format_verdict(check.passed):<4} "
            f"residual={check.residual:.3e} tol={check.tolerance:.1e} {role}"
        )
        if check.detail:
            line += f" ({check.detail})"
        lines.append(line)
    lines.append(f"verdict : {format_verdict(report.passed)}")
    return lines


def locus_lines(report: SingularLocusReport) -> list[str]:
    lines = [
        f"t                : {format_real(report.t)}",
        f"x range          : [{format_real(report.x_range[0])}, {format_real(report.x_range[1])}]",
        f"threshold        : {format_real(report.threshold)}",
        f"singular points  : {report.count}",
    ]
    for x, value in zip(report.singular_points, report.minima):
        lines.append(f"  x = {format_real(x)}  relative |det| = {value:.3e}")
    lines.append(
        f"endpoint measures: {report.endpoint_measures[0]:.6g}, {report.endpoint_measures[1]:.6g}"
    )
    return lines
