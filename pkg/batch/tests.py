"""
batch/tests.py

Covers:
  - parse_config / load_config : pairs and plain numbers, null phase, name from
                                 the file stem, malformed JSON, wrong shapes
  - exit_code_for              : the exit-code contract per exception family;
                                 numerical errors are not parse errors
  - RunConfig                  : grid validation, single time slice
  - write_samples_csv          : header, t-major order, nan for singular points
  - build command              : admissible config, no soliton, invalid, parse errors
  - sample command             : row count, constant background, golden values
  - verify command             : passing suites, corrupted P_r, strict mode failing
                                 on the dynamical checks, report file
  - scan_singular command      : negative-multiple example, golden values, bad ranges
  - manage.py                  : exit codes seen by a real process, argparse errors
"""

import csv
import io
import math
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from batch.models import RunConfig
from batch.services import (
    CSV_COLUMNS,
    EXIT_INVALID,
    EXIT_NO_SOLITON,
    EXIT_PARSE,
    EXIT_VERIFY_FAILED,
    ConfigParseError,
    build_solution,
    build_summary_lines,
    exit_code_for,
    load_config,
    locus_lines,
    parse_config,
    write_samples_csv,
)
from matrices.services import BranchCutError
from quatnls.text_utils import format_real
from scattering.services import ScatteringError
from solitons.models import GridSample
from solitons.services import SolitonError, gauge_transform, sample_grid, singular_locus
from triplets.services import NoSolitonError, PhaseInconsistentError, TripletValidationError

FIXTURES = Path(settings.BASE_DIR) / "fixtures"


# ── Helpers ────────────────────────────────────────────────────────────────────

def _fixture(name: str) -> str:
    return str(FIXTURES / f"{name}.json")


def _call(command: str, **options) -> str:
    out = io.StringIO()
    call_command(command, stdout=out, stderr=io.StringIO(), **options)
    return out.getvalue()


def _make_config_data(**overrides):
    data = {
        "mu": 1.0,
        "theta_r": 0.3,
        "A": [[1, 0], [0, 1]],
        "B": [[[1.0, 0.5], [-0.3, -0.2]], [[0.3, -0.2], [1.0, -0.5]]],
        "C": [[0.8, [0.4, 0.1]], [[-0.4, 0.1], 0.8]],
    }
    data.update(overrides)
    return data


# ── parse_config / load_config ─────────────────────────────────────────────────

class ParseConfigTests(SimpleTestCase):
    def test_pairs_and_numbers(self):
        cfg = parse_config(_make_config_data(), default_name="inline")
        self.assertEqual(cfg.p, 1)
        self.assertEqual(cfg.B[0, 0], 1.0 + 0.5j)
        self.assertEqual(cfg.C[0, 1], 0.4 + 0.1j)
        self.assertEqual(cfg.A[1, 1], 1.0)
        self.assertEqual(cfg.name, "inline")

    def test_null_phase(self):
        cfg = parse_config(_make_config_data(theta_r=None))
        self.assertIsNone(cfg.theta_r)

    def test_phase_defaults_to_zero(self):
        data = _make_config_data()
        del data["theta_r"]
        self.assertEqual(parse_config(data).theta_r, 0.0)

    def test_missing_key(self):
        data = _make_config_data()
        del data["C"]
        with self.assertRaisesMessage(ConfigParseError, "C"):
            parse_config(data)

    def test_bad_entries(self):
        for bad in ([[True, 0], [0, 1]], [[1, "x"], [0, 1]], [[1, [0, 1, 2]], [0, 1]], [[1, 0], [0]]):
            with self.subTest(bad=bad), self.assertRaises(ConfigParseError):
                parse_config(_make_config_data(A=bad))

    def test_odd_order(self):
        with self.assertRaises(ConfigParseError):
            parse_config(_make_config_data(A=[[1, 0, 0], [0, 1, 0], [0, 0, 1]]))

    def test_mismatched_b(self):
        with self.assertRaises(ConfigParseError):
            parse_config(_make_config_data(B=[[1, 0]]))

    def test_non_numeric_mu(self):
        with self.assertRaises(ConfigParseError):
            parse_config(_make_config_data(mu="one"))

    def test_load_fixture(self):
        cfg = load_config(_fixture("example_conjugate_eigenvalues"))
        self.assertEqual(cfg.mu, 2.5)
        self.assertIsNone(cfg.theta_r)
        np.testing.assert_array_equal(cfg.A, [[1, 0.5], [-0.5, 1]])

    def test_name_from_stem(self):
        self.assertEqual(load_config(_fixture("not_minimal")).name, "not_minimal")

    def test_load_errors(self):
        for name in ("malformed", "wrong_shape", "does_not_exist"):
            with self.subTest(name=name), self.assertRaises(ConfigParseError):
                load_config(_fixture(name))


# ── exit_code_for ──────────────────────────────────────────────────────────────

class ExitCodeTests(SimpleTestCase):
    def test_contract(self):
        cases = [
            (ConfigParseError("x"), EXIT_PARSE),
            (NoSolitonError("x"), EXIT_NO_SOLITON),
            (PhaseInconsistentError("x"), EXIT_INVALID),
            (TripletValidationError("x"), EXIT_INVALID),
            (BranchCutError("x"), EXIT_INVALID),
            (SolitonError("x"), EXIT_INVALID),
            (ScatteringError("x"), EXIT_VERIFY_FAILED),
        ]
        for exc, code in cases:
            with self.subTest(exc=type(exc).__name__):
                self.assertEqual(exit_code_for(exc), code)

    def test_unrelated_exception_propagates(self):
        with self.assertRaises(KeyError):
            exit_code_for(KeyError("x"))

    def test_numerical_errors_are_not_parse_errors(self):
        for exc in (ValueError("x"), np.linalg.LinAlgError("singular matrix")):
            with self.subTest(exc=type(exc).__name__), self.assertRaises(type(exc)):
                exit_code_for(exc)


# ── RunConfig ──────────────────────────────────────────────────────────────────

class RunConfigTests(SimpleTestCase):
    def test_grid(self):
        run = RunConfig(config_path=Path("c.json"), command="sample", x_min=-1, x_max=1, n_x=5, t_min=0, t_max=2, n_t=3)
        np.testing.assert_allclose(run.xs, [-1, -0.5, 0, 0.5, 1])
        np.testing.assert_allclose(run.ts, [0, 1, 2])

    def test_single_time_slice(self):
        run = RunConfig(config_path=Path("c.json"), command="sample", t_min=0.25, t_max=3.0, n_t=1)
        np.testing.assert_array_equal(run.ts, [0.25])

    def test_invalid(self):
        for kwargs in ({"n_x": 0}, {"n_t": 0}, {"x_min": 1.0, "x_max": 1.0}, {"t_min": 2.0, "t_max": 1.0}, {"tol": 0.0}):
            with self.subTest(**kwargs), self.assertRaises(ConfigParseError):
                RunConfig(config_path=Path("c.json"), command="sample", **kwargs)


# ── write_samples_csv ──────────────────────────────────────────────────────────

class WriteSamplesCsvTests(SimpleTestCase):
    def test_layout_and_nan(self):
        q = np.array([[1 + 1j, complex(np.nan, np.nan)], [2.0, -1j]])
        grid = GridSample(xs=np.array([0.0, 0.5]), ts=np.array([0.0, 0.1]), q=q, singular_count=1)
        buffer = io.StringIO()
        self.assertEqual(write_samples_csv(grid, 1.0, buffer), 4)

        rows = list(csv.reader(io.StringIO(buffer.getvalue())))
        self.assertEqual(tuple(rows[0]), CSV_COLUMNS)
        self.assertEqual([(r[0], r[1]) for r in rows[1:]], [("0.0", "0.0"), ("0.5", "0.0"), ("0.0", "0.1"), ("0.5", "0.1")])
        self.assertEqual(rows[2][2:], ["nan"] * 5)
        self.assertEqual(rows[1][4], format_real(math.sqrt(2)))
        tilde = gauge_transform(-1j, 0.1, 1.0)
        self.assertEqual(rows[4][5:], [format_real(tilde.real), format_real(tilde.imag)])


# ── build command ──────────────────────────────────────────────────────────────

class BuildCommandTests(SimpleTestCase):
    def test_admissible(self):
        out = _call("build", config=_fixture("example_real_eigenvalue"))
        sol = build_solution(load_config(_fixture("example_real_eigenvalue")))
        for line in build_summary_lines(sol):
            self.assertIn(line, out)
        self.assertLess(abs(sol.q_l - sol.q_r), 1e-10 * sol.mu)

    def test_conjugate_pair_example(self):
        out = _call("build", config=_fixture("example_conjugate_eigenvalues"))
        self.assertIn("det P_r      : ", out)
        sol = build_solution(load_config(_fixture("example_conjugate_eigenvalues")))
        self.assertAlmostEqual(sol.det_P, 0.390625, places=10)

    def test_no_soliton(self):
        with self.assertRaises(CommandError) as ctx, self.assertLogs("batch", level="ERROR"):
            _call("build", config=_fixture("no_soliton"))
        self.assertEqual(ctx.exception.returncode, EXIT_NO_SOLITON)
        self.assertIn("no soliton", str(ctx.exception))

    def test_not_minimal(self):
        with self.assertRaises(CommandError) as ctx:
            _call("build", config=_fixture("not_minimal"))
        self.assertEqual(ctx.exception.returncode, EXIT_INVALID)

    def test_parse_errors(self):
        for name in ("malformed", "wrong_shape", "does_not_exist"):
            with self.subTest(name=name), self.assertRaises(CommandError) as ctx:
                _call("build", config=_fixture(name))
            self.assertEqual(ctx.exception.returncode, EXIT_PARSE)

    def test_non_positive_tol(self):
        with self.assertRaises(CommandError) as ctx:
            _call("build", config=_fixture("example_real_eigenvalue"), tol=-1.0)
        self.assertEqual(ctx.exception.returncode, EXIT_PARSE)


# ── sample command ─────────────────────────────────────────────────────────────

class SampleCommandTests(SimpleTestCase):
    def _rows(self, name, **options):
        out = _call("sample", config=_fixture(name), **options)
        return list(csv.reader(io.StringIO(out)))

    def test_row_count(self):
        rows = self._rows("example_real_eigenvalue", x_min=-5.0, x_max=5.0, nx=21, t_min=0.0, t_max=1.0, nt=4)
        self.assertEqual(len(rows), 21 * 4 + 1)
        self.assertEqual(tuple(rows[0]), CSV_COLUMNS)

    def test_constant_background(self):
        rows = self._rows("constant_background", nx=11, nt=3)
        for row in rows[1:]:
            self.assertAlmostEqual(float(row[4]), 1.5, places=12)

    def test_limits_at_both_ends(self):
        rows = self._rows("example_real_eigenvalue", x_min=-30.0, x_max=30.0, nx=3, t_min=0.0, t_max=0.5, nt=2)
        for row in rows[1:]:
            if row[0] != "0.0":
                self.assertAlmostEqual(float(row[4]), 1.0, places=8)

    def test_golden_values(self):
        options = {"x_min": -4.0, "x_max": 4.0, "nx": 9, "t_min": 0.0, "t_max": 0.4, "nt": 3}
        rows = self._rows("example_real_eigenvalue", **options)
        sol = build_solution(load_config(_fixture("example_real_eigenvalue")))
        grid = sample_grid(sol, np.linspace(-4.0, 4.0, 9), np.linspace(0.0, 0.4, 3))
        expected = [format_real(value) for value in grid.q.real.ravel()]
        self.assertEqual([row[2] for row in rows[1:]], expected)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "q.csv"
            out = _call("sample", config=_fixture("constant_background"), out=str(target), nx=5, nt=2)
            self.assertIn("Wrote 10 rows", out)
            self.assertEqual(len(target.read_text().splitlines()), 11)

    def test_empty_grid(self):
        with self.assertRaises(CommandError) as ctx:
            _call("sample", config=_fixture("constant_background"), nx=0)
        self.assertEqual(ctx.exception.returncode, EXIT_PARSE)


# ── verify command ─────────────────────────────────────────────────────────────

class VerifyCommandTests(SimpleTestCase):
    def test_fast_passes(self):
        out = _call("verify", config=_fixture("example_real_eigenvalue"))
        self.assertIn("level   : fast", out)
        self.assertIn("verdict : PASS", out)

    def test_conjugate_pair_example_passes(self):
        out = _call("verify", config=_fixture("example_conjugate_eigenvalues"))
        self.assertIn("verdict : PASS", out)

    def test_full_passes(self):
        out = _call("verify", config=_fixture("example_real_eigenvalue"), level="full")
        self.assertIn("case    : superexceptional", out)
        self.assertIn("verdict : PASS", out)

    @override_settings(QUATNLS_CORRUPT_P=1e-3)
    def test_corrupted_p_fails(self):
        with self.assertRaises(CommandError) as ctx:
            _call("verify", config=_fixture("example_real_eigenvalue"))
        self.assertEqual(ctx.exception.returncode, EXIT_VERIFY_FAILED)
        self.assertIn("sylvester", str(ctx.exception))

    def test_strict_flag(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "report.txt"
            with self.assertRaises(CommandError) as ctx:
                _call("verify", config=_fixture("example_real_eigenvalue"), strict=True, out=str(target))
            text = target.read_text()
        self.assertEqual(ctx.exception.returncode, EXIT_VERIFY_FAILED)
        self.assertIn("nls:convergence", str(ctx.exception))
        self.assertIn("strict  : true", text)
        self.assertIn("verdict : FAIL", text)

    @override_settings(QUATNLS_STRICT_DYNAMICS=True)
    def test_strict_setting(self):
        with self.assertRaises(CommandError) as ctx:
            _call("verify", config=_fixture("example_real_eigenvalue"))
        self.assertEqual(ctx.exception.returncode, EXIT_VERIFY_FAILED)
        self.assertIn("nls:convergence", str(ctx.exception))
        self.assertIn("potential-relation:diagonal", str(ctx.exception))

    def test_report_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "report.txt"
            _call("verify", config=_fixture("example_real_eigenvalue"), out=str(target))
            text = target.read_text()
        self.assertTrue(text.startswith("report  : example-real-eigenvalue"))
        self.assertIn("verdict : PASS", text)

    def test_unknown_level(self):
        with self.assertRaises(CommandError) as ctx:
            _call("verify", config=_fixture("example_real_eigenvalue"), level="thorough")
        self.assertEqual(ctx.exception.returncode, EXIT_PARSE)


# ── scan_singular command ──────────────────────────────────────────────────────

class ScanSingularCommandTests(SimpleTestCase):
    def test_negative_multiple(self):
        out = _call("scan_singular", config=_fixture("negative_multiple"), t=0.0, x_min=-5.0, x_max=5.0)
        self.assertIn("singular points  : 1", out)
        sol = build_solution(load_config(_fixture("negative_multiple")))
        report = singular_locus(sol, 0.0, x_range=(-5.0, 5.0))
        self.assertAlmostEqual(report.singular_points[0], math.log(3.0), places=6)
        for line in locus_lines(report):
            self.assertIn(line, out)

    def test_regular_example(self):
        out = _call("scan_singular", config=_fixture("example_real_eigenvalue"), t=0.0)
        self.assertIn("singular points  : 0", out)

    def test_half_range(self):
        with self.assertRaises(CommandError) as ctx:
            _call("scan_singular", config=_fixture("negative_multiple"), x_min=-5.0)
        self.assertEqual(ctx.exception.returncode, EXIT_PARSE)

    def test_bad_range(self):
        for options in ({"x_min": 5.0, "x_max": -5.0}, {"x_min": -5.0, "x_max": 5.0, "nx": 1}):
            with self.subTest(**options), self.assertRaises(CommandError) as ctx:
                _call("scan_singular", config=_fixture("negative_multiple"), **options)
            self.assertEqual(ctx.exception.returncode, EXIT_PARSE)


# ── manage.py ──────────────────────────────────────────────────────────────────

class ManagePyExitCodeTests(SimpleTestCase):
    def _run(self, *args):
        return subprocess.run(
            [sys.executable, "manage.py", *args],
            cwd=settings.BASE_DIR,
            capture_output=True,
            text=True,
            timeout=120,
        )

    def test_exit_codes(self):
        cases = [
            ("example_real_eigenvalue", 0),
            ("no_soliton", EXIT_NO_SOLITON),
            ("not_minimal", EXIT_INVALID),
            ("malformed", EXIT_PARSE),
        ]
        for name, code in cases:
            with self.subTest(name=name):
                result = self._run("build", "--config", _fixture(name))
                self.assertEqual(result.returncode, code, result.stderr)

    def test_argument_errors(self):
        cases = [
            ("verify", "--config", _fixture("example_real_eigenvalue"), "--level", "thorough"),
            ("build", "--config", _fixture("example_real_eigenvalue"), "--tol", "abc"),
            ("build",),
        ]
        for args in cases:
            with self.subTest(args=args[-1]):
                result = self._run(*args)
                self.assertEqual(result.returncode, EXIT_PARSE, result.stderr)
