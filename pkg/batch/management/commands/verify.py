"""
Management command: verify

Builds a solution and runs the verification suite on it. The report is
written to --out (or stdout); the exit code is 1 when a gating check fails.

Usage:
    python manage.py verify --config fixtures/example_conjugate_eigenvalues.json --level full
"""

from django.core.management.base import BaseCommand, CommandError

from batch.mixins import ConfigCommandMixin
from batch.models import RunConfig
from batch.services import EXIT_VERIFY_FAILED, ConfigParseError, build_solution, load_config, report_lines, verify_solution
from scattering.models import VerificationLevel


class Command(ConfigCommandMixin, BaseCommand):
    help = "Run the verification suite on a triplet config (exit 1 when a gating check fails)."

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument(
            "--level",
            choices=VerificationLevel.values,
            default=VerificationLevel.FAST,
            help="fast: algebraic identities, symmetries and dynamics; full: adds scattering round trips.",
        )
        parser.add_argument(
            "--strict",
            action="store_true",
            help="Let the dynamical checks decide the verdict instead of reporting them as advisory.",
        )
        parser.add_argument("--out", type=str, default=None, metavar="PATH",
                            help="Report destination (default: stdout).")

    def handle(self, *args, **options):
        with self.exit_codes(options["config"]):
            if options["level"] not in VerificationLevel.values:
                raise ConfigParseError(f"unknown verification level {options['level']!r}")
            run = RunConfig(config_path=options["config"], command="verify", tol=options["tol"], out=options["out"])
            sol = build_solution(load_config(run.config_path), tol=run.tol)
            report = verify_solution(sol, options["level"], strict=options["strict"])

        lines = report_lines(report)
        if run.out is None:
            for line in lines:
                self.stdout.write(line)
        else:
            with open(run.out, "w", encoding="utf-8") as handle:
                handle.write("\n".join(lines) + "\n")
            self.stdout.write(f"Report written to {run.out}")

        for check in report.advisory_failures:
            self.stdout.write(self.style.WARNING(f"advisory check failed: {check.name}"))

        if not report.passed:
            names = ", ".join(check.name for check in report.failed)
            raise CommandError(f"verification failed: {names}", returncode=EXIT_VERIFY_FAILED)
        self.stdout.write(self.style.SUCCESS("All gating checks passed."))
