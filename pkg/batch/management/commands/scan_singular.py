"""
Management command: scan_singular

Lists the x where det(e^{2xA}e^{−tH} + P_r) vanishes at one fixed t.

Usage:
    python manage.py scan_singular --config fixtures/negative_multiple.json --t 0 --x-min -5 --x-max 5
"""

from django.core.management.base import BaseCommand

from batch.mixins import ConfigCommandMixin
from batch.services import ConfigParseError, build_solution, load_config, locus_lines
from quatnls.constants import SCAN_SAMPLES
from solitons.services import singular_locus


class Command(ConfigCommandMixin, BaseCommand):
    help = "Scan one time slice for singular points of the solution."

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument("--t", type=float, default=0.0, metavar="T", help="Time slice.")
        parser.add_argument("--x-min", type=float, default=None, metavar="X",
                            help="Left end of the scan (default: truncation box).")
        parser.add_argument("--x-max", type=float, default=None, metavar="X",
                            help="Right end of the scan (default: truncation box).")
        parser.add_argument("--nx", type=int, default=SCAN_SAMPLES, metavar="N", help="Scan grid size.")

    def handle(self, *args, **options):
        x_min, x_max = options["x_min"], options["x_max"]
        with self.exit_codes(options["config"]):
            if (x_min is None) != (x_max is None):
                raise ConfigParseError("--x-min and --x-max must be given together")
            if x_min is not None and not x_min < x_max:
                raise ConfigParseError(f"--x-min must be below --x-max (got {x_min}, {x_max})")
            if options["nx"] < 2:
                raise ConfigParseError(f"--nx must be at least 2, got {options['nx']}")
            sol = build_solution(load_config(options["config"]), tol=options["tol"])
            x_range = (x_min, x_max) if x_min is not None else None
            report = singular_locus(sol, options["t"], x_range=x_range, n_samples=options["nx"])

        for line in locus_lines(report):
            self.stdout.write(line)
        if report.count:
            self.stdout.write(self.style.WARNING(f"{report.count} singular point(s) found."))
        else:
            self.stdout.write(self.style.SUCCESS("No singular points."))
