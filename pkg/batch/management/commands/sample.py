"""
Management command: sample

Evaluates q on an (x, t) grid and writes it as CSV, one row per grid point.

Usage:
    python manage.py sample --config fixtures/example_real_eigenvalue.json \\
        --out q.csv --x-min -10 --x-max 10 --nx 201 --t-min 0 --t-max 1 --nt 11

Columns: x,t,re_q,im_q,abs_q,re_qtilde,im_qtilde. Singular points are ``nan``.
"""

import io

from django.conf import settings
from django.core.management.base import BaseCommand

from batch.mixins import ConfigCommandMixin
from batch.models import RunConfig
from batch.services import build_solution, load_config, write_samples_csv
from solitons.services import sample_grid


class Command(ConfigCommandMixin, BaseCommand):
    help = "Sample q(x, t) and its gauge-transformed q~ on a grid and write CSV."

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument("--out", type=str, default=None, metavar="PATH",
                            help="CSV destination (default: stdout).")
        parser.add_argument("--x-min", type=float, default=-10.0, metavar="X")
        parser.add_argument("--x-max", type=float, default=10.0, metavar="X")
        parser.add_argument("--nx", type=int, default=201, metavar="N", help="Number of x samples.")
        parser.add_argument("--t-min", type=float, default=0.0, metavar="T")
        parser.add_argument("--t-max", type=float, default=1.0, metavar="T")
        parser.add_argument("--nt", type=int, default=11, metavar="N", help="Number of t samples.")

    def handle(self, *args, **options):
        with self.exit_codes(options["config"]):
            run = RunConfig(
                config_path=options["config"],
                command="sample",
                x_min=options["x_min"],
                x_max=options["x_max"],
                n_x=options["nx"],
                t_min=options["t_min"],
                t_max=options["t_max"],
                n_t=options["nt"],
                tol=options["tol"],
                out=options["out"],
            )
            sol = build_solution(load_config(run.config_path), tol=run.tol)
            grid = sample_grid(sol, run.xs, run.ts, workers=settings.QUATNLS_THREADS)

        if run.out is None:
            buffer = io.StringIO()
            rows = write_samples_csv(grid, sol.mu, buffer)
            self.stdout.write(buffer.getvalue(), ending="")
        else:
            with open(run.out, "w", encoding="utf-8", newline="") as handle:
                rows = write_samples_csv(grid, sol.mu, handle)
            self.stdout.write(self.style.SUCCESS(f"Wrote {rows} rows to {run.out}"))

        if grid.singular_count:
            self.stderr.write(
                self.style.WARNING(f"{grid.singular_count} singular grid point(s) written as nan")
            )
