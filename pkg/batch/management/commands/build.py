"""
Management command: build

Validates a triplet config and prints the boundary data of its solution.

Usage:
    python manage.py build --config fixtures/example_real_eigenvalue.json
"""

from django.core.management.base import BaseCommand

from batch.mixins import ConfigCommandMixin
from batch.models import RunConfig
from batch.services import build_solution, build_summary_lines, load_config


class Command(ConfigCommandMixin, BaseCommand):
    help = "Validate a triplet config and print q_r, q_l, theta_l, det P_r and the spectrum of A."

    def add_arguments(self, parser):
        self.add_config_arguments(parser)

    def handle(self, *args, **options):
        with self.exit_codes(options["config"]):
            run = RunConfig(config_path=options["config"], command="build", tol=options["tol"])
            sol = build_solution(load_config(run.config_path), tol=run.tol)

        for line in build_summary_lines(sol):
            self.stdout.write(line)
        self.stdout.write(self.style.SUCCESS("Triplet admissible."))
