"""
batch/mixins.py

Shared management-command mixins for the batch commands.
"""

import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from django.core.management.base import CommandError

from batch.services import EXIT_PARSE, ConfigParseError, exit_code_for
from matrices.services import MatrixError
from quaternions.services import QuaternionError
from scattering.services import ScatteringError
from solitons.services import SolitonError
from triplets.services import TripletValidationError

logger = logging.getLogger(__name__)

_HANDLED = (
    ConfigParseError,
    TripletValidationError,
    MatrixError,
    QuaternionError,
    SolitonError,
    ScatteringError,
)


class ConfigCommandMixin:
    """
    Drop-in mixin for BaseCommand subclasses that read one triplet config.

    Adds ``--config`` and ``--tol`` and turns library exceptions into
    CommandError carrying the exit code of the batch contract. Argument
    errors reported by argparse exit with EXIT_PARSE as well.
    """

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(EXIT_PARSE, f"{parser.prog}: error: {message}\n")
            raise CommandError(f"Error: {message}", returncode=EXIT_PARSE)

        parser.error = error
        return parser

    def add_config_arguments(self, parser):
        parser.add_argument(
            "--config",
            type=Path,
            required=True,
            metavar="PATH",
            help="Path to the JSON triplet config.",
        )
        parser.add_argument(
            "--tol",
            type=float,
            default=None,
            metavar="FLOAT",
            help="Relative tolerance of the | |q_l| − mu | admissibility test.",
        )

    @contextmanager
    def exit_codes(self, config_path):
        try:
            yield
        except _HANDLED as exc:
            code = exit_code_for(exc)
            logger.error("%s rejected (exit %d): %s", config_path, code, exc)
            raise CommandError(str(exc), returncode=code) from exc
