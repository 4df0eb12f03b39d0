from contextlib import contextmanager

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from vsatlink.exceptions import ConfigError, VsatlinkError

CONFIG_ERROR_EXIT = 2
PIPELINE_ERROR_EXIT = 3


@contextmanager
def exit_codes():
    """Map simulator errors onto the command exit codes."""
    try:
        yield
    except ConfigError as e:
        raise CommandError("\n".join(e.errors), returncode=CONFIG_ERROR_EXIT) from e
    except VsatlinkError as e:
        raise CommandError(str(e), returncode=PIPELINE_ERROR_EXIT) from e


class ScenarioCommand(BaseCommand):
    """Commands that read a scenario file, the shipped one by default."""

    def add_arguments(self, parser):
        parser.add_argument(
            "config",
            nargs="?",
            default=None,
            help="Scenario JSON file (default: the shipped C-band scenario).",
        )

    def scenario_path(self, options):
        return options["config"] or settings.VSATLINK["DEFAULT_SCENARIO"]
