"""
Command-line entry point: ``mhd-esfv EXPERIMENT --config FILE [--key value ...]``.
"""
import logging
from pathlib import Path
from typing import Optional

import click
from rich.logging import RichHandler

from mhd_esfv.core.config import settings
from mhd_esfv.core.exceptions import EXIT_OK, EXIT_UNEXPECTED, MHDError
from mhd_esfv.schemas.run import Experiment
from mhd_esfv.services.experiment_service import ExperimentService
from mhd_esfv.utils.config_file import load_run_config
from mhd_esfv.utils.reporting import error_report, success_report

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False) -> None:
    """Route package logging through a rich handler."""
    level = logging.DEBUG if verbose else settings.effective_log_level
    logging.basicConfig(
        level=level,
        format="%(name)s - %(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=False)],
        force=True,
    )


@click.command(
    context_settings={"ignore_unknown_options": True, "allow_extra_args": True},
)
@click.argument(
    "experiment",
    type=click.Choice([e.value for e in Experiment], case_sensitive=False),
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(path_type=Path, dir_okay=False),
    default=None,
    help="key=value run configuration file",
)
@click.option("--verbose", "-v", is_flag=True, help="Log at debug level")
@click.argument("overrides", nargs=-1, type=click.UNPROCESSED)
@click.pass_context
def cli(
    ctx: click.Context,
    experiment: str,
    config_path: Optional[Path],
    verbose: bool,
    overrides: tuple[str, ...],
) -> None:
    """Run one verification EXPERIMENT; any --key value pair overrides the config file."""
    configure_logging(verbose)
    logger.info(f"{settings.app_name} {settings.app_version}")
    try:
        config = load_run_config(experiment, config_path, overrides)
        summary = ExperimentService(config).run()
    except MHDError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        error_report(str(exc), exc.exit_code)
        ctx.exit(exc.exit_code)
    except Exception as exc:
        logger.exception(f"unexpected failure: {exc}")
        error_report(str(exc), EXIT_UNEXPECTED)
        ctx.exit(EXIT_UNEXPECTED)
    success_report(summary)
    ctx.exit(EXIT_OK)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
