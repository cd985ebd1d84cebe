"""
Loading of key=value run configuration files with command-line overrides.
"""
import logging
from pathlib import Path
from typing import Optional, Sequence

from dotenv import dotenv_values
from pydantic import ValidationError

from mhd_esfv.core.config import settings
from mhd_esfv.core.exceptions import ConfigError
from mhd_esfv.schemas.run import RunConfig

logger = logging.getLogger(__name__)


def _normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_").lower()


def parse_overrides(tokens: Sequence[str]) -> dict[str, str]:
    """
    Turn ``--key value`` and ``--key=value`` tokens into a mapping.

    Raises:
        ConfigError: On a stray value or a key without a value
    """
    overrides: dict[str, str] = {}
    items = list(tokens)
    i = 0
    while i < len(items):
        token = items[i]
        if not token.startswith("--"):
            raise ConfigError(f"unexpected argument '{token}', overrides take the form --key value")
        if "=" in token:
            key, value = token.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(items):
                raise ConfigError(f"override '{token}' has no value")
            key, value = token, items[i + 1]
            i += 2
        overrides[_normalize_key(key)] = value
    return overrides


def read_config_file(path: Path) -> dict[str, str]:
    """Read a flat key=value file; keys are normalized to snake case."""
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = dotenv_values(path)
    parsed: dict[str, str] = {}
    for key, value in values.items():
        if value is None:
            raise ConfigError(f"key '{key}' in {path} has no value")
        parsed[_normalize_key(key)] = value
    return parsed


def load_run_config(
    experiment: str,
    path: Optional[Path] = None,
    overrides: Sequence[str] = (),
) -> RunConfig:
    """
    Build a validated RunConfig from a config file and CLI overrides.

    The positional experiment must agree with an ``experiment`` key in the
    file. ``MHD_ESFV_OUTPUT_DIR`` replaces any configured output directory.

    Raises:
        ConfigError: Unreadable file, malformed overrides or failed validation
    """
    values: dict[str, str] = read_config_file(path) if path is not None else {}
    values.update(parse_overrides(overrides))

    file_experiment = values.pop("experiment", None)
    if file_experiment is not None and file_experiment.strip().lower() != experiment.lower():
        raise ConfigError(
            f"config is for experiment '{file_experiment}', not '{experiment}'"
        )
    if settings.output_dir_overridden:
        values["output_dir"] = str(settings.output_dir)

    try:
        config = RunConfig(experiment=experiment.lower(), **values)
    except ValidationError as exc:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
            for err in exc.errors()
        )
        raise ConfigError(f"invalid configuration: {details}") from exc
    logger.debug(f"loaded config: {config.model_dump(mode='json')}")
    return config
