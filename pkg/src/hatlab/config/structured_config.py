# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Structured configuration, loaded from YAML and validated with dacite."""

import logging
import os
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Optional

import dacite
import yaml

from hatlab.config.literals import (
    COVERING_MAX_LENGTH,
    DEFAULT_WORKERS,
    EXACT_LIMIT,
    MC_CHUNK,
    SEARCH_LIMIT,
    TRACE_LIMIT,
    WORKERS_ENV,
)
from hatlab.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HatlabConfig:
    """Runtime options shared by the managers and the command line."""

    workers: int = DEFAULT_WORKERS
    exact_limit: int = EXACT_LIMIT
    trace_limit: int = TRACE_LIMIT
    search_limit: int = SEARCH_LIMIT
    covering_max_length: int = COVERING_MAX_LENGTH
    mc_chunk: int = MC_CHUNK

    def __post_init__(self):
        for field in fields(self):
            if getattr(self, field.name) < 1:
                raise ConfigurationError(f"option {field.name} must be a positive integer")

    def replace(self, **changes: Any) -> "HatlabConfig":
        """Returns a copy with the non-None ``changes`` applied."""
        data = asdict(self)
        data.update({key: value for key, value in changes.items() if value is not None})
        return HatlabConfig(**data)


def _normalise(options: Mapping[str, Any]) -> dict[str, Any]:
    return {str(key).replace("-", "_"): value for key, value in options.items()}


def packaged_defaults() -> dict[str, Any]:
    """Reads the default of every option declared in the packaged config.yaml."""
    text = resources.files("hatlab.config").joinpath("config.yaml").read_text()
    options = yaml.safe_load(text)["options"]
    return _normalise({name: option["default"] for name, option in options.items()})


def load_config(
    path: Optional[Path] = None, environ: Optional[Mapping[str, str]] = None
) -> HatlabConfig:
    """Builds the configuration from defaults, an optional user file and the environment.

    Args:
        path: optional YAML file holding a flat mapping of option names to values.
        environ: environment to read HATLAB_WORKERS from, os.environ when omitted.

    Raises:
        ConfigurationError: on unreadable YAML, unknown options or wrongly typed values.
    """
    environ = os.environ if environ is None else environ
    data = packaged_defaults()

    if path is not None:
        try:
            user = yaml.safe_load(Path(path).read_text()) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigurationError(f"cannot read configuration {path}: {e}") from e
        if not isinstance(user, dict):
            raise ConfigurationError(f"configuration {path} must be a mapping of options")
        data.update(_normalise(user))

    if workers := environ.get(WORKERS_ENV):
        try:
            data["workers"] = int(workers)
        except ValueError as e:
            raise ConfigurationError(f"{WORKERS_ENV} must be an integer, got {workers!r}") from e

    try:
        config = dacite.from_dict(HatlabConfig, data, config=dacite.Config(strict=True))
    except dacite.DaciteError as e:
        raise ConfigurationError(f"invalid configuration: {e}") from e

    logger.debug("Loaded configuration %s", config)
    return config
