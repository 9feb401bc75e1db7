# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""All the exceptions raised by the hat laboratory."""

from typing import Optional


class HatlabError(Exception):
    """Base class for every error raised by this package."""

    prefix = "ERROR"


class DomainError(HatlabError):
    """A value lies outside the range an operation is defined on."""


class ProtocolError(HatlabError):
    """A heard prefix does not match the game's response protocol."""


class StrategyError(HatlabError):
    """A strategy emitted an illegal response or misses a reachable view."""


class CapacityError(HatlabError):
    """An exhaustive computation would exceed its configured guard."""

    prefix = "CAPACITY"


class UsageError(HatlabError):
    """Command line flags are unknown or incompatible."""

    prefix = "USAGE"


class ConfigurationError(HatlabError):
    """Configuration file or environment could not be parsed."""

    prefix = "FORMAT"


class FormatError(HatlabError):
    """A strategy or code file is malformed."""

    prefix = "FORMAT"

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
