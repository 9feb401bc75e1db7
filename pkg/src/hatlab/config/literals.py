# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Literal string and numeric constants for the hat laboratory."""

from enum import Enum

DIGITS = "0123456789"
MAX_COLOURS = len(DIGITS)
PASS_TOKEN = "p"
VIEW_SEPARATOR = "|"

GRAY = 0
BROWN = 1
COLOUR_NAMES = {GRAY: "gray", BROWN: "brown"}

DEFAULT_WORKERS = 1
EXACT_LIMIT = 10**8
TRACE_LIMIT = 4096
SEARCH_LIMIT = 10**9
COVERING_MAX_LENGTH = 6
MC_CHUNK = 65536

WORKERS_ENV = "HATLAB_WORKERS"

# Counter-based trial derivation (splitmix64 finaliser applied to seed + (t+1)*GOLDEN).
MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MUL_1 = 0xBF58476D1CE4E5B9
MIX_MUL_2 = 0x94D049BB133111EB
Z_95 = 1.96


class Visibility(str, Enum):
    """Which hats a player sees."""

    ALL_OTHERS = "all-others"
    AHEAD_ONLY = "ahead-only"


class Protocol(str, Enum):
    """How responses are collected."""

    SIMULTANEOUS = "simultaneous"
    SEQUENTIAL = "sequential"


class Objective(str, Enum):
    """What the group is trying to achieve."""

    NONE_WRONG = "at-least-one-correct-none-wrong"
    MAJORITY = "majority-correct"
    COUNT = "count-correct"


class OutputFormat(str, Enum):
    """Report formats offered by the command line."""

    TABLE = "table"
    JSON = "json"
    CSV = "csv"


class GameName(str, Enum):
    """Named games, as accepted by ``--game``."""

    EBERT = "ebert"
    MAJORITY = "majority"
    LINE = "line"
    NEWLINE = "newline"
    FULLSIGHT = "fullsight"
