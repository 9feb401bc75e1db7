#!/usr/bin/env python3
# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Helper functions for writing tests."""

from typing import Mapping, Optional

from hatlab.core.game import PASS, GameSpec, Response, guess
from hatlab.core.strategies import StrategyTable


def response(token: Optional[int]) -> Response:
    """None for a pass, otherwise a guess of that colour."""
    return PASS if token is None else guess(token)


def table(game: GameSpec, entries: Mapping[tuple[int, str], Optional[int]]) -> StrategyTable:
    """Builds a strategy table from (player, key) -> colour or None."""
    return StrategyTable(
        game=game,
        entries={key: response(value) for key, value in entries.items()},
        name="test",
    )


def guesses(trace) -> tuple[Optional[int], ...]:
    """Guessed colours of a trace, None for passes."""
    return tuple(r.guess for r in trace.responses)
