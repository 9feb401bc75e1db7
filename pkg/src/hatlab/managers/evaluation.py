# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Exact evaluation of strategies over every configuration."""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from hatlab.config.literals import EXACT_LIMIT, TRACE_LIMIT, Objective
from hatlab.core.game import GameSpec, Trace, play, unrank_configuration
from hatlab.core.strategies import StrategyTable
from hatlab.exceptions import CapacityError
from hatlab.utils.parallel import run_chunks, split_range

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tally:
    """Additive counts over a range of configurations."""

    wins: int = 0
    configurations: int = 0
    correct_guesses: int = 0
    incorrect_guesses: int = 0

    def __add__(self, other: "Tally") -> "Tally":
        return Tally(
            wins=self.wins + other.wins,
            configurations=self.configurations + other.configurations,
            correct_guesses=self.correct_guesses + other.correct_guesses,
            incorrect_guesses=self.incorrect_guesses + other.incorrect_guesses,
        )

    @classmethod
    def of(cls, trace: Trace) -> "Tally":
        """Counts of a single play."""
        return cls(
            wins=int(trace.won),
            configurations=1,
            correct_guesses=trace.correct_count,
            incorrect_guesses=trace.incorrect_count,
        )


@dataclass(frozen=True)
class EvalReport:
    """Exact result of a strategy over all q^n configurations."""

    game: GameSpec
    strategy: str
    wins: int
    total: int
    correct_guesses: int
    incorrect_guesses: int
    traces: Optional[tuple[Trace, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if not 0 <= self.wins <= self.total:
            raise ValueError(f"wins {self.wins} outside [0, {self.total}]")

    @property
    def probability(self) -> Fraction:
        """Win probability, in lowest terms."""
        return Fraction(self.wins, self.total)

    @property
    def mean_correct(self) -> Optional[Fraction]:
        """Expected number of correct guesses; count games only."""
        if self.game.objective != Objective.COUNT:
            return None
        return Fraction(self.correct_guesses, self.total)


def _sweep(args: tuple[GameSpec, StrategyTable, int, int]) -> Tally:
    game, strategy, lo, hi = args
    tally = Tally()
    for rank in range(lo, hi):
        tally += Tally.of(play(game, strategy, unrank_configuration(rank, game.n, game.q)))
    return tally


def _guard(game: GameSpec, limit: int, what: str) -> None:
    if game.size > limit:
        raise CapacityError(f"{what} of {game.size} configurations exceeds the limit of {limit}")


def evaluate_exact(
    game: GameSpec, strategy: StrategyTable, workers: int = 1, limit: int = EXACT_LIMIT
) -> EvalReport:
    """Plays every configuration in rank order and tallies the results.

    The rank range is split into contiguous chunks, one per worker, and the tallies added;
    the report does not depend on ``workers``.

    Raises:
        CapacityError: when q^n exceeds ``limit``.
    """
    _guard(game, limit, "exact sweep")
    start = time.monotonic()
    chunks = [(game, strategy, lo, hi) for lo, hi in split_range(0, game.size, workers)]
    tally = sum(run_chunks(_sweep, chunks, workers), Tally())
    logger.info(
        "Evaluated %s over %d configurations in %.2fs: %d wins",
        strategy.name,
        tally.configurations,
        time.monotonic() - start,
        tally.wins,
    )
    return EvalReport(
        game=game,
        strategy=strategy.name,
        wins=tally.wins,
        total=game.size,
        correct_guesses=tally.correct_guesses,
        incorrect_guesses=tally.incorrect_guesses,
    )


def trace_table(
    game: GameSpec, strategy: StrategyTable, limit: int = TRACE_LIMIT
) -> EvalReport:
    """Like evaluate_exact, keeping one trace per configuration in rank order.

    Raises:
        CapacityError: when q^n exceeds ``limit``.
    """
    _guard(game, limit, "trace table")
    traces = tuple(
        play(game, strategy, unrank_configuration(rank, game.n, game.q))
        for rank in range(game.size)
    )
    tally = sum((Tally.of(trace) for trace in traces), Tally())
    return EvalReport(
        game=game,
        strategy=strategy.name,
        wins=tally.wins,
        total=game.size,
        correct_guesses=tally.correct_guesses,
        incorrect_guesses=tally.incorrect_guesses,
        traces=traces,
    )
