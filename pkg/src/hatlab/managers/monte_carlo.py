# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Monte Carlo estimation under uniformly random hats."""

import logging
import math
from dataclasses import dataclass

from hatlab.config.literals import MC_CHUNK, Z_95
from hatlab.core.game import GameSpec, play, unrank_configuration
from hatlab.core.strategies import StrategyTable
from hatlab.exceptions import DomainError
from hatlab.utils.parallel import run_chunks, split_range
from hatlab.utils.rng import check_seed, trial_rank

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class McReport:
    """Estimate of a win probability from independent trials."""

    trials: int
    seed: int
    wins: int

    @property
    def estimate(self) -> float:
        """Fraction of winning trials."""
        return self.wins / self.trials

    @property
    def half_width_95(self) -> float:
        """Normal approximation half width of the 95% interval."""
        p = self.estimate
        return Z_95 * math.sqrt(p * (1 - p) / self.trials)

    def covers(self, value: float) -> bool:
        """Whether ``value`` lies in the 95% interval."""
        return abs(self.estimate - value) <= self.half_width_95


def _run_trials(args: tuple[GameSpec, StrategyTable, int, int, int]) -> int:
    game, strategy, seed, lo, hi = args
    # play is deterministic, so each configuration is played at most once per chunk
    outcomes: dict[int, bool] = {}
    wins = 0
    for trial in range(lo, hi):
        rank = trial_rank(seed, trial, game.size)
        if rank not in outcomes:
            cfg = unrank_configuration(rank, game.n, game.q)
            outcomes[rank] = play(game, strategy, cfg).won
        wins += outcomes[rank]
    return wins


def evaluate_monte_carlo(
    game: GameSpec,
    strategy: StrategyTable,
    trials: int,
    seed: int,
    workers: int = 1,
    chunk: int = MC_CHUNK,
) -> McReport:
    """Estimates the win probability from ``trials`` counter-derived configurations.

    Trial t plays the configuration derived from (seed, t) alone, so the report depends
    only on (seed, trials) and not on ``workers`` or ``chunk``.

    Raises:
        DomainError: when ``trials`` is not positive or ``seed`` is not a 64-bit value.
    """
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    check_seed(seed)
    parts = max(1, -(-trials // chunk))
    chunks = [(game, strategy, seed, lo, hi) for lo, hi in split_range(0, trials, parts)]
    wins = sum(run_chunks(_run_trials, chunks, workers))
    report = McReport(trials=trials, seed=seed, wins=wins)
    logger.info(
        "Simulated %s for %d trials (seed %d): %.5f +/- %.5f",
        strategy.name,
        trials,
        seed,
        report.estimate,
        report.half_width_95,
    )
    return report
