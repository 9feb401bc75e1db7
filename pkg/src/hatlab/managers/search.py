# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Exhaustive search of deterministic strategy spaces for small hat games.

A profile gives every player a function from view index to a response code, 0 for a
pass and g + 1 for a guess of colour g. View indices rank the visible colours in
increasing player order, so they line up with canonical view keys. Profiles are compared
lexicographically: player 1's codes first, view 0 first.

Sequential profiles only depend on sight. Before the first guess every player has heard
passes only, and after it the round is decided, so the heard prefix carries nothing a
player could use.

Outcomes are evaluated on bitmasks over configuration ranks: every (player, view) pair
owns the mask of configurations producing that view, every (player, colour) pair the mask
of configurations giving the player that colour.
"""

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterator, NamedTuple, Optional, Sequence

from hatlab.config.literals import DIGITS, GRAY, SEARCH_LIMIT, Objective, Visibility
from hatlab.core.game import (
    PASS,
    GameSpec,
    Response,
    guess,
    play,
    rank_configuration,
    unrank_configuration,
)
from hatlab.core.strategies import StrategyTable
from hatlab.exceptions import CapacityError, DomainError, UsageError
from hatlab.utils.parallel import run_chunks, split_range

logger = logging.getLogger(__name__)

Profile = tuple[tuple[int, ...], ...]
CodeMasks = tuple[int, int]


@dataclass(frozen=True)
class StrategySpace:
    """View and colour masks of every player of an (n, q) game."""

    n: int
    q: int
    visibility: Visibility
    view_masks: tuple[tuple[int, ...], ...]
    colour_masks: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        """Number of configurations."""
        return self.q**self.n

    @property
    def full(self) -> int:
        """Mask of every configuration."""
        return (1 << self.size) - 1

    @property
    def view_counts(self) -> tuple[int, ...]:
        """Number of views of each player."""
        return tuple(len(masks) for masks in self.view_masks)

    @staticmethod
    def visible(cfg: Sequence[int], player: int, visibility: Visibility) -> tuple[int, ...]:
        """Visible colours of 0-based ``player``."""
        if visibility == Visibility.AHEAD_ONLY:
            return tuple(cfg[player + 1 :])
        return tuple(cfg[:player]) + tuple(cfg[player + 1 :])

    def code_masks(self, player: int, codes: Sequence[int]) -> CodeMasks:
        """(guessed, correct) masks of 0-based ``player`` answering with ``codes``."""
        guessed = correct = 0
        views = self.view_masks[player]
        colours = self.colour_masks[player]
        for view, code in enumerate(codes):
            if code:
                guessed |= views[view]
                correct |= views[view] & colours[code - 1]
        return guessed, correct

    def sequential_wins(self, masks: Sequence[CodeMasks]) -> int:
        """Winning configurations when the first guess decides the round."""
        undecided = self.full
        wins = 0
        for guessed, correct in masks:
            wins |= correct & undecided
            undecided &= ~guessed
        return wins.bit_count()

    def simultaneous_wins(self, masks: Sequence[CodeMasks], objective: Objective) -> int:
        """Winning configurations when everybody answers at once."""
        if objective == Objective.MAJORITY:
            return _at_least([correct for _, correct in masks], self.n // 2 + 1, self.full)
        right = wrong = 0
        for guessed, correct in masks:
            right |= correct
            wrong |= guessed & ~correct
        return (right & ~wrong).bit_count()


@lru_cache(maxsize=16)
def strategy_space(n: int, q: int, visibility: Visibility) -> StrategySpace:
    """Builds (and caches) the masks of an (n, q) game."""
    seen = n - 1
    view_masks = [
        [0] * q ** (n - 1 - player if visibility == Visibility.AHEAD_ONLY else seen)
        for player in range(n)
    ]
    colour_masks = [[0] * q for _ in range(n)]
    for rank in range(q**n):
        cfg = unrank_configuration(rank, n, q)
        bit = 1 << rank
        for player in range(n):
            view = rank_configuration(StrategySpace.visible(cfg, player, visibility), q)
            view_masks[player][view] |= bit
            colour_masks[player][cfg[player]] |= bit
    return StrategySpace(
        n=n,
        q=q,
        visibility=visibility,
        view_masks=tuple(map(tuple, view_masks)),
        colour_masks=tuple(map(tuple, colour_masks)),
    )


def _at_least(masks: Sequence[int], threshold: int, full: int) -> int:
    """Number of configurations where at least ``threshold`` masks have their bit set."""
    # bit-sliced counters: planes[b] holds bit b of every configuration's count
    planes: list[int] = []
    for mask in masks:
        carry = mask
        for index, plane in enumerate(planes):
            planes[index], carry = plane ^ carry, plane & carry
            if not carry:
                break
        if carry:
            planes.append(carry)
    above = 0
    equal = full
    for b in range(max(len(planes), threshold.bit_length()) - 1, -1, -1):
        plane = planes[b] if b < len(planes) else 0
        if threshold >> b & 1:
            equal &= plane
        else:
            above |= equal & plane
            equal &= ~plane
    return (above | equal).bit_count()


@dataclass(frozen=True)
class SearchResult:
    """Best win count over a strategy space and the lexicographically least witness."""

    game: GameSpec
    wins: int
    witness: Profile
    strategies_examined: int
    pruned: int

    @property
    def total(self) -> int:
        """Number of configurations."""
        return self.game.size

    @property
    def optimum(self) -> Fraction:
        """Maximum win probability."""
        return Fraction(self.wins, self.total)

    def strategy(self) -> StrategyTable:
        """The witness as a strategy table of ``game``."""
        return profile_table(self.game, self.witness)


@dataclass(frozen=True)
class BetaResult:
    """Most first-player passes over the optimal restricted profiles."""

    n: int
    q: int
    beta: int
    optimum: Fraction
    witness: Profile
    partition: tuple[int, int, int] = field(default=(0, 0, 0))

    @property
    def bound(self) -> int:
        """q^(n-1) - (q-1)^(n-1)."""
        return self.q ** (self.n - 1) - (self.q - 1) ** (self.n - 1)


class _Best(NamedTuple):
    wins: int
    witness: Optional[Profile]
    examined: int
    beta: int = -1
    beta_witness: Optional[Profile] = None


def _merge(results: Sequence[_Best]) -> _Best:
    """Associative max; ties go to the earlier, lexicographically smaller chunk."""
    best = results[0]
    beta, beta_witness = best.beta, best.beta_witness
    for result in results[1:]:
        if result.wins > best.wins:
            best = result
            beta, beta_witness = result.beta, result.beta_witness
        elif result.wins == best.wins and result.beta > beta:
            beta, beta_witness = result.beta, result.beta_witness
    return _Best(
        wins=best.wins,
        witness=best.witness,
        examined=sum(r.examined for r in results),
        beta=beta,
        beta_witness=beta_witness,
    )


def profile_table(game: GameSpec, profile: Profile) -> StrategyTable:
    """Turns a profile into a strategy table; sequential views hear passes only."""
    entries = {}
    for player, codes in enumerate(profile, start=1):
        heard = "p" * (player - 1) if game.sequential else ""
        width = game.n - player if game.visibility == Visibility.AHEAD_ONLY else game.n - 1
        for view, code in enumerate(codes):
            visible = "".join(DIGITS[c] for c in unrank_configuration(view, width, game.q))
            entries[(player, f"{visible}|{heard}")] = guess(code - 1) if code else PASS
    return StrategyTable(game=game, entries=entries, name="search-witness")


def _response_code(response: Response) -> int:
    return 0 if response.is_pass else response.guess + 1


def _codes(allow_pass: bool, q: int) -> range:
    return range(q + 1) if allow_pass else range(1, q + 1)


def _space_size(counts: Sequence[int], choices: int) -> int:
    return prod(choices**count for count in counts)


def _guard(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise CapacityError(f"{what} has {size} profiles, above the limit of {limit}")


class _Problem(NamedTuple):
    n: int
    q: int
    visibility: Visibility
    objective: Objective
    sequential: bool


def _player_options(
    problem: _Problem, player: int
) -> tuple[list[tuple[int, ...]], list[CodeMasks]]:
    space = strategy_space(problem.n, problem.q, problem.visibility)
    codes = _codes(problem.objective == Objective.NONE_WRONG, problem.q)
    options = list(itertools.product(codes, repeat=space.view_counts[player]))
    return options, [space.code_masks(player, option) for option in options]


def _exhaustive_chunk(args: tuple[_Problem, int, int]) -> _Best:
    problem, lo, hi = args
    space = strategy_space(problem.n, problem.q, problem.visibility)
    tables = [_player_options(problem, player) for player in range(problem.n)]
    first_options, first_masks = tables[0]
    rest = [range(len(options)) for options, _ in tables[1:]]

    best_wins, best_choice, examined = -1, None, 0
    for first in range(lo, hi):
        for choice in itertools.product(*rest):
            masks = [first_masks[first]] + [tables[p + 1][1][c] for p, c in enumerate(choice)]
            if problem.sequential:
                wins = space.sequential_wins(masks)
            else:
                wins = space.simultaneous_wins(masks, problem.objective)
            examined += 1
            if wins > best_wins:
                best_wins, best_choice = wins, (first,) + choice
    witness = tuple(tables[p][0][c] for p, c in enumerate(best_choice))
    return _Best(wins=best_wins, witness=witness, examined=examined)


def _run_exhaustive(problem: _Problem, workers: int) -> _Best:
    space = strategy_space(problem.n, problem.q, problem.visibility)
    choices = len(_codes(problem.objective == Objective.NONE_WRONG, problem.q))
    first = choices ** space.view_counts[0]
    chunks = [(problem, lo, hi) for lo, hi in split_range(0, first, max(workers, 1))]
    return _merge(run_chunks(_exhaustive_chunk, chunks, workers))


def _restricted_tails(
    space: StrategySpace,
    player: int,
    reach: frozenset[tuple[int, ...]],
    prefix: tuple[tuple[int, ...], ...],
) -> Iterator[Profile]:
    """Profiles of players >= ``player`` allowed to guess only a forced colour.

    ``reach`` holds the colour tuples (c_player, ..., c_n) for which every earlier player
    passes for some choice of the unseen colours in between.
    """
    if player == space.n:
        yield prefix
        return
    q = space.q
    consistent: list[set[int]] = [set() for _ in range(space.view_counts[player])]
    for tail in reach:
        consistent[rank_configuration(tail[1:], q)].add(tail[0])
    options = [
        [0, next(iter(colours)) + 1] if len(colours) == 1 else [0] for colours in consistent
    ]
    for codes in itertools.product(*options):
        later = frozenset(tail[1:] for tail in reach if not codes[rank_configuration(tail[1:], q)])
        yield from _restricted_tails(space, player + 1, later, prefix + (codes,))


def _first_player_codes(space: StrategySpace, index: int) -> tuple[int, ...]:
    # index bit (views - 1 - v) set means player 1 guesses gray on view v
    views = space.view_counts[0]
    return tuple(index >> (views - 1 - view) & 1 for view in range(views))


def _restricted_chunk(args: tuple[int, int, int, int]) -> _Best:
    n, q, lo, hi = args
    space = strategy_space(n, q, Visibility.AHEAD_ONLY)
    tails = [unrank_configuration(v, n - 1, q) for v in range(space.view_counts[0])]

    best_wins, witness, examined = -1, None, 0
    beta, beta_witness = -1, None
    for index in range(lo, hi):
        first = _first_player_codes(space, index)
        reach = frozenset(tail for tail, code in zip(tails, first) if not code)
        passes = len(reach)
        for profile in _restricted_tails(space, 1, reach, (first,)):
            masks = [space.code_masks(player, codes) for player, codes in enumerate(profile)]
            wins = space.sequential_wins(masks)
            examined += 1
            if wins > best_wins:
                best_wins, witness = wins, profile
                beta, beta_witness = passes, profile
            elif wins == best_wins and passes > beta:
                beta, beta_witness = passes, profile
    return _Best(best_wins, witness, examined, beta, beta_witness)


def _run_restricted(n: int, q: int, workers: int, limit: int) -> _Best:
    space = strategy_space(n, q, Visibility.AHEAD_ONLY)
    _guard(2 ** sum(space.view_counts), limit, f"restricted search ({n},{q})")
    first = 2 ** space.view_counts[0]
    chunks = [(n, q, lo, hi) for lo, hi in split_range(0, first, max(workers, 1))]
    return _merge(run_chunks(_restricted_chunk, chunks, workers))


def search_optimal_sequential(
    n: int,
    q: int,
    prune: bool = True,
    visibility: Visibility = Visibility.AHEAD_ONLY,
    workers: int = 1,
    limit: int = SEARCH_LIMIT,
) -> SearchResult:
    """Best win probability of the sequential game with Ebert's objective.

    Without pruning every profile is enumerated. With pruning, which needs line sight,
    player 1 guesses gray or passes on each view and later players may only guess a colour
    that is forced given that everybody before them passed; optimal strategies are
    restricted, so the optimum is unchanged.

    Raises:
        CapacityError: when the space to enumerate exceeds ``limit``.
    """
    if visibility == Visibility.AHEAD_ONLY:
        game = GameSpec.new_line(n, q)
    else:
        game = GameSpec.full_sight_sequential(n, q)
    space = strategy_space(n, q, visibility)
    full_size = _space_size(space.view_counts, q + 1)
    start = time.monotonic()
    if prune:
        if visibility != Visibility.AHEAD_ONLY:
            raise UsageError("restricted pruning applies to the hats-on-a-line game only")
        best = _run_restricted(n, q, workers, limit)
    else:
        _guard(full_size, limit, f"sequential search ({n},{q})")
        best = _run_exhaustive(_Problem(n, q, visibility, Objective.NONE_WRONG, True), workers)
    logger.info(
        "Sequential search (%d,%d) prune=%s: %d/%d after %d profiles in %.2fs",
        n,
        q,
        prune,
        best.wins,
        space.size,
        best.examined,
        time.monotonic() - start,
    )
    return SearchResult(
        game=game,
        wins=best.wins,
        witness=best.witness,
        strategies_examined=best.examined,
        pruned=full_size - best.examined,
    )


def search_optimal_simultaneous(
    n: int, q: int, objective: Objective, workers: int = 1, limit: int = SEARCH_LIMIT
) -> SearchResult:
    """Best win probability of a full-sight simultaneous game.

    Raises:
        CapacityError: when the profile space exceeds ``limit``.
        DomainError: for the count objective, which has no win probability to maximise.
    """
    if objective == Objective.COUNT:
        raise DomainError("simultaneous search supports the none-wrong and majority objectives")
    game = GameSpec.ebert(n, q) if objective == Objective.NONE_WRONG else GameSpec.majority(n, q)
    space = strategy_space(n, q, Visibility.ALL_OTHERS)
    size = _space_size(space.view_counts, len(_codes(game.allows_pass, q)))
    _guard(size, limit, f"simultaneous search ({n},{q})")
    start = time.monotonic()
    best = _run_exhaustive(_Problem(n, q, Visibility.ALL_OTHERS, objective, False), workers)
    logger.info(
        "Simultaneous search (%d,%d) %s: %d/%d after %d profiles in %.2fs",
        n,
        q,
        objective.value,
        best.wins,
        space.size,
        best.examined,
        time.monotonic() - start,
    )
    return SearchResult(
        game=game,
        wins=best.wins,
        witness=best.witness,
        strategies_examined=best.examined,
        pruned=0,
    )


def restricted_partition(n: int, q: int, profile: Profile) -> tuple[int, int, int]:
    """Sizes of A (player 1 guesses), B (only player 2 guesses), C (both pass)."""
    first = profile[0]
    a = sum(1 for code in first if code)
    if n == 1:
        return a, 0, len(first) - a
    second = profile[1]
    b = 0
    for view, code in enumerate(first):
        if not code:
            tail = unrank_configuration(view, n - 1, q)
            b += bool(second[rank_configuration(tail[1:], q)])
    return a, b, len(first) - a - b


def _first_guess(n: int, q: int, profile: Profile, cfg: tuple[int, ...], start: int):
    for player in range(start, n):
        code = profile[player][rank_configuration(cfg[player + 1 :], q)]
        if code:
            return player, code - 1
    return None


def restrict_profile(n: int, q: int, profile: Profile) -> Profile:
    """Makes player 1 guess gray on every view after which a later first guess is wrong."""
    first = list(profile[0])
    for view, code in enumerate(first):
        if code:
            continue
        tail = unrank_configuration(view, n - 1, q)
        decided = _first_guess(n, q, profile, (None,) + tail, 1)
        if decided is not None and decided[1] != tail[decided[0] - 1]:
            first[view] = GRAY + 1
    return (tuple(first),) + tuple(profile[1:])


def profile_wins(n: int, q: int, profile: Profile) -> int:
    """Winning configurations of a line-game profile."""
    space = strategy_space(n, q, Visibility.AHEAD_ONLY)
    return space.sequential_wins([space.code_masks(p, codes) for p, codes in enumerate(profile)])


def max_first_player_passes(
    n: int, q: int, workers: int = 1, limit: int = SEARCH_LIMIT
) -> BetaResult:
    """Most views on which player 1 passes, over restricted profiles reaching the optimum.

    Raises:
        CapacityError: when the restricted space exceeds ``limit``.
    """
    best = _run_restricted(n, q, workers, limit)
    logger.info("Beta (%d,%d): %d passes at optimum %d/%d", n, q, best.beta, best.wins, q**n)
    return BetaResult(
        n=n,
        q=q,
        beta=best.beta,
        optimum=Fraction(best.wins, q**n),
        witness=best.beta_witness,
        partition=restricted_partition(n, q, best.beta_witness),
    )


def table_profile(strategy: StrategyTable) -> Profile:
    """Reads a sight-only profile back out of a table whose views hear passes only."""
    game = strategy.game
    profile = []
    for player in range(1, game.n + 1):
        heard = "p" * (player - 1) if game.sequential else ""
        width = game.n - player if game.visibility == Visibility.AHEAD_ONLY else game.n - 1
        codes = []
        for view in range(game.q**width):
            visible = "".join(DIGITS[c] for c in unrank_configuration(view, width, game.q))
            response = strategy.entries.get((player, f"{visible}|{heard}"), PASS)
            codes.append(_response_code(response))
        profile.append(tuple(codes))
    return tuple(profile)


def verify_restricted(strategy: StrategyTable) -> bool:
    """Whether every guess made by a player other than the first is right, everywhere."""
    game = strategy.game
    if not game.decided_by_first_guess:
        raise DomainError("restricted strategies are defined for the new hats-on-a-line game")
    for rank in range(game.size):
        trace = play(game, strategy, unrank_configuration(rank, game.n, game.q))
        if any(mark is False for mark in trace.marks[1:]):
            return False
    return True


def gray_success_formula(n: int, q: int) -> Fraction:
    """1 - ((q-1)/q)^n."""
    return 1 - Fraction(q - 1, q) ** n


def two_player_value(q: int, r: int) -> Fraction:
    """Two-player value when player 1 guesses on ``r`` of her ``q`` views."""
    if not 0 <= r <= q:
        raise DomainError(f"r must lie in [0, {q}], got {r}")
    if r == q:
        return Fraction(1, q)
    return Fraction(r, q * q) + Fraction(1, q)
