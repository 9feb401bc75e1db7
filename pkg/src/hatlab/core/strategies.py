# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Deterministic strategy tables and the named strategies that generate them.

A strategy rule answers a View. Rules are materialised into StrategyTables over every
view reachable in their game, keyed by (player, canonical view key); tables are what the
engine plays, what the file format stores and what searches return.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional

from overrides import override

from hatlab.config.literals import BROWN, GRAY, GameName, Objective, Protocol
from hatlab.core.codes import Code, hamming_code
from hatlab.core.game import (
    PASS,
    GameSpec,
    Response,
    View,
    all_configurations,
    check_response,
    guess,
    rank_configuration,
    view_of,
    visible_players,
)
from hatlab.core.orientation import Orientation, berlekamp_orientation
from hatlab.exceptions import DomainError, StrategyError, UsageError

logger = logging.getLogger(__name__)

EntryKey = tuple[int, str]


@dataclass(frozen=True)
class StrategyTable:
    """Total map from (player, view key) to a response, for one game."""

    game: GameSpec
    entries: Mapping[EntryKey, Response]
    name: str = field(default="table", compare=False)

    def response_for(self, player: int, key: str) -> Response:
        """Looks the response up; a missing view is a strategy error."""
        try:
            return self.entries[(player, key)]
        except KeyError:
            raise StrategyError(f"player {player} has no response for view {key!r}") from None

    def respond(self, view: View) -> Response:
        """Response to a View."""
        return self.response_for(view.observer, view.key)

    def __len__(self) -> int:
        return len(self.entries)

    def reachable_keys(self) -> Iterator[EntryKey]:
        """Every (player, key) pair some configuration leads to, in play order."""
        yield from _reachable(self.game, self.respond)

    def check(self) -> None:
        """Verifies totality over reachable views and legality of every entry.

        Raises:
            StrategyError: naming the first missing view or illegal response.
        """
        for _ in self.reachable_keys():
            pass
        for (player, _), response in self.entries.items():
            check_response(self.game, player, response)

    @classmethod
    def from_rule(cls, rule: "StrategyRule") -> "StrategyTable":
        """Materialises ``rule`` over every reachable view of its game."""
        entries: dict[EntryKey, Response] = {}

        def answer(view: View) -> Response:
            key = (view.observer, view.key)
            if key not in entries:
                response = rule.respond(view)
                check_response(rule.game, view.observer, response)
                entries[key] = response
            return entries[key]

        for _ in _reachable(rule.game, answer):
            pass
        logger.debug("Materialised %s with %d entries", rule.name, len(entries))
        return cls(game=rule.game, entries=entries, name=rule.name)


def _reachable(game: GameSpec, answer: Callable[[View], Response]) -> Iterator[EntryKey]:
    if not game.sequential:
        # every assignment of the others' colours is a view
        for player in range(1, game.n + 1):
            others = visible_players(game, player)
            for colours in itertools.product(range(game.q), repeat=len(others)):
                view = View(observer=player, visible=tuple(zip(others, colours)))
                answer(view)
                yield player, view.key
        return

    for cfg in all_configurations(game.n, game.q):
        heard: list[Response] = []
        for player in range(1, game.n + 1):
            view = view_of(game, cfg, player, heard)
            yield player, view.key
            response = answer(view)
            heard.append(response)
            if game.decided_by_first_guess and not response.is_pass:
                break


class StrategyRule(ABC):
    """A deterministic rule mapping views to responses."""

    name = "rule"

    def __init__(self, game: GameSpec):
        self.game = game

    @abstractmethod
    def respond(self, view: View) -> Response:
        """Response of ``view.observer``."""

    def table(self) -> StrategyTable:
        """Materialised table."""
        return StrategyTable.from_rule(self)


def _require(game: GameSpec, condition: bool, requirement: str) -> None:
    if not condition:
        raise UsageError(f"strategy needs {requirement}, got {game.header()}")


class SameColourRule(StrategyRule):
    """Seeing two equal hats, guess the other colour; otherwise pass."""

    name = "ebert3"

    @override
    def respond(self, view: View) -> Response:
        first, second = view.colours
        return guess(1 - first) if first == second else PASS


class SingleGuesserRule(StrategyRule):
    """Player 1 guesses gray, everybody else passes."""

    name = "single-guesser"

    @override
    def respond(self, view: View) -> Response:
        return guess(GRAY) if view.observer == 1 else PASS


class CoveringCodeRule(StrategyRule):
    """Treats the codewords as bad configurations.

    A player whose colour could complete exactly one codeword guesses the other colour;
    with no or two completing codewords, he passes.
    """

    name = "covering-code"

    def __init__(self, game: GameSpec, code: Code):
        super().__init__(game)
        self.code = code

    @override
    def respond(self, view: View) -> Response:
        position = view.observer - 1
        colours = view.colours
        completions = [colours[:position] + (c,) + colours[position:] for c in (GRAY, BROWN)]
        inside = [word in self.code for word in completions]
        if inside == [True, False]:
            return guess(BROWN)
        if inside == [False, True]:
            return guess(GRAY)
        return PASS


class LineSumRule(StrategyRule):
    """Player 1 announces the sum ahead mod q; the others solve for their own colour."""

    name = "line-sum"

    @override
    def respond(self, view: View) -> Response:
        q = self.game.q
        if view.observer == 1:
            return guess(sum(view.colours) % q)
        if any(r.is_pass for r in view.heard):
            raise StrategyError("the line sum strategy cannot hear a pass")
        announced, *heard = (r.guess for r in view.heard)
        return guess((announced - sum(heard) - sum(view.colours)) % q)


class GrayRule(StrategyRule):
    """Pass on seeing a gray hat ahead, otherwise guess gray; heard responses are ignored."""

    name = "gray"

    @override
    def respond(self, view: View) -> Response:
        return PASS if GRAY in view.colours else guess(GRAY)


class CyclicMajorityRule(StrategyRule):
    """Each player votes the opposite of the next player's hat, the last one of the first's."""

    name = "cyclic"

    @override
    def respond(self, view: View) -> Response:
        target = view.observer % self.game.n + 1
        return guess(1 - view.colour_of(target))


class OrientationRule(StrategyRule):
    """The player's view picks an edge of the cube; guess the own coordinate of its head."""

    name = "berlekamp"

    def __init__(self, game: GameSpec, orientation: Orientation):
        super().__init__(game)
        self.orientation = orientation

    @override
    def respond(self, view: View) -> Response:
        n = self.game.n
        bit = 1 << (n - view.observer)
        position = view.observer - 1
        colours = view.colours
        low = rank_configuration(colours[:position] + (0,) + colours[position:], 2)
        head = self.orientation.head(low, low | bit)
        return guess(1 if head & bit else 0)


def ebert_three_player() -> StrategyTable:
    """The three player rule of Ebert's game."""
    return SameColourRule(GameSpec.ebert(3, 2)).table()


def single_guesser_strategy(n: int = 3) -> StrategyTable:
    """Ebert baseline winning half of the time."""
    return SingleGuesserRule(GameSpec.ebert(n, 2)).table()


def covering_code_strategy(code: Code, require_radius: bool = True) -> StrategyTable:
    """Ebert strategy using the codewords as bad configurations.

    Raises:
        StrategyError: when the code is not binary or, with ``require_radius``, its
            covering radius 1 has not been verified.
    """
    if code.q != 2:
        raise StrategyError("covering code strategies need a binary code")
    if require_radius and code.radius != 1:
        raise StrategyError("covering code strategies need a verified covering radius of 1")
    rule = CoveringCodeRule(GameSpec.ebert(code.n, 2), code)
    if code.radius == 1 and code.is_perfect:
        rule.name = "hamming"
    return rule.table()


def bad_configuration_strategy(bad: Iterable[tuple[int, ...]]) -> StrategyTable:
    """Ebert strategy from an arbitrary set of bad configurations."""
    words = frozenset(tuple(w) for w in bad)
    if not words:
        raise DomainError("the set of bad configurations must not be empty")
    n = len(next(iter(words)))
    return covering_code_strategy(Code(n=n, q=2, words=words), require_radius=False)


def line_sum_strategy(n: int, q: int) -> StrategyTable:
    """Modular sum strategy for hats on a line."""
    if n < 2:
        raise UsageError("the line sum strategy needs at least two players")
    return LineSumRule(GameSpec.hats_on_a_line(n, q)).table()


def gray_strategy(n: int, q: int) -> StrategyTable:
    """The Gray Strategy for the new hats-on-a-line game."""
    return GrayRule(GameSpec.new_line(n, q)).table()


def cyclic_majority_strategy(n: int = 3) -> StrategyTable:
    """Cyclic opposite-vote strategy for the majority game."""
    return CyclicMajorityRule(GameSpec.majority(n, 2)).table()


def orientation_majority_strategy(orientation: Orientation) -> StrategyTable:
    """Majority strategy reading guesses off an oriented cube."""
    return OrientationRule(GameSpec.majority(orientation.n, 2), orientation).table()


def _hamming_order(n: int) -> Optional[int]:
    m = (n + 1).bit_length() - 1
    return m if 2**m - 1 == n else None


def _same_game(game: GameSpec, expected: GameSpec) -> bool:
    return (game.visibility, game.protocol, game.objective) == (
        expected.visibility,
        expected.protocol,
        expected.objective,
    )


def _build_ebert3(game: GameSpec) -> StrategyTable:
    _require(game, game == GameSpec.ebert(3, 2), "ebert -n 3 -q 2")
    return ebert_three_player()


def _build_single(game: GameSpec) -> StrategyTable:
    _require(game, game == GameSpec.ebert(game.n, 2), "ebert with q 2")
    return single_guesser_strategy(game.n)


def _build_hamming(game: GameSpec) -> StrategyTable:
    m = _hamming_order(game.n)
    _require(game, game == GameSpec.ebert(game.n, 2) and m is not None, "ebert, q 2, n = 2^m-1")
    return covering_code_strategy(hamming_code(m))


def _build_line_sum(game: GameSpec) -> StrategyTable:
    _require(game, _same_game(game, GameSpec.hats_on_a_line(2, 2)), "the line game")
    return line_sum_strategy(game.n, game.q)


def _build_gray(game: GameSpec) -> StrategyTable:
    _require(
        game,
        game.protocol == Protocol.SEQUENTIAL and game.objective == Objective.NONE_WRONG,
        "a sequential game with Ebert's objective",
    )
    return GrayRule(game).table()


def _build_cyclic(game: GameSpec) -> StrategyTable:
    _require(game, game == GameSpec.majority(game.n, 2) and game.n >= 2, "majority with q 2")
    return cyclic_majority_strategy(game.n)


def _build_berlekamp(game: GameSpec) -> StrategyTable:
    m = _hamming_order(game.n)
    _require(
        game, game == GameSpec.majority(game.n, 2) and m in (2, 3), "majority, q 2, n 3 or 7"
    )
    return orientation_majority_strategy(berlekamp_orientation(m))


@dataclass(frozen=True)
class BuiltinStrategy:
    """A named generator, as listed by --list-strategies."""

    name: str
    game: GameName
    description: str
    build: Callable[[GameSpec], StrategyTable]


BUILTIN_STRATEGIES: dict[str, BuiltinStrategy] = {
    s.name: s
    for s in (
        BuiltinStrategy(
            "ebert3", GameName.EBERT, "same colour seen: guess the other", _build_ebert3
        ),
        BuiltinStrategy(
            "single-guesser", GameName.EBERT, "player 1 guesses gray, others pass", _build_single
        ),
        BuiltinStrategy(
            "hamming", GameName.EBERT, "Hamming codewords as bad configurations", _build_hamming
        ),
        BuiltinStrategy(
            "line-sum", GameName.LINE, "announce the sum ahead mod q", _build_line_sum
        ),
        BuiltinStrategy(
            "gray", GameName.NEWLINE, "pass on seeing gray, else guess gray", _build_gray
        ),
        BuiltinStrategy(
            "cyclic", GameName.MAJORITY, "vote against the next player's hat", _build_cyclic
        ),
        BuiltinStrategy(
            "berlekamp",
            GameName.MAJORITY,
            "oriented cube around a Hamming code",
            _build_berlekamp,
        ),
    )
}


def builtin_strategy(name: str, game: GameSpec) -> StrategyTable:
    """Builds the built-in strategy ``name`` for ``game``.

    Raises:
        UsageError: for an unknown name or a game the strategy does not play.
    """
    try:
        entry = BUILTIN_STRATEGIES[name]
    except KeyError:
        raise UsageError(f"unknown strategy {name!r}") from None
    return entry.build(game)
