# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Configurations, views, responses and the deterministic play engine.

Players are numbered 1..n everywhere outside this module's loops. A configuration is a
tuple of colours in [0, q); colour 0 is gray and colour 1 is brown. Configurations are
ranked lexicographically with player 1 as the most significant digit.
"""

from dataclasses import dataclass
from typing import Iterator, Optional, Protocol, Sequence, Union

from hatlab.config.literals import (
    DIGITS,
    MAX_COLOURS,
    PASS_TOKEN,
    VIEW_SEPARATOR,
    GameName,
    Objective,
    Protocol as ResponseProtocol,
    Visibility,
)
from hatlab.exceptions import DomainError, ProtocolError, StrategyError

Configuration = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Response:
    """A pass, or a guess of the player's own colour."""

    guess: Optional[int] = None

    @property
    def is_pass(self) -> bool:
        """Whether the player abstained."""
        return self.guess is None

    @property
    def token(self) -> str:
        """Single character form: 'p' or the guessed digit."""
        return PASS_TOKEN if self.guess is None else DIGITS[self.guess]

    @classmethod
    def from_token(cls, token: str) -> "Response":
        """Parses the single character form."""
        if token == PASS_TOKEN:
            return PASS
        if len(token) == 1 and token in DIGITS:
            return cls(DIGITS.index(token))
        raise DomainError(f"not a response token: {token!r}")

    def __str__(self) -> str:
        return "pass" if self.guess is None else str(self.guess)


PASS = Response()


def guess(colour: int) -> Response:
    """Shorthand for a guess response."""
    return Response(colour)


@dataclass(frozen=True)
class GameSpec:
    """Selects one of the hat games."""

    n: int
    q: int
    visibility: Visibility
    protocol: ResponseProtocol
    objective: Objective

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"a game needs at least one player, got n={self.n}")
        if not 2 <= self.q <= MAX_COLOURS:
            raise DomainError(f"q must lie in [2, {MAX_COLOURS}], got q={self.q}")

    @property
    def size(self) -> int:
        """Number of configurations, q^n."""
        return self.q**self.n

    @property
    def allows_pass(self) -> bool:
        """Majority and count games make guessing mandatory."""
        return self.objective == Objective.NONE_WRONG

    @property
    def sequential(self) -> bool:
        """Whether responses are heard in player order."""
        return self.protocol == ResponseProtocol.SEQUENTIAL

    @property
    def decided_by_first_guess(self) -> bool:
        """In sequential none-wrong games the first guess settles the round.

        A wrong first guess has already lost; after a correct one the group wins as long as
        everybody else passes, so later players are not consulted.
        """
        return self.sequential and self.objective == Objective.NONE_WRONG

    @classmethod
    def ebert(cls, n: int = 3, q: int = 2) -> "GameSpec":
        """Full sight, simultaneous, win iff some guess is right and none is wrong."""
        return cls(
            n, q, Visibility.ALL_OTHERS, ResponseProtocol.SIMULTANEOUS, Objective.NONE_WRONG
        )

    @classmethod
    def majority(cls, n: int = 3, q: int = 2) -> "GameSpec":
        """Full sight, simultaneous, mandatory guesses, win iff most are right."""
        return cls(n, q, Visibility.ALL_OTHERS, ResponseProtocol.SIMULTANEOUS, Objective.MAJORITY)

    @classmethod
    def hats_on_a_line(cls, n: int, q: int = 2) -> "GameSpec":
        """Line sight, sequential, mandatory guesses, count the right ones."""
        return cls(n, q, Visibility.AHEAD_ONLY, ResponseProtocol.SEQUENTIAL, Objective.COUNT)

    @classmethod
    def new_line(cls, n: int, q: int = 2) -> "GameSpec":
        """Line sight, sequential with passes, Ebert's winning condition."""
        return cls(n, q, Visibility.AHEAD_ONLY, ResponseProtocol.SEQUENTIAL, Objective.NONE_WRONG)

    @classmethod
    def full_sight_sequential(cls, n: int, q: int = 2) -> "GameSpec":
        """The new line game played with complete visual information."""
        return cls(n, q, Visibility.ALL_OTHERS, ResponseProtocol.SEQUENTIAL, Objective.NONE_WRONG)

    @classmethod
    def named(cls, name: Union[str, GameName], n: int, q: int) -> "GameSpec":
        """Builds a game from its command line name."""
        builders = {
            GameName.EBERT: cls.ebert,
            GameName.MAJORITY: cls.majority,
            GameName.LINE: cls.hats_on_a_line,
            GameName.NEWLINE: cls.new_line,
            GameName.FULLSIGHT: cls.full_sight_sequential,
        }
        return builders[GameName(name)](n, q)

    def header(self) -> str:
        """Space separated header used by the strategy file format."""
        return " ".join(
            [
                "game",
                str(self.n),
                str(self.q),
                self.visibility.value,
                self.protocol.value,
                self.objective.value,
            ]
        )

    def as_dict(self) -> dict:
        """JSON friendly form."""
        return {
            "n": self.n,
            "q": self.q,
            "visibility": self.visibility.value,
            "protocol": self.protocol.value,
            "objective": self.objective.value,
        }


@dataclass(frozen=True)
class View:
    """Everything a player knows when responding."""

    observer: int
    visible: tuple[tuple[int, int], ...]
    heard: tuple[Response, ...] = ()

    def colour_of(self, player: int) -> int:
        """Colour of a visible player."""
        for seen, colour in self.visible:
            if seen == player:
                return colour
        raise DomainError(f"player {self.observer} cannot see player {player}")

    @property
    def colours(self) -> tuple[int, ...]:
        """Visible colours in increasing player order."""
        return tuple(colour for _, colour in self.visible)

    @property
    def key(self) -> str:
        """Canonical key: visible digits, '|', heard tokens."""
        return (
            "".join(DIGITS[c] for c in self.colours)
            + VIEW_SEPARATOR
            + "".join(r.token for r in self.heard)
        )


@dataclass(frozen=True)
class Trace:
    """The result of playing one configuration."""

    configuration: Configuration
    responses: tuple[Response, ...]
    correct_count: int
    incorrect_count: int
    won: bool
    objective: Objective

    @property
    def marks(self) -> tuple[Optional[bool], ...]:
        """Per player: None for a pass, otherwise whether the guess was right."""
        return tuple(
            None if r.is_pass else r.guess == c for r, c in zip(self.responses, self.configuration)
        )

    @property
    def outcome(self) -> Union[str, int]:
        """'win'/'lose', or the number of correct guesses for count games."""
        if self.objective == Objective.COUNT:
            return self.correct_count
        return "win" if self.won else "lose"


class Strategy(Protocol):
    """Anything that answers a player's canonical view key."""

    def response_for(self, player: int, key: str) -> Response:
        """Returns the response of ``player`` to the view with canonical ``key``."""
        ...


def rank_configuration(cfg: Sequence[int], q: int) -> int:
    """Returns the lexicographic rank of ``cfg``, player 1 most significant."""
    rank = 0
    for colour in cfg:
        if not 0 <= colour < q:
            raise DomainError(f"colour {colour} outside [0, {q})")
        rank = rank * q + colour
    return rank


def unrank_configuration(k: int, n: int, q: int) -> Configuration:
    """Inverse of rank_configuration."""
    if not 0 <= k < q**n:
        raise DomainError(f"rank {k} outside [0, {q**n})")
    colours = []
    for _ in range(n):
        k, colour = divmod(k, q)
        colours.append(colour)
    return tuple(reversed(colours))


def all_configurations(n: int, q: int) -> Iterator[Configuration]:
    """Every configuration in rank order."""
    for k in range(q**n):
        yield unrank_configuration(k, n, q)


def format_configuration(cfg: Sequence[int]) -> str:
    """Digit string, player 1 leftmost."""
    return "".join(DIGITS[c] for c in cfg)


def parse_configuration(text: str, n: int, q: int) -> Configuration:
    """Parses the digit string form."""
    if len(text) != n or any(ch not in DIGITS[:q] for ch in text):
        raise DomainError(f"{text!r} is not a configuration of {n} colours below {q}")
    return tuple(DIGITS.index(ch) for ch in text)


def visible_players(game: GameSpec, player: int) -> tuple[int, ...]:
    """Players whose hats ``player`` sees, in increasing order."""
    if game.visibility == Visibility.AHEAD_ONLY:
        return tuple(range(player + 1, game.n + 1))
    return tuple(p for p in range(1, game.n + 1) if p != player)


def _check_heard(game: GameSpec, player: int, heard: Sequence[Response]) -> None:
    expected = player - 1 if game.sequential else 0
    if len(heard) != expected:
        raise ProtocolError(
            f"player {player} must hear {expected} responses under {game.protocol.value}, "
            f"got {len(heard)}"
        )


def view_of(
    game: GameSpec, cfg: Configuration, player: int, heard: Sequence[Response] = ()
) -> View:
    """Builds the view of ``player``; the observer's own colour is never part of it."""
    if not 1 <= player <= game.n:
        raise DomainError(f"player {player} outside 1..{game.n}")
    if len(cfg) != game.n:
        raise DomainError(f"configuration {cfg} does not have {game.n} colours")
    _check_heard(game, player, heard)
    visible = tuple((p, cfg[p - 1]) for p in visible_players(game, player))
    return View(observer=player, visible=visible, heard=tuple(heard))


def view_key(game: GameSpec, text: str, player: int, heard: Sequence[Response]) -> str:
    """Canonical key of a view, built straight from the configuration's digit string."""
    if game.visibility == Visibility.AHEAD_ONLY:
        visible = text[player:]
    else:
        visible = text[: player - 1] + text[player:]
    return visible + VIEW_SEPARATOR + "".join(r.token for r in heard)


def check_response(game: GameSpec, player: int, response: Response) -> None:
    """Rejects a pass where guessing is mandatory and colours outside [0, q)."""
    if response.is_pass:
        if not game.allows_pass:
            raise StrategyError(f"player {player} passed in a game where guessing is mandatory")
    elif not 0 <= response.guess < game.q:
        raise StrategyError(
            f"player {player} guessed colour {response.guess} outside [0, {game.q})"
        )


def score(game: GameSpec, cfg: Configuration, responses: Sequence[Response]) -> Trace:
    """Tallies the responses against the configuration."""
    correct = sum(1 for r, c in zip(responses, cfg) if not r.is_pass and r.guess == c)
    incorrect = sum(1 for r, c in zip(responses, cfg) if not r.is_pass and r.guess != c)
    if game.objective == Objective.NONE_WRONG:
        won = correct >= 1 and incorrect == 0
    elif game.objective == Objective.MAJORITY:
        won = 2 * correct > game.n
    else:
        won = correct == game.n
    return Trace(
        configuration=tuple(cfg),
        responses=tuple(responses),
        correct_count=correct,
        incorrect_count=incorrect,
        won=won,
        objective=game.objective,
    )


def play(game: GameSpec, strategy: Strategy, cfg: Configuration) -> Trace:
    """Plays one configuration deterministically.

    Simultaneous games consult every player on an independent view. Sequential games
    consult players in order with the growing heard prefix; in the ones decided by the
    first guess, later players are recorded as passing.

    Raises:
        StrategyError: on an illegal response or a view the strategy does not cover.
    """
    if len(cfg) != game.n:
        raise DomainError(f"configuration {cfg} does not have {game.n} colours")
    text = format_configuration(cfg)
    responses: list[Response] = []
    decided = False
    for player in range(1, game.n + 1):
        if decided:
            responses.append(PASS)
            continue
        heard = responses if game.sequential else ()
        response = strategy.response_for(player, view_key(game, text, player, heard))
        check_response(game, player, response)
        responses.append(response)
        decided = game.decided_by_first_guess and not response.is_pass
    return score(game, cfg, responses)
