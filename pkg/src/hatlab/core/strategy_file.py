# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Text form of strategy tables.

    game <n> <q> <visibility> <protocol> <objective>
    player <i> view <visible digits>|<heard tokens> -> pass|<colour>

Blank lines and lines starting with '#' are ignored.
"""

import re
from pathlib import Path
from typing import Optional

from hatlab.config.literals import DIGITS, PASS_TOKEN, Objective, Protocol, Visibility
from hatlab.core.game import PASS, GameSpec, Response, check_response
from hatlab.core.strategies import StrategyTable
from hatlab.exceptions import DomainError, FormatError, StrategyError

ENTRY = re.compile(r"^player (\d+) view (\S*) -> (pass|\d)$")


def dump_strategy(table: StrategyTable) -> str:
    """Serialises ``table``, entries sorted by player then key."""
    lines = [table.game.header()]
    for (player, key), response in sorted(table.entries.items()):
        lines.append(f"player {player} view {key} -> {response}")
    return "\n".join(lines) + "\n"


def _parse_header(line: str, number: int) -> GameSpec:
    parts = line.split()
    if len(parts) != 6 or parts[0] != "game":
        raise FormatError(
            f"expected 'game n q visibility protocol objective', got {line!r}", number
        )
    try:
        return GameSpec(
            n=int(parts[1]),
            q=int(parts[2]),
            visibility=Visibility(parts[3]),
            protocol=Protocol(parts[4]),
            objective=Objective(parts[5]),
        )
    except (ValueError, DomainError) as e:
        raise FormatError(f"invalid game header: {e}", number) from None


def _parse_response(token: str, game: GameSpec, player: int, number: int) -> Response:
    response = PASS if token == "pass" else Response(int(token))
    try:
        check_response(game, player, response)
    except StrategyError as e:
        raise FormatError(str(e), number) from None
    return response


def _check_key(key: str, game: GameSpec, player: int, number: int) -> None:
    visible, separator, heard = key.partition("|")
    seen = game.n - player if game.visibility == Visibility.AHEAD_ONLY else game.n - 1
    if (
        not separator
        or len(visible) != seen
        or any(ch not in DIGITS[: game.q] for ch in visible)
        or any(ch not in DIGITS[: game.q] + PASS_TOKEN for ch in heard)
        or len(heard) != (player - 1 if game.sequential else 0)
    ):
        raise FormatError(f"malformed view key {key!r} for player {player}", number)


def load_strategy_text(
    text: str, game: Optional[GameSpec] = None, name: str = "file"
) -> StrategyTable:
    """Parses strategy text into a total, legal table.

    Args:
        text: file contents.
        game: when given, the header must describe exactly this game.
        name: name given to the loaded table.

    Raises:
        FormatError: naming the first offending line, or the first absent view.
    """
    lines = [
        (number, line.strip())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise FormatError("empty strategy file")
    number, header = lines[0]
    declared = _parse_header(header, number)
    if game is not None and declared != game:
        raise FormatError(f"file plays {declared.header()!r}, expected {game.header()!r}", number)

    entries = {}
    for number, line in lines[1:]:
        match = ENTRY.match(line)
        if not match:
            raise FormatError(
                f"expected 'player <i> view <key> -> pass|<colour>', got {line!r}", number
            )
        player, key, token = int(match[1]), match[2], match[3]
        if not 1 <= player <= declared.n:
            raise FormatError(f"player {player} outside 1..{declared.n}", number)
        _check_key(key, declared, player, number)
        if (player, key) in entries:
            raise FormatError(f"duplicate view {key!r} for player {player}", number)
        entries[(player, key)] = _parse_response(token, declared, player, number)

    table = StrategyTable(game=declared, entries=entries, name=name)
    try:
        table.check()
    except StrategyError as e:
        raise FormatError(f"strategy is not total: {e}") from None
    return table


def load_strategy(path: Path, game: Optional[GameSpec] = None) -> StrategyTable:
    """Reads a strategy file."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read strategy file {path}: {e}") from None
    return load_strategy_text(text, game, name=Path(path).stem)


def save_strategy(table: StrategyTable, path: Path) -> None:
    """Writes a strategy file."""
    Path(path).write_text(dump_strategy(table))
