# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Hamming codes, covering radius checks and minimal binary covering codes.

Words are configuration shaped tuples. Internally the binary routines work on ranks
(player 1 is the most significant bit) and on Python integers used as bitsets over the
2^n words of the space.
"""

import itertools
import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Optional

from hatlab.config.literals import COVERING_MAX_LENGTH, DIGITS
from hatlab.core.game import Configuration, rank_configuration, unrank_configuration
from hatlab.exceptions import CapacityError, DomainError, FormatError
from hatlab.utils.parallel import run_chunks

logger = logging.getLogger(__name__)

HAMMING_ORDERS = (2, 3, 4)


@dataclass(frozen=True)
class Code:
    """A set of length-n words over a q-ary alphabet."""

    n: int
    q: int
    words: frozenset[Configuration]
    radius: Optional[int] = None

    def __post_init__(self):
        if self.n < 1 or self.q < 2:
            raise DomainError(f"invalid code parameters n={self.n} q={self.q}")
        for word in self.words:
            if len(word) != self.n or any(not 0 <= c < self.q for c in word):
                raise DomainError(f"word {word} is not a length {self.n} word below {self.q}")

    @cached_property
    def ranks(self) -> frozenset[int]:
        """Ranks of the codewords."""
        return frozenset(rank_configuration(w, self.q) for w in self.words)

    def __contains__(self, word: object) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    def sorted_words(self) -> list[Configuration]:
        """Codewords in rank order."""
        return sorted(self.words)

    @property
    def is_perfect(self) -> bool:
        """Whether the verified radius-1 balls partition the binary space."""
        return self.q == 2 and self.radius == 1 and len(self.words) * (self.n + 1) == 2**self.n


@dataclass(frozen=True)
class CoveringCheck:
    """Outcome of verify_covering; truthy when the radius holds."""

    covered: bool
    code: Code
    witness: Optional[Configuration] = None

    def __bool__(self) -> bool:
        return self.covered


def hamming_syndrome(word: Iterable[int]) -> int:
    """XOR of the 1-based positions holding a 1."""
    syndrome = 0
    for position, bit in enumerate(word, start=1):
        if bit:
            syndrome ^= position
    return syndrome


def hamming_code(m: int) -> Code:
    """Binary Hamming code of length 2^m - 1, radius 1 verified.

    Position i carries the parity-check column equal to the binary form of i, so a word is
    a codeword iff its syndrome is zero.
    """
    if m not in HAMMING_ORDERS:
        raise DomainError(f"Hamming codes are supported for m in {HAMMING_ORDERS}, got {m}")
    n = 2**m - 1
    words = frozenset(
        word for word in itertools.product((0, 1), repeat=n) if hamming_syndrome(word) == 0
    )
    check = verify_covering(Code(n=n, q=2, words=words), 1)
    if not check:
        raise DomainError(f"Hamming code of length {n} failed its covering check")
    logger.debug("Built Hamming code n=%d with %d codewords", n, len(words))
    return check.code


def hamming_distance(a: Configuration, b: Configuration) -> int:
    """Number of positions where two words differ."""
    return sum(x != y for x, y in zip(a, b))


def distance_to_code(code: Code, word: Configuration) -> int:
    """Distance from ``word`` to the nearest codeword; n + 1 for an empty code."""
    return min((hamming_distance(word, w) for w in code.words), default=code.n + 1)


def _ball(word: Configuration, q: int, r: int) -> Iterable[Configuration]:
    for distance in range(r + 1):
        for positions in itertools.combinations(range(len(word)), distance):
            choices = [[c for c in range(q) if c != word[p]] for p in positions]
            for values in itertools.product(*choices):
                neighbour = list(word)
                for p, v in zip(positions, values):
                    neighbour[p] = v
                yield tuple(neighbour)


def verify_covering(code: Code, r: int) -> CoveringCheck:
    """Checks every word lies within Hamming distance ``r`` of a codeword.

    On success the returned check carries the code with its radius recorded; on failure it
    names the uncovered word farthest from the code, the least such word on ties.
    """
    if r < 0:
        raise DomainError(f"radius must be non-negative, got {r}")
    covered = set()
    for word in code.words:
        covered.update(rank_configuration(w, code.q) for w in _ball(word, code.q, r))
    size = code.q**code.n
    if len(covered) == size:
        return CoveringCheck(covered=True, code=replace(code, radius=r))
    uncovered = (unrank_configuration(k, code.n, code.q) for k in range(size) if k not in covered)
    witness = min(uncovered, key=lambda word: -distance_to_code(code, word))
    return CoveringCheck(covered=False, code=code, witness=witness)


def syndrome_decode(code: Code, word: Configuration) -> int:
    """Returns 0 for a codeword, else the unique 1-based position whose flip is a codeword."""
    if not code.is_perfect:
        raise DomainError("syndrome decoding needs a perfect binary code of verified radius 1")
    if len(word) != code.n:
        raise DomainError(f"word {word} does not have length {code.n}")
    if word in code:
        return 0

    def flipped(position: int) -> Configuration:
        return word[: position - 1] + (1 - word[position - 1],) + word[position:]

    position = hamming_syndrome(word)
    if 1 <= position <= code.n and flipped(position) in code:
        return position
    # perfect codes that are not in parity-check column order
    return next(p for p in range(1, code.n + 1) if flipped(p) in code)


def _ball_masks(n: int, r: int) -> list[int]:
    masks = []
    for w in range(2**n):
        mask = 0
        for distance in range(r + 1):
            for bits in itertools.combinations(range(n), distance):
                neighbour = w
                for b in bits:
                    neighbour ^= 1 << b
                mask |= 1 << neighbour
        masks.append(mask)
    return masks


class _CoveringSearch:
    """Branch and bound over binary codes, branching on the ball of the least uncovered word."""

    def __init__(self, n: int, r: int):
        self.n = n
        self.space = 2**n
        self.full = (1 << self.space) - 1
        self.balls = _ball_masks(n, r)
        self.ball_size = self.balls[0].bit_count()
        self.members = [
            [w for w in range(self.space) if mask >> w & 1] for mask in self.balls
        ]

    def extendable(self, covered: int, budget: int, floor: int) -> bool:
        """Whether ``budget`` more words, all of rank >= floor, can complete the cover."""
        if covered == self.full:
            return True
        uncovered = self.full & ~covered
        # ceiling bound: each new word covers at most ball_size new words
        if budget == 0 or uncovered.bit_count() > budget * self.ball_size:
            return False
        least = (uncovered & -uncovered).bit_length() - 1
        return any(
            self.extendable(covered | self.balls[c], budget - 1, floor)
            for c in self.members[least]
            if c >= floor
        )


def _covering_probe(args: tuple[int, int, int, int, int]) -> bool:
    n, r, covered, budget, floor = args
    return _CoveringSearch(n, r).extendable(covered, budget, floor)


def _least_extendable(
    search: _CoveringSearch, r: int, covered: int, budget: int, floor: int, workers: int
) -> int:
    # candidates are probed in batches of ``workers``, in increasing order
    candidates = list(range(floor, search.space))
    step = max(workers, 1)
    for start in range(0, len(candidates), step):
        batch = candidates[start : start + step]
        probes = [(search.n, r, covered | search.balls[c], budget, c + 1) for c in batch]
        for candidate, ok in zip(batch, run_chunks(_covering_probe, probes, workers)):
            if ok:
                return candidate
    raise DomainError("no word extends the partial cover")


def min_covering_code(
    n: int, r: int = 1, workers: int = 1, max_length: int = COVERING_MAX_LENGTH
) -> tuple[int, Code]:
    """Smallest binary covering code of length ``n`` and radius ``r``.

    The size is found by increasing the budget from the sphere-covering bound until a cover
    exists. The witness is then fixed word by word, taking at each slot the least word that
    still extends to a cover of that size; it is the lexicographically least minimum code
    whatever the number of workers.

    Raises:
        CapacityError: when ``n`` exceeds ``max_length``.
    """
    if n > max_length:
        raise CapacityError(f"covering search supports n <= {max_length}, got {n}")
    if n < 1 or r < 1:
        raise DomainError(f"covering search needs n >= 1 and r >= 1, got n={n} r={r}")

    search = _CoveringSearch(n, r)
    size = -(-search.space // search.ball_size)
    while not search.extendable(0, size, 0):
        logger.debug("No binary covering code of length %d with %d words", n, size)
        size += 1

    chosen: list[int] = []
    covered = 0
    for slot in range(size):
        floor = chosen[-1] + 1 if chosen else 0
        pick = _least_extendable(search, r, covered, size - slot - 1, floor, workers)
        chosen.append(pick)
        covered |= search.balls[pick]

    words = frozenset(unrank_configuration(w, n, 2) for w in chosen)
    check = verify_covering(Code(n=n, q=2, words=words), r)
    logger.info("Minimal binary covering code n=%d r=%d has %d words", n, r, size)
    return size, check.code


def dump_code(code: Code) -> str:
    """Code file text: 'n q' header then one digit string per word in rank order."""
    lines = [f"{code.n} {code.q}"]
    lines.extend("".join(DIGITS[c] for c in word) for word in code.sorted_words())
    return "\n".join(lines) + "\n"


def load_code(text: str) -> Code:
    """Parses the code file format."""
    lines = [
        (number, line.strip())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise FormatError("empty code file")
    number, header = lines[0]
    try:
        n, q = (int(part) for part in header.split())
    except ValueError:
        raise FormatError(f"expected header 'n q', got {header!r}", number) from None
    if n < 1 or not 2 <= q <= len(DIGITS):
        raise FormatError(f"invalid code parameters n={n} q={q}", number)

    words = set()
    for number, line in lines[1:]:
        if len(line) != n or any(ch not in DIGITS[:q] for ch in line):
            raise FormatError(f"{line!r} is not a word of length {n} below {q}", number)
        word = tuple(DIGITS.index(ch) for ch in line)
        if word in words:
            raise FormatError(f"duplicate word {line}", number)
        words.add(word)
    return Code(n=n, q=q, words=frozenset(words))
