"""
Word arithmetic in the free group F_k and geodesics in its Cayley tree.

Letters are signed integers: ``i`` is the generator x_i and ``-i`` its
inverse. The Cayley tree is never materialised; a vertex is a reduced word
and the unique tree path between two vertices is read off from their
longest common prefix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, List, NamedTuple, Sequence, Tuple

from app.core.errors import LetterOutOfRange, RankMismatch

Letter = int


@dataclass(frozen=True)
class Rank:
    """Number of free generators; also the number of S^2 x S^1 summands."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise ValueError(f"rank must be a positive integer, got {self.k!r}")

    def check_letter(self, letter: Letter) -> Letter:
        if letter == 0 or abs(letter) > self.k:
            raise LetterOutOfRange(letter, self.k)
        return letter

    def letters(self) -> List[Letter]:
        """All 2k letters in shortlex order: x1, x1^-1, x2, x2^-1, ..."""
        return [s * i for i in range(1, self.k + 1) for s in (1, -1)]

    @property
    def degree(self) -> int:
        """Valence of every vertex of the Cayley tree."""
        return 2 * self.k


def letter_key(letter: Letter) -> Tuple[int, bool]:
    return (abs(letter), letter < 0)


@dataclass(frozen=True)
class ReducedWord:
    """
    An element of F_k, a vertex of the Cayley tree, and a deck transformation.

    Instances are only built by ``reduce`` / ``identity`` / the arithmetic
    below, so ``letters`` is always freely reduced.
    """

    letters: Tuple[Letter, ...]
    rank: Rank

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return multiply(self, other)

    def __invert__(self) -> "ReducedWord":
        return invert(self)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def last(self) -> Letter:
        return self.letters[-1] if self.letters else 0

    def key(self) -> Tuple:
        """Shortlex key with generator order x1 < x1^-1 < x2 < x2^-1 < ..."""
        return (len(self.letters), tuple(letter_key(a) for a in self.letters))

    def append(self, letter: Letter) -> "ReducedWord":
        """Right-multiply by a single letter (one tree edge)."""
        self.rank.check_letter(letter)
        if self.letters and self.letters[-1] == -letter:
            return ReducedWord(self.letters[:-1], self.rank)
        return ReducedWord(self.letters + (letter,), self.rank)

    def to_json(self) -> List[int]:
        return list(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in self.letters)


class GeodesicStep(NamedTuple):
    """One traversal of a tree edge: from ``source`` along ``letter``."""

    source: ReducedWord
    letter: Letter

    @property
    def target(self) -> ReducedWord:
        return self.source.append(self.letter)

    def reversed(self) -> "GeodesicStep":
        return GeodesicStep(self.target, -self.letter)


def _as_rank(rank) -> Rank:
    return rank if isinstance(rank, Rank) else Rank(rank)


def identity(rank) -> ReducedWord:
    return ReducedWord((), _as_rank(rank))


def reduce(letters: Iterable[Letter], rank) -> ReducedWord:
    """
    Freely reduce a sequence of letters.

    Args:
        letters: Signed generator indices
        rank: Rank (or plain k) of the ambient free group

    Returns:
        The unique freely reduced word

    Raises:
        LetterOutOfRange: If a letter is 0 or exceeds the rank
    """
    rank = _as_rank(rank)
    stack: List[Letter] = []
    for letter in letters:
        rank.check_letter(letter)
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return ReducedWord(tuple(stack), rank)


def is_reduced(letters: Sequence[Letter]) -> bool:
    return all(a != -b for a, b in zip(letters, letters[1:]))


def word(rank, *letters: Letter) -> ReducedWord:
    """Convenience constructor: ``word(2, 1, -2)`` is x1 x2^-1."""
    return reduce(letters, rank)


def _check_same_rank(u: ReducedWord, v: ReducedWord) -> None:
    if u.rank != v.rank:
        raise RankMismatch(u.rank.k, v.rank.k)


def multiply(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    _check_same_rank(u, v)
    left = list(u.letters)
    i = 0
    while left and i < len(v.letters) and left[-1] == -v.letters[i]:
        left.pop()
        i += 1
    return ReducedWord(tuple(left) + v.letters[i:], u.rank)


def invert(u: ReducedWord) -> ReducedWord:
    return ReducedWord(tuple(-a for a in reversed(u.letters)), u.rank)


def common_prefix_length(u: ReducedWord, v: ReducedWord) -> int:
    n = 0
    for a, b in zip(u.letters, v.letters):
        if a != b:
            break
        n += 1
    return n


def distance(u: ReducedWord, v: ReducedWord) -> int:
    _check_same_rank(u, v)
    return len(u) + len(v) - 2 * common_prefix_length(u, v)


def geodesic(u: ReducedWord, v: ReducedWord) -> List[GeodesicStep]:
    """
    The unique backtracking-free edge path from ``u`` to ``v``.

    Descends from ``u`` to the common prefix, then ascends to ``v``.

    Raises:
        RankMismatch: If the words live in different free groups
    """
    _check_same_rank(u, v)
    p = common_prefix_length(u, v)
    rank = u.rank
    steps: List[GeodesicStep] = []
    for i in range(len(u) - 1, p - 1, -1):
        steps.append(GeodesicStep(ReducedWord(u.letters[: i + 1], rank), -u.letters[i]))
    for i in range(p, len(v)):
        steps.append(GeodesicStep(ReducedWord(v.letters[:i], rank), v.letters[i]))
    return steps


def reverse_path(path: Sequence[GeodesicStep]) -> List[GeodesicStep]:
    return [step.reversed() for step in reversed(path)]


def ball(rank, radius: int) -> Iterator[ReducedWord]:
    """All reduced words of length <= radius, in shortlex order."""
    rank = _as_rank(rank)
    letters = rank.letters()
    for n in range(radius + 1):
        for letters_n in itertools.product(letters, repeat=n):
            if is_reduced(letters_n):
                yield ReducedWord(tuple(letters_n), rank)
