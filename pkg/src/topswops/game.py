"""Topswops mechanics on complete decks.

Decks are tuples of ints, top card first. Positions in docstrings are
1-based; the tuples themselves are indexed from 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

Deck = Tuple[int, ...]


class InvalidDeckError(ValueError):
    """Raised when a sequence is not a permutation of 1..n."""


def as_deck(cards: Iterable[int]) -> Deck:
    """Validate `cards` as a permutation of 1..n and return it as a tuple."""
    deck = tuple(int(c) for c in cards)
    n = len(deck)
    if n == 0:
        raise InvalidDeckError("deck is empty")
    seen = set()
    for pos, card in enumerate(deck, start=1):
        if not 1 <= card <= n:
            raise InvalidDeckError(f"card {card} at position {pos} is outside 1..{n}")
        if card in seen:
            raise InvalidDeckError(f"card {card} at position {pos} is repeated")
        seen.add(card)
    return deck


def parse_deck(text: str) -> Deck:
    """Parse a space- or comma-separated deck such as ``"3 1 4 5 2"``."""
    tokens = text.replace(",", " ").replace("(", " ").replace(")", " ").split()
    cards = []
    for tok in tokens:
        try:
            cards.append(int(tok))
        except ValueError:
            raise InvalidDeckError(f"token {tok!r} is not an integer") from None
    return as_deck(cards)


def format_deck(deck: Sequence[int]) -> str:
    return " ".join(str(c) for c in deck)


def flip_top(deck: Sequence[int], k: int) -> Deck:
    """Reverse the top `k` cards of `deck`."""
    if not 1 <= k <= len(deck):
        raise ValueError(f"flip size {k} outside 1..{len(deck)}")
    deck = tuple(deck)
    return deck[k - 1::-1] + deck[k:]


@dataclass(frozen=True)
class GameTrace:
    steps: Tuple[Deck, ...]
    top_sequence: Tuple[int, ...]

    @property
    def step_count(self) -> int:
        return len(self.steps) - 1

    @property
    def initial(self) -> Deck:
        return self.steps[0]

    @property
    def terminal(self) -> Deck:
        return self.steps[-1]


def play(deck: Sequence[int]) -> GameTrace:
    """Play Topswops from `deck` to termination, keeping every snapshot."""
    current = as_deck(deck)
    steps = [current]
    tops = [current[0]]
    seen = {current[0]}
    while current[0] != 1:
        current = flip_top(current, current[0])
        steps.append(current)
        top = current[0]
        if top not in seen:
            seen.add(top)
            tops.append(top)
    return GameTrace(tuple(steps), tuple(tops))


def game_length(deck: Sequence[int]) -> int:
    """Number of flips until the top card is 1. No validation, no snapshots."""
    d = list(deck)
    steps = 0
    k = d[0]
    while k != 1:
        d[:k] = d[k - 1::-1]
        steps += 1
        k = d[0]
    return steps


def top_sequence(deck: Sequence[int]) -> Tuple[int, ...]:
    """Cards in order of their first appearance on top; always ends with 1."""
    d = list(as_deck(deck))
    tops = [d[0]]
    seen = {d[0]}
    while d[0] != 1:
        k = d[0]
        d[:k] = d[k - 1::-1]
        if d[0] not in seen:
            seen.add(d[0])
            tops.append(d[0])
    return tuple(tops)


def is_derangement(deck: Sequence[int]) -> bool:
    return all(card != pos for pos, card in enumerate(deck, start=1))


def settled_boundary(deck: Sequence[int]) -> int:
    """Smallest k such that every card m > k lies at position m.

    Cards above the boundary never move again: flips are bounded by the top
    card, which is always <= k. Returns 0 for the sorted deck.
    """
    k = len(deck)
    while k > 0 and deck[k - 1] == k:
        k -= 1
    return k
