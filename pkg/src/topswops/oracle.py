"""Brute-force ground truth: play every deck of n cards.

Shares nothing with the search beyond the game rules, so it can vouch for
the pruned search on small n.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import factorial
from typing import Dict, List, Optional, Tuple

from .game import Deck, game_length

MAX_ORACLE_N = 10


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class OracleReport:
    n: int
    max_steps: int
    largest_decks: Tuple[Deck, ...]
    histogram: Optional[Dict[int, int]] = None

    @property
    def max_count(self) -> int:
        return len(self.largest_decks)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "max_steps": self.max_steps,
            "max_count": self.max_count,
            "largest_decks": [list(d) for d in self.largest_decks],
        }
        if self.histogram is not None:
            out["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        return out


def _block(n: int, first: int) -> Tuple[int, List[Deck], Counter]:
    """Scan every deck with `first` on top."""
    rest = [c for c in range(1, n + 1) if c != first]
    best, decks, hist = -1, [], Counter()
    for tail in itertools.permutations(rest):
        deck = (first,) + tail
        s = game_length(deck)
        hist[s] += 1
        if s > best:
            best, decks = s, [deck]
        elif s == best:
            decks.append(deck)
    return best, decks, hist


def brute_force(n: int, with_histogram: bool = False, workers: int = 1) -> OracleReport:
    """Max game length over all n! decks, with every deck attaining it.

    Decks are scanned in lexicographic order, one block per top card;
    blocks go to a process pool when ``workers > 1``.
    """
    if not 1 <= n <= MAX_ORACLE_N:
        raise OracleLimitError(f"brute force is limited to 1 <= n <= {MAX_ORACLE_N}, got {n}")
    firsts = range(1, n + 1)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            blocks = list(pool.map(_block, [n] * n, firsts))
    else:
        blocks = [_block(n, f) for f in firsts]
    best = max(b for b, _, _ in blocks)
    decks = tuple(d for b, ds, _ in blocks if b == best for d in ds)
    hist = None
    if with_histogram:
        total = Counter()
        for _, _, h in blocks:
            total.update(h)
        hist = dict(sorted(total.items()))
        assert sum(hist.values()) == factorial(n)
    return OracleReport(n, best, decks, hist)
