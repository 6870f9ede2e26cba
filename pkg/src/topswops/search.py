"""Lazy deck-construction search for the longest Topswops games.

The tree enumerates prospective top sequences p (permutations of 1..n that
end in 1). A node at depth k fixes the first k entries of p; the initial
deck is built lazily, assigning a card to an original position only when
that position's card first surfaces on top. Two prunes cut the tree: a
largest deck is a derangement, and a game that has made c flips with
settled boundary T can last at most c + f(T) flips.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernel
from .bounds import TRUSTED, FTable, ensure_f_table, unpruned_tree_size
from .game import Deck

STATIC = "static"
DYNAMIC = "dynamic"
OK = "ok"
NO_DECK_AT_BOUND = "no_deck_at_bound"

Record = Tuple[int, Deck]


class PruneReason(enum.Enum):
    DERANGEMENT = "derangement"
    TBOUND = "tbound"


@dataclass(frozen=True)
class LazySearchState:
    """A partially built deck plus the bookkeeping needed to extend it.

    ``slots[i]`` is the card now at position i+1, or ``-j`` if that slot
    still holds the unknown card that started at position j.
    ``assignment[j]`` is the card given to original position j (0 = none).
    """

    n: int
    slots: Tuple[int, ...]
    assignment: Tuple[int, ...]
    used: frozenset
    flips: int
    boundary: int
    depth: int

    @classmethod
    def root(cls, n: int) -> "LazySearchState":
        if n < 1:
            raise ValueError("n must be >= 1")
        return cls(n, tuple(-j for j in range(1, n + 1)), (0,) * (n + 1), frozenset(), 0, n, 0)

    @property
    def finished(self) -> bool:
        return self.slots[0] == 1

    @property
    def top_position(self) -> int:
        """Original position of the placeholder on top."""
        if self.slots[0] > 0:
            raise ValueError("top slot already holds a card")
        return -self.slots[0]

    def deck(self) -> Deck:
        """The initial deck; only defined once every position is assigned."""
        if 0 in self.assignment[1:]:
            raise ValueError("assignment is incomplete")
        return tuple(self.assignment[1:])

    def remaining(self) -> List[int]:
        return [c for c in range(1, self.n + 1) if c not in self.used]


def f_lookup(f_table: FTable | Sequence[int], boundary: int, n: int) -> int:
    """f(boundary), with an unknown f(n) treated as unbounded."""
    if boundary >= n:
        return int(_kernel.UNBOUNDED)
    return f_table[boundary]


def try_extend(
    state: LazySearchState,
    card: int,
    f_table: FTable | Sequence[int],
    bound: int,
    *,
    prune: bool = True,
) -> LazySearchState | PruneReason:
    """Put `card` on the top placeholder and play until another placeholder surfaces."""
    n = state.n
    if not 1 <= card <= n or card in state.used:
        raise ValueError(f"card {card} is not available")
    if card == 1 and len(state.used) != n - 1:
        raise ValueError("card 1 may only be placed last")
    j = state.top_position
    # Card 1 can only land on its own position when n == 1.
    if prune and card == j and card != 1:
        return PruneReason.DERANGEMENT
    slots = list(state.slots)
    slots[0] = card
    flips, b = state.flips, state.boundary
    t = card
    while t > 1:
        slots[:t] = slots[t - 1::-1]
        flips += 1
        if t == b:
            while b > 0 and slots[b - 1] == b:
                b -= 1
        t = slots[0]
    if prune and card != 1 and flips + f_lookup(f_table, b, n) < bound:
        return PruneReason.TBOUND
    assignment = list(state.assignment)
    assignment[j] = card
    return LazySearchState(
        n,
        tuple(slots),
        tuple(assignment),
        state.used | {card},
        flips,
        b,
        state.depth + (card != 1),
    )


def gen_init_deck(p: Sequence[int]) -> Deck:
    """The deck whose top sequence is `p` (p a permutation ending in 1)."""
    p = tuple(int(x) for x in p)
    n = len(p)
    if n == 0 or sorted(p) != list(range(1, n + 1)) or p[-1] != 1:
        raise ValueError(f"{p} is not a permutation of 1..n ending in 1")
    state = LazySearchState.root(n)
    for card in p:
        state = try_extend(state, card, (), 0, prune=False)
    return state.deck()


class IncumbentView:
    """Best game length seen so far, shared between workers.

    Each worker raises only its own slot, so every slot is monotone and the
    maximum over slots never decreases, without locks.
    """

    def __init__(self, seed: int = 0, workers: int = 1):
        self.seed = int(seed)
        self.slots = np.zeros(max(1, workers), dtype=np.int64)

    def read(self) -> int:
        return max(self.seed, int(self.slots.max()))

    def raise_to(self, value: int, worker: int = 0) -> int:
        if value > self.slots[worker]:
            self.slots[worker] = value
        return self.read()


@dataclass(frozen=True)
class SearchStats:
    level_counts: Tuple[int, ...]
    unpruned: int

    @classmethod
    def empty(cls, n: int) -> "SearchStats":
        return cls((0,) * n, unpruned_tree_size(n))

    @property
    def total(self) -> int:
        return sum(self.level_counts)

    @property
    def ratio(self) -> float:
        return self.total / self.unpruned

    def __add__(self, other: "SearchStats") -> "SearchStats":
        if len(self.level_counts) != len(other.level_counts):
            raise ValueError("cannot add stats for different n")
        return SearchStats(
            tuple(a + b for a, b in zip(self.level_counts, other.level_counts)), self.unpruned
        )

    def to_json(self) -> dict:
        return {
            "levels": list(self.level_counts),
            "total": self.total,
            "unpruned": self.unpruned,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class SearchConfig:
    seed_bound: int = 0
    bound_mode: str = DYNAMIC
    f_mode: str = TRUSTED
    prune: bool = True
    threads: int = 1
    split_level: int = 0

    def __post_init__(self) -> None:
        if self.seed_bound < 0:
            raise ValueError("seed_bound must be >= 0")
        if self.bound_mode not in (STATIC, DYNAMIC):
            raise ValueError(f"unknown bound mode {self.bound_mode!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.split_level < 0:
            raise ValueError("split_level must be >= 0")

    def to_json(self) -> dict:
        return {
            "seed_bound": self.seed_bound,
            "bound_mode": self.bound_mode,
            "f_mode": self.f_mode,
            "prune": self.prune,
            "threads": self.threads,
            "split_level": self.split_level,
        }


@dataclass(frozen=True)
class SearchResult:
    n: int
    max_steps: Optional[int]
    largest_decks: Tuple[Deck, ...]
    stats: SearchStats
    seed_bound: int
    bound_mode: str
    config: SearchConfig = field(default_factory=SearchConfig)

    @property
    def outcome(self) -> str:
        return OK if self.max_steps is not None else NO_DECK_AT_BOUND

    @property
    def ok(self) -> bool:
        return self.max_steps is not None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_steps": self.max_steps,
            "largest_decks": [list(d) for d in self.largest_decks],
            "stats": self.stats.to_json(),
            "config": self.config.to_json(),
            "outcome": self.outcome,
        }


def collect(
    n: int,
    records: Iterable[Record],
    stats: SearchStats,
    config: SearchConfig,
) -> SearchResult:
    """Filter records to the maximum game length and build the result."""
    records = list(records)
    best = max((s for s, _ in records), default=None)
    if best is not None and best < config.seed_bound:
        best = None
    decks = tuple(sorted({d for s, d in records if s == best})) if best is not None else ()
    return SearchResult(n, best, decks, stats, config.seed_bound, config.bound_mode, config)


def kernel_table(f_table: FTable | Sequence[int], n: int) -> np.ndarray:
    ftab = np.empty(n + 1, dtype=np.int64)
    for m in range(n):
        ftab[m] = f_table[m]
    ftab[n] = _kernel.UNBOUNDED
    return ftab


def dfs(
    root: LazySearchState,
    f_table: FTable | Sequence[int] | np.ndarray,
    incumbent: IncumbentView,
    config: SearchConfig,
    *,
    worker: int = 0,
    level_counts: Optional[np.ndarray] = None,
) -> List[Record]:
    """Exhaust the subtree under `root`, returning (steps, deck) records.

    Nodes accepted below the root are added to `level_counts`; the root
    itself is not counted. Records are the decks tied at the best length
    this subtree reached, provided it is at least the bound in force.
    """
    n = root.n
    ftab = f_table if isinstance(f_table, np.ndarray) else kernel_table(f_table, n)
    deck = np.array(root.slots, dtype=np.int64)
    assign = np.array(root.assignment, dtype=np.int64)
    used = 0
    for c in root.used:
        used |= 1 << c
    cap = 64
    while True:
        counts = np.zeros(n + 1, dtype=np.int64)
        rec_steps = np.zeros(cap, dtype=np.int64)
        rec_decks = np.zeros((cap, n), dtype=np.int64)
        count, best = _kernel.dfs_kernel(
            n, deck, assign, np.int64(used), root.flips, root.boundary, root.depth, ftab,
            incumbent.seed, config.bound_mode == DYNAMIC, config.prune,
            incumbent.slots, worker, counts, rec_steps, rec_decks,
        )
        if count <= cap:
            break
        cap = 2 * count
    if level_counts is not None:
        level_counts += counts[: len(level_counts)]
    return [(int(best), tuple(int(x) for x in rec_decks[i])) for i in range(count)]


def search(
    n: int,
    config: SearchConfig | None = None,
    *,
    f_table: FTable | None = None,
) -> SearchResult:
    """Single-threaded search from the root for the longest games on n cards."""
    config = config or SearchConfig()
    if f_table is None:
        f_table = ensure_f_table(n, config.f_mode)
    incumbent = IncumbentView(config.seed_bound)
    counts = np.zeros(n, dtype=np.int64)
    counts[0] = 1
    records = dfs(LazySearchState.root(n), f_table, incumbent, config, level_counts=counts)
    stats = SearchStats(tuple(int(x) for x in counts), unpruned_tree_size(n))
    return collect(n, records, stats, config)
