"""Known values of f, the f-table used for pruning, and closed-form bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Dict, List, Mapping, Tuple

# f(m) for m = 0..19; f(0) = 0 is a convention for the empty game.
KNOWN_F: Tuple[int, ...] = (
    0, 0, 1, 2, 4, 7, 10, 16, 22, 30, 38, 51, 65, 80, 101, 113, 139, 159, 191, 221,
)
MAX_KNOWN = len(KNOWN_F) - 1

CONSTANT = "constant"
COMPUTED = "computed"
TRUSTED = "trusted"
RECOMPUTED = "recomputed"


class UnknownValueError(LookupError):
    """f(m) is not among the published values."""


def known_f(m: int) -> int:
    if not 1 <= m <= MAX_KNOWN:
        raise UnknownValueError(f"f({m}) is not known; published values cover 1..{MAX_KNOWN}")
    return KNOWN_F[m]


@dataclass(frozen=True)
class FTable:
    """Dense f(0..len-1) with a provenance tag per entry."""

    values: Tuple[int, ...]
    provenance: Tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.provenance:
            object.__setattr__(self, "provenance", (CONSTANT,) * len(self.values))
        if len(self.provenance) != len(self.values):
            raise ValueError("provenance must have one entry per value")
        if self.values[:2] != (0, 0)[: len(self.values)]:
            raise ValueError("f(0) and f(1) must both be 0")

    def __getitem__(self, m: int) -> int:
        return self.values[m]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def max_m(self) -> int:
        return len(self.values) - 1

    def extended(self, value: int, provenance: str = COMPUTED) -> "FTable":
        return FTable(self.values + (value,), self.provenance + (provenance,))

    def rows(self) -> List[Tuple[int, int, str]]:
        return [(m, v, p) for m, (v, p) in enumerate(zip(self.values, self.provenance))]


def ensure_f_table(n: int, mode: str = TRUSTED, *, progress=None) -> FTable:
    """Return an f-table covering 0..n-1.

    In ``trusted`` mode published values are used where available and the
    tail beyond them is computed. In ``recomputed`` mode every f(m) with
    m >= 1 is obtained by searching m cards, each search pruning with the
    table built so far.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if mode not in (TRUSTED, RECOMPUTED):
        raise ValueError(f"unknown f-table mode {mode!r}")
    table = FTable((0,), (CONSTANT,))
    for m in range(1, n):
        if mode == TRUSTED and m <= MAX_KNOWN:
            table = table.extended(KNOWN_F[m], CONSTANT)
        else:
            table = table.extended(_compute_f(m, table, progress), COMPUTED)
    return table


def _compute_f(m: int, table: FTable, progress=None) -> int:
    from .search import SearchConfig, search

    # Appending card m below a largest (m-1)-deck keeps the game length, so
    # f(m-1) is a valid seed.
    config = SearchConfig(seed_bound=table[m - 1], bound_mode="dynamic")
    result = search(m, config, f_table=table)
    if progress is not None:
        progress(m, result.max_steps)
    return result.max_steps


def fibonacci(k: int) -> int:
    """F(k) with F(1) = F(2) = 1."""
    if k < 0:
        raise ValueError("k must be >= 0")
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def fibonacci_upper_bound(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return fibonacci(n + 1) - 1


def level_sizes(n: int) -> List[int]:
    """Node count per level of the unpruned tree: prod_{j=1..i} (n - j)."""
    return [prod(range(n - i, n)) for i in range(n)]


def unpruned_tree_size(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(level_sizes(n))


def check_table(table: Mapping[int, int] | FTable) -> Dict[int, Tuple[int, int]]:
    """Mismatches between `table` and the published values, as m -> (got, known)."""
    items = table.rows() if isinstance(table, FTable) else [(m, v, "") for m, v in table.items()]
    return {m: (v, KNOWN_F[m]) for m, v, _ in items if m <= MAX_KNOWN and v != KNOWN_F[m]}
