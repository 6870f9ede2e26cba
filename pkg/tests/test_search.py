import itertools
from math import factorial, prod

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topswops.bounds import ensure_f_table, known_f, unpruned_tree_size
from topswops.game import is_derangement, play, top_sequence
from topswops.search import (
    IncumbentView,
    LazySearchState,
    PruneReason,
    SearchConfig,
    dfs,
    gen_init_deck,
    search,
    try_extend,
)

STATIC_OFF = SearchConfig(prune=False, bound_mode="static")


def all_p(n):
    for head in itertools.permutations(range(2, n + 1)):
        yield head + (1,)


def test_gen_init_deck_examples():
    assert gen_init_deck((3, 4, 5, 2, 1)) == (3, 1, 4, 5, 2)
    assert gen_init_deck((2, 1)) == (2, 1)
    assert gen_init_deck((3, 2, 1)) == (3, 1, 2)
    assert top_sequence((3, 1, 2)) == (3, 2, 1)
    assert gen_init_deck((1,)) == (1,)


@pytest.mark.parametrize("p", [(1, 2), (2, 2, 1), (2, 3), ()])
def test_gen_init_deck_rejects(p):
    with pytest.raises(ValueError):
        gen_init_deck(p)


@pytest.mark.parametrize("n", range(1, 9))
def test_gen_init_deck_inverts_top_sequence(n):
    decks = set()
    for p in all_p(n):
        deck = gen_init_deck(p)
        assert top_sequence(deck) == p
        decks.add(deck)
    assert len(decks) == factorial(n - 1)


def test_try_extend_prunes_by_bound():
    table = ensure_f_table(5)
    root = LazySearchState.root(5)
    # Card 5 flips straight to the bottom: 1 flip + f(4) = 5 < 7.
    assert try_extend(root, 5, table, 7) is PruneReason.TBOUND
    child = try_extend(root, 5, table, 5)
    assert child.boundary == 4 and child.flips == 1


def test_try_extend_first_step():
    child = try_extend(LazySearchState.root(5), 3, ensure_f_table(5), 7)
    assert child.assignment[1] == 3 and child.assignment.count(0) == 5
    assert child.flips == 1 and child.depth == 1
    assert child.top_position == 3
    assert child.slots == (-3, -2, 3, -4, -5)


def test_try_extend_derangement():
    table = ensure_f_table(5)
    state = LazySearchState.root(5)
    for card in (2, 5, 4):
        state = try_extend(state, card, table, 0)
    # Hand trace: 2 -> (-2 2 . . .), 5 -> (-5 -4 -3 2 5), 4 -> (-3 2 -4 4 5).
    assert state.slots == (-3, 2, -4, 4, 5)
    assert state.boundary == 3 and state.flips == 4
    assert try_extend(state, 3, table, 0) is PruneReason.DERANGEMENT
    assert isinstance(try_extend(state, 3, table, 0, prune=False), LazySearchState)
    # A card already placed cannot be offered again.
    with pytest.raises(ValueError):
        try_extend(try_extend(LazySearchState.root(5), 3, table, 0), 3, table, 0)


def test_try_extend_derangement_prune_fires():
    table = ensure_f_table(6)
    fired = 0
    for p in all_p(6):
        state = LazySearchState.root(6)
        for card in p[:-1]:
            nxt = try_extend(state, card, table, 0)
            if nxt is PruneReason.DERANGEMENT:
                assert card == state.top_position
                assert not is_derangement(gen_init_deck(p))
                fired += 1
                break
            state = nxt
        else:
            assert is_derangement(gen_init_deck(p))
    assert fired > 0


def test_try_extend_card_one_only_last():
    with pytest.raises(ValueError):
        try_extend(LazySearchState.root(3), 1, (0, 0, 1), 0)
    state = try_extend(LazySearchState.root(3), 2, (0, 0, 1), 0)
    with pytest.raises(ValueError):
        try_extend(state, 2, (0, 0, 1), 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 9).flatmap(lambda n: st.permutations(range(2, n + 1))))
def test_lazy_state_invariants(head):
    n = len(head) + 1
    state = LazySearchState.root(n)
    for card in head:
        state = try_extend(state, card, (), 0, prune=False)
        placeholders = [-s for s in state.slots if s < 0]
        cards = [s for s in state.slots if s > 0]
        assert sorted(cards) == sorted(state.used)
        assert sorted(placeholders + [j for j in range(1, n + 1) if state.assignment[j]]) == list(range(1, n + 1))
        assert 1 not in state.used
        b = state.boundary
        assert all(state.slots[m - 1] == m for m in range(b + 1, n + 1))
        assert b == 0 or state.slots[b - 1] != b
    state = try_extend(state, 1, (), 0, prune=False)
    assert state.finished
    assert play(state.deck()).step_count == state.flips


def test_dfs_n5_emits_largest():
    table = ensure_f_table(5)
    records = dfs(LazySearchState.root(5), table, IncumbentView(0), SearchConfig())
    assert (7, (3, 1, 4, 5, 2)) in records


def test_dfs_n1():
    counts = np.zeros(1, dtype=np.int64)
    records = dfs(LazySearchState.root(1), (0,), IncumbentView(0), SearchConfig(), level_counts=counts)
    assert records == [(0, (1,))]
    assert counts.tolist() == [0]


def test_dfs_n7_max():
    records = dfs(LazySearchState.root(7), ensure_f_table(7), IncumbentView(0), SearchConfig())
    assert max(s for s, _ in records) == 16


@pytest.mark.parametrize("n, expected", [(1, 0), (2, 1), (5, 7), (9, 30), (13, 80)])
def test_search_values(n, expected):
    assert search(n).max_steps == expected


def test_search_no_deck_at_bound():
    result = search(5, SearchConfig(seed_bound=8, bound_mode="static"))
    assert result.outcome == "no_deck_at_bound"
    assert result.max_steps is None and result.largest_decks == ()
    assert search(5, SearchConfig(seed_bound=8)).outcome == "no_deck_at_bound"


@pytest.mark.parametrize("n", range(2, 9))
def test_unpruned_tree_is_complete(n):
    stats = search(n, STATIC_OFF).stats
    assert stats.level_counts[n - 1] == factorial(n - 1)
    for k in range(n):
        assert stats.level_counts[k] == prod(n - j for j in range(1, k + 1))
    assert stats.ratio == 1


@pytest.mark.parametrize("n", range(1, 10))
def test_prune_soundness(n):
    pruned = search(n)
    full = search(n, STATIC_OFF)
    assert pruned.max_steps == full.max_steps
    assert pruned.largest_decks == full.largest_decks
    assert all(is_derangement(d) for d in full.largest_decks) or n == 1
    assert all(play(d).step_count == pruned.max_steps for d in pruned.largest_decks)


@pytest.mark.parametrize("n", range(5, 14))
def test_level_one_count(n):
    assert known_f(n) > 1 + known_f(n - 1)
    result = search(n, SearchConfig(seed_bound=known_f(n), bound_mode="static"))
    assert result.stats.level_counts[1] == n - 2
    assert result.stats.level_counts[0] == 1


def test_static_search_is_deterministic():
    cfg = SearchConfig(seed_bound=51, bound_mode="static")
    assert search(11, cfg) == search(11, cfg)


@pytest.mark.parametrize("seed", [0, 20, 38])
def test_stale_incumbent_only_reduces_pruning(seed):
    reference = search(10, SearchConfig(seed_bound=38, bound_mode="static"))
    for mode in ("static", "dynamic"):
        result = search(10, SearchConfig(seed_bound=seed, bound_mode=mode))
        assert result.max_steps == reference.max_steps
        assert result.largest_decks == reference.largest_decks
        assert result.stats.total >= reference.stats.total


def test_incumbent_view_is_monotone():
    view = IncumbentView(5, workers=3)
    assert view.read() == 5
    assert view.raise_to(9, worker=1) == 9
    assert view.raise_to(7, worker=1) == 9
    assert view.raise_to(8, worker=2) == 9
    assert view.raise_to(12, worker=0) == 12


def test_stats_invariants():
    stats = search(9).stats
    assert stats.total == sum(stats.level_counts)
    assert stats.unpruned == unpruned_tree_size(9)
    assert 0 < stats.ratio <= 1
