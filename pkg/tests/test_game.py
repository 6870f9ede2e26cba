import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topswops.bounds import fibonacci_upper_bound
from topswops.game import (
    InvalidDeckError,
    flip_top,
    game_length,
    is_derangement,
    parse_deck,
    play,
    settled_boundary,
    top_sequence,
)

N18_DECK = (6, 14, 9, 2, 15, 8, 1, 3, 4, 12, 18, 5, 10, 13, 16, 17, 11, 7)


@st.composite
def decks(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    return tuple(draw(st.permutations(range(1, n + 1))))


@pytest.mark.parametrize(
    "deck, k, expected",
    [
        ((3, 1, 4, 5, 2), 3, (4, 1, 3, 5, 2)),
        ((4, 1, 3, 5, 2), 4, (5, 3, 1, 4, 2)),
        ((2, 3, 1), 1, (2, 3, 1)),
    ],
)
def test_flip_top(deck, k, expected):
    assert flip_top(deck, k) == expected


@pytest.mark.parametrize("k", [0, 6, -1])
def test_flip_top_rejects_bad_size(k):
    with pytest.raises(ValueError):
        flip_top((3, 1, 4, 5, 2), k)


def test_play_example_game():
    trace = play((3, 1, 4, 5, 2))
    assert trace.step_count == 7
    assert trace.terminal == (1, 2, 3, 4, 5)
    assert trace.steps[:3] == ((3, 1, 4, 5, 2), (4, 1, 3, 5, 2), (5, 3, 1, 4, 2))


def test_play_trivial():
    assert play((1, 2, 3)).step_count == 0
    trace = play((2, 1))
    assert trace.step_count == 1 and trace.terminal == (1, 2)


def test_play_rejects_non_permutation():
    with pytest.raises(InvalidDeckError):
        play((1, 1, 2))


@pytest.mark.parametrize(
    "deck, expected",
    [((3, 1, 4, 5, 2), (3, 4, 5, 2, 1)), ((3, 5, 4, 1, 2), (3, 4, 1)), ((1, 2, 3, 4), (1,))],
)
def test_top_sequence(deck, expected):
    assert top_sequence(deck) == expected


def test_is_derangement():
    assert is_derangement((2, 1))
    assert not is_derangement((1, 2))
    assert is_derangement(N18_DECK)


@pytest.mark.parametrize(
    "deck, expected", [((1, 2, 3, 4, 5), 0), ((2, 1, 3, 4, 5), 2), ((2, 4, 1, 3, 5), 4), ((5, 4, 3, 2, 1), 5)]
)
def test_settled_boundary(deck, expected):
    assert settled_boundary(deck) == expected


def test_parse_deck_names_first_violation():
    assert parse_deck("3 1 4 5 2") == (3, 1, 4, 5, 2)
    with pytest.raises(InvalidDeckError, match="card 7 at position 2"):
        parse_deck("1 7 2")
    with pytest.raises(InvalidDeckError, match="'x'"):
        parse_deck("1 x")


@settings(max_examples=300)
@given(decks(), st.data())
def test_flip_is_an_involution_preserving_cards(deck, data):
    k = data.draw(st.integers(1, len(deck)))
    once = flip_top(deck, k)
    assert sorted(once) == sorted(deck)
    assert flip_top(once, k) == deck


def test_flip_involution_random_10k():
    rng = random.Random(20231015)
    for _ in range(10_000):
        n = rng.randint(1, 12)
        deck = tuple(rng.sample(range(1, n + 1), n))
        k = rng.randint(1, n)
        assert flip_top(flip_top(deck, k), k) == deck


@settings(max_examples=300)
@given(decks())
def test_play_is_bounded_and_consistent(deck):
    trace = play(deck)
    n = len(deck)
    assert trace.step_count <= fibonacci_upper_bound(n)
    assert trace.step_count == game_length(deck)
    assert trace.terminal[0] == 1
    seen, firsts = set(), []
    for d in trace.steps:
        if d[0] not in seen:
            seen.add(d[0])
            firsts.append(d[0])
    assert top_sequence(deck) == tuple(firsts) == trace.top_sequence
    assert firsts[-1] == 1 and len(firsts) <= n


@settings(max_examples=300)
@given(decks())
def test_settled_boundary_bounds_later_flips(deck):
    steps = play(deck).steps
    boundaries = [settled_boundary(d) for d in steps]
    assert all(a >= b for a, b in zip(boundaries, boundaries[1:]))
    for i, b in enumerate(boundaries):
        assert all(d[0] <= b for d in steps[i:-1])
