"""Building decks from their top sequences.

The search never enumerates decks directly. It picks the order in which
cards first reach the top and fills in the initial deck lazily: a
negative slot -j stands for the unknown card that started at position j.
"""
from topswops.bounds import ensure_f_table
from topswops.game import top_sequence
from topswops.search import LazySearchState, PruneReason, gen_init_deck, try_extend

p = (3, 4, 5, 2, 1)
deck = gen_init_deck(p)
print(f"top sequence {p} comes from deck {deck}; check: {top_sequence(deck)}")

table = ensure_f_table(5)
state = LazySearchState.root(5)
print("\nroot slots:", state.slots)
for card in (3, 4, 5, 2):
    state = try_extend(state, card, table, bound=7)
    print(f"place {card}: slots {state.slots}  flips {state.flips}  boundary {state.boundary}")
state = try_extend(state, 1, table, bound=7)
print("final deck:", state.deck(), "after", state.flips, "flips")

# Putting 5 first sends it straight to the bottom. One flip plus f(4) = 4
# cannot reach 7.
print("\nplace 5 at the root with bound 7:", try_extend(LazySearchState.root(5), 5, table, 7))

s = LazySearchState.root(5)
for card in (2, 5, 4):
    s = try_extend(s, card, table, 0)
print("after 2, 5, 4 the top placeholder is position", s.top_position,
      "-> placing card 3 there:", try_extend(s, 3, table, 0))
assert try_extend(s, 3, table, 0) is PruneReason.DERANGEMENT
