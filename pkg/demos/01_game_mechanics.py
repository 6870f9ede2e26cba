"""Topswops on a single deck.

Flip by the top card until card 1 surfaces. This walks the 5-card example,
looks at the cards that reach the top, and shows how the settled boundary
shrinks as the bottom of the deck locks into place.
"""
from topswops.game import flip_top, format_deck, play, settled_boundary, top_sequence

deck = (3, 1, 4, 5, 2)
print("one flip of 3:", format_deck(flip_top(deck, 3)))

trace = play(deck)
print(f"\n{format_deck(deck)} lasts {trace.step_count} flips:")
for d in trace.steps:
    print(f"  {format_deck(d):<12} boundary {settled_boundary(d)}")

# Each card that reaches the top is recorded the first time only.
print("\ntop sequence:", top_sequence(deck))
print("a short game:", top_sequence((3, 5, 4, 1, 2)))

# Once the boundary is k, no later flip exceeds k, so at most f(k) flips remain.
