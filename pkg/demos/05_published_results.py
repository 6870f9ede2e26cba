"""The published largest decks for 18 and 19 cards, and the task counts of the full runs."""
from topswops.bounds import ensure_f_table, unpruned_tree_size
from topswops.game import format_deck, parse_deck, play
from topswops.parallel import split_tasks

n18 = parse_deck("6 14 9 2 15 8 1 3 4 12 18 5 10 13 16 17 11 7")
t = play(n18)
print(f"n=18: {t.step_count} flips, ends at {format_deck(t.terminal)}")

for s in (
    "9 4 19 17 10 1 11 15 12 8 5 2 18 13 16 7 3 14 6",
    "12 15 11 1 10 17 19 2 5 8 9 4 18 13 16 7 3 14 6",
    "12 1 18 11 3 14 2 6 8 16 5 4 15 10 13 17 19 7 9",
    "12 1 18 11 2 3 14 6 8 16 5 4 15 10 13 17 19 7 9",
):
    t = play(parse_deck(s))
    print(f"n=19: {t.step_count} flips, ends at {format_deck(t.terminal)}")

table = ensure_f_table(20)
print("\nn=18 cut at level 2:", len(split_tasks(18, 2, 191, table)), "tasks")
plan = split_tasks(19, 3, 221, table)
print("n=19 cut at level 3:", len(plan), "tasks; levels", plan.level_counts)

total = 933_351_108_741_643
print(f"n=19 pruned tree: {total / unpruned_tree_size(19):.2%} of {unpruned_tree_size(19)} nodes")
