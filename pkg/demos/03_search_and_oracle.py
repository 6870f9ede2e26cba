"""f(n) for small n, checked against brute force."""
import time

from topswops.bounds import unpruned_tree_size
from topswops.oracle import brute_force
from topswops.search import SearchConfig, search

print(" n  f(n)  decks  nodes       ratio   brute force agrees")
for n in range(1, 10):
    r = search(n)
    o = brute_force(n)
    same = (o.max_steps, o.largest_decks) == (r.max_steps, r.largest_decks)
    print(f"{n:2d}  {r.max_steps:4d}  {len(r.largest_decks):5d}  {r.stats.total:10d}  {r.stats.ratio:6.2%}  {same}")

# Larger n runs on the search alone.
for n in (11, 12):
    t = time.perf_counter()
    r = search(n)
    print(f"n={n}: f={r.max_steps}, {r.stats.total} nodes of {unpruned_tree_size(n)}, "
          f"{time.perf_counter() - t:.1f}s")

# With the bound fixed at the true f(n), node counts per level are reproducible.
r = search(12, SearchConfig(seed_bound=65, bound_mode="static"))
for level, count in enumerate(r.stats.level_counts):
    print(f"  level {level:2d}: {count}")
