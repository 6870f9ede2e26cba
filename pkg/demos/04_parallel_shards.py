"""Cutting the tree into tasks, running shards, merging them, and resuming."""
import tempfile
from pathlib import Path

from topswops.parallel import (
    Checkpoint, merge_shards, run_parallel, run_shard, split_tasks, write_task_file,
)
from topswops.search import SearchConfig, search

n, bound = 11, 51
config = SearchConfig(seed_bound=bound, bound_mode="static", threads=4)
plan = split_tasks(n, 2, bound)
print(f"{len(plan)} tasks at level 2; first prefixes {[t.prefix for t in plan.tasks[:4]]}")

shards = [run_shard(plan, i, 3, config) for i in range(3)]
for s in shards:
    print(f"  shard {s.task_range}: best {s.best}, {s.stats.total} nodes")
merged = merge_shards(shards)
single = search(n, config)
print("merged == single-threaded:", merged.stats == single.stats and merged.largest_decks == single.largest_decks)

with tempfile.TemporaryDirectory() as tmp:
    write_task_file(plan, Path(tmp) / "tasks.txt")
    print("\n" + "\n".join((Path(tmp) / "tasks.txt").read_text().splitlines()[:3]) + "\n...")

    ck = Checkpoint(Path(tmp) / "ck", plan, config)
    result = run_parallel(plan, 4, config, checkpoint=ck)
    again = Checkpoint(Path(tmp) / "ck", plan, config)
    print(f"\ncheckpoint holds {len(again.completed)} finished tasks; resuming reruns nothing:",
          run_parallel(plan, 4, config, checkpoint=again) == result)
