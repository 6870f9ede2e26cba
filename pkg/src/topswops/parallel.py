"""Split-level parallel execution, task files, shards and checkpoints.

The tree is cut at a fixed level; every surviving node there becomes a
task identified by its prefix of the top sequence. Tasks are replayed from
the root, searched independently and their records merged.
"""

from __future__ import annotations

import json
import os
import queue
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import FTable, ensure_f_table, unpruned_tree_size
from .search import (
    DYNAMIC,
    STATIC,
    IncumbentView,
    LazySearchState,
    Record,
    SearchConfig,
    SearchResult,
    SearchStats,
    collect,
    dfs,
    kernel_table,
    try_extend,
)

TASKS_MAGIC = "tswops-tasks v1"
CHECKPOINT_MAGIC = "tswops-checkpoint v1"


class ConfigMismatchError(ValueError):
    """Files or shards from different run configurations were combined."""


@dataclass(frozen=True)
class Task:
    n: int
    prefix: Tuple[int, ...]
    index: int


@dataclass(frozen=True)
class TaskPlan:
    """Tasks at one split level plus the node counts of levels 0..level."""

    n: int
    level: int
    bound: int
    tasks: Tuple[Task, ...]
    level_counts: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self):
        return iter(self.tasks)

    def __getitem__(self, i):
        return self.tasks[i]

    def slice(self, lo: int, hi: int) -> Tuple[Task, ...]:
        return self.tasks[lo:hi]


def replay(task: Task, f_table: FTable | Sequence[int], bound: int, prune: bool = True) -> LazySearchState:
    state = LazySearchState.root(task.n)
    for card in task.prefix:
        state = try_extend(state, card, f_table, bound, prune=prune)
        if not isinstance(state, LazySearchState):
            raise ValueError(f"task prefix {task.prefix} is pruned ({state.value}) at bound {bound}")
    return state


def split_tasks(
    n: int,
    level: int,
    seed_bound: int,
    f_table: FTable | None = None,
    *,
    prune: bool = True,
) -> TaskPlan:
    """All depth-`level` nodes that survive both prunes at a fixed bound.

    Level 0 yields the single root task. Tasks come out in lexicographic
    prefix order because children are tried in ascending card order.
    """
    if not 0 <= level <= max(n - 1, 0):
        raise ValueError(f"split level {level} outside 0..{n - 1}")
    if f_table is None:
        f_table = ensure_f_table(n)
    counts = [1] + [0] * level
    tasks: List[Task] = []

    def expand(state: LazySearchState, prefix: Tuple[int, ...]) -> None:
        if len(prefix) == level:
            tasks.append(Task(n, prefix, len(tasks)))
            return
        for card in range(2, n + 1):
            if card in state.used:
                continue
            child = try_extend(state, card, f_table, seed_bound, prune=prune)
            if isinstance(child, LazySearchState):
                counts[len(prefix) + 1] += 1
                expand(child, prefix + (card,))

    expand(LazySearchState.root(n), ())
    return TaskPlan(n, level, seed_bound, tuple(tasks), tuple(counts))


@dataclass
class TaskOutcome:
    index: int
    best: int
    records: List[Record]
    level_counts: Tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "best": self.best,
            "levels": list(self.level_counts),
            "decks": [list(d) for s, d in self.records],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TaskOutcome":
        best = obj["best"]
        return cls(obj["index"], best, [(best, tuple(d)) for d in obj["decks"]], tuple(obj["levels"]))


@dataclass
class ShardResult:
    n: int
    level: int
    seed_bound: int
    bound_mode: str
    task_range: Tuple[int, int]
    records: List[Record]
    stats: SearchStats
    split_counts: Tuple[int, ...]
    config: SearchConfig = field(default_factory=SearchConfig)

    @property
    def best(self) -> int:
        return max((s for s, _ in self.records), default=-1)

    @property
    def key(self) -> tuple:
        return (self.n, self.level, self.seed_bound, self.bound_mode, self.split_counts)

    def to_json(self) -> dict:
        best = self.best if self.records else None
        return {
            "n": self.n,
            "max_steps": best,
            "largest_decks": [list(d) for d in sorted({d for s, d in self.records if s == best})],
            "stats": self.stats.to_json(),
            "config": self.config.to_json(),
            "outcome": "ok" if best is not None and best >= self.seed_bound else "no_deck_at_bound",
            "task_range": list(self.task_range),
            "split_level": self.level,
            "split_levels": list(self.split_counts),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ShardResult":
        cfg = SearchConfig(**obj["config"])
        best = obj["max_steps"]
        records = [(best, tuple(d)) for d in obj["largest_decks"]] if best is not None else []
        stats = SearchStats(tuple(obj["stats"]["levels"]), obj["stats"]["unpruned"])
        return cls(
            obj["n"], obj["split_level"], cfg.seed_bound, cfg.bound_mode,
            tuple(obj["task_range"]), records, stats, tuple(obj["split_levels"]), cfg,
        )


def _best_only(records: Iterable[Record]) -> List[Record]:
    records = list(records)
    best = max((s for s, _ in records), default=None)
    return [r for r in records if r[0] == best]


def run_tasks(
    tasks: Sequence[Task],
    threads: int,
    config: SearchConfig,
    f_table: FTable | None = None,
    *,
    on_done: Optional[Callable[[TaskOutcome], None]] = None,
    incumbent: Optional[IncumbentView] = None,
) -> List[TaskOutcome]:
    """Search each task's subtree with a pool of worker threads.

    Workers pull from a shared queue. In dynamic mode they share one
    incumbent; in static mode the bound stays at the seed. `on_done` is
    called from the worker thread, serialised by a lock.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    tasks = list(tasks)
    if not tasks:
        return []
    n = tasks[0].n
    if f_table is None:
        f_table = ensure_f_table(n, config.f_mode)
    ftab = kernel_table(f_table, n)
    threads = min(threads, len(tasks))
    if incumbent is None:
        incumbent = IncumbentView(config.seed_bound, threads)
    elif len(incumbent.slots) < threads:
        raise ValueError("incumbent has fewer slots than threads")
    pending: "queue.Queue[Task]" = queue.Queue()
    for t in tasks:
        pending.put(t)
    outcomes: Dict[int, TaskOutcome] = {}
    lock = threading.Lock()
    errors: List[BaseException] = []
    stop = threading.Event()

    def work(worker: int) -> None:
        while not stop.is_set():
            try:
                task = pending.get_nowait()
            except queue.Empty:
                return
            try:
                root = replay(task, f_table, config.seed_bound, config.prune)
                counts = np.zeros(n, dtype=np.int64)
                records = dfs(root, ftab, incumbent, config, worker=worker, level_counts=counts)
                best = max((s for s, _ in records), default=-1)
                outcome = TaskOutcome(task.index, best, records, tuple(int(x) for x in counts))
                with lock:
                    outcomes[task.index] = outcome
                    if on_done is not None:
                        on_done(outcome)
            except BaseException as exc:  # noqa: BLE001 - re-raised after join
                with lock:
                    errors.append(exc)
                stop.set()
                return

    if threads == 1:
        work(0)
    else:
        pool = [threading.Thread(target=work, args=(w,), daemon=True) for w in range(threads)]
        for th in pool:
            th.start()
        for th in pool:
            th.join()
    if errors:
        raise errors[0]
    return [outcomes[i] for i in sorted(outcomes)]


def shard_from_outcomes(
    plan: TaskPlan,
    task_range: Tuple[int, int],
    outcomes: Iterable[TaskOutcome],
    config: SearchConfig,
) -> ShardResult:
    stats = SearchStats.empty(plan.n)
    records: List[Record] = []
    for o in outcomes:
        stats = stats + SearchStats(o.level_counts, stats.unpruned)
        records.extend(o.records)
    return ShardResult(
        plan.n, plan.level, plan.bound, config.bound_mode, task_range,
        _best_only(records), stats, plan.level_counts, config,
    )


def merge_shards(shards: Sequence[ShardResult]) -> SearchResult:
    """Combine shards of one run into a single result.

    Order-independent. Shards must come from the same configuration and
    cover disjoint task ranges.
    """
    if not shards:
        raise ValueError("nothing to merge")
    first = shards[0]
    for s in shards[1:]:
        if s.key != first.key:
            raise ConfigMismatchError("shards come from different run configurations")
    ranges = sorted(s.task_range for s in shards)
    for (lo1, hi1), (lo2, hi2) in zip(ranges, ranges[1:]):
        if lo2 < hi1:
            raise ValueError(f"task ranges {lo1}..{hi1} and {lo2}..{hi2} overlap")
    stats = SearchStats(_pad(first.split_counts, first.n), unpruned_tree_size(first.n))
    records: List[Record] = []
    for s in shards:
        stats = stats + s.stats
        records.extend(s.records)
    return collect(first.n, records, stats, first.config)


def _pad(counts: Sequence[int], n: int) -> Tuple[int, ...]:
    return tuple(counts) + (0,) * (n - len(counts))


def run_parallel(
    plan: TaskPlan,
    threads: int,
    config: SearchConfig,
    f_table: FTable | None = None,
    *,
    checkpoint: Optional["Checkpoint"] = None,
) -> SearchResult:
    """Run every task of `plan` and merge, optionally resuming a checkpoint."""
    n = plan.n
    if f_table is None:
        f_table = ensure_f_table(n, config.f_mode)
    done: List[TaskOutcome] = []
    tasks: Sequence[Task] = plan.tasks
    on_done = None
    incumbent = None
    if checkpoint is not None:
        checkpoint.check(plan, config)
        done = list(checkpoint.outcomes.values())
        tasks = checkpoint_resume(checkpoint, plan.tasks)
        on_done = checkpoint.append
        if config.bound_mode == DYNAMIC:
            incumbent = IncumbentView(config.seed_bound, max(1, min(threads, len(tasks))))
            incumbent.raise_to(max((o.best for o in done), default=0))
    fresh = run_tasks(tasks, threads, config, f_table, on_done=on_done, incumbent=incumbent)
    shard = shard_from_outcomes(plan, (0, len(plan)), done + fresh, config)
    return merge_shards([shard])


def solve(n: int, config: SearchConfig, f_table: FTable | None = None) -> SearchResult:
    """Search with the split level and thread count taken from `config`."""
    if f_table is None:
        f_table = ensure_f_table(n, config.f_mode)
    level = min(config.split_level, n - 1)
    plan = split_tasks(n, level, config.seed_bound, f_table, prune=config.prune)
    return run_parallel(plan, config.threads, config, f_table)


# -- task files ---------------------------------------------------------------


def write_task_file(plan: TaskPlan, path: str | os.PathLike) -> None:
    lines = [f"{TASKS_MAGIC} n={plan.n} level={plan.level} bound={plan.bound}"]
    lines += [" ".join(str(c) for c in t.prefix) for t in plan.tasks]
    Path(path).write_text("\n".join(lines) + "\n")


def parse_header(line: str, magic: str) -> Dict[str, int]:
    if not line.startswith(magic):
        raise ValueError(f"expected header starting with {magic!r}, got {line.strip()!r}")
    fields = {}
    for item in line[len(magic):].split():
        key, _, value = item.partition("=")
        fields[key] = int(value) if value.lstrip("-").isdigit() else value
    return fields


def read_task_file(path: str | os.PathLike, f_table: FTable | None = None) -> TaskPlan:
    """Load a task file; split-level node counts are recomputed from the header."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty task file")
    head = parse_header(lines[0], TASKS_MAGIC)
    n, level, bound = head["n"], head["level"], head["bound"]
    prefixes = [tuple(int(x) for x in ln.split()) for ln in lines[1:] if ln.strip() or level == 0]
    plan = split_tasks(n, level, bound, f_table)
    if [t.prefix for t in plan.tasks] != prefixes:
        raise ConfigMismatchError(f"{path}: prefixes do not match a split of n={n} level={level} bound={bound}")
    return plan


def shard_bounds(count: int, shard: int, shards: int) -> Tuple[int, int]:
    """Half-open index range of the `shard`-th of `shards` contiguous slices."""
    if not 0 <= shard < shards:
        raise ValueError(f"shard {shard} outside 0..{shards - 1}")
    return count * shard // shards, count * (shard + 1) // shards


def run_shard(
    plan: TaskPlan,
    shard: int,
    shards: int,
    config: SearchConfig,
    f_table: FTable | None = None,
    *,
    checkpoint: Optional["Checkpoint"] = None,
) -> ShardResult:
    lo, hi = shard_bounds(len(plan), shard, shards)
    tasks = plan.slice(lo, hi)
    done: List[TaskOutcome] = []
    on_done = None
    if checkpoint is not None:
        checkpoint.check(plan, config)
        done = [o for i, o in checkpoint.outcomes.items() if lo <= i < hi]
        tasks = checkpoint_resume(checkpoint, tasks)
        on_done = checkpoint.append
    fresh = run_tasks(tasks, config.threads, config, f_table, on_done=on_done)
    return shard_from_outcomes(plan, (lo, hi), done + fresh, config)


def write_shard(shard: ShardResult, path: str | os.PathLike) -> None:
    Path(path).write_text(json.dumps(shard.to_json(), sort_keys=True) + "\n")


def read_shard(path: str | os.PathLike) -> ShardResult:
    return ShardResult.from_json(json.loads(Path(path).read_text()))


# -- checkpoints --------------------------------------------------------------


class Checkpoint:
    """Append-only log of completed tasks.

    The text file holds ``done <index> <best> <total_nodes>`` lines; decks
    and per-level counts of each completed task go to a JSON-lines side
    file named in the header. A task only counts as done when both agree.
    """

    def __init__(self, path: str | os.PathLike, plan: TaskPlan, config: SearchConfig):
        self.path = Path(path)
        self.records_path = self.path.with_name(self.path.name + ".records")
        self.digest = {
            "n": plan.n,
            "level": plan.level,
            "bound": plan.bound,
            "mode": config.bound_mode,
            "prune": int(config.prune),
        }
        self.outcomes: Dict[int, TaskOutcome] = {}
        self._lock = threading.Lock()
        if self.path.exists():
            self._load()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            header = " ".join(f"{k}={v}" for k, v in self.digest.items())
            self.path.write_text(f"{CHECKPOINT_MAGIC} {header} records={self.records_path.name}\n")
            self.records_path.write_text("")

    def _load(self) -> None:
        lines = self.path.read_text().splitlines()
        head = parse_header(lines[0], CHECKPOINT_MAGIC)
        found = {k: head.get(k) for k in self.digest}
        if found != self.digest:
            raise ConfigMismatchError(f"{self.path}: checkpoint was written for {found}, not {self.digest}")
        logged = {}
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) == 4 and parts[0] == "done":
                logged[int(parts[1])] = (int(parts[2]), int(parts[3]))
        if self.records_path.exists():
            for ln in self.records_path.read_text().splitlines():
                try:
                    outcome = TaskOutcome.from_json(json.loads(ln))
                except (json.JSONDecodeError, KeyError):
                    continue  # torn final write
                if logged.get(outcome.index) == (outcome.best, sum(outcome.level_counts)):
                    self.outcomes[outcome.index] = outcome

    @property
    def completed(self) -> frozenset:
        return frozenset(self.outcomes)

    def check(self, plan: TaskPlan, config: SearchConfig) -> None:
        want = {
            "n": plan.n, "level": plan.level, "bound": plan.bound,
            "mode": config.bound_mode, "prune": int(config.prune),
        }
        if want != self.digest:
            raise ConfigMismatchError(f"checkpoint digest {self.digest} does not match run {want}")

    def append(self, outcome: TaskOutcome) -> None:
        with self._lock:
            with open(self.records_path, "a") as fh:
                fh.write(json.dumps(outcome.to_json(), sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            with open(self.path, "a") as fh:
                fh.write(f"done {outcome.index} {outcome.best} {sum(outcome.level_counts)}\n")
                fh.flush()
                os.fsync(fh.fileno())
            self.outcomes[outcome.index] = outcome


def checkpoint_resume(checkpoint: Checkpoint, tasks: Iterable[Task]) -> List[Task]:
    """Tasks not yet recorded as complete."""
    done = checkpoint.completed
    return [t for t in tasks if t.index not in done]
