"""Exhaustive search for the longest games of Topswops."""

from .bounds import FTable, ensure_f_table, fibonacci_upper_bound, known_f, unpruned_tree_size
from .game import GameTrace, flip_top, is_derangement, play, settled_boundary, top_sequence
from .oracle import OracleReport, brute_force
from .parallel import (
    Checkpoint,
    ShardResult,
    Task,
    TaskPlan,
    checkpoint_resume,
    merge_shards,
    run_parallel,
    solve,
    split_tasks,
)
from .search import (
    IncumbentView,
    LazySearchState,
    PruneReason,
    SearchConfig,
    SearchResult,
    SearchStats,
    dfs,
    gen_init_deck,
    search,
    try_extend,
)

__all__ = [
    "Checkpoint", "FTable", "GameTrace", "IncumbentView", "LazySearchState", "OracleReport",
    "PruneReason", "SearchConfig", "SearchResult", "SearchStats", "ShardResult", "Task", "TaskPlan",
    "brute_force", "checkpoint_resume", "dfs", "ensure_f_table", "fibonacci_upper_bound",
    "flip_top", "gen_init_deck", "is_derangement", "known_f", "merge_shards", "play",
    "run_parallel", "search", "settled_boundary", "solve", "split_tasks", "top_sequence",
    "try_extend", "unpruned_tree_size",
]
