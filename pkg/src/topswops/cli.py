"""Command-line front end: ``tswops <command> ...``.

Machine-readable JSON goes to stdout (or ``--out``); summaries and
progress go to stderr. Exit codes: 0 success, 1 usage or format error,
2 no deck reached the seed bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import List, Optional

from . import bounds, parallel
from .game import InvalidDeckError, format_deck, parse_deck, play
from .oracle import OracleLimitError, brute_force
from .search import DYNAMIC, STATIC, SearchConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_DECK = 2
RECOMPUTE_LIMIT = 12


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def default_split_level(n: int) -> int:
    return 2 if n >= 14 else 0


def cmd_play(args) -> int:
    try:
        deck = parse_deck(args.deck)
    except InvalidDeckError as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    trace = play(deck)
    if args.json:
        obj = {
            "deck": list(deck),
            "steps": trace.step_count,
            "terminal": list(trace.terminal),
            "top_sequence": list(trace.top_sequence),
        }
        if args.trace:
            obj["trace"] = [list(d) for d in trace.steps]
        _emit(dumps(obj), None)
        return EXIT_OK
    if args.trace:
        for d in trace.steps:
            print(format_deck(d))
    print(f"steps: {trace.step_count}")
    print(f"terminal: {format_deck(trace.terminal)}")
    print(f"top_sequence: {format_deck(trace.top_sequence)}")
    return EXIT_OK


def _config(args, n: int) -> SearchConfig:
    level = args.split_level if args.split_level is not None else default_split_level(n)
    return SearchConfig(
        seed_bound=args.seed_bound,
        bound_mode=args.bound_mode,
        f_mode=args.f_mode,
        prune=not args.no_prune,
        threads=args.threads,
        split_level=min(level, max(n - 1, 0)),
    )


def _finish(result_json: dict, out: Optional[str]) -> int:
    _emit(dumps(result_json), out)
    if result_json["outcome"] != "ok":
        _log(f"no deck reaches the seed bound {result_json['config']['seed_bound']}")
        return EXIT_NO_DECK
    return EXIT_OK


def cmd_search(args) -> int:
    n = args.n
    if n < 1:
        _log("error: --n must be >= 1")
        return EXIT_USAGE
    config = _config(args, n)
    t0 = time.perf_counter()
    f_table = bounds.ensure_f_table(n, config.f_mode, progress=lambda m, v: _log(f"f({m}) = {v}"))
    plan = parallel.split_tasks(n, config.split_level, config.seed_bound, f_table, prune=config.prune)
    _log(f"n={n}: {len(plan)} task(s) at level {plan.level}, {config.threads} thread(s)")
    checkpoint = parallel.Checkpoint(args.checkpoint, plan, config) if args.checkpoint else None
    result = parallel.run_parallel(plan, config.threads, config, f_table, checkpoint=checkpoint)
    _log(
        f"n={n}: max_steps={result.max_steps} decks={len(result.largest_decks)} "
        f"nodes={result.stats.total} ratio={result.stats.ratio:.4%} "
        f"time={time.perf_counter() - t0:.1f}s"
    )
    return _finish(result.to_json(), args.out)


def cmd_tasks(args) -> int:
    n = args.n
    if not 0 <= args.level <= n - 1:
        _log(f"error: --level must lie in 0..{n - 1}")
        return EXIT_USAGE
    f_table = bounds.ensure_f_table(n, args.f_mode)
    plan = parallel.split_tasks(n, args.level, args.seed_bound, f_table)
    _log(f"n={n} level={args.level} bound={args.seed_bound}: {len(plan)} tasks, levels {list(plan.level_counts)}")
    if args.out:
        parallel.write_task_file(plan, args.out)
    else:
        sys.stdout.write(f"{parallel.TASKS_MAGIC} n={n} level={plan.level} bound={plan.bound}\n")
        for t in plan.tasks:
            sys.stdout.write(" ".join(map(str, t.prefix)) + "\n")
    return EXIT_OK


def _parse_shard(spec: str):
    try:
        i, m = (int(x) for x in spec.split("/"))
    except ValueError:
        raise ValueError(f"shard must look like i/m, got {spec!r}") from None
    if not (m >= 1 and 0 <= i < m):
        raise ValueError(f"shard index {i} outside 0..{m - 1}")
    return i, m


def cmd_work(args) -> int:
    try:
        shard, shards = _parse_shard(args.shard)
        plan = parallel.read_task_file(args.tasks)
    except (ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    config = SearchConfig(
        seed_bound=plan.bound,
        bound_mode=args.bound_mode,
        threads=args.threads,
        split_level=plan.level,
    )
    lo, hi = parallel.shard_bounds(len(plan), shard, shards)
    _log(f"shard {shard}/{shards}: tasks {lo}..{hi - 1} of {len(plan)}")
    checkpoint = parallel.Checkpoint(args.checkpoint, plan, config) if args.checkpoint else None
    result = parallel.run_shard(plan, shard, shards, config, checkpoint=checkpoint)
    obj = result.to_json()
    _emit(dumps(obj), args.out)
    return EXIT_OK


def cmd_merge(args) -> int:
    try:
        shards = [parallel.read_shard(p) for p in args.inputs]
        result = parallel.merge_shards(shards)
    except (ValueError, OSError, KeyError) as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    return _finish(result.to_json(), args.out)


def cmd_oracle(args) -> int:
    try:
        report = brute_force(args.n, args.histogram, workers=args.workers)
    except OracleLimitError as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    _emit(dumps(report.to_json()), args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    top = args.max_n
    if top < 0:
        _log("error: --max-n must be >= 0")
        return EXIT_USAGE
    if args.f_mode == bounds.RECOMPUTED:
        upto = min(top, args.recompute_limit)
        table = bounds.ensure_f_table(upto + 1, bounds.RECOMPUTED, progress=lambda m, v: _log(f"f({m}) = {v}"))
    else:
        table = bounds.FTable((0,), (bounds.CONSTANT,))
    for m in range(len(table), top + 1):
        table = table.extended(bounds.known_f(m), bounds.CONSTANT)
    rows = table.rows()[: top + 1]
    if args.json:
        _emit(dumps([{"m": m, "f": v, "provenance": p} for m, v, p in rows]), None)
    else:
        for m, v, p in rows:
            print(f"{m}\t{v}\t{p}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tswops", description="Longest Topswops games by exhaustive search.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="play one deck")
    p.add_argument("--deck", required=True, help='cards top first, e.g. "3 1 4 5 2"')
    p.add_argument("--trace", action="store_true", help="print every intermediate deck")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("search", help="find f(n) and every largest deck")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--split-level", type=int, default=None)
    p.add_argument("--seed-bound", type=int, default=0)
    p.add_argument("--bound-mode", choices=(STATIC, DYNAMIC), default=DYNAMIC)
    p.add_argument("--f-mode", choices=(bounds.TRUSTED, bounds.RECOMPUTED), default=bounds.TRUSTED)
    p.add_argument("--no-prune", action="store_true", help="disable both prunes (small n only)")
    p.add_argument("--checkpoint", help="append-only checkpoint file for resuming")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("tasks", help="cut the tree at a level and write a task file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--seed-bound", type=int, required=True)
    p.add_argument("--f-mode", choices=(bounds.TRUSTED, bounds.RECOMPUTED), default=bounds.TRUSTED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_tasks)

    p = sub.add_parser("work", help="run one contiguous shard of a task file")
    p.add_argument("--tasks", required=True)
    p.add_argument("--shard", default="0/1", help="i/m: the i-th of m slices (0-based)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--bound-mode", choices=(STATIC, DYNAMIC), default=STATIC)
    p.add_argument("--checkpoint")
    p.add_argument("--out")
    p.set_defaults(func=cmd_work)

    p = sub.add_parser("merge", help="merge shard results")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("oracle", help="brute force over all n! decks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--histogram", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("table", help="print f(m) with provenance")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--f-mode", choices=(bounds.TRUSTED, bounds.RECOMPUTED), default=bounds.TRUSTED)
    p.add_argument("--recompute-limit", type=int, default=RECOMPUTE_LIMIT)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, bounds.UnknownValueError) as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
