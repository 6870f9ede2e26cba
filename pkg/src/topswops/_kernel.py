"""Compiled depth-first search over prospective top sequences.

Slot encoding: a positive entry is a concrete card, a negative entry -j is
the still-unknown card that started at original position j.
"""

from __future__ import annotations

import numpy as np
from numba import njit

UNBOUNDED = np.int64(1) << 40
REFRESH_MASK = 0x3FF


@njit(cache=True, nogil=True)
def _shared_bound(seed, incumbent):
    b = seed
    for i in range(incumbent.shape[0]):
        if incumbent[i] > b:
            b = incumbent[i]
    return b


@njit(cache=True, nogil=True)
def dfs_kernel(
    n,
    root_deck,
    root_assign,
    root_used,
    root_flips,
    root_boundary,
    root_depth,
    ftab,
    seed,
    dynamic,
    prune,
    incumbent,
    worker,
    level_counts,
    rec_steps,
    rec_decks,
):
    """Exhaust the subtree below the given state.

    Returns ``(count, best)``: the number of records tied at the best game
    length found (may exceed the record capacity, in which case the caller
    must retry with more room) and that length, or -1 if no game reached
    the bound.
    """
    cap = rec_steps.shape[0]
    decks = np.empty((n + 1, n), dtype=np.int64)
    flips = np.empty(n + 1, dtype=np.int64)
    bnd = np.empty(n + 1, dtype=np.int64)
    nxt = np.empty(n + 1, dtype=np.int64)
    pos = np.zeros(n + 1, dtype=np.int64)
    card = np.zeros(n + 1, dtype=np.int64)
    assign = root_assign.copy()

    r = root_depth
    for i in range(n):
        decks[r, i] = root_deck[i]
    flips[r] = root_flips
    bnd[r] = root_boundary
    nxt[r] = 2
    used = root_used

    bound = seed
    if dynamic:
        bound = _shared_bound(seed, incumbent)
    best = np.int64(-1)
    count = 0
    ticks = 0

    d = r
    while True:
        if d == n - 1:
            # Only card 1 is left; it lands on the top placeholder and ends the game.
            steps = flips[d]
            if dynamic and steps >= bound:
                bound = _shared_bound(seed, incumbent)
            if steps >= bound and steps >= best:
                j = -decks[d, 0]
                assign[j] = 1
                if steps > best:
                    best = steps
                    count = 0
                if count < cap:
                    rec_steps[count] = steps
                    for i in range(n):
                        rec_decks[count, i] = assign[i + 1]
                count += 1
                assign[j] = 0
                if dynamic:
                    if steps > incumbent[worker]:
                        incumbent[worker] = steps
                    if steps > bound:
                        bound = steps
            if d == r:
                break
            assign[pos[d]] = 0
            used &= ~(np.int64(1) << card[d])
            d -= 1
            continue

        advanced = False
        j = -decks[d, 0]
        while nxt[d] <= n:
            c = nxt[d]
            nxt[d] = c + 1
            if (used >> c) & 1:
                continue
            if prune and c == j:
                continue
            e = d + 1
            for i in range(n):
                decks[e, i] = decks[d, i]
            decks[e, 0] = c
            f = flips[d]
            b = bnd[d]
            t = c
            while t > 1:
                lo = 0
                hi = t - 1
                while lo < hi:
                    tmp = decks[e, lo]
                    decks[e, lo] = decks[e, hi]
                    decks[e, hi] = tmp
                    lo += 1
                    hi -= 1
                f += 1
                if t == b:
                    while b > 0 and decks[e, b - 1] == b:
                        b -= 1
                t = decks[e, 0]
            if prune and f + ftab[b] < bound:
                continue
            assign[j] = c
            used |= np.int64(1) << c
            pos[e] = j
            card[e] = c
            flips[e] = f
            bnd[e] = b
            nxt[e] = 2
            level_counts[e] += 1
            d = e
            advanced = True
            break

        if advanced:
            if dynamic:
                ticks += 1
                if (ticks & REFRESH_MASK) == 0:
                    bound = _shared_bound(seed, incumbent)
            continue
        if d == r:
            break
        assign[pos[d]] = 0
        used &= ~(np.int64(1) << card[d])
        d -= 1

    return count, best
