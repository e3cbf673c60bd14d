"""Search for multiplier sets minimizing the worst-case false acceptance.

The score of a candidate set K is max over lengths l in 1..p-1 of
parallel_interference_form(p, K, l); smaller is better. Exhaustive mode
enumerates all d-subsets of {1..p-1} in lexicographic order, random mode
scores seeded random subsets. Both are deterministic for fixed inputs.
"""
from __future__ import annotations

import math
from itertools import combinations, islice

import numpy as np

from .qfa import ConstructionError, check_odd_prime, _check_power_of_two

EXHAUSTIVE_BUDGET = 10**6

_CHUNK = 4096


def _cosine_table(p: int) -> np.ndarray:
    """T[k-1, l-1] = cos(2 pi k l / p) for k, l in 1..p-1."""
    k = np.arange(1, p)
    return np.cos(2 * np.pi * np.outer(k, k) / p)


def _scores(table: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Worst-case interference score for each candidate row of multipliers."""
    branch_mean = table[candidates - 1, :].mean(axis=1)
    return (branch_mean**2).max(axis=1)


def search_k(
    p: int,
    d: int,
    mode: str = "exhaustive",
    *,
    trials: int | None = None,
    seed: int | None = None,
) -> tuple[tuple[int, ...], float]:
    """Best multiplier set of size d and its worst-case acceptance.

    Ties are broken toward the lexicographically smallest set. Random mode
    requires `trials` and `seed`; candidate j is drawn from its own
    generator spawned from the seed, so results do not depend on evaluation
    order.
    """
    check_odd_prime(p)
    _check_power_of_two(d, "set size d")
    if d > p - 1:
        raise ConstructionError(f"cannot pick {d} distinct multipliers below p={p}")
    table = _cosine_table(p)

    if mode == "exhaustive":
        total = math.comb(p - 1, d)
        if total > EXHAUSTIVE_BUDGET:
            raise ConstructionError(
                f"exhaustive search over {total} candidates exceeds the "
                f"{EXHAUSTIVE_BUDGET} budget; use mode='random' with trials and seed"
            )
        best_k, best_w = None, math.inf
        combos = combinations(range(1, p), d)
        while True:
            chunk = list(islice(combos, _CHUNK))
            if not chunk:
                break
            scores = _scores(table, np.asarray(chunk))
            i = int(np.argmin(scores))
            if scores[i] < best_w:
                best_w = float(scores[i])
                best_k = chunk[i]
        return tuple(best_k), best_w

    if mode == "random":
        if trials is None or trials < 1:
            raise ConstructionError("random mode requires trials >= 1")
        if seed is None:
            raise ConstructionError("random mode requires a seed")
        streams = np.random.SeedSequence(seed).spawn(trials)
        candidates = np.empty((trials, d), dtype=np.int64)
        for j, stream in enumerate(streams):
            rng = np.random.default_rng(stream)
            candidates[j] = np.sort(rng.choice(np.arange(1, p), size=d, replace=False))
        scores = _scores(table, candidates)
        best_k, best_w = None, math.inf
        for j in range(trials):
            kset = tuple(int(x) for x in candidates[j])
            if scores[j] < best_w or (scores[j] == best_w and kset < best_k):
                best_w = float(scores[j])
                best_k = kset
        return best_k, best_w

    raise ConstructionError(f"mode must be 'exhaustive' or 'random', got {mode!r}")
