"""PAM-style k-medoids: greedy build initialization plus capped swap
refinement, deterministic given the seed."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist


def _tie_break(values: np.ndarray, priority: np.ndarray) -> int:
    """Index of the minimum value; exact ties resolved by lowest priority."""
    best = np.flatnonzero(values == values.min())
    return int(best[np.argmin(priority[best])])


def kmedoids(
    points: np.ndarray, k: int, seed: int = 0, max_swaps: int = 100
) -> np.ndarray:
    """Select k medoid row indices minimizing total Euclidean distance.

    Greedy build picks the point with the largest cost reduction at each
    step; swap refinement then applies the single best (medoid, candidate)
    exchange until no exchange improves the cost or ``max_swaps`` is hit.
    Ties are broken by a seed-derived priority so reruns are reproducible.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if k == n:
        return np.arange(n, dtype=np.int64)

    priority = np.random.default_rng(seed).permutation(n)
    D = cdist(points, points)

    # greedy build
    totals = D.sum(axis=1)
    medoids = [_tie_break(totals, priority)]
    d_near = D[medoids[0]].copy()
    while len(medoids) < k:
        # cost if each candidate were added, given current nearest distances
        new_costs = np.minimum(D, d_near[None, :]).sum(axis=1)
        new_costs[medoids] = np.inf
        c = _tie_break(new_costs, priority)
        medoids.append(c)
        np.minimum(d_near, D[c], out=d_near)

    # swap refinement
    medoid_arr = np.array(medoids, dtype=np.int64)
    for _ in range(max_swaps):
        dist_to_medoids = D[medoid_arr]  # (k, n)
        order = np.argsort(dist_to_medoids, axis=0)
        nearest_idx = order[0]
        d_near = dist_to_medoids[nearest_idx, np.arange(n)]
        d_second = dist_to_medoids[order[1], np.arange(n)] if k > 1 else np.full(n, np.inf)

        best_delta = np.inf
        best_pair: tuple[int, int] | None = None
        best_prio = np.inf
        is_medoid = np.zeros(n, dtype=bool)
        is_medoid[medoid_arr] = True
        for mi in range(k):
            owned = nearest_idx == mi
            # points losing medoid mi fall back to min(second-nearest, candidate)
            gain_owned = (
                np.minimum(D[owned], d_second[owned][:, None]).sum(axis=0)
                - d_near[owned].sum()
            )
            gain_other = np.minimum(D[~owned] - d_near[~owned][:, None], 0.0).sum(axis=0)
            delta = gain_owned + gain_other
            delta[is_medoid] = np.inf
            ci = _tie_break(delta, priority)
            d_ci = float(delta[ci])
            if d_ci >= -1e-12:
                continue  # no strict improvement from this medoid
            if (
                best_pair is None
                or d_ci < best_delta - 1e-12
                or (d_ci <= best_delta + 1e-12 and priority[ci] < best_prio)
            ):
                best_delta = d_ci
                best_pair = (mi, ci)
                best_prio = priority[ci]
        if best_pair is None:
            break
        medoid_arr[best_pair[0]] = best_pair[1]
    return np.sort(medoid_arr)
