"""Pure-Python stepping and labeling kernels.

This is the fallback twin of the compiled extension ``corrlat._speedups``.
Both kernels implement exactly the same algorithm, draw-for-draw and
IEEE-operation-for-operation, so a chain advanced by either one produces
bit-identical trajectories.  Keep the arithmetic evaluation order in the
two files in sync when editing either.
"""

from __future__ import annotations

import math

import numpy as np

CORE_NAME = "python"

_MASK64 = 0xFFFFFFFFFFFFFFFF
_INV_2_53 = 1.0 / 9007199254740992.0

SCHEDULE_RANDOM = 0
SCHEDULE_SEQUENTIAL = 1


def run_steps(
    spins: np.ndarray,
    nbrs: np.ndarray,
    slot_j,
    j_uniform: float,
    beta: float,
    nsteps: int,
    rng_state: np.ndarray,
    schedule: int,
    sweep_pos: int,
    w: float,
):
    """Advance ``nsteps`` elementary Metropolis moves in place.

    ``spins`` (int8) and ``rng_state`` (uint64[4], xoshiro256++ words) are
    mutated.  ``slot_j`` is a (M, 2d) float64 per-slot coupling array, or
    None for a uniform coupling ``j_uniform``.  ``beta`` is the acceptance
    beta (already scaled by the objective convention); ``w`` is the running
    bond-once objective.  Returns ``(w, sweep_pos, accepted, real_draws)``.
    """
    m = spins.shape[0]
    nslots = nbrs.shape[1]
    s = spins.tolist()
    nb = nbrs.tolist()
    sj = slot_j.tolist() if slot_j is not None else None
    s0, s1, s2, s3 = (int(x) for x in rng_state)
    two_j = 2.0 * j_uniform
    exp = math.exp
    accepted = 0
    real_draws = 0
    w = float(w)
    pos = int(sweep_pos)
    random_schedule = schedule == SCHEDULE_RANDOM

    for _ in range(nsteps):
        if random_schedule:
            t = (s0 + s3) & _MASK64
            u = (((t << 23) | (t >> 41)) + s0) & _MASK64
            t = (s1 << 17) & _MASK64
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
            k = (u * m) >> 64
        else:
            k = pos
            pos += 1
            if pos == m:
                pos = 0

        ck = s[k]
        row = nb[k]
        if sj is None:
            ssum = 0
            for j in row:
                ssum += s[j]
            delta = two_j * (ck * ssum)
        else:
            jr = sj[k]
            h = 0.0
            for t2 in range(nslots):
                h += jr[t2] * s[row[t2]]
            delta = 2.0 * ck * h

        if delta > 0.0:
            t = (s0 + s3) & _MASK64
            u = (((t << 23) | (t >> 41)) + s0) & _MASK64
            t = (s1 << 17) & _MASK64
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
            xi = (u >> 11) * _INV_2_53
            real_draws += 1
            accept = exp(-beta * delta) >= xi
        else:
            accept = True

        if accept:
            s[k] = -ck
            w += delta
            accepted += 1

    spins[:] = s
    rng_state[0] = s0
    rng_state[1] = s1
    rng_state[2] = s2
    rng_state[3] = s3
    return w, pos, accepted, real_draws


def label_corrupt(spins: np.ndarray, nbrs: np.ndarray):
    """Union-find labeling of corrupt (+1) sites over the lattice adjacency.

    Returns ``(labels, n_clusters)`` where ``labels`` is int32 with -1 on
    honest sites and cluster ids 0..n-1 assigned in order of each cluster's
    smallest member site index.
    """
    m = spins.shape[0]
    s = spins.tolist()
    nb = nbrs.tolist()
    nslots = nbrs.shape[1]
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # each bond is examined once through its positive-direction slot
    for i in range(m):
        if s[i] != 1:
            continue
        for a in range(1, nslots, 2):
            j = nb[i][a]
            if s[j] == 1:
                ri = find(i)
                rj = find(j)
                if ri != rj:
                    if ri < rj:
                        parent[rj] = ri
                    else:
                        parent[ri] = rj

    labels = np.full(m, -1, dtype=np.int32)
    root_label = [-1] * m
    next_label = 0
    for i in range(m):
        if s[i] != 1:
            continue
        r = find(i)
        lab = root_label[r]
        if lab == -1:
            lab = next_label
            root_label[r] = lab
            next_label += 1
        labels[i] = lab
    return labels, next_label
