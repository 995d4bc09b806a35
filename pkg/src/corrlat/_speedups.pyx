# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping and labeling kernels.

Twin of ``corrlat._pycore``: same algorithm, same xoshiro256++ stream,
same IEEE evaluation order, so trajectories are bit-identical across the
two cores.  Keep the arithmetic in the two files in sync when editing.
"""

from libc.math cimport exp
from libc.stdint cimport uint64_t

import numpy as np

CORE_NAME = "compiled"

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t corrlat_mulhi(uint64_t a, uint64_t b) {
        return (uint64_t)(((__uint128_t)a * (__uint128_t)b) >> 64);
    }
    """
    uint64_t corrlat_mulhi(uint64_t a, uint64_t b) nogil

cdef double _INV_2_53 = 1.0 / 9007199254740992.0

cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


def run_steps(signed char[::1] spins, const int[:, ::1] nbrs, object slot_j_obj,
              double j_uniform, double beta, long long nsteps,
              uint64_t[::1] rng_state, int schedule, long long sweep_pos,
              double w):
    """Advance ``nsteps`` elementary Metropolis moves in place.

    Same contract as ``corrlat._pycore.run_steps``.
    """
    cdef Py_ssize_t m = spins.shape[0]
    cdef int nslots = <int>nbrs.shape[1]
    cdef uint64_t s0 = rng_state[0]
    cdef uint64_t s1 = rng_state[1]
    cdef uint64_t s2 = rng_state[2]
    cdef uint64_t s3 = rng_state[3]
    cdef long long accepted = 0
    cdef long long real_draws = 0
    cdef long long pos = sweep_pos
    cdef double two_j = 2.0 * j_uniform
    cdef bint has_bonds = slot_j_obj is not None
    cdef const double[:, ::1] slot_j
    if has_bonds:
        slot_j = slot_j_obj
    else:
        slot_j = np.zeros((1, 1))

    # acceptance tables for the uniform coupling: delta depends only on
    # (c_k, sum of neighbor spins); table values equal the per-step
    # expressions used by the fallback core bit for bit
    cdef double dtab[2][13]
    cdef double ptab[2][13]
    cdef int ci, sidx, ckv, ssv
    cdef double dval
    if not has_bonds:
        for ci in range(2):
            ckv = 2 * ci - 1
            for sidx in range(2 * nslots + 1):
                ssv = sidx - nslots
                dval = two_j * (ckv * ssv)
                dtab[ci][sidx] = dval
                ptab[ci][sidx] = 1.0 if dval <= 0.0 else exp(-beta * dval)

    cdef long long step
    cdef uint64_t u, t
    cdef Py_ssize_t k
    cdef int ck, ssum, t2
    cdef double delta, h, xi
    cdef bint accept

    with nogil:
        for step in range(nsteps):
            if schedule == 0:
                t = s0 + s3
                u = _rotl(t, 23) + s0
                t = s1 << 17
                s2 ^= s0
                s3 ^= s1
                s1 ^= s2
                s0 ^= s3
                s2 ^= t
                s3 = _rotl(s3, 45)
                k = <Py_ssize_t>corrlat_mulhi(u, <uint64_t>m)
            else:
                k = <Py_ssize_t>pos
                pos += 1
                if pos == m:
                    pos = 0

            ck = spins[k]
            if has_bonds:
                h = 0.0
                for t2 in range(nslots):
                    h += slot_j[k, t2] * spins[nbrs[k, t2]]
                delta = 2.0 * ck * h
                if delta > 0.0:
                    t = s0 + s3
                    u = _rotl(t, 23) + s0
                    t = s1 << 17
                    s2 ^= s0
                    s3 ^= s1
                    s1 ^= s2
                    s0 ^= s3
                    s2 ^= t
                    s3 = _rotl(s3, 45)
                    xi = (u >> 11) * _INV_2_53
                    real_draws += 1
                    accept = exp(-beta * delta) >= xi
                else:
                    accept = True
            else:
                ssum = 0
                for t2 in range(nslots):
                    ssum += spins[nbrs[k, t2]]
                ci = (ck + 1) >> 1
                sidx = ssum + nslots
                delta = dtab[ci][sidx]
                if delta > 0.0:
                    t = s0 + s3
                    u = _rotl(t, 23) + s0
                    t = s1 << 17
                    s2 ^= s0
                    s3 ^= s1
                    s1 ^= s2
                    s0 ^= s3
                    s2 ^= t
                    s3 = _rotl(s3, 45)
                    xi = (u >> 11) * _INV_2_53
                    real_draws += 1
                    accept = ptab[ci][sidx] >= xi
                else:
                    accept = True

            if accept:
                spins[k] = <signed char>(-ck)
                w += delta
                accepted += 1

    rng_state[0] = s0
    rng_state[1] = s1
    rng_state[2] = s2
    rng_state[3] = s3
    return w, pos, accepted, real_draws


def label_corrupt(const signed char[::1] spins, const int[:, ::1] nbrs):
    """Union-find labeling of corrupt sites; twin of the fallback version."""
    cdef Py_ssize_t m = spins.shape[0]
    cdef int nslots = <int>nbrs.shape[1]
    labels_arr = np.full(m, -1, dtype=np.int32)
    parent_arr = np.arange(m, dtype=np.int64)
    root_label_arr = np.full(m, -1, dtype=np.int32)
    cdef int[::1] labels = labels_arr
    cdef long long[::1] parent = parent_arr
    cdef int[::1] root_label = root_label_arr
    cdef Py_ssize_t i, j, ri, rj, x
    cdef int a, lab
    cdef int next_label = 0

    with nogil:
        for i in range(m):
            if spins[i] != 1:
                continue
            for a in range(1, nslots, 2):
                j = nbrs[i, a]
                if spins[j] == 1:
                    x = i
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    ri = x
                    x = j
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    rj = x
                    if ri != rj:
                        if ri < rj:
                            parent[rj] = ri
                        else:
                            parent[ri] = rj

        for i in range(m):
            if spins[i] != 1:
                continue
            x = i
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            lab = root_label[x]
            if lab == -1:
                lab = next_label
                root_label[x] = lab
                next_label += 1
            labels[i] = lab

    return labels_arr, next_label
