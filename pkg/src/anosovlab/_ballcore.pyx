# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled BFS kernel for Cayley-ball enumeration.

Drop-in replacement for `anosovlab._ballpure.run_bfs` (same contract, same
candidate visiting order, so both backends return identical balls).  The
dedup table is an open-addressing hash map over grid-quantized matrices with
linear probing; equality of group elements is decided by max-entry matrix
distance, never by the hash alone.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, llround

from .errors import AnosovlabError, BallAmbiguityError

cnp.import_array()

DEF MAXDIM = 64          # supports matrices up to 8x8
DEF MAXAMBIG = 16


cdef inline unsigned long long _mix(unsigned long long x) nogil:
    x += 0x9E3779B97F4A7C15ULL
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL
    return x ^ (x >> 31)


cdef inline unsigned long long _hash_key(long long* key, int d) nogil:
    cdef unsigned long long h = 0x243F6A8885A308D3ULL
    cdef int j
    for j in range(d):
        h = _mix(h ^ <unsigned long long> key[j] ^ ((<unsigned long long> j) << 32))
    return h


cdef class _Table:
    """Open-addressing hash table: slot -> element index, with the key hash."""

    cdef cnp.int64_t[::1] slots
    cdef cnp.uint64_t[::1] hashes
    cdef long long capacity
    cdef long long filled
    cdef object slots_arr, hashes_arr

    def __cinit__(self, long long capacity):
        self.capacity = capacity
        self.filled = 0
        self.slots_arr = np.full(capacity, -1, dtype=np.int64)
        self.hashes_arr = np.zeros(capacity, dtype=np.uint64)
        self.slots = self.slots_arr
        self.hashes = self.hashes_arr

    cdef void insert(self, unsigned long long h, long long idx):
        cdef long long mask = self.capacity - 1
        cdef long long slot = <long long> (h & <unsigned long long> mask)
        while self.slots[slot] != -1:
            slot = (slot + 1) & mask
        self.slots[slot] = idx
        self.hashes[slot] = h
        self.filled += 1

    cdef _Table grown(self, cnp.uint64_t[::1] elem_hash, long long count):
        cdef _Table fresh = _Table(self.capacity * 2)
        cdef long long i
        for i in range(count):
            fresh.insert(elem_hash[i], i)
        return fresh


def run_bfs(object gens_obj, int radius, long long budget,
            double grid, double tau_same, double tau_dedup):
    """See `anosovlab._ballpure.run_bfs` for the contract."""
    cdef cnp.ndarray[cnp.float64_t, ndim=3] gens = \
        np.ascontiguousarray(gens_obj, dtype=np.float64)
    cdef int n_letters = gens.shape[0]
    cdef int m = gens.shape[1]
    cdef int d = m * m
    if d > MAXDIM:
        raise AnosovlabError(f"compiled kernel supports matrix dim <= 8, got {m}")
    cdef double band = tau_dedup / grid
    if band >= 0.49:
        raise AnosovlabError(
            f"hash grid {grid:g} too fine relative to tau_dedup {tau_dedup:g}"
        )
    band += 1e-9

    cdef long long cap = 4096
    mats_arr = np.zeros((cap, d), dtype=np.float64)
    parents_arr = np.zeros(cap, dtype=np.int64)
    letters_arr = np.zeros(cap, dtype=np.int64)
    ehash_arr = np.zeros(cap, dtype=np.uint64)
    cdef cnp.float64_t[:, ::1] mats = mats_arr
    cdef cnp.int64_t[::1] parents = parents_arr
    cdef cnp.int64_t[::1] letters = letters_arr
    cdef cnp.uint64_t[::1] ehash = ehash_arr
    cdef cnp.float64_t[:, :, ::1] gv = gens

    cdef double[MAXDIM] cand
    cdef long long[MAXDIM] key
    cdef long long[MAXDIM] probe
    cdef int[MAXAMBIG] ambig
    cdef int n_ambig

    cdef long long count = 0, i, j, idx, slot, mask, t, tmp
    cdef int a, b, c, letter, last, depth, dig
    cdef double s, x, dist, min_d, entry
    cdef unsigned long long h, hp
    cdef bint truncated = False, found_same
    cdef long long lo, hi
    cdef long long n_probe

    cdef _Table table = _Table(1 << 13)

    # identity at depth 0
    for a in range(m):
        for b in range(m):
            mats[0, a * m + b] = 1.0 if a == b else 0.0
    parents[0] = -1
    letters[0] = -1
    for j in range(d):
        key[j] = llround(mats[0, j] / grid)
    h = _hash_key(key, d)
    ehash[0] = h
    table.insert(h, 0)
    count = 1
    offsets = [0, 1]

    lo, hi = 0, 1
    for depth in range(radius):
        if truncated or lo == hi:
            break
        i = lo
        while i < hi:
            last = <int> letters[i]
            for letter in range(n_letters):
                if letter == (last ^ 1):
                    continue
                # cand = mats[i] @ gens[letter]
                for a in range(m):
                    for c in range(m):
                        s = 0.0
                        for b in range(m):
                            s += mats[i, a * m + b] * gv[letter, b, c]
                        cand[a * m + c] = s
                # quantize; collect coordinates near a cell boundary
                n_ambig = 0
                for j in range(d):
                    x = cand[j] / grid
                    key[j] = llround(x)
                    if 0.5 - fabs(x - key[j]) <= band:
                        if n_ambig >= MAXAMBIG:
                            raise AnosovlabError(
                                "too many grid-ambiguous coordinates; loosen hash_grid"
                            )
                        ambig[n_ambig] = j
                        n_ambig += 1
                # probe the base key and all +-1 shifts of ambiguous coords
                min_d = np.inf
                n_probe = 1
                for a in range(n_ambig):
                    n_probe *= 3
                mask = table.capacity - 1
                for t in range(n_probe):
                    for j in range(d):
                        probe[j] = key[j]
                    tmp = t
                    for a in range(n_ambig - 1, -1, -1):
                        dig = <int> (tmp % 3)
                        tmp //= 3
                        if dig == 1:
                            probe[ambig[a]] -= 1
                        elif dig == 2:
                            probe[ambig[a]] += 1
                    hp = _hash_key(probe, d)
                    slot = <long long> (hp & <unsigned long long> mask)
                    while table.slots[slot] != -1:
                        if table.hashes[slot] == hp:
                            idx = table.slots[slot]
                            dist = 0.0
                            for j in range(d):
                                entry = fabs(mats[idx, j] - cand[j])
                                if entry > dist:
                                    dist = entry
                                    if dist > tau_dedup:
                                        break
                            if dist <= tau_dedup and dist < min_d:
                                min_d = dist
                        slot = (slot + 1) & mask
                if min_d < tau_same:
                    continue
                if min_d <= tau_dedup:
                    raise BallAmbiguityError(min_d)
                if count >= budget:
                    truncated = True
                    break
                if count == cap:
                    cap *= 2
                    mats_arr = np.concatenate([mats_arr, np.zeros_like(mats_arr)])
                    parents_arr = np.concatenate([parents_arr, np.zeros_like(parents_arr)])
                    letters_arr = np.concatenate([letters_arr, np.zeros_like(letters_arr)])
                    ehash_arr = np.concatenate([ehash_arr, np.zeros_like(ehash_arr)])
                    mats = mats_arr
                    parents = parents_arr
                    letters = letters_arr
                    ehash = ehash_arr
                for j in range(d):
                    mats[count, j] = cand[j]
                parents[count] = i
                letters[count] = letter
                h = _hash_key(key, d)
                ehash[count] = h
                if 2 * (table.filled + 1) > table.capacity:
                    table = table.grown(ehash, count)
                table.insert(h, count)
                count += 1
            if truncated:
                break
            i += 1
        offsets.append(count)
        lo, hi = hi, count

    return (
        mats_arr[:count].reshape(count, m, m).copy(),
        parents_arr[:count].copy(),
        letters_arr[:count].copy(),
        np.asarray(offsets, dtype=np.int64),
        bool(truncated),
    )
