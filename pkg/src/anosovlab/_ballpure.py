"""Pure-numpy BFS kernel for Cayley-ball enumeration.

Reference implementation of the matrix-hash BFS; `anosovlab._ballcore` is a
compiled drop-in with the same contract, and `anosovlab.ball` picks between
them at import time.  Both must visit candidates in identical order
(frontier-ascending, then letter-ascending with the backtracking letter
skipped) so the two backends return element-for-element identical balls.

Deduplication: quantize entries to a grid, look the key up in a hash table,
and additionally probe the 3^k neighboring keys in the coordinates that fall
within tau_dedup of a cell boundary (so near-boundary matrices cannot hide in
an adjacent cell).  Matches closer than tau_same are the same group element;
distances inside (tau_same, tau_dedup] are refused as ambiguous.
"""

import itertools

import numpy as np

from .errors import AnosovlabError, BallAmbiguityError


def run_bfs(gens, radius, budget, grid, tau_same, tau_dedup):
    """BFS over right multiplication by generator images.

    Returns (mats (N,m,m), parents (N,), letters (N,), offsets, truncated):
    offsets[r] is the index of the first element of word length r, with a
    final entry N; truncated means the element budget stopped the search.
    """
    gens = np.ascontiguousarray(gens, dtype=float)
    n_letters, m, _ = gens.shape
    band = tau_dedup / grid
    if band >= 0.49:
        raise AnosovlabError(
            f"hash grid {grid:g} too fine relative to tau_dedup {tau_dedup:g}"
        )

    mats = [np.eye(m)]
    parents = [-1]
    letters = [-1]
    keys = [np.round(np.eye(m).ravel() / grid).astype(np.int64)]
    table = {keys[0].tobytes(): [0]}
    offsets = [0, 1]
    truncated = False

    lo, hi = 0, 1
    for _ in range(radius):
        if truncated or lo == hi:
            break
        for i in range(lo, hi):
            last = letters[i]
            base = mats[i]
            prods = base @ gens
            scaled = prods.reshape(n_letters, m * m) / grid
            cand_keys = np.round(scaled).astype(np.int64)
            boundary = 0.5 - np.abs(scaled - cand_keys)
            for letter in range(n_letters):
                if letter == last ^ 1:
                    continue
                cand = prods[letter]
                key = cand_keys[letter]
                ambiguous = np.nonzero(boundary[letter] <= band + 1e-9)[0]
                if ambiguous.size > 16:
                    raise AnosovlabError(
                        "too many grid-ambiguous coordinates; loosen hash_grid"
                    )
                min_d = np.inf
                for offs in itertools.product((0, -1, 1), repeat=ambiguous.size):
                    probe = key.copy()
                    probe[ambiguous] += np.asarray(offs, dtype=np.int64)
                    for j in table.get(probe.tobytes(), ()):
                        d = float(np.max(np.abs(mats[j] - cand)))
                        min_d = min(min_d, d)
                if min_d < tau_same:
                    continue
                if min_d <= tau_dedup:
                    raise BallAmbiguityError(min_d)
                if len(mats) >= budget:
                    truncated = True
                    break
                idx = len(mats)
                mats.append(cand)
                parents.append(i)
                letters.append(letter)
                keys.append(key)
                table.setdefault(key.tobytes(), []).append(idx)
            if truncated:
                break
        offsets.append(len(mats))
        lo, hi = hi, len(mats)

    return (
        np.ascontiguousarray(np.stack(mats)),
        np.asarray(parents, dtype=np.int64),
        np.asarray(letters, dtype=np.int64),
        np.asarray(offsets, dtype=np.int64),
        truncated,
    )
