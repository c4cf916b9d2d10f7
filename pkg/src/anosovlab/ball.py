"""Cayley-ball enumeration through a faithful matrix representation.

BFS over right multiplication by generator images, deduplicating group
elements by quantized-matrix hashing.  Word lengths are exact (first-seen BFS
depth); the identity sits at depth 0.  Two interchangeable kernels exist: a
compiled one (`anosovlab._ballcore`, Cython) and a pure-numpy fallback
(`anosovlab._ballpure`); the fastest available is selected at import, the
environment variable ANOSOVLAB_BALL_BACKEND=compiled|pure forces the choice,
and `enumerate_ball(..., backend=...)` overrides both.

Deduplication runs on the representation's `dedup_images` (the 2x2 base
matrices when the construction factors through SL(2,R)), whose entries stay
small enough along the ball that the (tau_same, tau_dedup) window is
reliable.  The full-size images are then rebuilt level by level along the
BFS tree, so `Ball.matrices` always holds the representation's own images.
"""

import os
import warnings
from dataclasses import dataclass

import numpy as np

from . import _ballpure
from .config import DEFAULT, Tolerances
from .surface_group import Word

try:
    from . import _ballcore
except ImportError:  # pragma: no cover - depends on the build environment
    _ballcore = None

__all__ = ["BallElement", "Ball", "enumerate_ball", "available_backends"]


def available_backends() -> tuple[str, ...]:
    return ("compiled", "pure") if _ballcore is not None else ("pure",)


def _pick_backend(requested: str | None) -> str:
    choice = requested or os.environ.get("ANOSOVLAB_BALL_BACKEND") or None
    if choice is None:
        choice = "compiled" if _ballcore is not None else "pure"
    if choice not in ("compiled", "pure"):
        raise ValueError(f"unknown ball backend {choice!r}")
    if choice == "compiled" and _ballcore is None:
        raise ValueError("compiled ball backend requested but not built")
    return choice


@dataclass(frozen=True, eq=False)
class BallElement:
    """A group element: geodesic word plus its representation image."""

    word: Word
    matrix: np.ndarray


class Ball:
    """The radius-r Cayley ball as a sequence of BallElement, sorted by length.

    Heavy consumers should use the array attributes (`matrices`, `lengths`)
    rather than materializing elements one by one.
    """

    def __init__(self, matrices, parents, letters, offsets, truncated, radius, backend):
        self.matrices = matrices
        self.parents = parents
        self.letters = letters
        self.offsets = offsets
        self.truncated = bool(truncated)
        self.radius = int(radius)
        self.backend = backend
        lengths = np.empty(len(matrices), dtype=np.int64)
        for r in range(len(offsets) - 1):
            lengths[offsets[r] : offsets[r + 1]] = r
        self.lengths = lengths

    def __len__(self) -> int:
        return self.matrices.shape[0]

    def word_at(self, index: int) -> Word:
        letters = []
        i = int(index)
        while i > 0:
            letters.append(int(self.letters[i]))
            i = int(self.parents[i])
        return Word(tuple(reversed(letters)))

    def __getitem__(self, index) -> BallElement:
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(len(self)))]
        if index < 0:
            index += len(self)
        if not 0 <= index < len(self):
            raise IndexError(index)
        return BallElement(word=self.word_at(index), matrix=self.matrices[index])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def counts_by_radius(self) -> list[int]:
        return [int(b - a) for a, b in zip(self.offsets, self.offsets[1:])]


def enumerate_ball(
    rep,
    radius: int,
    tol: Tolerances = DEFAULT,
    budget: int | None = None,
    backend: str | None = None,
) -> Ball:
    """Enumerate the Cayley ball of the given radius through `rep`.

    Raises BallAmbiguityError when two distinct elements come numerically too
    close (distance in (tau_same, tau_dedup]); emits a warning and returns a
    truncated ball when the element budget is hit.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    chosen = _pick_backend(backend)
    kernel = _ballcore if chosen == "compiled" else _ballpure
    alphabet = range(rep.presentation.alphabet_size)
    dedup_gens = np.stack([np.asarray(m, dtype=float) for m in rep.dedup_images])
    budget = int(tol.budget if budget is None else budget)
    mats, parents, letters, offsets, truncated = kernel.run_bfs(
        dedup_gens, int(radius), budget, tol.hash_grid, tol.same, tol.dedup
    )
    if truncated:
        warnings.warn(
            f"ball enumeration hit the element budget {budget}; result truncated",
            stacklevel=2,
        )
    if rep.dedup_is_images:
        images = mats
    else:
        # rebuild the representation's own images along the BFS tree
        gens = np.stack([rep.generator_image(l) for l in alphabet])
        images = np.empty((mats.shape[0], gens.shape[1], gens.shape[2]))
        images[0] = np.eye(gens.shape[1])
        for r in range(1, len(offsets) - 1):
            lo, hi = offsets[r], offsets[r + 1]
            images[lo:hi] = images[parents[lo:hi]] @ gens[letters[lo:hi]]
    return Ball(images, parents, letters, offsets, truncated, radius, chosen)
