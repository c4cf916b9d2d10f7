"""Symplectic linear algebra over R^{2n} with the standard form.

Everything downstream (charts, flags, diagnostics) reduces to a small set of
subspace operations: omega-orthogonals, transversality margins, intersection
dimensions and directness-of-sum margins.  All of them are computed from
singular values of concatenated orthonormal bases, which keeps every margin
scale-free and basis-independent.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DegenerateSubspaceError, DimensionMismatchError

__all__ = [
    "SymplecticSpace",
    "Subspace",
    "Margin",
    "standard_form",
    "principal_angles",
    "omega_orthogonal",
    "is_isotropic",
    "is_lagrangian",
    "transverse",
    "intersection_dim",
    "direct_sum_margin",
    "intersect",
    "sum_subspace",
    "subset_residual",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(np.asarray(a, dtype=float))
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Margin:
    """A numerical pass/fail decision with the quantity and threshold it used.

    `sense` records which side of the tolerance counts as a pass: "at_least"
    for margins that certify transversality/directness (bigger is better),
    "at_most" for residuals that certify a vanishing condition (smaller is
    better).
    """

    value: float
    tolerance: float
    passed: bool
    sense: str = "at_least"

    @classmethod
    def at_least(cls, value: float, tolerance: float) -> "Margin":
        return cls(float(value), float(tolerance), bool(value > tolerance), "at_least")

    @classmethod
    def at_most(cls, value: float, tolerance: float) -> "Margin":
        return cls(float(value), float(tolerance), bool(value < tolerance), "at_most")

    def __bool__(self) -> bool:
        return self.passed

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "sense": self.sense,
        }


@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    """R^{2n} carrying the standard symplectic form."""

    n: int
    omega: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.n

    def pairing(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(np.asarray(u) @ self.omega @ np.asarray(v))


def standard_form(n: int) -> SymplecticSpace:
    """The standard symplectic R^{2n}: omega(e_i, e_{n+i}) = 1, omega^2 = -Id."""
    if n < 1:
        raise DimensionMismatchError(f"need n >= 1, got {n}")
    eye = np.eye(n)
    omega = np.block([[np.zeros((n, n)), eye], [-eye, np.zeros((n, n))]])
    return SymplecticSpace(n=int(n), omega=_readonly(omega))


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of R^m stored as an orthonormal basis (m x k matrix).

    Construct through `from_spanning` (re-orthonormalizes, rejects
    rank-deficient spanning sets) or `zero`/`full`.  The zero subspace is a
    (m, 0) basis.
    """

    basis: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_spanning(cls, vectors, tol: Tolerances = DEFAULT) -> "Subspace":
        mat = np.atleast_2d(np.asarray(vectors, dtype=float))
        if mat.ndim != 2:
            raise DegenerateSubspaceError("spanning set must be a 2-d array of columns")
        m, k = mat.shape
        if k == 0:
            return cls.zero(m)
        norms = np.linalg.norm(mat, axis=0)
        if np.any(norms <= tol.rank):
            raise DegenerateSubspaceError("spanning set contains a (numerically) zero column")
        u, s, _ = np.linalg.svd(mat / norms, full_matrices=False)
        if np.sum(s > tol.rank) < k:
            raise DegenerateSubspaceError(
                f"spanning set is rank-deficient: sigma_min = {s[-1]:.3e}"
            )
        return cls(basis=_readonly(u[:, :k]))

    @classmethod
    def from_orthonormal(cls, basis, tol: Tolerances = DEFAULT) -> "Subspace":
        basis = np.asarray(basis, dtype=float)
        if basis.shape[1] > 0:
            defect = np.max(np.abs(basis.T @ basis - np.eye(basis.shape[1])))
            if defect > tol.orth:
                raise DegenerateSubspaceError(
                    f"basis is not orthonormal: defect {defect:.3e} > {tol.orth:.1e}"
                )
        return cls(basis=_readonly(basis))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(basis=_readonly(np.zeros((ambient_dim, 0))))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(basis=_readonly(np.eye(ambient_dim)))

    def same_subspace(self, other: "Subspace", tol: Tolerances = DEFAULT) -> Margin:
        """Max principal-angle sine between the two subspaces (at_most tau_angle).

        Computed as the projector-difference norm max(||(I-P_a) B||, ||(I-P_b) A||)
        rather than sin(arccos(sigma)), which loses half the digits for angles
        below sqrt(machine eps).
        """
        self._check_ambient(other)
        if self.dim != other.dim:
            return Margin(1.0, tol.angle, False, "at_most")
        if self.dim == 0:
            return Margin(0.0, tol.angle, True, "at_most")
        residual = max(subset_residual(other, self), subset_residual(self, other))
        return Margin.at_most(residual, tol.angle)

    def contains(self, other: "Subspace", tol: Tolerances = DEFAULT) -> Margin:
        """Largest principal-angle sine between `other` and its projection here."""
        self._check_ambient(other)
        return Margin.at_most(subset_residual(other, self), tol.angle)

    def project(self, vectors: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.T @ np.asarray(vectors, dtype=float))

    def coords_in(self, outer: "Subspace") -> np.ndarray:
        """Coordinates of this subspace's basis in `outer`'s stored basis.

        Only meaningful when self is contained in `outer`; the caller is
        responsible for that (the coordinate matrix is then orthonormal).
        """
        return outer.basis.T @ self.basis

    def _check_ambient(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )


def _concat_bases(parts) -> np.ndarray:
    mats = [p.basis for p in parts]
    return np.hstack(mats) if mats else np.zeros((0, 0))


def principal_angles(a: Subspace, b: Subspace) -> np.ndarray:
    """Principal angles (ascending, radians) between two subspaces."""
    a._check_ambient(b)
    if a.dim == 0 or b.dim == 0:
        return np.zeros(0)
    cosines = np.linalg.svd(a.basis.T @ b.basis, compute_uv=False)
    return np.arccos(np.clip(cosines, -1.0, 1.0))


def omega_orthogonal(space: SymplecticSpace, v: Subspace) -> Subspace:
    """The omega-orthogonal V^perp = {w : omega(v, w) = 0 for all v in V}."""
    v._check_ambient(Subspace.zero(space.dim))
    if v.dim == 0:
        return Subspace.full(space.dim)
    constraints = v.basis.T @ space.omega
    _, _, vt = np.linalg.svd(constraints)
    # constraints has orthonormal rows (omega is orthogonal), so the rank is
    # exactly v.dim and the null space is the trailing right-singular block.
    return Subspace.from_orthonormal(vt[v.dim :].T)


def is_isotropic(space: SymplecticSpace, v: Subspace, tol: Tolerances = DEFAULT) -> Margin:
    """Residual max |omega(v_i, v_j)| over the stored basis (at_most tau_iso)."""
    if v.dim == 0:
        return Margin.at_most(0.0, tol.iso)
    residual = float(np.max(np.abs(v.basis.T @ space.omega @ v.basis)))
    return Margin.at_most(residual, tol.iso)


def is_lagrangian(space: SymplecticSpace, v: Subspace, tol: Tolerances = DEFAULT) -> bool:
    return v.dim == space.n and bool(is_isotropic(space, v, tol))


def transverse(a: Subspace, b: Subspace, tol: Tolerances = DEFAULT) -> Margin:
    """Smallest singular value of [A | B]; certifies trivial intersection.

    Requires dim A + dim B <= ambient dimension (overflow is ill-posed, not a
    failed margin); with equality a pass certifies complementarity.
    """
    a._check_ambient(b)
    if a.dim + b.dim > a.ambient_dim:
        raise DimensionMismatchError(
            f"dim A + dim B = {a.dim + b.dim} exceeds ambient {a.ambient_dim}"
        )
    if a.dim + b.dim == 0:
        return Margin.at_least(1.0, tol.rank)
    sigma = np.linalg.svd(_concat_bases([a, b]), compute_uv=False)
    return Margin.at_least(float(sigma[-1]), tol.rank)


def intersection_dim(a: Subspace, b: Subspace, tol: Tolerances = DEFAULT) -> int:
    """Numerical dim(A ∩ B) = dim A + dim B - rank([A | B]) with the rank cut at tau_rank."""
    a._check_ambient(b)
    if a.dim == 0 or b.dim == 0:
        return 0
    sigma = np.linalg.svd(_concat_bases([a, b]), compute_uv=False)
    rank = int(np.sum(sigma > tol.rank))
    return a.dim + b.dim - rank


def direct_sum_margin(parts, tol: Tolerances = DEFAULT) -> Margin:
    """Smallest singular value of the column-concatenation of all bases.

    Pass certifies that the sum of the parts is direct.  The empty sum is
    direct with margin 1 by convention.
    """
    parts = list(parts)
    total = sum(p.dim for p in parts)
    if total == 0:
        return Margin.at_least(1.0, tol.rank)
    ambient = parts[0].ambient_dim
    for p in parts:
        if p.ambient_dim != ambient:
            raise DimensionMismatchError("direct_sum_margin parts live in different ambients")
    if total > ambient:
        raise DimensionMismatchError(
            f"sum of part dimensions {total} exceeds ambient {ambient}"
        )
    sigma = np.linalg.svd(_concat_bases(parts), compute_uv=False)
    return Margin.at_least(float(sigma[-1]), tol.rank)


def intersect(a: Subspace, b: Subspace, tol: Tolerances = DEFAULT) -> Subspace:
    """Orthonormal basis of A ∩ B via the null space of [A | -B]."""
    a._check_ambient(b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    if a.dim == a.ambient_dim:
        return b
    if b.dim == b.ambient_dim:
        return a
    stacked = np.hstack([a.basis, -b.basis])
    _, s, vt = np.linalg.svd(stacked)
    null_mask = np.zeros(stacked.shape[1], dtype=bool)
    null_mask[len(s) :] = True
    null_mask[: len(s)] = s <= tol.rank
    if not np.any(null_mask):
        return Subspace.zero(a.ambient_dim)
    alphas = vt[null_mask].T[: a.dim]
    vectors = a.basis @ alphas
    u, s2, _ = np.linalg.svd(vectors, full_matrices=False)
    keep = int(np.sum(s2 > tol.rank))
    return Subspace.from_orthonormal(u[:, :keep])


def sum_subspace(parts, tol: Tolerances = DEFAULT) -> Subspace:
    """Orthonormal basis of the (not necessarily direct) sum of the parts."""
    parts = list(parts)
    if not parts:
        raise DimensionMismatchError("sum_subspace needs at least one part")
    stacked = _concat_bases(parts)
    if stacked.shape[1] == 0:
        return Subspace.zero(parts[0].ambient_dim)
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    keep = int(np.sum(s > tol.rank))
    return Subspace.from_orthonormal(u[:, :keep])


def subset_residual(inner: Subspace, outer: Subspace) -> float:
    """Spectral norm of (Id - P_outer) applied to inner's basis.

    Equals the sine of the largest principal angle between `inner` and its
    projection into `outer`; zero iff inner is contained in outer.
    """
    if inner.dim == 0:
        return 0.0
    defect = inner.basis - outer.project(inner.basis)
    return float(np.linalg.norm(defect, 2))
