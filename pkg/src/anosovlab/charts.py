"""Charts of the Lagrangian Grassmannian by symmetric maps and forms.

A Lagrangian R transverse to Q is the graph {v + u(v) : v in P} of a map
u : P -> Q, and the pairing q(v, w) = omega(v, u(w)) is then a symmetric
bilinear form on P.  A triple of pairwise transverse Lagrangians is maximal
exactly when that form is positive definite.  This module also carries the
rank-one boundary embedding iota : P(P) -> P(Q(P)) and projective-line
utilities (cross ratio, cyclic order, collinearity) used by the diagnostics.

Forms on a 2-dimensional P are coordinatized in the orthonormal (Frobenius)
basis {E11, E22, (E12+E21)/sqrt(2)} of the symmetric 2x2 matrices, so that
collinearity margins are comparable across calls.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (
    ChartDomainError,
    DegenerateQuadrupleError,
    DegenerateSubspaceError,
    DimensionMismatchError,
    SymmetryError,
)
from .symplectic import Margin, Subspace, SymplecticSpace, is_lagrangian, transverse

__all__ = [
    "SymMap",
    "SymForm",
    "ProjPoint",
    "chart_u",
    "graph_lagrangian",
    "chart_q",
    "is_maximal_triple",
    "singular_subspace_check",
    "iota",
    "cross_ratio",
    "is_cyclically_ordered",
    "collinear_in_PQ",
]


def _check_lagrangian(space: SymplecticSpace, sub: Subspace, name: str, tol: Tolerances) -> None:
    if not is_lagrangian(space, sub, tol):
        raise ChartDomainError(f"{name} is not Lagrangian (dim {sub.dim}, n = {space.n})")


@dataclass(frozen=True, eq=False)
class SymMap:
    """A symmetric map u : P -> Q between transverse Lagrangians.

    `matrix` expresses u in the stored orthonormal bases of P and Q.  The
    symmetry residual max |omega(p_i, u(p_j)) - omega(p_j, u(p_i))| is checked
    at construction and kept for reporting.
    """

    space: SymplecticSpace
    p: Subspace
    q: Subspace
    matrix: np.ndarray
    symmetry_residual: float

    @classmethod
    def build(
        cls,
        space: SymplecticSpace,
        p: Subspace,
        q: Subspace,
        matrix,
        tol: Tolerances = DEFAULT,
    ) -> "SymMap":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (space.n, space.n):
            raise DimensionMismatchError(f"u matrix must be {space.n}x{space.n}")
        _check_lagrangian(space, p, "P", tol)
        _check_lagrangian(space, q, "Q", tol)
        if not transverse(p, q, tol):
            raise ChartDomainError("P and Q are not transverse")
        pairing = p.basis.T @ space.omega @ q.basis @ matrix
        residual = float(np.max(np.abs(pairing - pairing.T)))
        if residual > tol.sym:
            raise SymmetryError("u is not omega-symmetric", residual)
        m = matrix.copy()
        m.setflags(write=False)
        return cls(space=space, p=p, q=q, matrix=m, symmetry_residual=residual)


@dataclass(frozen=True, eq=False)
class SymForm:
    """A symmetric bilinear form on a Lagrangian P, in P's stored basis.

    The matrix is kept exactly as computed; the symmetry residual is checked
    against tau_sym at construction and reported, never symmetrized away.
    """

    p: Subspace
    matrix: np.ndarray
    symmetry_residual: float

    @classmethod
    def build(cls, p: Subspace, matrix, tol: Tolerances = DEFAULT) -> "SymForm":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (p.dim, p.dim):
            raise DimensionMismatchError(f"form matrix must be {p.dim}x{p.dim}")
        residual = float(np.max(np.abs(matrix - matrix.T))) if p.dim else 0.0
        if residual > tol.sym:
            raise SymmetryError("form is not symmetric", residual)
        m = matrix.copy()
        m.setflags(write=False)
        return cls(p=p, matrix=m, symmetry_residual=residual)

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues (the residual-checked matrix fed to a symmetric solver)."""
        return np.linalg.eigvalsh(self.matrix)

    def coords(self) -> np.ndarray:
        """Coordinates in the basis {E11, E22, (E12+E21)/sqrt(2)} (dim P = 2 only)."""
        if self.matrix.shape != (2, 2):
            raise DimensionMismatchError("coords() requires a form on a 2-dim P")
        m = self.matrix
        return np.array([m[0, 0], m[1, 1], (m[0, 1] + m[1, 0]) / np.sqrt(2.0)])


def symform_from_coords(p: Subspace, coords) -> SymForm:
    """Inverse of SymForm.coords(): rebuild the 2x2 form from cone coordinates."""
    c = np.asarray(coords, dtype=float)
    if c.shape != (3,):
        raise DimensionMismatchError("cone coordinates are 3-dimensional")
    off = c[2] / np.sqrt(2.0)
    return SymForm.build(p, np.array([[c[0], off], [off, c[1]]]))


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point of real projective space: unit coords, first nonzero entry positive."""

    coords: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.coords.shape[0]

    @classmethod
    def from_vector(cls, vector) -> "ProjPoint":
        v = np.asarray(vector, dtype=float).ravel()
        norm = np.linalg.norm(v)
        if norm == 0.0 or not np.isfinite(norm):
            raise DegenerateSubspaceError(
                f"cannot projectivize a zero vector (norm {norm:.3e})"
            )
        v = v / norm
        nonzero = np.nonzero(np.abs(v) > 1e-12)[0]
        lead = nonzero[0] if nonzero.size else 0
        if v[lead] < 0:
            v = -v
        v.setflags(write=False)
        return cls(coords=v)


def _decompose_over(p: Subspace, q: Subspace, r: Subspace) -> tuple[np.ndarray, np.ndarray]:
    """Write R's basis as P alpha + Q beta (P, Q transverse)."""
    stacked = np.hstack([p.basis, q.basis])
    coeffs = np.linalg.solve(stacked, r.basis)
    return coeffs[: p.dim], coeffs[p.dim :]


def chart_u(
    space: SymplecticSpace,
    p: Subspace,
    q: Subspace,
    r: Subspace,
    tol: Tolerances = DEFAULT,
) -> SymMap:
    """The symmetric map u with graph {v + u(v) : v in P} equal to R.

    Requires P, Q, R Lagrangian with R transverse to Q (the chart domain).
    """
    _check_lagrangian(space, p, "P", tol)
    _check_lagrangian(space, q, "Q", tol)
    _check_lagrangian(space, r, "R", tol)
    if not transverse(p, q, tol):
        raise ChartDomainError("P and Q are not transverse")
    alpha, beta = _decompose_over(p, q, r)
    sigma_min = float(np.linalg.svd(alpha, compute_uv=False)[-1])
    if sigma_min <= tol.rank:
        raise ChartDomainError(
            f"R is not transverse to Q (R outside the chart U_Q, margin {sigma_min:.3e})"
        )
    u_matrix = beta @ np.linalg.inv(alpha)
    return SymMap.build(space, p, q, u_matrix, tol)


def graph_lagrangian(u: SymMap, tol: Tolerances = DEFAULT) -> Subspace:
    """The Lagrangian graph {v + u(v) : v in P}; inverse of chart_u."""
    vectors = u.p.basis + u.q.basis @ u.matrix
    return Subspace.from_spanning(vectors, tol)


def chart_q(
    space: SymplecticSpace,
    p: Subspace,
    q: Subspace,
    r: Subspace,
    tol: Tolerances = DEFAULT,
) -> SymForm:
    """The form q(v, w) = omega(v, u(w)) of the chart map u = chart_u(P, Q, R)."""
    u = chart_u(space, p, q, r, tol)
    matrix = p.basis.T @ space.omega @ q.basis @ u.matrix
    return SymForm.build(p, matrix, tol)


def is_maximal_triple(
    space: SymplecticSpace,
    p: Subspace,
    r: Subspace,
    q: Subspace,
    tol: Tolerances = DEFAULT,
) -> tuple[bool, float]:
    """Whether the pairwise transverse Lagrangian triple (P, R, Q) is maximal.

    Maximal means chart_q(P, Q, R) is positive definite; the second return
    value is its smallest eigenvalue (the margin, negative when not maximal).
    """
    for pair, name in (((p, r), "(P, R)"), ((r, q), "(R, Q)"), ((p, q), "(P, Q)")):
        if not transverse(*pair, tol):
            raise ChartDomainError(f"triple is not pairwise transverse at {name}")
    form = chart_q(space, p, q, r, tol)
    min_eig = float(form.eigenvalues()[0])
    return min_eig > 0.0, min_eig


def singular_subspace_check(q: SymForm, u: Subspace, tol: Tolerances = DEFAULT) -> Margin:
    """Margin for U being a singular subspace of q: max |q(u_i, u_j)| (at_most tau_iso).

    U is given in the ambient space and must be contained in P.
    """
    residual_in_p = float(
        np.linalg.norm(u.basis - q.p.project(u.basis), 2) if u.dim else 0.0
    )
    if residual_in_p > tol.angle:
        raise DimensionMismatchError(
            f"U is not contained in P (containment residual {residual_in_p:.3e})"
        )
    coords = q.p.basis.T @ u.basis
    value = float(np.max(np.abs(coords.T @ q.matrix @ coords))) if u.dim else 0.0
    return Margin.at_most(value, tol.iso)


def iota(p: Subspace, ell: ProjPoint) -> ProjPoint:
    """The boundary embedding of a line in P into the projectivized forms on P.

    Sends ell to the rank-one positive semidefinite form phi (x) phi, where phi
    is the functional on P vanishing on ell.  Coordinates are returned in the
    cone basis {E11, E22, (E12+E21)/sqrt(2)}.  Restricted to dim P = 2.
    """
    if p.dim != 2 or ell.ambient_dim != 2:
        raise DimensionMismatchError("iota is implemented for 2-dimensional P only")
    a, b = ell.coords
    phi = np.array([-b, a])
    form = np.outer(phi, phi)
    return ProjPoint.from_vector(
        [form[0, 0], form[1, 1], (form[0, 1] + form[1, 0]) / np.sqrt(2.0)]
    )


def _wedge(u: np.ndarray, v: np.ndarray) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def cross_ratio(
    a: ProjPoint, b: ProjPoint, c: ProjPoint, d: ProjPoint, tol: Tolerances = DEFAULT
) -> float:
    """Cross ratio (a^b)/(c^b) * (c^d)/(a^d) of four lines in a plane.

    Scale-invariant because the ProjPoint representatives are unit vectors and
    each vector appears once upstairs and once downstairs.
    """
    for point in (a, b, c, d):
        if point.ambient_dim != 2:
            raise DimensionMismatchError("cross_ratio needs points of a 2-dim space")
    w_ab = _wedge(a.coords, b.coords)
    w_cb = _wedge(c.coords, b.coords)
    w_cd = _wedge(c.coords, d.coords)
    w_ad = _wedge(a.coords, d.coords)
    smallest = min(abs(w_ab), abs(w_cb), abs(w_cd), abs(w_ad))
    if smallest <= tol.rank:
        raise DegenerateQuadrupleError(
            f"cross-ratio wedge numerically zero (|wedge| = {smallest:.3e})"
        )
    return (w_ab / w_cb) * (w_cd / w_ad)


def is_cyclically_ordered(
    a: ProjPoint, b: ProjPoint, c: ProjPoint, d: ProjPoint, tol: Tolerances = DEFAULT
) -> bool:
    """Whether the quadruple is cyclically ordered (negative cross ratio)."""
    return cross_ratio(a, b, c, d, tol) < 0.0


def collinear_in_PQ(
    p1: ProjPoint, p2: ProjPoint, p3: ProjPoint, tol: Tolerances = DEFAULT, threshold: float | None = None
) -> Margin:
    """Collinearity margin of three points in the projectivized 3-dim form space.

    Margin is the smallest singular value of the 3x3 matrix of unit coordinate
    rows; collinear when it falls below the threshold (tau_rank by default).
    """
    rows = np.vstack([p1.coords, p2.coords, p3.coords])
    if rows.shape != (3, 3):
        raise DimensionMismatchError("collinear_in_PQ needs three 3-dimensional points")
    sigma = np.linalg.svd(rows, compute_uv=False)
    return Margin.at_most(float(sigma[-1]), tol.rank if threshold is None else threshold)
