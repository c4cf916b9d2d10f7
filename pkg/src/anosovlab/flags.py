"""Boundary flags on the circle model supplied by the 2x2 base.

The Gromov boundary of the surface group is modeled once and for all as the
boundary circle of the hyperbolic plane through the base Fuchsian
representation.  A boundary angle theta in [0, 2pi) corresponds to the
projective line direction phi = -theta/2; the sign is fixed so that
counterclockwise (increasing-theta) triples are the positive ones, i.e. they
map to positively oriented Lagrangian triples downstream.

Flags come from two routes that must agree:

* ``veronese_flag`` -- osculating flags of the power curve
  nu(phi) = coefficients of (cos(phi) x + sin(phi) y)^(N-1), expressed in
  the representation's corrected symplectic basis; exact for lifts of the
  base representation.
* ``flag_from_witness`` -- attracting invariant subspaces of a group
  element's image, computed by staged orthonormalized subspace iteration,
  with the boundary angle read off the base 2x2 matrix.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .ball import enumerate_ball
from .config import DEFAULT, Tolerances
from .errors import (
    FlagQualityError,
    NoAttractingPointError,
    ValidationError,
)
from .surface_group import Word
from .symplectic import Subspace, omega_orthogonal, standard_form

__all__ = [
    "BoundaryPoint",
    "FlagSample",
    "direction_from_circle",
    "theta_from_direction",
    "is_positive_triple",
    "veronese_flag",
    "attracting_subspace",
    "flag_from_witness",
    "sample_boundary",
    "translate_flag",
]


def direction_from_circle(theta: float) -> np.ndarray:
    """Unit direction of the projective line at boundary angle theta."""
    phi = -0.5 * float(theta)
    return np.array([np.cos(phi), np.sin(phi)])


def theta_from_direction(v) -> float:
    """Boundary angle in [0, 2pi) of a nonzero 2-vector's line."""
    v = np.asarray(v, dtype=float)
    phi = np.arctan2(v[1], v[0]) % np.pi
    return float((-2.0 * phi) % (2.0 * np.pi))


def _cyclic_gap(a: float, b: float) -> float:
    return (b - a) % (2.0 * np.pi)


def is_positive_triple(t1: float, t2: float, t3: float) -> bool:
    """True when (t1, t2, t3) is counterclockwise on the boundary circle."""
    return _cyclic_gap(t1, t2) < _cyclic_gap(t1, t3)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the boundary circle, optionally with a group witness."""

    theta: float
    witness: Word | None = None

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % (2.0 * np.pi))


@dataclass(frozen=True, eq=False)
class FlagSample:
    """A boundary point with the subspaces x^k attached to it.

    ``spaces`` maps k to the k-dimensional Subspace; a full flag carries
    k = 1 .. 2n-1, but partial flags occur (a representation may only have
    boundary maps at some k, e.g. a direct sum of identical factors has no
    k = 1 map).  ``quality`` records per-k gaps/residuals from construction.
    """

    point: BoundaryPoint
    spaces: dict
    method: str
    quality: dict

    @property
    def theta(self) -> float:
        return self.point.theta

    @property
    def ks(self) -> tuple:
        return tuple(sorted(self.spaces))

    def space(self, k: int) -> Subspace:
        try:
            return self.spaces[k]
        except KeyError:
            raise ValidationError(
                f"flag at theta={self.theta:.6f} carries no k={k} subspace"
            ) from None


def _validate_flag(spaces: dict, symplectic: bool, tol: Tolerances) -> dict:
    """Compatibility-chain and omega-duality residuals; raise above 10*tau."""
    ks = sorted(spaces)
    chain = 0.0
    for lo, hi in zip(ks, ks[1:]):
        chain = max(chain, spaces[hi].contains(spaces[lo], tol).value)
    duality = 0.0
    if symplectic:
        dim = spaces[ks[0]].ambient_dim
        space = standard_form(dim // 2)
        for k in ks:
            dual_k = dim - k
            if dual_k in spaces:
                perp = omega_orthogonal(space, spaces[k])
                duality = max(duality, spaces[dual_k].same_subspace(perp, tol).value)
    worst = max(chain, duality)
    if worst > 10.0 * tol.angle:
        raise FlagQualityError(
            f"flag violates its invariants: chain {chain:.3e}, duality {duality:.3e}"
        )
    return {"chain": chain, "duality": duality}


# ---------------------------------------------------------------------------
# Veronese (osculating) flags
# ---------------------------------------------------------------------------

def _derivative_matrix(big_n: int) -> np.ndarray:
    """d/dphi on monomial coefficient vectors of (cos phi x + sin phi y)^(N-1)."""
    a = np.zeros((big_n, big_n))
    for j in range(big_n):
        if j + 1 < big_n:
            a[j, j + 1] = -(big_n - 1 - j)
        if j - 1 >= 0:
            a[j, j - 1] = j
    return a


def _monomial_point(phi: float, big_n: int) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([c ** (big_n - 1 - i) * s**i for i in range(big_n)])


def _require_circle_model(rep) -> None:
    if rep.base_images is None:
        raise ValidationError(
            f"representation kind {rep.kind!r} carries no boundary-circle model "
            "(no 2x2 base images)"
        )


def veronese_flag(rep, theta: float, tol: Tolerances = DEFAULT) -> FlagSample:
    """Osculating flag of the power curve at boundary angle theta.

    spaces[k] spans the curve point and its first k-1 derivatives in theta,
    orthonormalized and expressed in the representation's corrected basis.
    """
    _require_circle_model(rep)
    if rep.basis_correction is None:
        raise ValidationError(
            f"representation kind {rep.kind!r} has no power-curve basis correction"
        )
    big_n = rep.dim
    phi = -0.5 * float(theta)
    deriv = _derivative_matrix(big_n)
    cols = [_monomial_point(phi, big_n)]
    for _ in range(big_n - 2):
        cols.append(deriv @ cols[-1])
    jet = np.column_stack(cols)
    corrected = np.linalg.solve(rep.basis_correction, jet)
    q, r = np.linalg.qr(corrected)
    if np.min(np.abs(np.diag(r))) < tol.rank:
        raise ValidationError(
            "power-curve jet lost rank; this cannot happen for distinct derivatives"
        )
    spaces = {
        k: Subspace.from_orthonormal(q[:, :k], tol) for k in range(1, big_n)
    }
    quality = _validate_flag(spaces, rep.is_symplectic, tol)
    return FlagSample(
        point=BoundaryPoint(theta),
        spaces=spaces,
        method="veronese",
        quality=quality,
    )


# ---------------------------------------------------------------------------
# Attracting flags
# ---------------------------------------------------------------------------

def _eigen_moduli(m: np.ndarray) -> np.ndarray:
    return np.sort(np.abs(np.linalg.eigvals(m)))[::-1]


def attracting_subspace(m, k: int, tol: Tolerances = DEFAULT):
    """Dominant k-dimensional invariant subspace and the eigenvalue-gap ratio.

    Requires a relative eigenvalue-modulus gap above tau_gap at index k.
    Runs orthonormalized subspace iteration through successively squared
    powers (so weak gaps still converge in few applications), then polishes
    until the invariance residual drops below the iteration tolerance.
    """
    m = np.asarray(m, dtype=float)
    dim = m.shape[0]
    if not 1 <= k < dim:
        raise ValidationError(f"need 1 <= k < {dim}, got k={k}")
    moduli = _eigen_moduli(m)
    ratio = moduli[k] / moduli[k - 1]
    if 1.0 - ratio <= tol.gap:
        raise NoAttractingPointError(
            f"insufficient eigenvalue gap at k={k}: |l_(k+1)|/|l_k| = {ratio:.6f}"
        )
    base = m / np.linalg.norm(m, 2)
    # number of squarings so the accumulated power crushes the gap ratio
    needed = np.log(1e-16) / np.log(ratio)
    stages_n = int(np.clip(np.ceil(np.log2(max(needed, 2.0))), 1, 24))
    stages = [base]
    for _ in range(stages_n):
        nxt = stages[-1] @ stages[-1]
        stages.append(nxt / np.linalg.norm(nxt, 2))
    # a seeded dense start: structured starts (e.g. leading columns) can sit
    # exactly inside a non-dominant invariant subspace of block matrices and
    # the iteration would never leave it
    rng = np.random.default_rng(0)
    v = np.linalg.qr(rng.standard_normal((dim, k)))[0]
    for stage in stages:
        v = np.linalg.qr(stage @ v)[0]
    residual = np.inf
    for _ in range(tol.iter_max):
        w = base @ v
        residual = float(
            np.linalg.norm(w - v @ (v.T @ w), 2) / max(np.linalg.norm(w, 2), 1e-300)
        )
        v = np.linalg.qr(w)[0]
        if residual <= tol.iter_residual:
            break
    if residual > 100.0 * tol.iter_residual:
        raise NoAttractingPointError(
            f"subspace iteration did not converge at k={k}: residual {residual:.3e}"
        )
    # invariance alone cannot tell the dominant subspace from any other
    # invariant one, so confirm the Rayleigh block reproduces the top moduli
    block_moduli = np.sort(np.abs(np.linalg.eigvals(v.T @ m @ v)))[::-1]
    mismatch = np.max(np.abs(block_moduli - moduli[:k])) / moduli[0]
    if mismatch > 1e-6:
        raise NoAttractingPointError(
            f"iteration settled on a non-dominant invariant subspace at k={k} "
            f"(spectral mismatch {mismatch:.3e})"
        )
    return Subspace.from_orthonormal(v, tol), float(ratio)


def base_attracting_theta(rep, word: Word, tol: Tolerances = DEFAULT) -> float:
    """Boundary angle of the attracting fixed point of the base 2x2 image."""
    _require_circle_model(rep)
    m0 = rep.base_value(word)
    evals, evecs = np.linalg.eig(m0)
    if np.max(np.abs(evals.imag)) > tol.rank * np.max(np.abs(evals)):
        raise NoAttractingPointError(
            f"base image of {word.to_string()!r} has no real fixed points"
        )
    moduli = np.abs(evals.real)
    lo, hi = np.min(moduli), np.max(moduli)
    if hi - lo <= tol.gap * hi:
        raise NoAttractingPointError(
            f"base image of {word.to_string()!r} has no attracting fixed point"
        )
    direction = evecs[:, int(np.argmax(moduli))].real
    return theta_from_direction(direction)


def flag_from_witness(
    rep, word: Word, ks=None, tol: Tolerances = DEFAULT
) -> FlagSample:
    """Flag of the attracting fixed point of a group element.

    The boundary angle comes from the 2x2 base image; spaces[k] is the
    dominant k-dimensional invariant subspace of the full image, for each
    requested k (default: all of 1 .. dim-1).  Gap failures raise
    NoAttractingPointError; invariant violations above 10*tau_angle raise
    FlagQualityError.
    """
    theta = base_attracting_theta(rep, word, tol)
    big = rep.image(word)
    if ks is None:
        ks = range(1, rep.dim)
    spaces = {}
    gaps = {}
    for k in ks:
        spaces[k], gaps[k] = attracting_subspace(big, k, tol)
    quality = _validate_flag(spaces, rep.is_symplectic, tol)
    quality.update({f"gap_{k}": g for k, g in gaps.items()})
    return FlagSample(
        point=BoundaryPoint(theta, witness=word),
        spaces=spaces,
        method="attracting",
        quality=quality,
    )


# ---------------------------------------------------------------------------
# Boundary sampling
# ---------------------------------------------------------------------------

def sample_boundary(
    rep,
    count: int,
    strategy: str = "veronese",
    radius: int = 4,
    seed: int = 42,
    ks=None,
    tol: Tolerances = DEFAULT,
) -> list:
    """Flags at pairwise-distinct boundary points (separation >= tau_theta_sep).

    ``veronese``: equispaced angles with a deterministic jitter (count flags
    exactly).  ``attracting``: flags from every ball element whose image has
    the needed gaps, sorted by angle and thinned to the minimum separation;
    fewer than ``count`` usable witnesses yields a partial result with a
    warning.
    """
    if count < 3:
        raise ValidationError(f"need count >= 3 boundary points, got {count}")
    if strategy == "veronese":
        rng = np.random.default_rng(seed)
        spacing = 2.0 * np.pi / count
        jitter = rng.uniform(-0.25, 0.25, size=count) * spacing
        thetas = (np.arange(count) * spacing + jitter) % (2.0 * np.pi)
        return [veronese_flag(rep, t, tol) for t in np.sort(thetas)]
    if strategy == "attracting":
        ball = enumerate_ball(rep, radius, tol)
        flags = []
        for index in range(1, len(ball)):
            word = ball.word_at(index)
            try:
                flags.append(flag_from_witness(rep, word, ks=ks, tol=tol))
            except (NoAttractingPointError, FlagQualityError):
                continue
        flags.sort(key=lambda f: f.theta)
        thinned = []
        for flag in flags:
            if thinned and _cyclic_gap(thinned[-1].theta, flag.theta) < tol.theta_sep:
                continue
            flags_wrap = (
                thinned
                and _cyclic_gap(flag.theta, thinned[0].theta) < tol.theta_sep
            )
            if not flags_wrap:
                thinned.append(flag)
        if len(thinned) < count:
            warnings.warn(
                f"found {len(thinned)} usable boundary witnesses "
                f"(requested {count}); returning the partial sample",
                stacklevel=2,
            )
        return thinned
    raise ValidationError(f"unknown sampling strategy {strategy!r}")


def translate_flag(rep, word: Word, flag: FlagSample, tol: Tolerances = DEFAULT):
    """Push a flag forward by a group element (for equivariance checks)."""
    _require_circle_model(rep)
    m0 = rep.base_value(word)
    direction = m0 @ direction_from_circle(flag.theta)
    big = rep.image(word)
    spaces = {}
    for k, sub in flag.spaces.items():
        spaces[k] = Subspace.from_spanning(big @ sub.basis, tol)
    quality = _validate_flag(spaces, rep.is_symplectic, tol)
    return FlagSample(
        point=BoundaryPoint(theta_from_direction(direction)),
        spaces=spaces,
        method=flag.method,
        quality=quality,
    )
