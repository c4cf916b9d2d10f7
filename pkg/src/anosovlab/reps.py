"""Builders for the example representations of a genus-2 surface group.

Four constructions, all certified at build time by residual checks:

* ``fuchsian_genus2`` -- the regular-octagon cocompact Fuchsian group in
  SL(2,R), four hyperbolic side pairings whose commutator product is the
  identity;
* ``sym_power_lift`` -- the degree-(N-1) symmetric power into SL(N,R),
  conjugated into Sp(2n,R) for even N = 2n by a computed invariant-form
  basis correction;
* ``direct_sum`` -- block sums, interleaved into the standard symplectic
  basis when both factors are symplectic;
* ``bend`` -- conjugation of the first handle's generators by a
  one-parameter centralizer of the separating curve [a1, b1], which
  preserves the relator exactly.

A ``Representation`` carries its generator images, the 2x2 base images when
the construction factors through SL(2,R) (these drive boundary-circle
coordinates and Cayley-ball deduplication), and the basis correction used
to reach the standard symplectic form.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import ConstructionError, ValidationError
from .surface_group import Presentation, Word, presentation
from .symplectic import standard_form

__all__ = [
    "Representation",
    "fuchsian_genus2",
    "sym_power_lift",
    "direct_sum",
    "trivial_rep",
    "bend",
    "sym_lift_matrix",
    "save_representation",
    "load_representation",
]

_SCHEMA_VERSION = 1


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(np.asarray(a, dtype=float))
    a.setflags(write=False)
    return a


def _standard_j(dim: int) -> np.ndarray:
    return standard_form(dim // 2).omega


def _inverse_image(m: np.ndarray, symplectic: bool) -> np.ndarray:
    """Structure-aware inverse of a generator image.

    2x2 unimodular matrices invert by the adjugate; symplectic matrices by
    -J M^T J (exact given the form invariance, and it preserves any
    block/interleave structure bit for bit); anything else falls back to LU.
    """
    if m.shape == (2, 2):
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det
    if symplectic:
        j = _standard_j(m.shape[0])
        return -j @ m.T @ j
    return np.linalg.inv(m)


def _relator_residual(images, inverses, relator: Word) -> float:
    """Frobenius norm of rho(relator) - Id, accumulated in extended precision.

    The product is evaluated left to right in longdouble; the inverse images
    are the structure-aware ones, so no LU error enters the chain.
    """
    dim = images[0].shape[0]
    acc = np.eye(dim, dtype=np.longdouble)
    for letter in relator.letters:
        gen, inv = divmod(letter, 2)
        m = inverses[gen] if inv else images[gen]
        acc = acc @ m.astype(np.longdouble)
    return float(np.linalg.norm((acc - np.eye(dim)).astype(float)))


@dataclass(frozen=True, eq=False)
class Representation:
    """Generator images plus the presentation and construction provenance.

    Invariants (checked at construction and on load):

    * relator residual ``||rho(relator) - Id||_F < tau_rel``;
    * for symplectic kinds, ``max_g ||g^T J g - J||_F < tau_sp`` over
      generators (J the standard form);
    * ``|det(g) - 1| < tau_det`` for every generator.

    ``base_images`` are the SL(2,R) matrices the construction factors
    through, when it does; they provide the boundary-circle coordinate and
    the well-conditioned matrices used for Cayley-ball deduplication.
    ``basis_correction`` is the matrix T with ``image = T^-1 (lift) T``
    mapping monomial coordinates to the standard symplectic basis.
    """

    presentation: Presentation
    kind: str
    images: tuple
    is_symplectic: bool
    base_images: tuple | None = None
    basis_correction: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)
    tol: Tolerances = DEFAULT

    def __post_init__(self):
        images = tuple(_readonly(m) for m in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.presentation.n_generators:
            raise ValidationError(
                f"expected {self.presentation.n_generators} generator images, "
                f"got {len(images)}"
            )
        dim = images[0].shape[0]
        for m in images:
            if m.shape != (dim, dim):
                raise ValidationError("generator images must share a square shape")
        if self.base_images is not None:
            base = tuple(_readonly(m) for m in self.base_images)
            if len(base) != len(images) or any(m.shape != (2, 2) for m in base):
                raise ValidationError("base images must be one 2x2 matrix per generator")
            object.__setattr__(self, "base_images", base)
        if self.basis_correction is not None:
            object.__setattr__(
                self, "basis_correction", _readonly(self.basis_correction)
            )
        inverses = tuple(
            _readonly(_inverse_image(m, self.is_symplectic)) for m in images
        )
        object.__setattr__(self, "_inverses", inverses)
        if self.base_images is not None:
            base_inv = tuple(
                _readonly(_inverse_image(m, True)) for m in self.base_images
            )
        else:
            base_inv = None
        object.__setattr__(self, "_base_inverses", base_inv)
        object.__setattr__(self, "residuals", self._compute_residuals())
        self._enforce_invariants()

    # ----- basic geometry ------------------------------------------------
    @property
    def dim(self) -> int:
        return self.images[0].shape[0]

    @property
    def n(self) -> int | None:
        """Half-dimension of the target; None when the dimension is odd."""
        return self.dim // 2 if self.dim % 2 == 0 else None

    @property
    def genus(self) -> int:
        return self.presentation.genus

    # ----- evaluation ----------------------------------------------------
    def generator_image(self, letter: int) -> np.ndarray:
        """Image of alphabet letter 2j (generator j) or 2j+1 (its inverse)."""
        gen, inv = divmod(int(letter), 2)
        return self._inverses[gen] if inv else self.images[gen]

    def base_image(self, letter: int) -> np.ndarray:
        if self.base_images is None:
            raise ValidationError(f"representation kind {self.kind!r} has no 2x2 base")
        gen, inv = divmod(int(letter), 2)
        return self._base_inverses[gen] if inv else self.base_images[gen]

    def image(self, word: Word) -> np.ndarray:
        acc = np.eye(self.dim)
        for letter in word.letters:
            acc = acc @ self.generator_image(letter)
        return acc

    def base_value(self, word: Word) -> np.ndarray:
        acc = np.eye(2)
        for letter in word.letters:
            acc = acc @ self.base_image(letter)
        return acc

    # ----- ball-dedup support --------------------------------------------
    @property
    def dedup_images(self) -> tuple:
        """Per-letter matrices used for Cayley-ball deduplication.

        The 2x2 base when available: its entries stay small enough along the
        ball that the (tau_same, tau_dedup) window is reliable, whereas
        high-power lifts cube the entry scale and would squeeze the window
        shut.  Falls back to the images themselves.
        """
        source = self.metadata.get("dedup_override")
        if source is not None:
            return tuple(np.asarray(m) for m in source)
        if self.base_images is not None:
            return tuple(
                self.base_image(letter)
                for letter in range(self.presentation.alphabet_size)
            )
        return tuple(
            self.generator_image(letter)
            for letter in range(self.presentation.alphabet_size)
        )

    @property
    def dedup_is_images(self) -> bool:
        if "dedup_override" in self.metadata:
            return False
        if self.base_images is None:
            return True
        return all(
            np.array_equal(base, img)
            for base, img in zip(self.base_images, self.images)
        )

    # ----- certification --------------------------------------------------
    def _compute_residuals(self) -> dict:
        rel = _relator_residual(self.images, self._inverses, self.presentation.relator)
        dets = [abs(float(np.linalg.det(m)) - 1.0) for m in self.images]
        res = {"relator": rel, "det": max(dets)}
        if self.is_symplectic:
            j = _standard_j(self.dim)
            res["symplectic"] = max(
                float(np.linalg.norm(m.T @ j @ m - j)) for m in self.images
            )
        if self.base_images is not None:
            res["base_relator"] = _relator_residual(
                self.base_images, self._base_inverses, self.presentation.relator
            )
        return res

    def _enforce_invariants(self) -> None:
        failures = []
        if self.residuals["relator"] >= self.tol.rel:
            failures.append(f"relator residual {self.residuals['relator']:.3e}")
        if self.residuals["det"] >= self.tol.det:
            failures.append(f"determinant residual {self.residuals['det']:.3e}")
        if self.is_symplectic and self.residuals["symplectic"] >= self.tol.sp:
            failures.append(f"symplectic residual {self.residuals['symplectic']:.3e}")
        if failures:
            raise ValidationError(
                "representation fails its certificates: " + "; ".join(failures)
            )

    @property
    def relator_residual(self) -> float:
        return self.residuals["relator"]

    @property
    def symplectic_residual(self) -> float:
        return self.residuals.get("symplectic", 0.0)

    # ----- serialization ---------------------------------------------------
    def to_json_dict(self) -> dict:
        extra = {}
        if self.base_images is not None:
            extra["base_generators"] = [m.tolist() for m in self.base_images]
        if self.basis_correction is not None:
            extra["basis_correction"] = self.basis_correction.tolist()
        extra.update(
            {k: v for k, v in self.metadata.items() if k != "dedup_override"}
        )
        return {
            "version": _SCHEMA_VERSION,
            "n": self.n,
            "dim": self.dim,
            "genus": self.genus,
            "kind": self.kind,
            "symplectic": self.is_symplectic,
            "generators": [m.tolist() for m in self.images],
            "relator": self.presentation.relator.to_string(),
            "residuals": dict(self.residuals),
            "extra": extra,
        }


def save_representation(rep: Representation, path) -> None:
    with open(path, "w") as fh:
        json.dump(rep.to_json_dict(), fh, indent=1)
        fh.write("\n")


def load_representation(path, tol: Tolerances = DEFAULT) -> Representation:
    """Load and re-certify a representation file.

    The residual fields are recomputed from the stored matrices, not trusted;
    a file whose matrices fail the certificates raises ValidationError.
    """
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read representation file: {exc}") from exc
    try:
        if int(data["version"]) != _SCHEMA_VERSION:
            raise ValidationError(f"unsupported schema version {data['version']}")
        pres = presentation(int(data["genus"]))
        if Word.from_string(data["relator"]) != pres.relator:
            raise ValidationError("stored relator does not match the presentation")
        extra = dict(data.get("extra", {}))
        base = extra.pop("base_generators", None)
        correction = extra.pop("basis_correction", None)
        rep = Representation(
            presentation=pres,
            kind=str(data["kind"]),
            images=tuple(np.array(m, dtype=float) for m in data["generators"]),
            is_symplectic=bool(data["symplectic"]),
            base_images=tuple(np.array(m, dtype=float) for m in base)
            if base is not None
            else None,
            basis_correction=np.array(correction, dtype=float)
            if correction is not None
            else None,
            metadata=extra,
            tol=tol,
        )
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed representation file: {exc}") from exc
    return rep


# ---------------------------------------------------------------------------
# Fuchsian octagon construction
# ---------------------------------------------------------------------------

def _moebius(m: np.ndarray, z: complex) -> complex:
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def _edge_normalizer(p: complex, q: complex) -> np.ndarray:
    """SL(2,R) element sending p to i and q onto the imaginary axis above i."""
    x, y = p.real, p.imag
    m1 = np.array([[1.0, -x], [0.0, y]]) / np.sqrt(y)
    q1 = _moebius(m1, q)
    x1, y1 = q1.real, q1.imag
    if abs(x1) < 1e-14:
        if y1 > 1:
            return m1
        return np.array([[0.0, -1.0], [1.0, 0.0]]) @ m1
    # rotation angle phi with tan(phi) = u; u solves the requirement that the
    # rotated q is purely imaginary: x1 u^2 + (1 - |q1|^2) u - x1 = 0
    a_, b_, c_ = x1, 1.0 - (x1 * x1 + y1 * y1), -x1
    disc = np.sqrt(b_ * b_ - 4.0 * a_ * c_)
    for u in ((-b_ + disc) / (2 * a_), (-b_ - disc) / (2 * a_)):
        phi = np.arctan(u)
        k = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
        q2 = _moebius(k, q1)
        if q2.imag > 1 and abs(q2.real) < 1e-9:
            return k @ m1
    raise ConstructionError("edge normalizer root selection failed")


def _edge_isometry(p, q, p2, q2) -> np.ndarray:
    """The SL(2,R) isometry carrying the directed edge (p,q) to (p2,q2)."""
    n_target = _edge_normalizer(p2, q2)
    n_source = _edge_normalizer(p, q)
    det = n_target[0, 0] * n_target[1, 1] - n_target[0, 1] * n_target[1, 0]
    inv_t = np.array(
        [[n_target[1, 1], -n_target[0, 1]], [-n_target[1, 0], n_target[0, 0]]]
    ) / det
    return inv_t @ n_source

# Side labels read counterclockwise around the regular octagon.  Lowercase is
# a positively traversed generator edge, uppercase its inverse.  This pattern
# is the one (up to relabeling) whose side-pairing maps satisfy the standard
# relator [a1,b1][a2,b2] = Id directly; it was selected by exhausting all 5040
# single-occurrence labelings and testing the relator numerically.
_OCTAGON_PATTERN = "aBAbcDCd"


def _octagon_generators() -> list[np.ndarray]:
    cosh_r = (1.0 + np.sqrt(2.0)) ** 2  # circumradius: vertex angles are pi/4
    r_disk = np.tanh(np.arccosh(cosh_r) / 2.0)
    verts = [
        1j * (1 + z) / (1 - z)  # Cayley map, disk to upper half-plane
        for z in (
            r_disk * np.exp(1j * (np.pi / 8 + k * np.pi / 4)) for k in range(8)
        )
    ]
    pos, neg = {}, {}
    for side, char in enumerate(_OCTAGON_PATTERN):
        name = char.lower()
        if char.islower():
            pos[name] = (side, (side + 1) % 8)
        else:
            # traversing side m counterclockwise reads the inverse letter, so
            # the generator's edge runs from vertex m+1 back to vertex m
            neg[name] = ((side + 1) % 8, side)
    gens = []
    for name in "abcd":
        j0, j1 = neg[name]
        i0, i1 = pos[name]
        g = _edge_isometry(verts[j0], verts[j1], verts[i0], verts[i1])
        if np.trace(g) < 0:
            g = -g  # sign normalization; commutators are insensitive to it
        gens.append(g)
    return gens


def fuchsian_genus2(tol: Tolerances = DEFAULT) -> Representation:
    """The regular-octagon genus-2 Fuchsian representation into SL(2,R).

    All four generators are hyperbolic with trace 2 + sqrt(2); the relator
    residual certifies the construction (a failure raises).
    """
    gens = _octagon_generators()
    for i, g in enumerate(gens):
        if abs(np.trace(g)) <= 2.0:
            raise ConstructionError(
                f"octagon generator {i} is not hyperbolic: trace {np.trace(g):.6f}"
            )
    try:
        return Representation(
            presentation=presentation(2),
            kind="fuchsian_base",
            images=tuple(gens),
            is_symplectic=True,
            base_images=tuple(gens),
            basis_correction=np.eye(2),
            metadata={"construction": "regular-octagon side pairing"},
            tol=tol,
        )
    except ValidationError as exc:
        raise ConstructionError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Symmetric power lift
# ---------------------------------------------------------------------------

def sym_lift_matrix(m: np.ndarray, big_n: int) -> np.ndarray:
    """Degree-(N-1) symmetric power of a 2x2 matrix on the monomial basis.

    Basis x^{N-1}, x^{N-2} y, ..., y^{N-1}; the lift eta satisfies
    eta(M) nu(v) = nu(M v) for the coefficient vector nu of pure powers, and
    is an exact homomorphism.  Row i holds the coefficients of
    (p x + q y)^{N-1-i} (r x + s y)^i where M = [[p, q], [r, s]].
    """
    p, q = float(m[0, 0]), float(m[0, 1])
    r, s = float(m[1, 0]), float(m[1, 1])
    rows = []
    for i in range(big_n):
        top = np.array([1.0])
        for _ in range(big_n - 1 - i):
            top = np.convolve(top, [p, q])
        bot = np.array([1.0])
        for _ in range(i):
            bot = np.convolve(bot, [r, s])
        rows.append(np.convolve(top, bot))
    return np.array(rows)


def _invariant_antisymmetric_form(lifts, tol: Tolerances) -> np.ndarray:
    """Solve g^T X g = X over the generator lifts for antisymmetric X.

    The solution space must be one-dimensional (it is, for an irreducible
    image); the representative is normalized and sign-fixed by X[0, N-1] > 0.
    """
    big_n = lifts[0].shape[0]
    idx = [(i, j) for i in range(big_n) for j in range(i + 1, big_n)]
    rows = []
    for g in lifts:
        for r in range(big_n):
            for c in range(big_n):
                row = np.zeros(len(idx))
                for m, (i, j) in enumerate(idx):
                    row[m] += g[i, r] * g[j, c] - g[j, r] * g[i, c]
                    if (r, c) == (i, j):
                        row[m] -= 1.0
                    if (r, c) == (j, i):
                        row[m] += 1.0
                rows.append(row)
    system = np.array(rows)
    _, sing, vt = np.linalg.svd(system)
    if sing[-1] > tol.rank * sing[0]:
        raise ConstructionError(
            f"no invariant antisymmetric form: smallest residual {sing[-1]:.3e}"
        )
    if sing[-2] < 1e3 * max(sing[-1], np.finfo(float).eps * sing[0]):
        raise ConstructionError(
            "invariant antisymmetric form is not unique "
            f"(two smallest singular values {sing[-2]:.3e}, {sing[-1]:.3e})"
        )
    x = np.zeros((big_n, big_n))
    for m, (i, j) in enumerate(idx):
        x[i, j] = vt[-1][m]
        x[j, i] = -vt[-1][m]
    if x[0, big_n - 1] < 0:
        x = -x
    return x


def _symplectic_basis(x: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Columns T = (e_1..e_n, f_1..f_n) with T^T X T the standard form."""
    big_n = x.shape[0]
    n = big_n // 2
    es: list[np.ndarray] = []
    fs: list[np.ndarray] = []

    def reduce(w):
        # remove the components along the symplectic pairs found so far
        for e, f in zip(es, fs):
            w = w - (w @ x @ f) * e + (w @ x @ e) * f
        return w

    candidates = [np.eye(big_n)[:, k] for k in range(big_n)]
    for _ in range(n):
        e = None
        for cand in candidates:
            w = reduce(cand.copy())
            if np.linalg.norm(w) > 1e-6:
                e = w / np.linalg.norm(w)
                break
        if e is None:
            raise ConstructionError("symplectic basis extraction ran out of vectors")
        best, best_val = None, 0.0
        for cand in candidates:
            w = reduce(cand.copy())
            val = float(e @ x @ w)
            if abs(val) > abs(best_val):
                best, best_val = w, val
        if best is None or abs(best_val) <= tol.rank:
            raise ConstructionError("invariant form is degenerate on the residual space")
        es.append(e)
        fs.append(best / best_val)
    return np.column_stack(es + fs)


def sym_power_lift(
    rho0: Representation, big_n: int, tol: Tolerances = DEFAULT
) -> Representation:
    """Lift a representation into SL(2,R) by the (N-1)-st symmetric power.

    For even N = 2n the image preserves an antisymmetric form; the form is
    solved for, a basis change T with T^T X T = J is extracted, and the
    returned images are T^-1 eta(g) T in Sp(2n,R).  For odd N the images are
    returned on the monomial basis (they preserve a symmetric form instead,
    so no symplectic structure is claimed).
    """
    if rho0.dim != 2:
        raise ConstructionError("symmetric power lift needs a 2x2 base representation")
    if big_n < 2:
        raise ConstructionError(f"need N >= 2, got {big_n}")
    base = tuple(np.array(m) for m in rho0.images)
    if big_n == 2:
        return Representation(
            presentation=rho0.presentation,
            kind="sym_power",
            images=base,
            is_symplectic=True,
            base_images=base,
            basis_correction=np.eye(2),
            metadata={"N": 2},
            tol=tol,
        )
    lifts = [sym_lift_matrix(m, big_n) for m in base]
    if big_n % 2 == 1:
        return Representation(
            presentation=rho0.presentation,
            kind="sym_power",
            images=tuple(lifts),
            is_symplectic=False,
            base_images=base,
            basis_correction=np.eye(big_n),
            metadata={"N": big_n},
            tol=tol,
        )
    x = _invariant_antisymmetric_form(lifts, tol)
    invariance = max(float(np.abs(g.T @ x @ g - x).max()) for g in lifts)
    if invariance > tol.sp:
        raise ConstructionError(
            f"invariant-form residual {invariance:.3e} exceeds tolerance"
        )
    t_corr = _symplectic_basis(x, tol)
    t_inv = np.linalg.inv(t_corr)
    images = tuple(t_inv @ g @ t_corr for g in lifts)
    try:
        return Representation(
            presentation=rho0.presentation,
            kind="sym_power",
            images=images,
            is_symplectic=True,
            base_images=base,
            basis_correction=t_corr,
            metadata={"N": big_n},
            tol=tol,
        )
    except ValidationError as exc:
        raise ConstructionError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Direct sums and the trivial representation
# ---------------------------------------------------------------------------

def _interleave_permutation(na: int, nb: int) -> list[int]:
    """Reorder block-diagonal Sp(2na) + Sp(2nb) coordinates to standard J."""
    return (
        list(range(0, na))
        + list(range(2 * na, 2 * na + nb))
        + list(range(na, 2 * na))
        + list(range(2 * na + nb, 2 * na + 2 * nb))
    )


def direct_sum(
    rep_a: Representation, rep_b: Representation, tol: Tolerances = DEFAULT
) -> Representation:
    """Block-diagonal sum of two representations of the same presentation.

    When both factors are symplectic the coordinates are interleaved (an
    exact permutation) so the sum preserves the standard form of the larger
    space; otherwise the images stay plainly block diagonal and no
    symplectic claim is made.
    """
    if rep_a.presentation != rep_b.presentation:
        raise ValidationError("direct sum requires matching presentations")
    symplectic = rep_a.is_symplectic and rep_b.is_symplectic
    da, db = rep_a.dim, rep_b.dim
    blocks = []
    for ga, gb in zip(rep_a.images, rep_b.images):
        m = np.zeros((da + db, da + db))
        m[:da, :da] = ga
        m[da:, da:] = gb
        blocks.append(m)
    if symplectic:
        perm = _interleave_permutation(da // 2, db // 2)
        blocks = [m[np.ix_(perm, perm)] for m in blocks]
    base = None
    if rep_a.base_images is not None and rep_b.base_images is not None:
        if all(
            np.array_equal(ma, mb)
            for ma, mb in zip(rep_a.base_images, rep_b.base_images)
        ):
            base = rep_a.base_images
    metadata = {
        "factors": [rep_a.kind, rep_b.kind],
        "factor_dims": [da, db],
    }
    if base is None:
        # fall back to deduplicating on block sums of the factors' own dedup
        # matrices; these stay as well-conditioned as the factors themselves
        dedup = []
        for letter in range(rep_a.presentation.alphabet_size):
            m_a = rep_a.dedup_images[letter]
            m_b = rep_b.dedup_images[letter]
            k = m_a.shape[0] + m_b.shape[0]
            m = np.zeros((k, k))
            m[: m_a.shape[0], : m_a.shape[0]] = m_a
            m[m_a.shape[0] :, m_a.shape[0] :] = m_b
            dedup.append(m)
        metadata["dedup_override"] = tuple(dedup)
    return Representation(
        presentation=rep_a.presentation,
        kind="direct_sum",
        images=tuple(blocks),
        is_symplectic=symplectic,
        base_images=base,
        basis_correction=None,
        metadata=metadata,
        tol=tol,
    )


def trivial_rep(
    pres: Presentation, dim: int = 1, tol: Tolerances = DEFAULT
) -> Representation:
    """The trivial representation: every generator maps to the identity."""
    if dim < 1:
        raise ValidationError(f"need dim >= 1, got {dim}")
    return Representation(
        presentation=pres,
        kind="trivial",
        images=tuple(np.eye(dim) for _ in range(pres.n_generators)),
        is_symplectic=False,
        metadata={},
        tol=tol,
    )


# ---------------------------------------------------------------------------
# Bending
# ---------------------------------------------------------------------------

def _centralizer_flow(m: np.ndarray, t: float, tol: Tolerances) -> np.ndarray:
    """c(t) = V |lambda|^t V^-1 for a real-semisimple matrix m.

    Commutes with m; for symplectic m the eigenvalues pair into lambda,
    1/lambda, so the |lambda|^t scalings pair into mu, 1/mu and c(t) is
    symplectic again.
    """
    evals, evecs = np.linalg.eig(m)
    if np.max(np.abs(evals.imag)) > tol.rank * np.max(np.abs(evals)):
        raise ConstructionError(
            "curve image is not real-semisimple; no bending flow available"
        )
    evals = evals.real
    evecs = evecs.real
    moduli = np.sort(np.abs(evals))
    if np.min(moduli[1:] / moduli[:-1]) < 1.0 + tol.gap:
        raise ConstructionError(
            "curve image has (nearly) equal eigenvalue moduli; "
            "the one-parameter centralizer is not unambiguous"
        )
    scale = np.abs(evals) ** t
    return (evecs * scale) @ np.linalg.inv(evecs)


def bend(rep: Representation, t: float, tol: Tolerances = DEFAULT) -> Representation:
    """Bend along the separating curve [a1, b1].

    The generators of the first handle are conjugated by the centralizer
    flow c(t) of rho([a1, b1]); the relator is preserved exactly in exact
    arithmetic because c(t) commutes with the first handle's commutator.
    The 2x2 base, when present, is bent by the same construction so boundary
    coordinates stay coherent.
    """
    if rep.presentation.genus != 2:
        raise ConstructionError("bending is implemented for genus 2 only")
    if t == 0.0:
        return Representation(
            presentation=rep.presentation,
            kind="bent",
            images=rep.images,
            is_symplectic=rep.is_symplectic,
            base_images=rep.base_images,
            basis_correction=rep.basis_correction,
            metadata={**rep.metadata, "t": 0.0, "parent_kind": rep.kind},
            tol=tol,
        )
    curve = Word.from_string("abAB")
    big = rep.image(curve)
    flow = _centralizer_flow(big, t, tol)
    flow_inv = _centralizer_flow(big, -t, tol)
    images = list(rep.images)
    images[0] = flow @ images[0] @ flow_inv
    images[1] = flow @ images[1] @ flow_inv
    base = None
    if rep.base_images is not None:
        small = rep.base_value(curve)
        bflow = _centralizer_flow(small, t, tol)
        bflow_inv = _centralizer_flow(small, -t, tol)
        base = list(rep.base_images)
        base[0] = bflow @ base[0] @ bflow_inv
        base[1] = bflow @ base[1] @ bflow_inv
        base = tuple(base)
    try:
        return Representation(
            presentation=rep.presentation,
            kind="bent",
            images=tuple(images),
            is_symplectic=rep.is_symplectic,
            base_images=base,
            basis_correction=rep.basis_correction,
            metadata={
                **{k: v for k, v in rep.metadata.items() if k != "dedup_override"},
                "t": float(t),
                "parent_kind": rep.kind,
            },
            tol=tol,
        )
    except ValidationError as exc:
        raise ConstructionError(str(exc)) from exc
