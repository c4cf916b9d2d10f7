"""Margin-reporting diagnostics over boundary-flag samples.

Every check returns a :class:`CheckResult` whose verdict is determined
solely by a numeric margin against the check's tolerance, so near-failures
stay visible.  The checks cover:

* exponential singular-value gap decay over Cayley balls (``gap_profile``);
* directness of the partial-flag sums known as property H_k (``check_hk``);
* positive/negative definiteness of the Lagrangian chart form on boundary
  triples, i.e. maximality (``check_maximal``);
* transversality of the four distinguished lines inside x^n
  (``check_line_transversality``);
* the first-order (rank-one, signed) behaviour of the chart map along the
  boundary curve (``tangent_check``);
* collinearity of the chart-form point with the two embedded boundary
  lines in the projectivized form space (``check_collinearity``);
* cyclic order of the distinguished line quadruple via the cross ratio
  (``check_quadruple_order``);
* spanning of first lines at N distinct points, plus {a,b,c}-directness
  (``check_hyperconvex``);
* limits of the chart-form point as the middle point collides with an
  endpoint (``check_limit_points``);
* non-constancy of the transition line psi(w) over angle windows
  (``check_psi_nonconstant``);
* joint per-triple equivalences between maximality and the H-properties
  (``equivalence_suite``).

Checks are pure functions of immutable flags; numerical pathologies of the
flags themselves (wrong intersection dimensions) raise FlagQualityError and
are never reported as mathematical failures.
"""

import datetime
import json
from dataclasses import dataclass, field

import numpy as np

from .ball import enumerate_ball
from .charts import (
    ProjPoint,
    chart_q,
    chart_u,
    collinear_in_PQ,
    cross_ratio,
    iota,
)
from .config import DEFAULT, Tolerances
from .errors import (
    DegenerateQuadrupleError,
    FlagQualityError,
    ValidationError,
)
from .flags import FlagSample, is_positive_triple, veronese_flag
from .symplectic import (
    Subspace,
    direct_sum_margin,
    intersect,
    standard_form,
    sum_subspace,
)

__all__ = [
    "GapProfile",
    "CheckResult",
    "gap_profile",
    "check_hk",
    "check_maximal",
    "check_line_transversality",
    "tangent_check",
    "check_collinearity",
    "check_quadruple_order",
    "check_hyperconvex",
    "check_psi_nonconstant",
    "check_limit_points",
    "equivalence_suite",
    "build_report",
    "report_diff",
]


# ---------------------------------------------------------------------------
# Gap profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapProfile:
    """Per-k record of log(sigma_{k+1}/sigma_k) over a Cayley ball.

    ``points`` holds (word_length, log_ratio) for every ball element; the
    line fit (slope = -alpha estimate, intercept = log C estimate) is a
    least-squares fit of the per-radius maxima ``max_by_radius`` -- the
    decay envelope that the exponential bound actually constrains.  The
    verdict requires slope < -alpha_min and strictly decreasing maxima from
    radius 3 on.
    """

    k: int
    points: np.ndarray
    fitted_slope: float
    fitted_intercept: float
    r_squared: float
    max_by_radius: tuple
    alpha_min: float

    @property
    def passed(self) -> bool:
        maxima = [v for r, v in self.max_by_radius if r >= 3]
        decreasing = all(a > b for a, b in zip(maxima, maxima[1:]))
        return bool(self.fitted_slope < -self.alpha_min and decreasing)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "fitted_slope": self.fitted_slope,
            "fitted_intercept": self.fitted_intercept,
            "r_squared": self.r_squared,
            "max_by_radius": [[int(r), float(v)] for r, v in self.max_by_radius],
            "pass": self.passed,
            "n_points": int(self.points.shape[0]),
            "word_lengths": self.points[:, 0].astype(int).tolist(),
            "log_ratios": self.points[:, 1].tolist(),
        }


def _completed_singular_values(mats: np.ndarray, symplectic: bool) -> np.ndarray:
    """Batched singular values, descending; symplectic spectra are completed.

    For a symplectic matrix the singular values come in reciprocal pairs
    sigma_i * sigma_{2n+1-i} = 1.  The small half computed directly drowns
    in roundoff once sigma_1 is large (absolute error ~ eps * sigma_1), so
    it is reconstructed from the reliable large half instead.
    """
    sv = np.linalg.svd(mats, compute_uv=False)
    if not symplectic:
        return sv
    n = mats.shape[-1] // 2
    completed = sv.copy()
    completed[:, n:] = 1.0 / sv[:, n - 1 :: -1]
    return completed


def gap_profile(rep, ks=None, radius: int = 4, tol: Tolerances = DEFAULT) -> list:
    """GapProfile per k over all elements of the word-length ball."""
    if ks is None:
        ks = range(1, rep.dim)
    ball = enumerate_ball(rep, radius, tol)
    sv = _completed_singular_values(np.asarray(ball.matrices), rep.is_symplectic)
    lengths = ball.lengths
    profiles = []
    for k in ks:
        if not 1 <= k < rep.dim:
            raise ValidationError(f"gap index k={k} out of range 1..{rep.dim - 1}")
        log_ratio = np.log(sv[:, k]) - np.log(sv[:, k - 1])
        points = np.column_stack([lengths.astype(float), log_ratio])
        max_by_radius = []
        for r in range(1, radius + 1):
            mask = lengths == r
            if np.any(mask):
                max_by_radius.append((r, float(np.max(log_ratio[mask]))))
        xs = np.array([r for r, _ in max_by_radius], dtype=float)
        ys = np.array([v for _, v in max_by_radius])
        if xs.size >= 2 and np.ptp(ys) > 0:
            slope, intercept = np.polyfit(xs, ys, 1)
            ss_res = float(np.sum((ys - (slope * xs + intercept)) ** 2))
            ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
            r_squared = 1.0 - ss_res / ss_tot
        else:
            slope, intercept, r_squared = 0.0, float(ys[0]) if ys.size else 0.0, 0.0
        profiles.append(
            GapProfile(
                k=int(k),
                points=points,
                fitted_slope=float(slope),
                fitted_intercept=float(intercept),
                r_squared=float(r_squared),
                max_by_radius=tuple(max_by_radius),
                alpha_min=tol.alpha_min,
            )
        )
    return profiles


# ---------------------------------------------------------------------------
# CheckResult plumbing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    """A named verdict with its margin, worst-case witness, and details."""

    name: str
    passed: bool
    margin: float
    witness: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": bool(self.passed),
            "margin": float(self.margin),
            "witness": _jsonable(self.witness),
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def _triple_witness(x: FlagSample, y: FlagSample, z: FlagSample) -> dict:
    return {"theta_x": x.theta, "theta_y": y.theta, "theta_z": z.theta}


def _require_distinct(*flags: FlagSample) -> None:
    thetas = [f.theta for f in flags]
    for i, a in enumerate(thetas):
        for b in thetas[i + 1 :]:
            gap = (a - b) % (2.0 * np.pi)
            if min(gap, 2.0 * np.pi - gap) < 1e-9:
                raise ValidationError(
                    f"boundary points must be pairwise distinct (got {thetas})"
                )


def _ambient(flag: FlagSample) -> int:
    return flag.spaces[min(flag.spaces)].ambient_dim


def _line_point(line: Subspace, plane: Subspace) -> ProjPoint:
    """A line inside a 2-dim plane as a projective point of its coordinates."""
    if line.dim != 1:
        raise FlagQualityError(f"expected a line, got dim {line.dim}")
    return ProjPoint.from_vector(line.coords_in(plane).ravel())


def _psi_line(w: FlagSample, x: FlagSample, z: FlagSample, n: int) -> Subspace:
    """The transition line psi(w) = (w^{n-1} + z^n) meet x^n."""
    mixed = sum_subspace([w.space(n - 1), z.space(n)])
    line = intersect(mixed, x.space(n))
    if line.dim != 1:
        raise FlagQualityError(
            f"(w^{n-1} + z^n) meet x^n has dimension {line.dim}, expected 1"
        )
    return line


# ---------------------------------------------------------------------------
# Property H_k and maximality
# ---------------------------------------------------------------------------

def check_hk(
    x: FlagSample, y: FlagSample, z: FlagSample, k: int, tol: Tolerances = DEFAULT
) -> CheckResult:
    """Directness of (x^k meet z^{N+1-k}) + (y^k meet z^{N+1-k}) + z^{N-1-k}.

    Also evaluates the equivalent spanning variant
    x^k + (y^k meet z^{N+1-k}) + z^{N-1-k} and requires verdict agreement.
    The margin is the direct-sum margin of the primary sum; wrong
    intersection dimensions are flag-quality failures, not H_k failures.
    """
    _require_distinct(x, y, z)
    big_n = _ambient(x)
    if not 1 <= k <= big_n - 1:
        raise ValidationError(f"need 1 <= k <= {big_n - 1}, got k={k}")
    if big_n + 1 - k >= big_n:
        x_line, y_line = x.space(k), y.space(k)
    else:
        z_high = z.space(big_n + 1 - k)
        x_line = intersect(x.space(k), z_high, tol)
        y_line = intersect(y.space(k), z_high, tol)
        if x_line.dim != 1 or y_line.dim != 1:
            raise FlagQualityError(
                f"H_{k} intersections have dims ({x_line.dim}, {y_line.dim}), expected (1, 1)"
            )
    z_low = (
        z.space(big_n - 1 - k)
        if big_n - 1 - k >= 1
        else Subspace.zero(big_n)
    )
    primary = direct_sum_margin([x_line, y_line, z_low], tol)
    variant = direct_sum_margin([x.space(k), y_line, z_low], tol)
    agree = bool(primary) == bool(variant)
    return CheckResult(
        name=f"H_{k}",
        passed=bool(primary) and agree,
        margin=primary.value,
        witness={**_triple_witness(x, y, z), "k": k},
        details={
            "variant_margin": variant.value,
            "variants_agree": agree,
            "tolerance": primary.tolerance,
        },
    )


def check_maximal(
    x: FlagSample, y: FlagSample, z: FlagSample, tol: Tolerances = DEFAULT
) -> CheckResult:
    """Definiteness of the chart form of (x^n, y^n, z^n), sign set by orientation.

    Counterclockwise triples must give a positive definite form, clockwise
    triples a negative definite one; the margin is the distance from
    indefiniteness (min eigenvalue, resp. -max eigenvalue).
    """
    _require_distinct(x, y, z)
    big_n = _ambient(x)
    n = big_n // 2
    space = standard_form(n)
    form = chart_q(space, x.space(n), z.space(n), y.space(n), tol)
    eigs = form.eigenvalues()
    positive = is_positive_triple(x.theta, y.theta, z.theta)
    margin = float(eigs[0]) if positive else float(-eigs[-1])
    return CheckResult(
        name="maximal",
        passed=margin > 0.0,
        margin=margin,
        witness=_triple_witness(x, y, z),
        details={
            "orientation": "positive" if positive else "negative",
            "eigenvalues": eigs,
        },
    )


def check_line_transversality(
    x: FlagSample, y: FlagSample, z: FlagSample, tol: Tolerances = DEFAULT
) -> CheckResult:
    """Pairwise transversality of the distinguished lines inside x^n.

    Four margins: (i) x^{n-1} vs z^{n+1} meet x^n, (ii) x^{n-1} vs
    y^{n+1} meet x^n, (iii) psi(y) vs z^{n+1} meet x^n, (iv) psi(y) vs
    y^{n+1} meet x^n.  Item (iv) is only asserted when H_n holds for the
    triple; its margin is always reported.
    """
    _require_distinct(x, y, z)
    big_n = _ambient(x)
    n = big_n // 2
    xn = x.space(n)
    z_cap = intersect(z.space(n + 1), xn, tol)
    y_cap = intersect(y.space(n + 1), xn, tol)
    if z_cap.dim != 1 or y_cap.dim != 1:
        raise FlagQualityError(
            f"w^{n+1} meet x^n dims ({z_cap.dim}, {y_cap.dim}), expected (1, 1)"
        )
    x_line = x.space(n - 1)
    psi = _psi_line(y, x, z, n)
    margins = {
        "i": direct_sum_margin([x_line, z_cap], tol).value,
        "ii": direct_sum_margin([x_line, y_cap], tol).value,
        "iii": direct_sum_margin([psi, z_cap], tol).value,
        "iv": direct_sum_margin([psi, y_cap], tol).value,
    }
    hn = check_hk(x, y, z, n, tol)
    asserted = ["i", "ii", "iii"] + (["iv"] if hn.passed else [])
    margin = min(margins[item] for item in asserted)
    return CheckResult(
        name="line_transversality",
        passed=margin > tol.rank,
        margin=margin,
        witness=_triple_witness(x, y, z),
        details={"margins": margins, "hn_passed": hn.passed, "asserted": asserted},
    )


# ---------------------------------------------------------------------------
# Tangent law
# ---------------------------------------------------------------------------

def _tangent_residuals(rep, x, z, theta_y, delta, tol):
    """One finite-difference sample of the chart map along the boundary curve."""
    big_n = _ambient(x)
    n = big_n // 2
    space = standard_form(n)
    y0 = veronese_flag(rep, theta_y, tol)
    y1 = veronese_flag(rep, theta_y + delta, tol)
    u0 = chart_u(space, x.space(n), z.space(n), y0.space(n), tol)
    u1 = chart_u(space, x.space(n), z.space(n), y1.space(n), tol)
    du = u1.matrix - u0.matrix
    left, sv, right_t = np.linalg.svd(du)
    sigma_ratio = float(sv[1] / sv[0])
    ker = Subspace.from_spanning((x.space(n).basis @ right_t[-1]).reshape(-1, 1), tol)
    ker_target = _psi_line(y0, x, z, n)
    ker_angle = ker.same_subspace(ker_target, tol).value
    image = Subspace.from_spanning((z.space(n).basis @ left[:, 0]).reshape(-1, 1), tol)
    im_target = intersect(y0.space(n + 1), z.space(n), tol)
    if im_target.dim != 1:
        raise FlagQualityError(f"y^{n+1} meet z^n has dim {im_target.dim}, expected 1")
    im_angle = image.same_subspace(im_target, tol).value
    dq = (
        chart_q(space, x.space(n), z.space(n), y1.space(n), tol).matrix
        - chart_q(space, x.space(n), z.space(n), y0.space(n), tol).matrix
    )
    q_eigs = np.linalg.eigvalsh(dq)
    dominant = q_eigs[np.argmax(np.abs(q_eigs))]
    q_ratio = float(np.min(np.abs(q_eigs)) / np.max(np.abs(q_eigs)))
    return {
        "sigma_ratio": sigma_ratio,
        "ker_angle": ker_angle,
        "im_angle": im_angle,
        "q_ratio": q_ratio,
        "q_sign": int(np.sign(dominant)),
    }


def tangent_check(
    rep,
    x: FlagSample,
    z: FlagSample,
    theta_y: float,
    delta: float | None = None,
    tol: Tolerances = DEFAULT,
) -> CheckResult:
    """First-order law of the chart map u_{x,z} along the boundary curve.

    The finite difference Delta-u at step delta must be rank one
    (sigma_2/sigma_1 < tau_tan) with kernel on the transition line psi(y)
    and image on y^{n+1} meet z^n (principal angles < tau_tan), and the
    form difference Delta-q must have signature (1,0) or (0,1).  The
    kernel/image angles are first order in delta, so a half-delta rerun
    must shrink them by a factor in [1.5, 2.5]; the sigma ratio is second
    order (symmetric mixing) and is reported but not halving-gated.
    """
    _require_distinct(x, z)
    if delta is None:
        delta = tol.fd_delta
    res = _tangent_residuals(rep, x, z, theta_y, delta, tol)
    half = _tangent_residuals(rep, x, z, theta_y, delta / 2.0, tol)
    ratios = {
        key: (res[key] / half[key] if half[key] > 0 else np.inf)
        for key in ("ker_angle", "im_angle")
    }
    halving_ok = all(1.5 <= r <= 2.5 for r in ratios.values())
    margin = max(res["sigma_ratio"], res["ker_angle"], res["im_angle"], res["q_ratio"])
    return CheckResult(
        name="tangent_law",
        passed=margin < tol.tan and halving_ok and half["q_sign"] == res["q_sign"],
        margin=margin,
        witness={
            "theta_x": x.theta,
            "theta_y": float(theta_y),
            "theta_z": z.theta,
            "delta": float(delta),
        },
        details={**res, "halving_ratios": ratios, "halving_ok": halving_ok},
    )


# ---------------------------------------------------------------------------
# Projective-plane checks inside x^n (n = 2)
# ---------------------------------------------------------------------------

def _require_half_dim(flag: FlagSample, n_expected: int = 2) -> int:
    n = _ambient(flag) // 2
    if n != n_expected:
        raise ValidationError(
            f"this check is implemented for half-dimension n={n_expected}, got n={n}"
        )
    return n


def _proj_distance(a: ProjPoint, b: ProjPoint) -> float:
    cosine = float(np.clip(abs(a.coords @ b.coords), 0.0, 1.0))
    return float(np.sqrt(max(0.0, 1.0 - cosine * cosine)))


def check_collinearity(
    x: FlagSample,
    y: FlagSample,
    z: FlagSample,
    fault: float = 0.0,
    tol: Tolerances = DEFAULT,
) -> CheckResult:
    """Collinearity of [q], iota(y^3 meet x^2), iota(psi(y)) in P(Q(x^2)).

    The chart-form point of the triple and the embedded images of the two
    distinguished lines must lie on a common projective line (smallest
    singular value of their coordinate matrix < tau_col).  ``fault``
    displaces [q] off the plane of the other two points by that amount, for
    fault-injection tests.
    """
    _require_distinct(x, y, z)
    n = _require_half_dim(x)
    space = standard_form(n)
    xn = x.space(n)
    form = chart_q(space, xn, z.space(n), y.space(n), tol)
    q_point = ProjPoint.from_vector(form.coords())
    y_cap = intersect(y.space(n + 1), xn, tol)
    if y_cap.dim != 1:
        raise FlagQualityError(f"y^{n+1} meet x^n has dim {y_cap.dim}, expected 1")
    p2 = iota(xn, _line_point(y_cap, xn))
    p3 = iota(xn, _line_point(_psi_line(y, x, z, n), xn))
    if fault != 0.0:
        normal = np.cross(p2.coords, p3.coords)
        normal /= np.linalg.norm(normal)
        q_point = ProjPoint.from_vector(q_point.coords + fault * normal)
    margin = collinear_in_PQ(q_point, p2, p3, tol, threshold=tol.col)
    return CheckResult(
        name="collinearity",
        passed=bool(margin),
        margin=margin.value,
        witness=_triple_witness(x, y, z),
        details={
            "q_coords": q_point.coords,
            "tolerance": tol.col,
            "fault": float(fault),
        },
    )


def check_quadruple_order(
    x: FlagSample, y: FlagSample, z: FlagSample, tol: Tolerances = DEFAULT
) -> CheckResult:
    """Cyclic order of (z^3 meet x^2, psi(y), y^3 meet x^2, x^1) in P(x^2).

    Pass iff the cross ratio of the four lines is negative.  Degenerate
    quadruples are transversality failures of the distinguished lines and
    raise FlagQualityError rather than failing the order check.
    """
    _require_distinct(x, y, z)
    n = _require_half_dim(x)
    xn = x.space(n)
    lines = {
        "z_cap": intersect(z.space(n + 1), xn, tol),
        "psi": _psi_line(y, x, z, n),
        "y_cap": intersect(y.space(n + 1), xn, tol),
        "x_line": x.space(n - 1),
    }
    for name, line in lines.items():
        if line.dim != 1:
            raise FlagQualityError(f"line {name} has dim {line.dim}, expected 1")
    points = {name: _line_point(line, xn) for name, line in lines.items()}
    try:
        ratio = cross_ratio(
            points["z_cap"], points["psi"], points["y_cap"], points["x_line"], tol
        )
    except DegenerateQuadrupleError as exc:
        raise FlagQualityError(
            f"line quadruple is degenerate (transversality failure): {exc}"
        ) from exc
    pair_margins = {
        "x_line/z_cap": direct_sum_margin([lines["x_line"], lines["z_cap"]], tol).value,
        "x_line/y_cap": direct_sum_margin([lines["x_line"], lines["y_cap"]], tol).value,
        "psi/z_cap": direct_sum_margin([lines["psi"], lines["z_cap"]], tol).value,
        "psi/y_cap": direct_sum_margin([lines["psi"], lines["y_cap"]], tol).value,
    }
    return CheckResult(
        name="quadruple_order",
        passed=ratio < 0.0,
        margin=float(-ratio),
        witness=_triple_witness(x, y, z),
        details={"cross_ratio": float(ratio), "pair_margins": pair_margins},
    )


# ---------------------------------------------------------------------------
# Hyperconvexity
# ---------------------------------------------------------------------------

def check_hyperconvex(
    samples: list,
    count: int = 500,
    seed: int = 42,
    tol: Tolerances = DEFAULT,
) -> CheckResult:
    """First lines at N distinct points span, and {a,b,c}-sums are direct.

    Draws ``count`` N-tuples from the flag samples; the margin is the
    smallest singular value of the stacked first-line matrix over all
    tuples.  On each tuple's leading triple, every {a,b,c} sum with
    a+b+c <= N must be direct, and the {1,1,n}-verdict must agree with
    the H_1 verdict (they are the same sum, reached through two routes).
    """
    if not samples:
        raise ValidationError("no flag samples supplied")
    big_n = _ambient(samples[0])
    distinct = len({round(f.theta, 12) for f in samples})
    if distinct < big_n:
        raise ValidationError(
            f"need at least N={big_n} distinct boundary points, got {distinct}"
        )
    rng = np.random.default_rng(seed)
    n = big_n // 2
    combos = [
        (a, b, c)
        for a in range(1, big_n)
        for b in range(1, big_n)
        for c in range(1, big_n)
        if a + b + c <= big_n
    ]
    worst_span = np.inf
    worst_witness: dict = {}
    abc_worst = {combo: np.inf for combo in combos}
    disagreements = 0
    for _ in range(count):
        idx = rng.choice(len(samples), size=big_n, replace=False)
        chosen = [samples[i] for i in idx]
        _require_distinct(*chosen)
        lines = np.hstack([f.space(1).basis for f in chosen])
        span = float(np.linalg.svd(lines, compute_uv=False)[-1])
        if span < worst_span:
            worst_span = span
            worst_witness = {"thetas": [f.theta for f in chosen]}
        fx, fy, fz = chosen[:3]
        for combo in combos:
            a, b, c = combo
            margin = direct_sum_margin(
                [fx.space(a), fy.space(b), fz.space(c)], tol
            ).value
            abc_worst[combo] = min(abc_worst[combo], margin)
            if combo == (1, 1, n):
                h1 = check_hk(fx, fy, fz, 1, tol)
                if (margin > tol.rank) != h1.passed:
                    disagreements += 1
    all_abc_pass = all(v > tol.rank for v in abc_worst.values())
    return CheckResult(
        name="hyperconvexity",
        passed=worst_span > tol.rank and all_abc_pass and disagreements == 0,
        margin=worst_span,
        witness=worst_witness,
        details={
            "n_tuples": count,
            "abc_margins": {"+".join(map(str, k)): v for k, v in abc_worst.items()},
            "h1_disagreements": disagreements,
        },
    )


# ---------------------------------------------------------------------------
# Limits and non-constancy scans
# ---------------------------------------------------------------------------

def check_limit_points(
    rep,
    theta_x: float,
    theta_z: float,
    eps: float = 1e-3,
    tol: Tolerances = DEFAULT,
) -> CheckResult:
    """Limits of the chart-form point as y collides with an endpoint.

    As theta_y -> theta_x the point [q] must approach iota(x^1); as
    theta_y -> theta_z it must approach iota(z^3 meet x^2).  Both distances
    are measured at offset ``eps`` and must be < tau_tan.  The H_1 status
    at each probe is reported alongside but not used as a gate, so the
    limit is visible with and without that hypothesis.
    """
    x = veronese_flag(rep, theta_x, tol)
    z = veronese_flag(rep, theta_z, tol)
    _require_distinct(x, z)
    n = _require_half_dim(x)
    space = standard_form(n)
    xn = x.space(n)
    zn = z.space(n)
    stacked = np.hstack([xn.basis, zn.basis])
    pairing = xn.basis.T @ space.omega @ zn.basis

    def q_point(theta_y: float) -> ProjPoint:
        # the chart matrix u = beta alpha^-1 diverges as y -> z, but the
        # projectivized form survives: scale by det(alpha) and use the
        # adjugate, so no inversion is ever performed
        coeff = np.linalg.solve(stacked, veronese_flag(rep, theta_y, tol).space(n).basis)
        alpha, beta = coeff[:n], coeff[n:]
        adj = np.array([[alpha[1, 1], -alpha[0, 1]], [-alpha[1, 0], alpha[0, 0]]])
        m = pairing @ beta @ adj
        return ProjPoint.from_vector(
            [m[0, 0], m[1, 1], (m[0, 1] + m[1, 0]) / np.sqrt(2.0)]
        )

    toward = 1.0 if is_positive_triple(theta_x, theta_x + eps, theta_z) else -1.0
    y_near_x = (theta_x + toward * eps) % (2.0 * np.pi)
    y_near_z = (theta_z - toward * eps) % (2.0 * np.pi)
    target_x = iota(xn, _line_point(x.space(n - 1), xn))
    z_cap = intersect(z.space(n + 1), xn, tol)
    target_z = iota(xn, _line_point(z_cap, xn))
    dist_x = _proj_distance(q_point(y_near_x), target_x)
    dist_z = _proj_distance(q_point(y_near_z), target_z)
    h1_at = {
        "near_x": check_hk(x, veronese_flag(rep, y_near_x, tol), z, 1, tol).passed,
        "near_z": check_hk(x, veronese_flag(rep, y_near_z, tol), z, 1, tol).passed,
    }
    margin = max(dist_x, dist_z)
    return CheckResult(
        name="limit_points",
        passed=margin < tol.tan,
        margin=margin,
        witness={"theta_x": float(theta_x), "theta_z": float(theta_z), "eps": float(eps)},
        details={"dist_to_iota_x1": dist_x, "dist_to_iota_zcap": dist_z, "h1": h1_at},
    )


def check_psi_nonconstant(
    rep,
    theta_x: float,
    theta_z: float,
    grid: int = 64,
    window: float = 1e-2,
    tol: Tolerances = DEFAULT,
) -> CheckResult:
    """Non-constancy of the transition line psi(w) on every angle window.

    Scans psi(w) = (w^{n-1} + z^n) meet x^n for w on the arc from x to z
    and asserts that its direction is non-constant on every sub-interval of
    width >= ``window``; the margin is the smallest variation found.
    """
    x = veronese_flag(rep, theta_x, tol)
    z = veronese_flag(rep, theta_z, tol)
    _require_distinct(x, z)
    n = _require_half_dim(x)
    xn = x.space(n)
    arc = (theta_z - theta_x) % (2.0 * np.pi)
    pad = max(10.0 * tol.theta_sep, 1e-3 * arc)
    thetas = theta_x + pad + (arc - 2.0 * pad) * np.arange(grid) / (grid - 1)
    angles = []
    for theta_w in thetas:
        w = veronese_flag(rep, theta_w % (2.0 * np.pi), tol)
        coords = _psi_line(w, x, z, n).coords_in(xn).ravel()
        angles.append(np.arctan2(coords[1], coords[0]) % np.pi)
    angles = np.unwrap(np.array(angles), period=np.pi)
    spacing = float(thetas[1] - thetas[0])
    width = max(2, int(np.ceil(window / spacing)) + 1)
    variations = [
        float(np.ptp(angles[i : i + width]))
        for i in range(0, len(angles) - width + 1)
    ]
    margin = min(variations)
    return CheckResult(
        name="psi_nonconstant",
        passed=margin > tol.rank,
        witness={"theta_x": float(theta_x), "theta_z": float(theta_z)},
        margin=margin,
        details={
            "grid": grid,
            "window": window,
            "total_variation": float(np.ptp(angles)),
        },
    )


# ---------------------------------------------------------------------------
# Equivalences and report assembly
# ---------------------------------------------------------------------------

def equivalence_suite(rep, triples: list, tol: Tolerances = DEFAULT) -> list:
    """Joint per-triple verdicts tying maximality to the H-properties.

    For each flag triple: maximality must agree with H_n; H_2 must imply
    H_1; and H_k must agree with H_{2n-k} (per-triple duality).  Refuses
    to run on a representation whose relator certificate fails.
    """
    if rep.relator_residual > tol.rel:
        raise ValidationError(
            f"refusing diagnostics on an uncertified representation "
            f"(relator residual {rep.relator_residual:.3e} > {tol.rel:.1e})"
        )
    if not triples:
        raise ValidationError("no flag triples supplied")
    n = _ambient(triples[0][0]) // 2
    agree_max, agree_dual, implications = [], [], []
    worst = {
        "maximal_iff_hn": (np.inf, {}),
        "h2_implies_h1": (np.inf, {}),
        "hk_iff_dual": (np.inf, {}),
    }
    for x, y, z in triples:
        mx = check_maximal(x, y, z, tol)
        hn = check_hk(x, y, z, n, tol)
        pair_margin = min(mx.margin, hn.margin)
        agree_max.append(mx.passed == hn.passed)
        if pair_margin < worst["maximal_iff_hn"][0]:
            worst["maximal_iff_hn"] = (pair_margin, mx.witness)
        h1 = check_hk(x, y, z, 1, tol)
        h2 = check_hk(x, y, z, 2, tol) if n != 2 else hn
        implications.append((not h2.passed) or h1.passed)
        if h2.passed and h1.margin < worst["h2_implies_h1"][0]:
            worst["h2_implies_h1"] = (h1.margin, h1.witness)
        h_dual = check_hk(x, y, z, 2 * n - 1, tol)
        agree_dual.append(h1.passed == h_dual.passed)
        dual_margin = min(h1.margin, h_dual.margin)
        if dual_margin < worst["hk_iff_dual"][0]:
            worst["hk_iff_dual"] = (dual_margin, h1.witness)
    return [
        CheckResult(
            name="maximal_iff_hn",
            passed=all(agree_max),
            margin=worst["maximal_iff_hn"][0],
            witness=worst["maximal_iff_hn"][1],
            details={"triples": len(triples), "agreements": int(sum(agree_max))},
        ),
        CheckResult(
            name="h2_implies_h1",
            passed=all(implications),
            margin=worst["h2_implies_h1"][0],
            witness=worst["h2_implies_h1"][1],
            details={"triples": len(triples), "implications": int(sum(implications))},
        ),
        CheckResult(
            name="hk_iff_dual",
            passed=all(agree_dual),
            margin=worst["hk_iff_dual"][0],
            witness=worst["hk_iff_dual"][1],
            details={"triples": len(triples), "agreements": int(sum(agree_dual))},
        ),
    ]


def build_report(rep, checks: list, profiles: list | None = None, timestamp=None) -> dict:
    """Deterministic JSON-ready report: rep metadata, checks, gap profiles.

    Checks are sorted by (name, serialized witness); only the timestamp
    varies between identical runs.
    """
    ordered = sorted(
        (c.as_dict() for c in checks),
        key=lambda d: (d["name"], json.dumps(d["witness"], sort_keys=True)),
    )
    if timestamp is None:
        timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return {
        "schema_version": 1,
        "timestamp": timestamp,
        "representation": {
            "kind": rep.kind,
            "dim": rep.dim,
            "genus": rep.genus,
            "residuals": {k: float(v) for k, v in sorted(rep.residuals.items())},
        },
        "checks": ordered,
        "gap_profiles": [p.as_dict() for p in sorted(profiles or [], key=lambda p: p.k)],
        "all_passed": bool(
            all(c["pass"] for c in ordered)
            and all(p.passed for p in profiles or [])
        ),
    }


def report_diff(a: dict, b: dict, ignore=("timestamp",)) -> list:
    """Paths at which two reports differ, ignoring the listed keys."""

    def walk(left, right, path):
        if isinstance(left, dict) and isinstance(right, dict):
            for key in sorted(set(left) | set(right)):
                if key in ignore:
                    continue
                if key not in left or key not in right:
                    diffs.append(f"{path}/{key} (missing on one side)")
                else:
                    walk(left[key], right[key], f"{path}/{key}")
        elif isinstance(left, list) and isinstance(right, list):
            if len(left) != len(right):
                diffs.append(f"{path} (length {len(left)} != {len(right)})")
            else:
                for i, (lv, rv) in enumerate(zip(left, right)):
                    walk(lv, rv, f"{path}[{i}]")
        elif left != right:
            diffs.append(f"{path} ({left!r} != {right!r})")

    diffs: list = []
    walk(a, b, "")
    return diffs
