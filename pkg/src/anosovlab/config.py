"""Global numerical configuration.

All rank/angle/margin decisions in the package go through a single
`Tolerances` bundle so that a CLI run can tighten or loosen thresholds
uniformly.  The defaults sit two orders of magnitude above double-precision
noise at the matrix sizes used here (dimension <= 8).

The environment variable ``ANOSOVLAB_THREADS``, when set before NumPy is
first imported, caps the BLAS thread pools; timing-sensitive runs (ball
enumeration benchmarks) are more reproducible single-threaded.
"""

import dataclasses
import os
from dataclasses import dataclass

_threads = os.environ.get("ANOSOVLAB_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)


@dataclass(frozen=True)
class Tolerances:
    """Named numerical thresholds used across the package.

    orth          orthonormality defect allowed in stored bases
    rank          singular-value cutoff for rank / transversality decisions
    angle         principal-angle sine for subspace equality
    iso           residual allowed in "omega vanishes on V" checks
    sym           symmetry residual allowed in chart maps/forms
    rel           relator residual allowed in representation builds
    sp            symplectic (g^T J g - J) residual allowed
    det           determinant-drift residual allowed
    dedup         matrix max-entry distance below which ball elements collide
    same          matrix max-entry distance below which elements are equal
    hash_grid     quantisation step for the ball hash keys
    budget        default ball element budget
    gap           attracting-subspace spectral-gap margin (need gap < 1-gap_tol)
    iter_max      subspace-iteration step cap
    iter_residual relative invariance residual for subspace iteration
    theta_sep     minimal circle separation between boundary samples
    col           collinearity residual threshold in P(Q(P))
    tan           tangent-direction residual threshold
    alpha_min     minimal decay rate demanded of a gap profile slope
    fd_delta      default finite-difference step for tangent checks
    """

    orth: float = 1e-10
    rank: float = 1e-8
    angle: float = 1e-8
    iso: float = 1e-8
    sym: float = 1e-8
    rel: float = 1e-8
    sp: float = 1e-8
    det: float = 1e-10
    dedup: float = 1e-6
    same: float = 1e-9
    hash_grid: float = 1e-4
    budget: int = 1_000_000
    gap: float = 1e-3
    iter_max: int = 200
    iter_residual: float = 1e-12
    theta_sep: float = 1e-4
    col: float = 1e-6
    tan: float = 1e-3
    alpha_min: float = 0.1
    fd_delta: float = 1e-4

    def replace(self, **kwargs) -> "Tolerances":
        return dataclasses.replace(self, **kwargs)


DEFAULT = Tolerances()

_INT_FIELDS = {"budget", "iter_max"}


def parse_overrides(pairs, base: Tolerances = DEFAULT) -> Tolerances:
    """Apply ``name=value`` override strings (CLI --tol) to a tolerance bundle.

    Accepts both bare names ("rank=1e-7") and the tau_-prefixed spellings
    ("tau_rank=1e-7").
    """
    updates = {}
    names = {f.name for f in dataclasses.fields(Tolerances)}
    for pair in pairs or ():
        if "=" not in pair:
            raise ValueError(f"tolerance override must look like name=value, got {pair!r}")
        name, raw = pair.split("=", 1)
        name = name.strip().lower()
        if name.startswith("tau_"):
            name = name[4:]
        if name not in names:
            raise ValueError(f"unknown tolerance {name!r}; known: {sorted(names)}")
        updates[name] = int(raw) if name in _INT_FIELDS else float(raw)
    return base.replace(**updates)
