"""Numerical toolkit for symplectic flag diagnostics of surface-group representations.

Layers (each importable on its own):

* ``config`` / ``errors`` -- tolerance bundle and exception taxonomy;
* ``symplectic`` -- subspaces, margins, symplectic forms, Lagrangians;
* ``charts`` -- symmetric-map/form charts on the Lagrangian Grassmannian,
  projective cone coordinates, cross ratios;
* ``surface_group`` -- words and genus-g one-relator presentations;
* ``reps`` -- certified representation builders (Fuchsian octagon group,
  symmetric powers, direct sums, bending) with JSON round-trip;
* ``ball`` -- Cayley-ball enumeration with a compiled kernel and a pure
  NumPy fallback;
* ``flags`` -- boundary circle model, osculating (Veronese) flags, and
  attracting-subspace flags;
* ``diagnostics`` -- margin-reporting checks and report assembly;
* ``cli`` -- the ``anosovlab`` command-line tool.
"""

from . import ball, charts, cli, config, diagnostics, errors, flags, reps, surface_group, symplectic
from .ball import Ball, available_backends, enumerate_ball
from .charts import (
    ProjPoint,
    SymForm,
    SymMap,
    chart_q,
    chart_u,
    collinear_in_PQ,
    cross_ratio,
    graph_lagrangian,
    iota,
    is_cyclically_ordered,
    is_maximal_triple,
    singular_subspace_check,
    symform_from_coords,
)
from .config import DEFAULT, Tolerances
from .diagnostics import (
    CheckResult,
    GapProfile,
    build_report,
    check_collinearity,
    check_hk,
    check_hyperconvex,
    check_limit_points,
    check_line_transversality,
    check_maximal,
    check_psi_nonconstant,
    check_quadruple_order,
    equivalence_suite,
    gap_profile,
    report_diff,
    tangent_check,
)
from .flags import (
    BoundaryPoint,
    FlagSample,
    attracting_subspace,
    direction_from_circle,
    flag_from_witness,
    is_positive_triple,
    sample_boundary,
    theta_from_direction,
    translate_flag,
    veronese_flag,
)
from .reps import (
    Representation,
    bend,
    direct_sum,
    fuchsian_genus2,
    load_representation,
    save_representation,
    sym_lift_matrix,
    sym_power_lift,
    trivial_rep,
)
from .surface_group import Presentation, Word, commutator, presentation, word_value
from .symplectic import (
    Margin,
    Subspace,
    SymplecticSpace,
    direct_sum_margin,
    intersect,
    intersection_dim,
    is_isotropic,
    is_lagrangian,
    omega_orthogonal,
    principal_angles,
    standard_form,
    subset_residual,
    sum_subspace,
    transverse,
)

__version__ = "0.1.0"
