"""Command-line front end: build reps, run diagnostics, export curve data.

Commands
--------
build        construct a representation, print its residual certificates,
             and write it to a JSON file
check        load a representation, run gap profiles and all applicable
             flag diagnostics, and write a machine-readable report
curve        export CSV data tracing the chart form q_{x,z}^y through the
             cone of definite forms as theta_y sweeps the boundary arc
report-diff  compare two reports, ignoring timestamps

Exit codes: 0 all requested checks passed; 1 at least one check failed;
2 input or validation error (bad arguments, unreadable/invalid files).
"""

import argparse
import json
import sys

import numpy as np

from .config import DEFAULT, parse_overrides
from .diagnostics import (
    build_report,
    check_collinearity,
    check_hyperconvex,
    check_limit_points,
    check_line_transversality,
    check_maximal,
    check_psi_nonconstant,
    check_quadruple_order,
    CheckResult,
    equivalence_suite,
    gap_profile,
    report_diff,
    tangent_check,
)
from .errors import AnosovlabError
from .flags import sample_boundary, veronese_flag
from .reps import (
    bend,
    direct_sum,
    fuchsian_genus2,
    load_representation,
    save_representation,
    sym_power_lift,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

_CURVE_COLUMNS = (
    "block,theta,q_e11,q_e22,q_cross,min_eig -- 'curve' rows give the chart "
    "form of the boundary point at theta in the basis {E11, E22, "
    "(E12+E21)/sqrt(2)} plus its smallest eigenvalue; 'cone' rows trace the "
    "rank-one boundary of the definite cone (theta is the cone parameter). "
    "Floats carry 17 significant digits for lossless round-trips."
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anosovlab",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct and certify a representation")
    p_build.add_argument(
        "--kind",
        required=True,
        choices=("fuchsian", "sym-power", "direct-sum", "bent"),
        help="fuchsian: genus-2 octagon group in SL(2,R); sym-power: its "
        "degree-(N-1) symmetric power; direct-sum: two fuchsian copies "
        "(negative control); bent: sym-power bent along a separating curve",
    )
    p_build.add_argument("--N", type=int, default=4, dest="big_n",
                         help="target dimension for sym-power/bent (default 4)")
    p_build.add_argument("--genus", type=int, default=2)
    p_build.add_argument("--t", type=float, default=0.1,
                         help="bending parameter for --kind bent")
    p_build.add_argument("--out", default="representation.json",
                         help="output path for the representation JSON")
    p_build.add_argument("--tol", action="append", metavar="NAME=VALUE",
                         help="tolerance override (repeatable)")

    p_check = sub.add_parser("check", help="run diagnostics and write a report")
    p_check.add_argument("--rep", required=True, help="representation JSON path")
    p_check.add_argument("--radius", type=int, default=4,
                         help="Cayley ball radius for gap profiles (max 10)")
    p_check.add_argument("--triples", type=int, default=100,
                         help="number of sampled boundary triples")
    p_check.add_argument("--samples", type=int, default=40,
                         help="number of boundary flags to sample")
    p_check.add_argument("--seed", type=int, default=42)
    p_check.add_argument("--checks", default=None,
                         help="comma-separated subset of check names to run")
    p_check.add_argument("--out", default=None,
                         help="report JSON path (default: stdout)")
    p_check.add_argument("--tol", action="append", metavar="NAME=VALUE")

    p_curve = sub.add_parser(
        "curve",
        help="export chart-form curve data as CSV",
        epilog="CSV columns: " + _CURVE_COLUMNS,
    )
    p_curve.add_argument("--rep", required=True)
    p_curve.add_argument("--theta-x", type=float, default=0.0)
    p_curve.add_argument("--theta-z", type=float, default=float(np.pi))
    p_curve.add_argument("--samples", type=int, default=200,
                         help="rows per block (theta_x inclusive, theta_z exclusive)")
    p_curve.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p_curve.add_argument("--tol", action="append", metavar="NAME=VALUE")

    p_diff = sub.add_parser("report-diff", help="compare two reports modulo timestamps")
    p_diff.add_argument("report_a")
    p_diff.add_argument("report_b")
    return parser


def _certify_lines(rep) -> list:
    tol = rep.tol
    limits = {
        "relator": tol.rel,
        "det": tol.det,
        "symplectic": tol.sp,
        "base_relator": tol.rel,
    }
    lines = []
    for name, value in sorted(rep.residuals.items()):
        limit = limits.get(name, tol.rel)
        verdict = "PASS" if value < limit else "FAIL"
        lines.append(f"certificate {name}_residual {value:.3e} < {limit:.1e} {verdict}")
    return lines


def cmd_build(args) -> int:
    tol = parse_overrides(args.tol)
    if args.genus != 2:
        raise AnosovlabError(f"only genus 2 is implemented, got genus {args.genus}")
    base = fuchsian_genus2(tol)
    if args.kind == "fuchsian":
        rep = base
    elif args.kind == "sym-power":
        rep = sym_power_lift(base, args.big_n, tol)
    elif args.kind == "direct-sum":
        rep = direct_sum(base, base, tol)
    else:
        rep = bend(sym_power_lift(base, args.big_n, tol), args.t, tol)
    for line in _certify_lines(rep):
        print(line)
    save_representation(rep, args.out)
    print(f"wrote {args.out} (kind={rep.kind}, dim={rep.dim})")
    return EXIT_OK


_FLAG_CHECKS_NEED = "boundary flag checks need a rank-2 symplectic rep with a power-curve basis"


def _aggregate(results: list) -> CheckResult:
    worst = min(results, key=lambda r: r.margin)
    return CheckResult(
        name=worst.name,
        passed=all(r.passed for r in results),
        margin=worst.margin,
        witness=worst.witness,
        details={
            "evaluated": len(results),
            "passed": int(sum(r.passed for r in results)),
            "worst_details": worst.details,
        },
    )


def _run_flag_checks(rep, args, tol) -> list:
    rng = np.random.default_rng(args.seed)
    samples = sample_boundary(rep, args.samples, strategy="veronese",
                              seed=args.seed, tol=tol)
    triple_indices = [
        sorted(rng.choice(len(samples), size=3, replace=False))
        for _ in range(args.triples)
    ]
    triples = []
    for i, j, k in triple_indices:
        order = [samples[i], samples[j], samples[k]]
        if rng.random() < 0.5:
            order.reverse()
        triples.append(tuple(order))
    checks = list(equivalence_suite(rep, triples, tol))
    checks.append(_aggregate([check_maximal(*t, tol) for t in triples]))
    checks.append(_aggregate([check_line_transversality(*t, tol) for t in triples]))
    checks.append(_aggregate([check_collinearity(*t, tol=tol) for t in triples]))
    checks.append(_aggregate([check_quadruple_order(*t, tol) for t in triples]))
    tangents = [
        tangent_check(rep, x, z, y.theta, tol=tol)
        for x, y, z in triples[: min(5, len(triples))]
    ]
    checks.append(_aggregate(tangents))
    checks.append(check_hyperconvex(samples, count=args.triples, seed=args.seed, tol=tol))
    x0, _, z0 = triples[0]
    checks.append(check_psi_nonconstant(rep, x0.theta, z0.theta, tol=tol))
    checks.append(check_limit_points(rep, x0.theta, z0.theta, tol=tol))
    return checks


def cmd_check(args) -> int:
    tol = parse_overrides(args.tol)
    if args.radius > 10:
        raise AnosovlabError(f"radius {args.radius} exceeds the supported maximum 10")
    if args.triples < 1:
        raise AnosovlabError("need at least one triple")
    rep = load_representation(args.rep, tol)
    profiles = gap_profile(rep, ks=None, radius=args.radius, tol=tol)
    flag_capable = (
        rep.base_images is not None
        and rep.basis_correction is not None
        and rep.is_symplectic
        and rep.n == 2
    )
    checks = _run_flag_checks(rep, args, tol) if flag_capable else []
    if not flag_capable:
        print(f"note: {_FLAG_CHECKS_NEED}; running gap profiles only", file=sys.stderr)
    if args.checks is not None:
        wanted = {name.strip() for name in args.checks.split(",")}
        unknown = wanted - {c.name for c in checks}
        if unknown:
            raise AnosovlabError(f"unknown check names: {sorted(unknown)}")
        checks = [c for c in checks if c.name in wanted]
    report = build_report(rep, checks, profiles)
    payload = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload + "\n")
        print(f"wrote {args.out}")
    else:
        print(payload)
    failing = [c["name"] for c in report["checks"] if not c["pass"]]
    failing += [f"gap_profile_k{p['k']}" for p in report["gap_profiles"] if not p["pass"]]
    if failing:
        print("FAILED: " + ", ".join(sorted(failing)), file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_curve(args) -> int:
    from .charts import chart_q
    from .symplectic import standard_form

    tol = parse_overrides(args.tol)
    rep = load_representation(args.rep, tol)
    if rep.n != 2 or rep.basis_correction is None:
        raise AnosovlabError("curve export needs the 4-dimensional power-curve rep")
    if args.samples < 2:
        raise AnosovlabError("need at least 2 samples")
    theta_x = args.theta_x % (2.0 * np.pi)
    theta_z = args.theta_z % (2.0 * np.pi)
    arc = (theta_z - theta_x) % (2.0 * np.pi)
    if arc == 0.0:
        raise AnosovlabError("theta_x and theta_z must be distinct")
    space = standard_form(2)
    x = veronese_flag(rep, theta_x, tol)
    z = veronese_flag(rep, theta_z, tol)
    lines = ["block,theta,q_e11,q_e22,q_cross,min_eig"]
    for i in range(args.samples):
        theta_y = (theta_x + arc * i / args.samples) % (2.0 * np.pi)
        y = veronese_flag(rep, theta_y, tol)
        form = chart_q(space, x.space(2), z.space(2), y.space(2), tol)
        c = form.coords()
        min_eig = float(form.eigenvalues()[0])
        lines.append(
            "curve,%.17g,%.17g,%.17g,%.17g,%.17g" % (theta_y, c[0], c[1], c[2], min_eig)
        )
    for i in range(args.samples):
        phi = np.pi * i / args.samples
        cs, sn = np.cos(phi), np.sin(phi)
        lines.append(
            "cone,%.17g,%.17g,%.17g,%.17g,%.17g"
            % (phi, cs * cs, sn * sn, np.sqrt(2.0) * cs * sn, 0.0)
        )
    payload = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_report_diff(args) -> int:
    with open(args.report_a, encoding="utf-8") as handle:
        left = json.load(handle)
    with open(args.report_b, encoding="utf-8") as handle:
        right = json.load(handle)
    diffs = report_diff(left, right)
    for path in diffs:
        print(path)
    if diffs:
        return EXIT_CHECK_FAILED
    print("reports identical (timestamps ignored)")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "build": cmd_build,
        "check": cmd_check,
        "curve": cmd_curve,
        "report-diff": cmd_report_diff,
    }
    try:
        return handlers[args.command](args)
    except (AnosovlabError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
