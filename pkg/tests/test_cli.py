"""End-to-end CLI behaviour through in-process main() calls."""

import json

import numpy as np
import pytest

from anosovlab.cli import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, main
from anosovlab.config import DEFAULT, Tolerances, parse_overrides


@pytest.fixture(scope="module")
def rep_files(tmp_path_factory):
    """Representation JSON files built once through the CLI itself."""
    root = tmp_path_factory.mktemp("reps")
    paths = {}
    for kind in ("fuchsian", "sym-power", "direct-sum", "bent"):
        out = root / f"{kind}.json"
        assert main(["build", "--kind", kind, "--out", str(out)]) == EXIT_OK
        paths[kind] = str(out)
    return paths


def _stderr_json(capsys):
    err = capsys.readouterr().err.strip().splitlines()[-1]
    return json.loads(err)


class TestBuild:
    def test_certificates_printed(self, tmp_path, capsys):
        out = tmp_path / "rep.json"
        code = main(["build", "--kind", "sym-power", "--N", "4", "--out", str(out)])
        assert code == EXIT_OK
        stdout = capsys.readouterr().out
        lines = [l for l in stdout.splitlines() if l.startswith("certificate")]
        assert len(lines) >= 3
        assert all(l.endswith("PASS") for l in lines)
        assert f"wrote {out}" in stdout
        data = json.loads(out.read_text())
        assert data["dim"] == 4 and data["kind"] == "sym_power"

    def test_direct_sum_kind(self, rep_files):
        data = json.loads(open(rep_files["direct-sum"]).read())
        assert data["kind"] == "direct_sum" and data["dim"] == 4

    def test_bent_kind(self, rep_files):
        data = json.loads(open(rep_files["bent"]).read())
        assert data["kind"] == "bent"
        assert data["extra"]["t"] == 0.1

    def test_unsupported_genus(self, tmp_path, capsys):
        out = tmp_path / "rep.json"
        code = main(["build", "--kind", "fuchsian", "--genus", "3", "--out", str(out)])
        assert code == EXIT_INPUT_ERROR
        assert "genus" in _stderr_json(capsys)["message"]
        assert not out.exists()

    def test_unknown_tolerance(self, tmp_path, capsys):
        code = main(
            ["build", "--kind", "fuchsian", "--tol", "bogus=1",
             "--out", str(tmp_path / "r.json")]
        )
        assert code == EXIT_INPUT_ERROR
        assert _stderr_json(capsys)["error"] == "ValueError"

    def test_unreachable_tolerance_fails_certification(self, tmp_path, capsys):
        code = main(
            ["build", "--kind", "fuchsian", "--tol", "rel=1e-20",
             "--out", str(tmp_path / "r.json")]
        )
        assert code == EXIT_INPUT_ERROR
        assert "certificate" in _stderr_json(capsys)["message"]


class TestCheck:
    def test_full_run_passes(self, rep_files, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(
            ["check", "--rep", rep_files["sym-power"], "--radius", "3",
             "--samples", "12", "--triples", "10", "--out", str(out)]
        )
        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report["all_passed"]
        names = {c["name"] for c in report["checks"]}
        assert {
            "maximal", "maximal_iff_hn", "h2_implies_h1", "hk_iff_dual",
            "line_transversality", "collinearity", "quadruple_order",
            "tangent_law", "hyperconvexity", "psi_nonconstant", "limit_points",
        } <= names
        assert [p["k"] for p in report["gap_profiles"]] == [1, 2, 3]

    def test_stdout_report(self, rep_files, capsys):
        code = main(
            ["check", "--rep", rep_files["fuchsian"], "--radius", "3"]
        )
        assert code == EXIT_OK
        captured = capsys.readouterr()
        report = json.loads(captured.out)
        assert report["checks"] == []  # gap profiles only for the 2x2 base
        assert "gap profiles only" in captured.err

    def test_checks_subset(self, rep_files, tmp_path, capsys):
        out = tmp_path / "subset.json"
        code = main(
            ["check", "--rep", rep_files["sym-power"], "--radius", "2",
             "--samples", "12", "--triples", "5",
             "--checks", "maximal,collinearity", "--out", str(out)]
        )
        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert {c["name"] for c in report["checks"]} == {"maximal", "collinearity"}

    def test_unknown_check_name(self, rep_files, capsys):
        code = main(
            ["check", "--rep", rep_files["sym-power"], "--radius", "2",
             "--samples", "12", "--triples", "5", "--checks", "nonsense"]
        )
        assert code == EXIT_INPUT_ERROR
        assert "nonsense" in _stderr_json(capsys)["message"]

    def test_block_sum_fails_k1_k3(self, rep_files, tmp_path, capsys):
        out = tmp_path / "dsum.json"
        code = main(
            ["check", "--rep", rep_files["direct-sum"], "--radius", "3",
             "--out", str(out)]
        )
        assert code == EXIT_CHECK_FAILED
        err = capsys.readouterr().err
        assert "FAILED:" in err
        assert "gap_profile_k1" in err and "gap_profile_k3" in err
        report = json.loads(out.read_text())
        assert not report["all_passed"]

    def test_corrupt_rep_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        assert main(["check", "--rep", str(bad)]) == EXIT_INPUT_ERROR
        assert _stderr_json(capsys)["error"] == "ValidationError"

    def test_radius_cap(self, rep_files, capsys):
        code = main(["check", "--rep", rep_files["fuchsian"], "--radius", "11"])
        assert code == EXIT_INPUT_ERROR

    def test_determinism_modulo_timestamp(self, rep_files, tmp_path, capsys):
        args = [
            "check", "--rep", rep_files["sym-power"], "--radius", "2",
            "--samples", "12", "--triples", "5", "--seed", "7",
        ]
        out_a, out_b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(args + ["--out", str(out_a)]) == EXIT_OK
        assert main(args + ["--out", str(out_b)]) == EXIT_OK
        capsys.readouterr()
        assert main(["report-diff", str(out_a), str(out_b)]) == EXIT_OK
        assert "identical" in capsys.readouterr().out


class TestCurve:
    def test_csv_structure(self, rep_files, capsys):
        code = main(
            ["curve", "--rep", rep_files["sym-power"], "--theta-x", "0.5",
             "--theta-z", "2.5", "--samples", "40"]
        )
        assert code == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "block,theta,q_e11,q_e22,q_cross,min_eig"
        curve = [l.split(",") for l in lines[1:] if l.startswith("curve")]
        cone = [l.split(",") for l in lines[1:] if l.startswith("cone")]
        assert len(curve) == 40 and len(cone) == 40
        # first curve row sits at theta_x where the form vanishes
        first = [float(v) for v in curve[0][1:]]
        assert first[0] == pytest.approx(0.5)
        assert max(abs(v) for v in first[1:]) < 1e-12
        # interior rows are positive definite
        for row in curve[1:]:
            assert float(row[5]) > 0
        # cone rows are exactly rank one with zero minimum eigenvalue
        for row in cone:
            e11, e22, cross, mineig = (float(v) for v in row[2:])
            assert mineig == 0.0
            assert e11 * e22 == pytest.approx(cross**2 / 2.0, abs=1e-15)

    def test_float_roundtrip(self, rep_files, tmp_path):
        out = tmp_path / "curve.csv"
        code = main(
            ["curve", "--rep", rep_files["sym-power"], "--samples", "5",
             "--out", str(out)]
        )
        assert code == EXIT_OK
        rows = out.read_text().strip().splitlines()[1:]
        for token in rows[2].split(",")[1:]:
            assert "%.17g" % float(token) == token

    def test_equal_endpoints_rejected(self, rep_files, capsys):
        code = main(
            ["curve", "--rep", rep_files["sym-power"], "--theta-x", "1.0",
             "--theta-z", "1.0"]
        )
        assert code == EXIT_INPUT_ERROR

    def test_needs_power_curve_rep(self, rep_files, capsys):
        code = main(["curve", "--rep", rep_files["fuchsian"]])
        assert code == EXIT_INPUT_ERROR

    def test_sample_floor(self, rep_files, capsys):
        code = main(["curve", "--rep", rep_files["sym-power"], "--samples", "1"])
        assert code == EXIT_INPUT_ERROR


class TestReportDiff:
    def test_differing_reports(self, tmp_path, capsys):
        a = {"schema_version": 1, "timestamp": "T1", "value": 1}
        b = {"schema_version": 1, "timestamp": "T2", "value": 2}
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        pa.write_text(json.dumps(a))
        pb.write_text(json.dumps(b))
        assert main(["report-diff", str(pa), str(pb)]) == EXIT_CHECK_FAILED
        out = capsys.readouterr().out
        assert "/value" in out and "timestamp" not in out

    def test_missing_file(self, tmp_path, capsys):
        existing = tmp_path / "a.json"
        existing.write_text("{}")
        code = main(["report-diff", str(existing), str(tmp_path / "nope.json")])
        assert code == EXIT_INPUT_ERROR


class TestParseOverrides:
    def test_none_is_default(self):
        assert parse_overrides(None) == DEFAULT

    def test_float_override(self):
        tol = parse_overrides(["rank=1e-7"])
        assert tol.rank == 1e-7
        assert tol.angle == DEFAULT.angle

    def test_tau_prefix(self):
        assert parse_overrides(["tau_col=1e-5"]).col == 1e-5

    def test_int_fields(self):
        tol = parse_overrides(["budget=500", "iter_max=10"])
        assert tol.budget == 500 and isinstance(tol.budget, int)
        assert tol.iter_max == 10

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            parse_overrides(["wat=1"])

    def test_malformed_pair(self):
        with pytest.raises(ValueError):
            parse_overrides(["rank"])

    def test_custom_base(self):
        base = Tolerances(rank=1e-5)
        tol = parse_overrides(["col=1e-4"], base)
        assert tol.rank == 1e-5 and tol.col == 1e-4
