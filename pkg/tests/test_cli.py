import json
import subprocess
import sys

import numpy as np
import pytest

import builders
from srmkit import StateSet, load_measurement
from srmkit.cli import main


def write_states(path, s: StateSet):
    path.write_text(json.dumps(s.to_dict(digits=None)))
    return str(path)


def write_group(path, g):
    path.write_text(json.dumps(g.to_dict(digits=None)))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def six_file(tmp_path):
    return write_states(tmp_path / "six.json", builders.six_set())


@pytest.fixture
def gu4_files(tmp_path):
    return (
        write_states(tmp_path / "gu4.json", builders.gu4_set()),
        write_group(tmp_path / "z2z2.json", builders.gu4_group()),
    )


class TestConstruct:
    def test_lsm_six(self, capsys, tmp_path, six_file):
        out_path = tmp_path / "m.json"
        code, out, _ = run(capsys, "construct", "--input", six_file, "--kind", "lsm", "--output", out_path)
        assert code == 0
        summary = json.loads(out)
        assert set(summary) >= {"kind", "rank", "residual_error", "completeness_residual"}
        assert summary["rank"] == 2
        assert summary["residual_error"] == pytest.approx(0.1363, abs=1e-4)
        meas = load_measurement(out_path.read_text())
        np.testing.assert_allclose(meas.matrix, [[0.97, -0.26], [0.26, 0.97]], atol=5e-3)

    def test_olsm_identical_for_independent(self, capsys, tmp_path, six_file):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "construct", "--input", six_file, "--kind", "lsm", "--output", a)
        run(capsys, "construct", "--input", six_file, "--kind", "olsm", "--output", b)
        da, db = json.loads(a.read_text()), json.loads(b.read_text())
        assert da["states"] == db["states"]

    def test_wlsm_skewed_priors(self, capsys, tmp_path):
        path = write_states(tmp_path / "s.json", builders.six_set([0.9, 0.1]))
        code, out, _ = run(capsys, "construct", "--input", path, "--kind", "wlsm", "--weights-from-priors")
        assert code == 0
        assert json.loads(out)["weighted_error"] < 0.0963763
        code, out, _ = run(capsys, "construct", "--input", path, "--kind", "wlsm", "--weights", "0.9486832981,0.316227766")
        assert code == 0

    @pytest.mark.parametrize("kind", ["srm", "binary-srm", "cyclic-srm"])
    def test_other_kinds(self, capsys, six_file, kind):
        code, out, _ = run(capsys, "construct", "--input", six_file, "--kind", kind)
        assert code == 0
        assert json.loads(out)["completeness_residual"] <= 1e-9

    def test_wlsm_dependent_exit_3(self, capsys, gu4_files):
        code, _, err = run(capsys, "construct", "--input", gu4_files[0], "--kind", "wlsm", "--weights", "1,1,1,1")
        assert code == 3
        assert err.startswith("error:") and err.count("\n") == 1

    def test_wlsm_needs_weights(self, capsys, six_file):
        assert run(capsys, "construct", "--input", six_file, "--kind", "wlsm")[0] == 2

    def test_bad_weight_count(self, capsys, six_file):
        assert run(capsys, "construct", "--input", six_file, "--kind", "wlsm", "--weights", "1,2,3")[0] == 2

    def test_invalid_input_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"dim": 2, "states": [[[1, 0], [0, 0]]], "priors": [0.7]}')
        code, _, err = run(capsys, "construct", "--input", bad)
        assert code == 2 and "error" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "construct", "--input", tmp_path / "nope.json")[0] == 2

    def test_olsm_too_many_states(self, capsys, tmp_path):
        s = builders.random_state_set(np.random.default_rng(0), 2, 3)
        path = write_states(tmp_path / "s.json", s)
        assert run(capsys, "construct", "--input", path, "--kind", "olsm")[0] == 3

    def test_cyclic_not_circulant_exit_4(self, capsys, tmp_path):
        s = builders.random_state_set(np.random.default_rng(0), 3, 3)
        path = write_states(tmp_path / "s.json", s)
        assert run(capsys, "construct", "--input", path, "--kind", "cyclic-srm")[0] == 4


class TestGuSrm:
    def test_gu4(self, capsys, tmp_path, gu4_files):
        out_path = tmp_path / "m.json"
        code, out, _ = run(capsys, "gu-srm", "--input", gu4_files[0], "--group", gu4_files[1], "--output", out_path)
        assert code == 0
        rep = json.loads(out)
        assert rep["p_error"] == pytest.approx(0.2714, abs=1e-4)
        assert rep["w0"] == pytest.approx((2 + np.sqrt(2)) / 4, abs=1e-11)
        assert rep["verdict"] == "verified_mpem"
        assert rep["symmetry_deviation"] <= 1e-9
        np.testing.assert_allclose(load_measurement(out_path.read_text()).matrix, builders.GU4_M, atol=1e-11)

    def test_trine(self, capsys, tmp_path):
        s, g = builders.trine()
        code, out, _ = run(
            capsys, "gu-srm", "--input", write_states(tmp_path / "pw.json", s), "--group", write_group(tmp_path / "z3.json", g)
        )
        assert code == 0 and json.loads(out)["verdict"] == "verified_mpem"

    def test_broken_order_exit_4(self, capsys, tmp_path):
        s, _ = builders.random_gu(np.random.default_rng(2), (4,), 3, shuffle=False)
        path = write_states(tmp_path / "s.json", s)
        grp = tmp_path / "g.json"
        grp.write_text('{"factors": [4], "order": [[0], [2], [1], [3]]}')
        code, _, err = run(capsys, "gu-srm", "--input", path, "--group", grp)
        assert code == 4
        assert "Gram entry" in err

    def test_bad_group_file(self, capsys, tmp_path, gu4_files):
        grp = tmp_path / "g.json"
        grp.write_text('{"factors": [2, 2], "order": [[0, 0], [0, 0], [1, 0], [1, 1]]}')
        assert run(capsys, "gu-srm", "--input", gu4_files[0], "--group", grp)[0] == 2


class TestDiagnose:
    def test_gu4_srm(self, capsys, tmp_path, gu4_files):
        mpath = tmp_path / "m.json"
        run(capsys, "gu-srm", "--input", gu4_files[0], "--group", gu4_files[1], "--output", mpath)
        code, out, _ = run(capsys, "diagnose", "--input", gu4_files[0], "--measurement", mpath)
        assert code == 0
        rep = json.loads(out)
        assert rep["verdict"] == "verified_mpem"
        assert rep["implicit_srm_residual"] <= 1e-9

    def test_gram_schmidt_baseline(self, capsys, tmp_path, six_file):
        from srmkit import gram_schmidt_measurement

        mpath = tmp_path / "gs.json"
        mpath.write_text(json.dumps(gram_schmidt_measurement(builders.six_set()).to_dict(digits=None)))
        code, out, _ = run(capsys, "diagnose", "--input", six_file, "--measurement", mpath)
        assert code == 0
        rep = json.loads(out)
        assert rep["p_error"] > 0.0669873
        assert rep["implicit_srm_residual"] > 1e-3

    def test_mismatched_m_exit_2(self, capsys, tmp_path, six_file, gu4_files):
        mpath = tmp_path / "m.json"
        run(capsys, "gu-srm", "--input", gu4_files[0], "--group", gu4_files[1], "--output", mpath)
        assert run(capsys, "diagnose", "--input", six_file, "--measurement", mpath)[0] == 2

    def test_schema_error(self, capsys, tmp_path, six_file):
        mpath = tmp_path / "m.json"
        mpath.write_text('{"dim": 2, "states": "x"}')
        assert run(capsys, "diagnose", "--input", six_file, "--measurement", mpath)[0] == 2


class TestSweep:
    def test_curve(self, capsys, six_file):
        code, out, _ = run(capsys, "sweep", "--input", six_file, "--grid", "0.01:0.99:0.01")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "p,E_w_min" and len(lines) == 100
        rows = [tuple(map(float, line.split(","))) for line in lines[1:]]
        p_best, e_best = max(rows, key=lambda r: r[1])
        assert p_best == 0.5 and e_best == pytest.approx(0.0964, abs=5e-4)

    def test_single_row(self, capsys, six_file):
        code, out, _ = run(capsys, "sweep", "--input", six_file, "--grid", "0.5:0.5:0.1")
        assert code == 0 and len(out.splitlines()) == 2

    def test_grid_with_zero(self, capsys, six_file):
        assert run(capsys, "sweep", "--input", six_file, "--grid", "0:1:0.25")[0] == 3

    def test_needs_two_states(self, capsys, gu4_files):
        assert run(capsys, "sweep", "--input", gu4_files[0], "--grid", "0.5:0.5:0.1")[0] == 3

    def test_output_file(self, capsys, tmp_path, six_file):
        out_path = tmp_path / "curve.csv"
        run(capsys, "sweep", "--input", six_file, "--grid", "0.25:0.75:0.25", "--output", out_path)
        assert out_path.read_text().count("\n") == 4


class TestOracle:
    def test_six(self, capsys, six_file):
        code, out, _ = run(capsys, "oracle", "--input", six_file, "--seed", "3")
        rep = json.loads(out)
        assert code == 0
        assert rep["lsm_oracle"] == pytest.approx(rep["e_min"], abs=1e-6)
        assert rep["helstrom_oracle"] == pytest.approx(rep["lsm_p_error"], abs=1e-6)

    def test_too_few_trials(self, capsys, six_file):
        assert run(capsys, "oracle", "--input", six_file, "--trials", "10")[0] == 3


class TestFlags:
    def test_bad_rank_tol(self, capsys, six_file):
        assert run(capsys, "construct", "--input", six_file, "--rank-tol", "2")[0] == 2

    def test_negative_tol(self, capsys, six_file):
        assert run(capsys, "construct", "--input", six_file, "--tol", "-1")[0] == 2

    def test_no_command(self, capsys):
        assert run(capsys)[0] == 2


def test_deterministic_bytes(tmp_path, six_file, gu4_files):
    outputs = []
    for k in range(2):
        mp, sp = tmp_path / f"m{k}.json", tmp_path / f"c{k}.csv"
        main(["gu-srm", "--input", gu4_files[0], "--group", gu4_files[1], "--output", str(mp)])
        main(["sweep", "--input", six_file, "--grid", "0.01:0.99:0.01", "--output", str(sp)])
        main(["oracle", "--input", six_file, "--seed", "7", "--output", str(tmp_path / f"o{k}.json")])
        outputs.append((mp.read_bytes(), sp.read_bytes(), (tmp_path / f"o{k}.json").read_bytes()))
    assert outputs[0] == outputs[1]


def test_module_entry_point(six_file):
    proc = subprocess.run(
        [sys.executable, "-m", "srmkit.cli", "construct", "--input", six_file],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["kind"] == "lsm"
