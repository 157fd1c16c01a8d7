import json
import subprocess
import sys

import pytest

from fanostrata.cli import main

FERMAT_QUARTIC = "x0^4+x1^4+x2^4+x3^4+x4^4"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestStrata:
    def test_listing(self, capsys):
        payload = run_json(capsys, "strata", "4", "3")
        assert len(payload["types"]) == 2
        assert payload["types"][0]["entries"] == [0, 0]
        assert payload["types"][1]["u"] == 1

    def test_dot(self, capsys):
        code, out, _ = run_cli(capsys, "strata", "5", "7", "--dot")
        assert code == 0
        assert out.count(" -> ") == 7
        for u in (10, 7, 5, 4, 1, 0):
            assert f"u={u}" in out

    def test_small_n_domain_error(self, capsys):
        code, out, err = run_cli(capsys, "strata", "2", "3")
        assert code == 2
        assert "error" in err

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["strata"])
        assert exc.value.code == 1


class TestSplit:
    def test_fermat_cone_line(self, capsys, tmp_path):
        line = {"n": 4, "points": [["1", "0", "1", "31", "0"],
                                   ["0", "1", "0", "0", "10"]]}
        # 10^4 = -1 mod 73
        lp = tmp_path / "line.json"
        lp.write_text(json.dumps(line))
        payload = run_json(capsys, "split", "--surface", FERMAT_QUARTIC,
                           "--line", f"@{lp}", "--field", "p:73")
        assert payload["splitting"]["entries"] == [-2, 1]
        assert payload["dim_TF"] == 2 and payload["dim_TFa"] == 1
        assert payload["rank_profile"]["h"][0] == 1

    def test_cubic_surface_rigid_line(self, capsys, tmp_path):
        lp = tmp_path / "line.json"
        lp.write_text(json.dumps(
            {"n": 3, "points": [["1", "-1", "0", "0"], ["0", "0", "1", "-1"]]}))
        payload = run_json(capsys, "split", "--surface",
                           "x0^3+x1^3+x2^3+x3^3", "--line", f"@{lp}")
        assert payload["splitting"]["entries"] == [-1]
        assert payload["dim_TF"] == 0

    def test_line_not_on_surface(self, capsys, tmp_path):
        lp = tmp_path / "line.json"
        lp.write_text(json.dumps(
            {"n": 3, "points": [["1", "0", "0", "0"], ["0", "1", "0", "0"]]}))
        code, out, err = run_cli(capsys, "split", "--surface",
                                 "x0^3+x1^3+x2^3+x3^3", "--line", f"@{lp}")
        assert code == 2
        assert "restriction" in err


class TestClass:
    def test_quintic_fourfold_both_orientations(self, capsys):
        payload = run_json(capsys, "class", "5", "5", "--type", "-1,-1,1")
        both = payload["orientations"]
        assert both["porteous"]["degree"] == 213500
        assert both["reciprocal"]["degree"] == 282625
        assert payload["degree"] == 213500
        assert {"k": 1, "pretty": "10*s[1,0]"} in payload["chern_sym_dminus1"]

    def test_orientation_flag(self, capsys):
        payload = run_json(capsys, "class", "5", "5", "--type=-1,-1,1",
                           "--orientation", "reciprocal")
        assert payload["degree"] == 282625

    def test_quintic_threefold_count(self, capsys):
        payload = run_json(capsys, "class", "4", "5", "--type", "-1,-1")
        assert payload["degree"] == 2875

    def test_fermat_quartic_fano_class(self, capsys):
        payload = run_json(capsys, "class", "4", "4", "--type", "-2,1")
        assert payload["fano_class"]["pretty"] == "320*s[3,2]"
        assert payload["m"] == 1
        assert payload["expectation"]["generically_empty"]


class TestSampleAndWitness:
    def test_sample_smoke(self, capsys, tmp_path):
        csv = tmp_path / "out.csv"
        payload = run_json(capsys, "sample", "4", "3", "101", "2000", "1",
                           "--csv", str(csv))
        assert payload["trials"] == 2000
        assert sum(r["count"] for r in payload["counts"]) == 2000
        assert csv.read_text().startswith("type,count")

    def test_witness_round_trip(self, capsys, tmp_path):
        payload = run_json(capsys, "witness", "5", "7", "--type", "-5,1,1",
                           "--seed", "7")
        assert payload["recovered_type"]["entries"] == [-5, 1, 1]
        surf = tmp_path / "surf.json"
        line = tmp_path / "line.json"
        surf.write_text(json.dumps(payload["surface"]))
        line.write_text(json.dumps(payload["line"]))
        split = run_json(capsys, "split", "--surface", f"@{surf}",
                         "--line", f"@{line}", "--field", "p:1009")
        assert split["splitting"]["entries"] == [-5, 1, 1]

    def test_witness_seed_env(self, capsys, monkeypatch):
        monkeypatch.setenv("FANOSTRATA_SEED", "7")
        a = run_json(capsys, "witness", "4", "3", "--type", "-1,1")
        b = run_json(capsys, "witness", "4", "3", "--type", "-1,1", "--seed", "7")
        assert a["minors"] == b["minors"]


class TestLocaleqAndFermat:
    def test_localeq_single_equation(self, capsys):
        payload = run_json(capsys, "localeq", "--surface",
                           "x2*x0^2 + x3*x1^2 + x2^3 + x3^3 + x4^3",
                           "--type", "-1,1")
        assert len(payload["equations"]) == 1
        assert payload["variables"] == ["a20", "a21", "a30", "a31", "a40", "a41"]

    def test_fermat_suite(self, capsys):
        payload = run_json(capsys, "fermat", "4", "4", "--prime", "41")
        assert payload["zeta"] == 3
        assert len(payload["lines"]) == 8
        assert all(ln["splitting"] == [-2, 1] for ln in payload["lines"])


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "fanostrata.cli", "strata", "4", "3"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert len(payload["types"]) == 2
