import csv
import json
import math

import pytest

from chi_contract.cli import cli_main
from chi_contract.prob import dump_json


@pytest.fixture
def channel_file(tmp_path):
    path = tmp_path / "parity.json"
    assert cli_main(["channel", "make", "--kind", "parity", "--k", "4",
                     "--out", str(path)]) == 0
    return path


@pytest.fixture
def family_file(tmp_path):
    path = tmp_path / "family.json"
    dump_json({"q": [0.25] * 4, "scale": 0.2, "eps": 0.1,
               "zeta": "rademacher"}, str(path))
    return path


class TestChannelCommands:
    def test_make_and_check(self, channel_file):
        assert cli_main(["channel", "check", str(channel_file),
                         "--comm", "1"]) == 0
        assert cli_main(["channel", "check", str(channel_file),
                         "--ldp", "1.0"]) == 1

    def test_randomized_response_roundtrip(self, tmp_path):
        path = tmp_path / "rr.json"
        assert cli_main(["channel", "make", "--kind", "randomized_response",
                         "--k", "4", "--rho", str(math.log(2.0)),
                         "--out", str(path)]) == 0
        obj = json.load(open(path))
        assert obj["W"][0][0] == pytest.approx(0.4, abs=1e-12)
        assert cli_main(["channel", "check", str(path),
                         "--ldp", str(math.log(2.0))]) == 0

    def test_bad_kind_is_numeric_failure(self, tmp_path, capsys):
        code = cli_main(["channel", "make", "--kind", "parity", "--k", "5",
                         "--out", str(tmp_path / "x.json")])
        assert code == 1
        record = json.loads(capsys.readouterr().err.strip())
        assert record["error"] == "ValueError"


class TestHmatrixCommand:
    def test_report_contents(self, channel_file, tmp_path):
        out = tmp_path / "h.json"
        assert cli_main(["hmatrix", str(channel_file), "--report",
                         str(out)]) == 0
        payload = json.load(open(out))
        assert payload["nuclear"] == pytest.approx(2.0, abs=1e-12)
        assert payload["frobenius_sq"] == pytest.approx(4.0, abs=1e-12)

    def test_bound_check_in_report(self, channel_file, tmp_path):
        out = tmp_path / "h.json"
        assert cli_main(["hmatrix", str(channel_file), "--bits", "1",
                         "--report", str(out)]) == 0
        payload = json.load(open(out))
        assert payload["bound_check"]["passed"] is True
        assert payload["bound_check"]["bound_nuclear"] == 2.0


class TestFluctuationCommand:
    def test_chi2(self, family_file, capsys):
        assert cli_main(["fluctuation", "--family", str(family_file),
                         "--kind", "chi2"]) == 0
        assert "0.04" in capsys.readouterr().out

    def test_induced_decoupled(self, family_file, channel_file, tmp_path):
        out = tmp_path / "fl.json"
        assert cli_main(["fluctuation", "--family", str(family_file),
                         "--kind", "induced_decoupled",
                         "--channels", str(channel_file), "--n", "2",
                         "--out", str(out)]) == 0
        payload = json.load(open(out))
        assert payload["kind"] == "induced_decoupled"
        assert payload["value"] >= 0.0


class TestBoundCommand:
    def test_csv_table(self, tmp_path):
        out = tmp_path / "bounds.csv"
        assert cli_main(["bound", "--k", "256", "--eps", "0.1", "--bits", "1",
                         "--format", "csv", "--out", str(out)]) == 0
        rows = list(csv.reader(open(out)))
        assert rows[0] == ["task", "constraint", "k", "eps", "value", "formula"]
        values = {r[0]: float(r[4]) for r in rows[1:]}
        assert values["learning"] == pytest.approx(3_276_800.0, rel=1e-9)
        assert values["testing_private"] == pytest.approx(204_800.0, rel=1e-9)

    def test_json_format(self, tmp_path):
        out = tmp_path / "bounds.json"
        assert cli_main(["bound", "--k", "16", "--eps", "0.1", "--rho", "0.5",
                         "--format", "json", "--out", str(out)]) == 0
        payload = json.load(open(out))
        assert len(payload) == 3


class TestAdversaryCommand:
    def test_roundtrip_through_fluctuation(self, tmp_path, channel_file):
        fam_out = tmp_path / "adv.json"
        rep_out = tmp_path / "rep.json"
        spec = f"{channel_file},{channel_file}"
        assert cli_main(["adversary", "--channels", spec, "--eps", "0.05",
                         "--out", str(fam_out), "--report", str(rep_out)]) == 0
        report = json.load(open(rep_out))
        assert report["fluctuation"] == pytest.approx(0.0, abs=1e-15)
        assert report["certificate_pass"] is True
        assert cli_main(["fluctuation", "--family", str(fam_out),
                         "--kind", "induced_decoupled",
                         "--channels", str(channel_file), "--n", "2"]) == 0


class TestSimulateCommand:
    def test_deterministic_outputs(self, tmp_path, family_file):
        ident = tmp_path / "id.json"
        cli_main(["channel", "make", "--kind", "identity", "--k", "4",
                  "--out", str(ident)])
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert cli_main(["simulate", "--channels", str(ident),
                             "--family", str(family_file), "--n", "2",
                             "--trials", "2000", "--seed", "7",
                             "--out", str(out)]) == 0
            outs.append(open(out).read())
        assert outs[0] == outs[1]
        payload = json.loads(outs[0])
        assert payload["schema"] == "trial-report/1"

    def test_csv_export(self, tmp_path, family_file):
        ident = tmp_path / "id.json"
        cli_main(["channel", "make", "--kind", "identity", "--k", "4",
                  "--out", str(ident)])
        out = tmp_path / "counts.csv"
        assert cli_main(["simulate", "--channels", str(ident),
                         "--family", str(family_file), "--n", "1",
                         "--trials", "400", "--seed", "1",
                         "--csv", str(out)]) == 0
        rows = list(csv.reader(open(out)))
        assert rows[0] == ["state", "null_count", "alt_count"]
        assert sum(int(r[1]) for r in rows[1:]) == 400


class TestVerifyCommand:
    def test_quick_suite_passes(self, capsys):
        assert cli_main(["verify", "--quick"]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out and "[FAIL]" not in out


class TestExitCodes:
    def test_unknown_command(self, capsys):
        assert cli_main(["teleport"]) == 2
        capsys.readouterr()

    def test_unknown_flag(self, capsys):
        assert cli_main(["bound", "--k", "16", "--eps", "0.1", "--bits", "1",
                         "--frobnicate"]) == 2
        capsys.readouterr()

    def test_numeric_failure(self, capsys):
        assert cli_main(["bound", "--k", "15", "--eps", "0.1", "--bits", "1"]) == 1
        record = json.loads(capsys.readouterr().err.strip())
        assert "error" in record
