"""Command line behavior: exit codes, formats, and report plumbing.

Heavy report scopes are exercised in test_acceptance; here the report
runs only on restricted section subsets.
"""

import json

import pytest

import latshell.cli as cli
import latshell.design as design_mod
from latshell.catalog import build
from latshell.cli import VerificationReport, main, run_report
from latshell.lattice import lattices_equal, load_lattice, save_lattice


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def run_json(capsys, *argv):
    rc, out = run(capsys, *argv)
    return rc, json.loads(out)


# -- basic subcommands --------------------------------------------------


def test_no_command_prints_help(capsys):
    assert main([]) == 2
    assert "COMMAND" in capsys.readouterr().out


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_catalog_listing(capsys):
    rc, entries = run_json(capsys, "catalog")
    assert rc == 0
    by_name = {e["name"]: e for e in entries}
    assert by_name["O23"] == {"name": "O23", "dim": 23, "det": 1, "min": 3}
    assert by_name["Leech"]["min"] == 4
    assert by_name["L1622"]["det"] == 4


def test_catalog_detail_and_file_round_trip(tmp_path, capsys):
    path = str(tmp_path / "e8.lat")
    rc, info = run_json(capsys, "catalog", "E8", "--out", path)
    assert rc == 0
    assert info["dim"] == 8 and info["det"] == 1 and info["min"] == 2
    assert info["min_shell"] == 240
    assert lattices_equal(load_lattice(path), build("E8"))


def test_shell_count_and_csv(capsys):
    rc, payload = run_json(capsys, "shell", "Z7", "3")
    assert rc == 0 and payload["count"] == 280
    rc, out = run(capsys, "shell", "Z7", "3", "--format", "csv")
    assert rc == 0
    assert out.splitlines()[1].strip() == "Z7,3,280"


def test_shell_accepts_fractional_norm(capsys):
    # the E8 rescaled copy has norms in 2Z; the odd grid is empty
    rc, payload = run_json(capsys, "shell", "E8", "3/2")
    assert rc == 0 and payload["count"] == 0


def test_shell_print_vectors(capsys):
    rc, payload = run_json(capsys, "shell", "Z2", "1", "--print", "4")
    assert rc == 0 and payload["count"] == 4
    assert len(payload["vectors"]) == 4


def test_shell_from_lattice_file(tmp_path, capsys):
    path = str(tmp_path / "d4.lat")
    save_lattice(build("D4"), path)
    rc, payload = run_json(capsys, "shell", path, "2")
    assert rc == 0 and payload["count"] == 24


def test_theta_subcommand(capsys):
    rc, payload = run_json(capsys, "theta", "Z7", "--upto", "5")
    assert rc == 0
    assert payload["coefficients"] == [1, 14, 84, 280, 574, 840]


def test_identity_subcommand(capsys):
    rc, payload = run_json(capsys, "identity", "Z7", "--upto", "6")
    assert rc == 0 and payload["match"] is True


def test_identity_unknown_name_is_usage_error(capsys):
    rc, _ = run(capsys, "identity", "E8")
    assert rc == 2


def test_design_test_pass_and_fail(capsys):
    rc, payload = run_json(capsys, "design-test", "Z7", "3", "5")
    assert rc == 0 and payload["is_design"] and payload["exact"]
    rc, payload = run_json(capsys, "design-test", "Z7", "3", "7")
    assert rc == 1 and not payload["is_design"]


def test_classify_subcommand(capsys):
    rc, rep = run_json(capsys, "classify", "L1621")
    assert rc == 0
    assert rep["root_system"]["label"] == "(A1)^16"
    assert rep["surviving_case"] is True


def test_classify_replay(capsys):
    rc, rep = run_json(capsys, "classify", "--replay")
    assert rc == 0
    assert rep["admissible_cases"] == 9
    assert rep["survivors"] == ["(A1)^16", "(D4)^4", "(D8)^2"]


def test_classify_usage_errors(capsys):
    rc, _ = run(capsys, "classify")
    assert rc == 2
    rc, _ = run(capsys, "classify", "Z7", "--replay")
    assert rc == 2


def test_design_code_subcommand(capsys):
    rc, rep = run_json(capsys, "design-code", "L1621")
    assert rc == 0
    assert rep["classes"] == 16 and rep["code"] == [16, 6, 6]
    assert rep["design"]["is_2_16_6_2"] is True


def test_design_code_rejects_wrong_lattice(capsys):
    # no norm-2 vectors at all: the frame detection must fail cleanly
    rc, _ = run(capsys, "design-code", "Z7")
    assert rc == 1


# -- exit codes for resource and usage problems -------------------------


def test_memory_cap_aborts_with_exit_3(capsys):
    rc, _ = run(capsys, "shell", "Z7", "3", "--memory-cap", "64")
    assert rc == 3


def test_unknown_lattice_exits_2(capsys):
    rc, _ = run(capsys, "shell", "NOSUCH", "3")
    assert rc == 2


def test_missing_file_exits_2(capsys):
    rc, _ = run(capsys, "shell", "no/such/file.lat", "3")
    assert rc == 2


def test_bad_norm_exits_2(capsys):
    rc, _ = run(capsys, "shell", "Z7", "wat")
    assert rc == 2
    rc, _ = run(capsys, "shell", "Z7", "-4")
    assert rc == 2


def test_global_flags_accepted_in_both_positions(capsys):
    rc_a, a = run_json(capsys, "--workers", "2", "shell", "Z7", "3")
    rc_b, b = run_json(capsys, "shell", "Z7", "3", "--workers", "2")
    assert rc_a == rc_b == 0
    assert a == b


def test_seed_flag_sets_screen_seed(capsys):
    before = design_mod._WITNESS_SEED
    try:
        rc, _ = run_json(capsys, "shell", "Z7", "1", "--seed", "99")
        assert rc == 0
        assert design_mod._WITNESS_SEED == 99
    finally:
        design_mod._WITNESS_SEED = before


# -- the report ---------------------------------------------------------


def test_report_single_section_passes():
    rep = run_report("quick", only=("O7",))
    assert rep.overall_pass and rep.exit_code == 0
    kinds = {c["kind"] for _, c in rep.checks()}
    assert {"theta-prefix", "configuration", "design-test", "neighbor-forms"} <= kinds
    for _, check in rep.checks():
        assert check["provenance"] in ("paper-table", "derived")
        assert "expected" in check and "observed" in check


def test_report_schema_and_json_round_trip(tmp_path):
    out = str(tmp_path / "rep.json")
    rep = run_report("quick", out=out, only=("O1",))
    with open(out) as fh:
        loaded = json.load(fh)
    assert loaded["schema"] == cli.SCHEMA
    assert loaded["scope"] == "quick"
    assert loaded["overall_pass"] is True
    assert "run" in loaded and "section_seconds" in loaded["run"]


def test_report_worker_determinism_small():
    a = run_report("quick", workers=1, only=("O1", "O7"))
    b = run_report("quick", workers=3, only=("O1", "O7"))
    assert json.dumps(a.body()) == json.dumps(b.body())


def test_report_isolates_corrupted_section(monkeypatch):
    bad = ([9] + cli._THETA["O7"][0][1:], 12, 12)
    monkeypatch.setitem(cli._THETA, "O7", bad)
    rep = run_report("quick", only=("O1", "O7"))
    assert not rep.overall_pass and rep.exit_code == 1
    assert rep.sections["O1"]["pass"] is True
    assert rep.sections["O7"]["pass"] is False


def test_report_isolates_raising_section(monkeypatch):
    def boom(name):
        raise ArithmeticError("synthetic corruption")

    monkeypatch.setattr(cli._ReportBuilder, "lattice_section", lambda self, n: boom(n))
    rep = run_report("quick", only=("O1", "fano-subsets"))
    assert not rep.overall_pass and rep.exit_code == 1
    fault = rep.sections["O1"]["checks"][0]
    assert fault["status"] == "error" and "synthetic corruption" in fault["observed"]
    assert rep.sections["fano-subsets"]["pass"] is True


def test_report_surfaces_resource_abort():
    rep = run_report("quick", only=("O7",), memory_cap=64)
    assert rep.exit_code == 3
    statuses = [c["status"] for _, c in rep.checks()]
    assert "resource-abort" in statuses
    assert rep.counts["aborted"] == 1


def test_report_exit_code_rules():
    ok = VerificationReport("quick", {}, {"checks": 1, "passed": 1, "failed": 0, "aborted": 0}, True, {})
    bad = VerificationReport("quick", {}, {"checks": 1, "passed": 0, "failed": 1, "aborted": 0}, False, {})
    gone = VerificationReport("quick", {}, {"checks": 1, "passed": 0, "failed": 1, "aborted": 1}, False, {})
    assert (ok.exit_code, bad.exit_code, gone.exit_code) == (0, 1, 3)


def test_report_csv_has_one_row_per_check(capsys):
    rep = run_report("quick", only=("O1",))
    rows = rep.csv_rows()
    assert rows[0][0] == "section"
    assert len(rows) == 1 + rep.counts["checks"]


def test_report_cli_writes_file_and_summarizes(tmp_path, capsys):
    out = str(tmp_path / "r.json")
    # restrict sections through the builder to keep the test fast
    real_build = cli._ReportBuilder.build

    def tiny_build(self):
        self.only = ("O1",)
        return real_build(self)

    try:
        cli._ReportBuilder.build = tiny_build
        rc, text = run(capsys, "report", "--scope", "quick", "--out", out)
    finally:
        cli._ReportBuilder.build = real_build
    assert rc == 0
    assert "report written" in text
    with open(out) as fh:
        assert json.load(fh)["overall_pass"] is True


def test_report_rejects_bad_scope():
    with pytest.raises(SystemExit):
        main(["report", "--scope", "huge"])
