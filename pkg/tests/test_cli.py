import json

import pytest
from click.testing import CliRunner

from supermodular.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_verify_axioms_by_m(runner):
    result = runner.invoke(main, ["verify-axioms", "--m", "1"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["all_ok"]


def test_verify_axioms_requires_one_source(runner):
    assert runner.invoke(main, ["verify-axioms"]).exit_code != 0


def test_export_then_verify_roundtrip(runner, tmp_path):
    path = tmp_path / "data.json"
    result = runner.invoke(main, ["export-data", "--m", "1", "--kind", "su2", "--output", str(path)])
    assert result.exit_code == 0, result.output
    result = runner.invoke(main, ["verify-axioms", "--input", str(path)])
    assert result.exit_code == 0, result.output


def test_verify_axioms_fails_on_tampered_file(runner, tmp_path):
    path = tmp_path / "bad.json"
    result = runner.invoke(main, ["export-data", "--m", "1", "--kind", "su2", "--output", str(path)])
    assert result.exit_code == 0
    data = json.loads(path.read_text())
    data["s_tilde"][0][1]["coeffs"][0][0] = "99"
    data["s_tilde"][1][0]["coeffs"][0][0] = "99"
    path.write_text(json.dumps(data))
    result = runner.invoke(main, ["verify-axioms", "--input", str(path)])
    assert result.exit_code == 1


def test_spin_decompose_cli(runner):
    result = runner.invoke(main, ["spin-decompose", "--m", "1"])
    assert result.exit_code == 0, result.output
    body = json.loads(result.output)
    assert body["fermion"] == 6 and body["all_ok"]


def test_congruence_level_cli(runner):
    result = runner.invoke(main, ["congruence-level", "--m", "1", "--bound", "8"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["minimal_level"] == 8


def test_congruence_level_cli_no_level_below_bound(runner):
    result = runner.invoke(main, ["congruence-level", "--m", "1", "--bound", "4"])
    assert result.exit_code == 1


def test_lemma_check_cli(runner):
    result = runner.invoke(main, ["lemma-check", "--n", "6"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["ok"]
    assert runner.invoke(main, ["lemma-check", "--n", "5"]).exit_code != 0


def test_table1_cli_formats(runner):
    result = runner.invoke(main, ["table1", "--m-max", "1", "--format", "csv", "--no-levels"])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[0].startswith("m,")
    result = runner.invoke(main, ["table1", "--m-max", "1", "--format", "json"])
    assert result.exit_code == 0
    assert json.loads(result.output)[0]["abar_order"] == 16


def test_conjectures_cli(runner):
    result = runner.invoke(main, ["conjectures", "--m-max", "1"])
    assert result.exit_code == 0, result.output
    assert "PASS" in result.output and "FAIL" not in result.output


def test_certify_infinite_cli(runner):
    result = runner.invoke(main, ["certify-infinite", "--cap", "1000"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["ok"]


def test_run_all_cli(runner, tmp_path):
    out_dir = tmp_path / "reports"
    config = tmp_path / "run.cfg"
    config.write_text(
        f"""
        m_max = 1
        axiom_m_max = 1
        spin_m_max = 1
        infinite_cap = 1500
        lemma_levels = 2, 4
        output_dir = {out_dir}
        format = json
        """
    )
    result = runner.invoke(main, ["run-all", "--config", str(config)])
    assert result.exit_code == 0, result.output
    assert "all checks passed" in result.output
    assert (out_dir / "summary.json").exists()


def test_run_all_cli_bad_output(runner, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    config = tmp_path / "run.cfg"
    config.write_text(
        f"m_max = 1\naxiom_m_max = 1\nspin_m_max = 1\ninfinite_cap = 1500\nlemma_levels = 2\noutput_dir = {blocker}\n"
    )
    result = runner.invoke(main, ["run-all", "--config", str(config)])
    assert result.exit_code != 0
    assert "cannot write artifacts" in result.output


def test_run_all_cli_bad_config(runner, tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("unknown_key = 1\n")
    result = runner.invoke(main, ["run-all", "--config", str(config)])
    assert result.exit_code != 0
