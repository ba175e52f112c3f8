import csv
import io
import json
import os

import pytest

from supermodular.survey import (
    RunAllConfig,
    _analysis_cache,
    analyze_family_member,
    conjecture_c2_expected,
    conjecture_suite,
    infinite_image_certificate,
    render_table1,
    run_all,
    table1,
)


def test_table1_small_rows():
    rows = table1(3)
    assert [r.abar_order for r in rows] == [16, 12, 128]
    assert [r.aprime_order for r in rows] == [8, 8, 64]
    assert [r.rho_image_order for r in rows] == [16, 48, 128]
    assert [r.minimal_level for r in rows] == [8, 12, 16]
    assert all(not r.exceeded for r in rows)


def test_table1_fingerprints():
    rows = table1(2)
    cyclic8 = rows[0].aprime_fingerprint
    assert cyclic8["order"] == 8
    assert cyclic8["order_histogram"] == {"1": 1, "2": 1, "4": 2, "8": 4}
    quaternion = rows[1].aprime_fingerprint
    assert quaternion["order_histogram"] == {"1": 1, "2": 1, "4": 6}


def test_projective_image_covers_center_quotient():
    for m in (1, 2, 3, 4):
        a = analyze_family_member(m)
        assert a.rho_order % a.abar_order == 0


def test_table1_validates_m_max():
    with pytest.raises(ValueError):
        table1(0)
    with pytest.raises(ValueError):
        table1(9, m_limit=8)


def test_table1_flags_cap_overruns():
    rows = table1(2, cap=10, include_levels=False)
    assert all(r.exceeded for r in rows)
    assert all(r.abar_order is None for r in rows)
    assert "cap" in rows[0].note
    text = render_table1(rows, "text")
    assert "cap!" in text


def test_render_formats():
    rows = table1(1)
    text = render_table1(rows, "text")
    assert "min level" in text and "16" in text
    reader = csv.reader(io.StringIO(render_table1(rows, "csv")))
    parsed = list(reader)
    assert parsed[0][0] == "m" and parsed[1][0] == "1"
    data = json.loads(render_table1(rows, "json"))
    assert data[0]["abar_order"] == 16
    with pytest.raises(ValueError):
        render_table1(rows, "yaml")


def test_rows_are_deterministic():
    before = [r.as_dict() for r in table1(2)]
    _analysis_cache.clear()
    after = [r.as_dict() for r in table1(2)]
    for a, b in zip(before, after):
        a.pop("runtime_s")
        b.pop("runtime_s")
        assert a == b


def test_conjecture_c2_closed_form():
    assert conjecture_c2_expected(1) == 16
    assert conjecture_c2_expected(2) == 12
    assert conjecture_c2_expected(5) == 192
    assert conjecture_c2_expected(7) == 1024
    assert conjecture_c2_expected(8) == 324


def test_conjecture_suite_all_pass_to_m6():
    verdicts = conjecture_suite(6)
    assert verdicts, "no verdicts produced"
    assert all(v.passed for v in verdicts), [v.as_dict() for v in verdicts if not v.passed]
    clauses = {(v.clause, v.m) for v in verdicts}
    assert ("a", 2) in clauses and ("a", 4) in clauses and ("a", 6) in clauses
    assert ("b", 1) in clauses and ("b", 3) in clauses
    assert ("d", 4) in clauses and ("d", 6) in clauses
    assert all(("f", m) in clauses for m in range(1, 7))
    assert all(("c1", m) in clauses and ("c2", m) in clauses and ("e", m) in clauses for m in range(1, 7))


def test_infinite_certificate_with_small_cap():
    cert = infinite_image_certificate(cap=2000)
    assert cert.annihilation_ok
    assert cert.st_projective_exceeded
    assert cert.st_found == 2001
    assert cert.st2_linear_order == 32
    assert cert.ok


def test_run_all_config_parser():
    cfg = RunAllConfig.from_text(
        """
        # comment
        m_max = 2
        lemma_levels = 2, 4, 6
        output_dir = out
        format = json
        infinite_cap = 1500
        """
    )
    assert cfg.m_max == 2
    assert cfg.lemma_levels == (2, 4, 6)
    assert cfg.output_dir == "out"
    assert cfg.format == "json"
    assert cfg.infinite_cap == 1500
    with pytest.raises(ValueError):
        RunAllConfig.from_text("bogus_key = 3")
    with pytest.raises(ValueError):
        RunAllConfig.from_text("no equals sign here")


def test_run_all_smoke(tmp_path):
    cfg = RunAllConfig(
        m_max=1,
        infinite_cap=1500,
        axiom_m_max=1,
        spin_m_max=1,
        lemma_levels=(2, 4),
        output_dir=str(tmp_path / "reports"),
        format="json",
    )
    result = run_all(cfg)
    assert result.exit_code == 0
    assert result.summary["ok"]
    names = {os.path.basename(p) for p in result.artifacts}
    assert names == {"table1.json", "conjectures.json", "lemma_checks.json", "infinite_certificate.json", "summary.json"}
    for path in result.artifacts:
        assert os.path.exists(path)
    with open(os.path.join(cfg.output_dir, "summary.json")) as fh:
        summary = json.load(fh)
    assert summary["axioms"]["1"] is True or summary["axioms"][1] is True


def test_run_all_bad_output_dir(tmp_path):
    blocker = tmp_path / "not_a_dir"
    blocker.write_text("occupied")
    cfg = RunAllConfig(
        m_max=1,
        infinite_cap=1500,
        axiom_m_max=1,
        spin_m_max=1,
        lemma_levels=(2,),
        output_dir=str(blocker),
    )
    with pytest.raises(OSError):
        run_all(cfg)
