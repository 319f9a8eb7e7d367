"""End-to-end tests for the command-line interface."""

import dataclasses
import io
import json
from contextlib import redirect_stdout

import pytest

from cohomotopy import cli
from cohomotopy.complexes import load_complex, save_complex
from cohomotopy.factory import (
    antipodal_quotient,
    circle,
    fixture_path,
    product,
    sphere,
)
from cohomotopy.pipeline import CheckResult, compute_F1


def _capture(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = cli.main(argv)
    return rc, buf.getvalue()


@pytest.fixture(scope="module")
def s4_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "s4.facets"
    save_complex(sphere(4), path)
    return str(path)


def run(argv):
    return cli.main(argv)


# ------------------------------------------------------------
# generate
# ------------------------------------------------------------

def test_generate_writes_loadable_file(tmp_path, capsys):
    out = tmp_path / "rp4.facets"
    assert run(["generate", "rp", "4", "-o", str(out)]) == 0
    K = load_complex(out)
    assert K.facets == antipodal_quotient(4).facets
    assert "1920 facets" in capsys.readouterr().out


def test_generate_nested_expression(tmp_path):
    out = tmp_path / "t.facets"
    assert run(["generate", "product(sphere:3, circle:3)",
                "-o", str(out)]) == 0
    assert load_complex(out).dim == 4


def test_generate_unknown_family_is_usage_error(tmp_path, capsys):
    rc = run(["generate", "klein", "4", "-o", str(tmp_path / "x")])
    assert rc == 3
    assert "klein" in capsys.readouterr().err


def test_generate_missing_output_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["generate", "sphere", "4"])
    assert exc.value.code == 3


# ------------------------------------------------------------
# verify
# ------------------------------------------------------------

def test_verify_accepts_closed_4_manifold(s4_file, capsys):
    assert run(["verify", s4_file]) == 0
    assert "verdict: ok" in capsys.readouterr().out


def test_verify_rejects_punctured_sphere(tmp_path, capsys):
    K = sphere(4)
    punctured = type(K)(K.facets[1:])
    path = tmp_path / "open.facets"
    save_complex(punctured, path)
    assert run(["verify", str(path)]) == 1
    assert "verdict: not analyzable" in capsys.readouterr().out


def test_verify_rejects_low_dimension(tmp_path, capsys):
    path = tmp_path / "s2.facets"
    save_complex(sphere(2), path)
    assert run(["verify", str(path)]) == 1
    out = capsys.readouterr().out
    assert "minimum 4" in out


def test_verify_missing_file(capsys):
    assert run(["verify", "/no/such/file.facets"]) == 1


# ------------------------------------------------------------
# analyze: document shape
# ------------------------------------------------------------

@pytest.fixture(scope="module")
def s4_doc(s4_file):
    rc, text = _capture(["analyze", s4_file, "--no-timing"])
    assert rc == 0
    return json.loads(text)


def test_analyze_schema_and_tool_block(s4_doc):
    assert s4_doc["schema"] == 1
    assert s4_doc["tool"]["name"] == "cohomotopy"
    assert len(s4_doc["input"]["sha256"]) == 64
    assert s4_doc["input"]["f_vector"] == [6, 15, 20, 15, 6]


def test_analyze_reports_group_tables(s4_doc):
    assert [g["rendered"] for g in s4_doc["homology"]] == \
        ["Z", "0", "0", "0", "Z"]
    assert s4_doc["twisted_homology"][0]["degree"] == 0
    assert s4_doc["f1"] == {
        "free_rank": 0, "invariant_factors": [2], "rendered": "Z_2"}


def test_analyze_classification_block(s4_doc):
    cls = s4_doc["classification"]
    assert cls["type"] == "IIa"
    assert "pivot_rule" in cls["basis_relative"]
    assert "coboundary_1_cochain" in cls["basis_relative"]["witness"]


def test_analyze_characteristic_classes_are_basis_relative(s4_doc):
    cc = s4_doc["characteristic_classes"]["basis_relative"]
    assert cc["w1"] == [] and cc["w2"] == []
    assert cc["pivot_rule"] == cli.PIVOT_RULE
    assert s4_doc["characteristic_classes"]["obstruction_is_zero"]


def test_analyze_crosschecks_pass(s4_doc):
    assert s4_doc["all_checks_pass"]
    assert all(c["passed"] for c in s4_doc["crosschecks"])
    names = {c["name"] for c in s4_doc["crosschecks"]}
    assert "type_vs_steenrod_cokernel" in names
    assert "cardinality_law" in names


def test_analyze_no_timing_omits_block(s4_doc):
    assert "timings" not in s4_doc


def test_analyze_timing_present_by_default(s4_file, capsys):
    assert run(["analyze", s4_file]) == 0
    doc = json.loads(capsys.readouterr().out)
    stages = {t["stage"] for t in doc["timings"]}
    assert "classify" in stages and "crosschecks" in stages


def test_analyze_text_mode(s4_file, capsys):
    assert run(["analyze", s4_file, "--text", "--no-timing"]) == 0
    out = capsys.readouterr().out
    assert "F1 = Z_2" in out
    assert "classification: type IIa" in out
    assert "[pass]" in out


def test_analyze_skip_crosscheck_marks_skipped(s4_file, capsys):
    assert run(["analyze", s4_file, "--no-timing",
                "--skip-crosscheck"]) == 0
    doc = json.loads(capsys.readouterr().out)
    skipped = [c for c in doc["crosschecks"] if c["passed"] is None]
    assert any(c["name"] == "steenrod_cokernel" for c in skipped)


def test_analyze_epsilon_block_on_torsion_input(tmp_path, capsys):
    # S1 x RP3: type IIa with twisted H1 = Z + Z_2, so the extension
    # functional table is present with a vanishing value
    path = tmp_path / "s1rp3.facets"
    save_complex(product(circle(3), antipodal_quotient(3)), path)
    assert run(["analyze", str(path), "--no-timing"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["classification"]["type"] == "IIa"
    eps = doc["epsilon"]["basis_relative"]
    assert eps["torsion_orders"] == [2]
    assert eps["values"] == [0]
    assert len(eps["preimage_cycles"][0]) > 0
    assert doc["f1"]["rendered"] == "Z ⊕ Z_2 ⊕ Z_2"


# ------------------------------------------------------------
# analyze: exit codes and gates
# ------------------------------------------------------------

def test_analyze_missing_file_exits_1(capsys):
    assert run(["analyze", "/no/such/file.facets"]) == 1


def test_analyze_open_complex_exits_1(tmp_path, capsys):
    K = sphere(4)
    path = tmp_path / "open.facets"
    save_complex(type(K)(K.facets[:-1]), path)
    assert run(["analyze", str(path)]) == 1
    assert "validation" in capsys.readouterr().err


def test_analyze_low_dimension_exits_1(tmp_path, capsys):
    path = tmp_path / "s3.facets"
    save_complex(sphere(3), path)
    assert run(["analyze", str(path)]) == 1
    assert "dimension" in capsys.readouterr().err


def test_analyze_bad_threads_is_usage_error(s4_file, capsys):
    assert run(["analyze", s4_file, "--threads", "0"]) == 3


def test_analyze_slow_gate_refuses_with_estimate(s4_file, capsys,
                                                 monkeypatch):
    monkeypatch.setattr(cli, "SLOW_FACET_LIMIT", 2)
    rc = run(["analyze", s4_file])
    assert rc == 3
    err = capsys.readouterr().err
    assert "--allow-slow" in err
    assert "roughly" in err


def test_analyze_slow_gate_simplex_threshold(s4_file, capsys,
                                             monkeypatch):
    monkeypatch.setattr(cli, "SLOW_SIMPLEX_LIMIT", 10)
    assert run(["analyze", s4_file]) == 3
    monkeypatch.setattr(cli, "SLOW_SIMPLEX_LIMIT", 10**6)
    assert run(["analyze", s4_file, "--no-timing", "--allow-slow"]) == 0
    capsys.readouterr()


def test_analyze_allow_slow_overrides_gate(s4_file, capsys, monkeypatch):
    monkeypatch.setattr(cli, "SLOW_FACET_LIMIT", 2)
    assert run(["analyze", s4_file, "--no-timing", "--allow-slow"]) == 0
    capsys.readouterr()


def test_failed_crosscheck_exits_2(s4_file, capsys, monkeypatch):
    real = compute_F1

    def doctored(K, **kw):
        report = real(K, **kw)
        broken = tuple(
            CheckResult(c.name, False, "forced failure") for
            c in report.crosschecks)
        return dataclasses.replace(report, crosschecks=broken)

    monkeypatch.setattr(cli, "compute_F1", doctored)
    assert run(["analyze", s4_file, "--no-timing"]) == 2
    doc = json.loads(capsys.readouterr().out)
    assert not doc["all_checks_pass"]


def test_usage_error_exit_code_is_3(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 3


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["--version"])
    assert exc.value.code == 0
    assert "cohomotopy" in capsys.readouterr().out


# ------------------------------------------------------------
# determinism across --threads
# ------------------------------------------------------------

def test_reports_byte_identical_across_threads():
    path = str(fixture_path("rp4"))
    outputs = []
    for n in ("1", "2", "5"):
        rc, text = _capture(["analyze", path, "--no-timing",
                             "--threads", n])
        assert rc == 0
        outputs.append(text)
    assert outputs[0] == outputs[1] == outputs[2]
    doc = json.loads(outputs[0])
    assert doc["classification"]["type"] == "I"
    assert doc["f1"]["rendered"] == "0"
