from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from isolab.cli import run

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(autouse=True)
def _at_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def test_compare_on_delta_z2():
    code, out = call("isotropy", "compare", "--bounds", "2,5", "smc", "fixtures/delta_z2.model")
    assert code == 0
    assert "isomorphic: Z2" in out


def test_nf_reduce_a_word():
    code, out = call("nf", "reduce", "monoid", "fixtures/z2.model", "x 1 x 1 1 x")
    assert code == 0
    assert out.strip().endswith("~>  0 x 1 x 0 x 0")


def test_nf_reduce_strategies_agree():
    outs = {call("nf", "reduce", "--strategy", s, "monoid", "fixtures/z2.model", "mul(x, mul(@1, x))")[1] for s in ("innermost", "outermost", "direct")}
    assert len(outs) == 1


def test_model_check_reports_failed_axiom_with_witness():
    code, out = call("model", "check", "strmoncat", "fixtures/broken.model")
    assert code == 1
    assert "failed axiom tensor_unit" in out
    assert "witness" in out


def test_model_check_passes_on_a_good_model():
    code, out = call("model", "check", "strmoncat", "fixtures/delta_z2.model")
    assert code == 0


def test_json_output_is_byte_deterministic():
    argv = ("isotropy", "compute", "--format", "json", "monoid", "fixtures/z2.model")
    first, second = call(*argv)[1], call(*argv)[1]
    assert first == second
    doc = json.loads(first)
    assert doc["schema"] == "isolab.run/1"
    assert doc["exit_code"] == 0
    assert doc["results"]["group"]["order"] == 2
    assert list(doc["inputs"]) == ["fixtures/z2.model"]


def test_closed_method():
    code, out = call("isotropy", "compute", "--method", "closed", "presheaf", "fixtures/bz3_regular.model")
    assert code == 0 and "Z3" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("isotropy", "compute", "--bounds", "0,3", "monoid", "fixtures/z2.model"),
        ("isotropy", "compute", "--bounds", "two", "monoid", "fixtures/z2.model"),
        ("isotropy", "compute", "ssmc", "fixtures/ssmc_delta_z2.model"),
        ("frobnicate",),
    ],
)
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_tight_bounds_exit_1():
    code, out = call("isotropy", "compute", "--bounds", "1,1", "monoid", "fixtures/z2.model")
    assert code == 1


def test_encode_then_check(tmp_path):
    target = tmp_path / "z2.model"
    code, _ = call("model", "encode", "monoid", "fixtures/data/z2_monoid.json", "-o", str(target))
    assert code == 0
    assert call("model", "check", "monoid", str(target))[0] == 0


def test_encode_rejects_a_partial_table():
    code, out = call("model", "encode", "monoid", "fixtures/data/bad_monoid.json")
    assert code == 1


def test_theory_emit_round_trips(tmp_path):
    code, text = call("theory", "emit", "strmoncat")
    assert code == 0
    path = tmp_path / "smc.theory"
    path.write_text(text)
    code, out = call("theory", "check", str(path))
    assert code == 0


def test_theory_check_reports_position(tmp_path):
    path = tmp_path / "bad.theory"
    path.write_text("theory t\nsort S;\nop f : S -> ;\n")
    code, out = call("theory", "check", str(path))
    assert code == 1
    assert "3" in out


def test_presheaf_theory_needs_index():
    assert call("theory", "emit", "presheaf")[0] == 2
    code, text = call("theory", "emit", "presheaf", "--index", "BZ2")
    assert code == 0 and text.count("axiom") == 7


def test_suite_run_single_criterion():
    code, out = call("suite", "run", "--only", "7")
    assert code == 0
    assert out.startswith("[PASS] criterion 7")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "isolab.cli", "--help"], capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 0
    assert "isotropy" in proc.stdout
