import io as stdio
import json
import subprocess
import sys

import numpy as np
import pytest

from ghmmcanon import io, zoo
from ghmmcanon.cli import run
from ghmmcanon.ghmm import GHMM


def call(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def payload(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize("word", ["ε", "--empty"])
def test_prob_of_empty_word(word):
    assert payload("prob", "zoo:tight_hmm", word)["probability"] == pytest.approx(1.0)


def test_prob_word():
    assert payload("prob", "zoo:loose_hmm", "00")["probability"] == pytest.approx(0.1)


def test_cond():
    assert payload("cond", "zoo:loose_hmm", "0", "1")["probability"] == pytest.approx(0.5)


def test_bound_loose():
    assert payload("bound", "zoo:loose_hmm") == {"ell_min": 4, "d_min_lower": 2}


def test_bound_entropy():
    assert payload("bound", "zoo:loose_hmm", "--entropy")["entropy"]["dimension_floor"] == 4


@pytest.mark.parametrize("method", ["thm1", "length", "canonical"])
def test_equiv_equal(method):
    code, out, _ = call("equiv", "zoo:tight_hmm", "zoo:tight_qhmm", "--method", method)
    assert code == 0
    assert json.loads(out)["verdict"] == "equal"


def test_equiv_not_equal_exit_code(tmp_path):
    path = tmp_path / "loose.json"
    io.save(zoo.loose_example_hmm(0.4), path)
    code, out, _ = call("equiv", "zoo:loose_hmm", str(path))
    assert code == 3
    assert json.loads(out)["witness"] is not None


def test_equiv_resource_cap():
    code, _, err = call("equiv", "zoo:tight_hmm", "zoo:tight_qhmm", "--method", "length", "--cap", "100")
    assert code == 5 and "cap" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("prob", "zoo:loose_hmm", "2"),
        ("prob", "zoo:nope", "0"),
        ("prob", "missing.json", "0"),
        ("steady", "zoo:loose_hmm", "--tol", "-1"),
        ("convert", "zoo:loose_hmm"),
    ],
)
def test_input_errors(argv):
    code, _, err = call(*argv)
    assert code == 2
    assert err.startswith("error:")


def test_degenerate_steady_state_is_numerical(tmp_path):
    path = tmp_path / "m.json"
    io.save(GHMM("a", [0.5, 0.5], {"a": np.eye(2)}), path)
    assert call("steady", str(path))[0] == 4


def test_validate():
    out = payload("validate", "zoo:loose_hmm")
    assert out["ok"] and out["max_len"] == 19
    assert out["flags"]["is_unifilar"]
    assert "qhmm" in payload("validate", "zoo:tight_qhmm", "--max-len", "4")


def test_sample_is_reproducible():
    first = call("sample", "zoo:tight_qhmm", "-n", "40", "-s", "3")
    assert first == call("sample", "zoo:tight_qhmm", "-n", "40", "-s", "3")
    assert len(json.loads(first[1])["word"]) == 40


def test_convert_and_canonical_roundtrip(tmp_path):
    path = tmp_path / "g.json"
    payload("convert", "zoo:tight_qhmm", "--method", "liouville", "-o", str(path))
    g = io.load(path)
    assert g.is_complex and g.dim == 4
    code, out, _ = call("canonical", str(path))
    assert code == 0
    assert json.loads(out)["kind"] == "standard_ghmm"
    code, _, _ = call("equiv", str(path), "zoo:tight_hmm")
    assert code == 0


def test_wordlist():
    out = payload("wordlist", "zoo:tight_hmm")
    assert out["ell_min"] == 4
    assert out["minimal_future"] == [[], ["0"], ["1"], ["2"]]


def test_zoo_list_and_export(tmp_path):
    assert "tight_qhmm" in payload("zoo", "list")
    path = tmp_path / "z.json"
    payload("zoo", "export", "tight_qhmm", "-o", str(path))
    assert io.load(path).dim == 2


def test_table_format():
    code, out, _ = call("bound", "zoo:loose_hmm", "--format", "table")
    assert code == 0 and out.splitlines() == ["ell_min\t4", "d_min_lower\t2"]


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tol": 1e-12}))
    assert call("equiv", "zoo:iid_bit", "zoo:iid_bit", "--config", str(cfg))[0] == 0
    cfg.write_text(json.dumps({"bogus": 1}))
    assert call("steady", "zoo:iid_bit", "--config", str(cfg))[0] == 2
    monkeypatch.setenv("GHMM_CANON_TOL", "0")
    assert call("steady", "zoo:iid_bit")[0] == 2
    monkeypatch.setenv("GHMM_CANON_TOL", "1e-6")
    assert call("steady", "zoo:iid_bit")[0] == 0


def test_sep_for_multicharacter_alphabet(tmp_path):
    path = tmp_path / "m.json"
    io.save(zoo.iid_model([0.25, 0.75], ["lo", "hi"]), path)
    assert payload("prob", str(path), "hi,lo", "--sep", ",")["probability"] == pytest.approx(0.1875)


def test_module_entry_point():
    argv = [sys.executable, "-m", "ghmmcanon", "equiv", "zoo:tight_hmm", "zoo:tight_qhmm"]
    done = subprocess.run(argv, capture_output=True, text=True, check=False)
    assert done.returncode == 0
    assert json.loads(done.stdout)["verdict"] == "equal"
