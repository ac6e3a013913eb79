import json

from tarl.cli import main
from tarl.registry import data_dir


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", "(p o q) & r")
    assert code == 0
    assert out.splitlines()[0] == "p o q & r"


def test_parse_json(capsys):
    code, out, _ = run(capsys, "parse", "p -> p", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["formula"] == "p -> p"
    assert payload["ast"]["op"] == "->"


def test_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "parse", "p ->")
    assert code == 2
    assert "error" in err


def test_check_valid_script(capsys):
    path = data_dir() / "corpus" / "t6.prf"
    code, out, _ = run(capsys, "check", str(path))
    assert code == 0
    assert out.strip() == "t6: valid, objects {0}"


def test_check_invalid_script(tmp_path, capsys):
    bad = tmp_path / "bad.prf"
    bad.write_text("lemma bad\n1. (p)[0,1] => (p)[1,0] ; axiom\n")
    code, out, _ = run(capsys, "check", str(bad))
    assert code == 1
    assert "INVALID" in out


def test_corpus(capsys):
    code, out, _ = run(capsys, "corpus")
    assert code == 0
    assert out.strip() == "38/38 valid; objects columns match"


def test_corpus_filter(capsys):
    code, out, _ = run(capsys, "corpus", "--filter", "reflection")
    assert code == 0
    assert "1/1 valid" in out


def test_prove_success_prints_script(capsys):
    code, out, _ = run(capsys, "prove", "a & b -> a")
    assert code == 0
    assert out.startswith("lemma found")
    assert "impR" in out


def test_prove_failure(capsys):
    code, out, _ = run(capsys, "prove", "ming", "--depth", "10")
    assert code == 1
    assert "not_found" in out or "budget_exhausted" in out


def test_valid_pass(capsys):
    code, out, _ = run(capsys, "valid", "K3", "contr")
    assert code == 0
    assert "valid" in out


def test_valid_refuted_with_witness(capsys):
    code, out, _ = run(capsys, "valid", "K5", "contra")
    assert code == 1
    assert out.strip() == "invalid; witness p->{a} q->{b}"


def test_countermodel_singletons(capsys):
    code, out, _ = run(capsys, "countermodel", "K5", "mp", "--singletons")
    assert code == 1
    assert "p->{a} q->{a}" in out
    assert "p->{b} q->{a}" in out


def test_countermodel_none(capsys):
    code, out, _ = run(capsys, "countermodel", "K4", "p -> p")
    assert code == 0
    assert "no countermodel" in out


def test_postulates(capsys):
    code, out, _ = run(capsys, "postulates", "K1")
    assert code == 0
    assert "peirce   FAIL" in out
    code, out, _ = run(capsys, "postulates", "K3")
    assert code == 0


def test_postulates_json(capsys):
    code, out, _ = run(capsys, "postulates", "K2", "--json")
    payload = json.loads(out)
    assert payload["flags"]["comm"] is True
    assert payload["peirce_missing"] == [["b*", "b*", "b"]]


def test_translate(capsys):
    code, out, _ = run(capsys, "translate", "p -> q")
    assert code == 0
    assert out.strip() == "-(p^;-q)"


def test_algebra_test_named_law(capsys):
    code, out, _ = run(capsys, "algebra-test", "ra7", "--base", "4",
                       "--trials", "200", "--seed", "1")
    assert code == 0
    assert "Pass" in out


def test_algebra_test_unknown_name(capsys):
    code, _, err = run(capsys, "algebra-test", "zzz")
    assert code == 2
    assert "unknown identity" in err


def test_chain(capsys):
    chain = data_dir() / "chains" / "ra4.chain"
    code, out, _ = run(capsys, "chain", "K3", str(chain))
    assert code == 0
    assert "end-to-end" in out


def test_grouprep(capsys):
    code, out, _ = run(capsys, "grouprep", "--partition", "2")
    assert code == 0
    assert "table equals K3: True" in out


def test_sharing_shared(capsys):
    code, out, _ = run(capsys, "sharing", "p & q", "p")
    assert code == 0
    assert "shared variables: p" in out


def test_sharing_disjoint(capsys):
    code, out, _ = run(capsys, "sharing", "p", "q")
    assert code == 1
    assert "K4 refutes" in out


def test_model_file_resolution(tmp_path, capsys):
    src = (data_dir() / "models" / "K4.model").read_text()
    path = tmp_path / "mine.model"
    path.write_text(src)
    code, out, _ = run(capsys, "postulates", str(path))
    assert code == 0


def test_unknown_model(capsys):
    code, _, err = run(capsys, "valid", "K9", "contra")
    assert code == 2
    assert "unknown model" in err


def test_data_dir_override(tmp_path, monkeypatch, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "t6.prf").write_text((data_dir() / "corpus" / "t6.prf").read_text())
    monkeypatch.setenv("TARL_DATA", str(tmp_path))
    import tarl.registry as registry
    registry._CORPUS_CACHE.clear()
    try:
        code, out, _ = run(capsys, "corpus", "--filter", "t6")
        assert code == 0
    finally:
        registry._CORPUS_CACHE.clear()
