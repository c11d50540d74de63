import json

import pytest

from oflpred.cli import main


def _run(tmp_path, name, *args):
    out = tmp_path / name
    assert main([*args, "--out", str(out)]) == 0
    return out.read_bytes()


SUBCOMMANDS = {
    "sweep": ["sweep", "--synthetic", "clusters", "--n", "60", "--clusters", "2",
              "--eta", "0.5", "--eta", "5", "--reps", "2", "--seed", "3"],
    "predictor-eval": ["predictor-eval", "--synthetic", "sites", "--n", "120", "--clusters", "2",
                       "--cost-model", "log-uniform", "--reps", "2", "--seed", "1"],
    "hst": ["hst", "--m", "2", "--h", "3", "--eta", "0.5", "--reps", "2", "--seed", "4"],
    "solve-offline": ["solve-offline", "--synthetic", "clusters", "--n", "12", "--clusters", "2",
                      "--method", "brute"],
}


@pytest.mark.parametrize("cmd", sorted(SUBCOMMANDS))
def test_byte_identical_reruns(tmp_path, cmd):
    a = _run(tmp_path, "a", *SUBCOMMANDS[cmd])
    b = _run(tmp_path, "b", *SUBCOMMANDS[cmd])
    assert a and a == b


def test_file_inputs(tmp_path):
    pts = tmp_path / "p.csv"
    fac = tmp_path / "f.csv"
    pts.write_text("0,0\n1,0\n10,0\n11,0\n")
    fac.write_text("0,0,1\n10,0,1\n")
    doc = json.loads(_run(tmp_path, "o.json", "solve-offline", "--points", str(pts),
                          "--facilities", str(fac)))
    assert doc["open"] == [0, 1] and doc["cost"] == 4.0
    preds = tmp_path / "pred.txt"
    preds.write_text("0\n0\n1\n1\n")
    text = _run(tmp_path, "s.csv", "sweep", "--points", str(pts), "--facilities", str(fac),
                "--predictions", str(preds), "--reps", "1", "--algos", "follow").decode()
    lines = text.splitlines()
    assert len(lines) == 3 and lines[1].split(",")[2] == "file"


def test_hst_save_dir(tmp_path):
    _run(tmp_path, "h.csv", "hst", "--hst-n", "100", "--eta", "0.5", "--reps", "1",
         "--save-dir", str(tmp_path / "tree"))
    assert sorted(p.name for p in (tmp_path / "tree").iterdir()) == [
        "demands.csv", "edges.txt", "facilities.csv", "predictions.txt"]


def test_errors_exit_nonzero(tmp_path, capsys):
    assert main(["sweep", "--reps", "0"]) == 2
    assert "reps must be" in capsys.readouterr().err
    assert main(["sweep", "--points", str(tmp_path / "missing.csv"), "--facilities", "x"]) == 2
    assert main(["sweep", "--algos", "pam,greedy"]) == 2
