import numpy as np
import pytest

from oflpred.errors import ParseError, ValidationError
from oflpred.instance import (ErrorReport, PredictionStream, compute_errors, load_euclidean,
                              load_graph, load_predictions, save_euclidean, save_graph,
                              save_predictions)
from oflpred.offline import evaluate

from helpers import line_instance


def _write(path, text):
    path.write_text(text)
    return path


def test_load_euclidean(tmp_path):
    pts = _write(tmp_path / "p.csv", "0,0\n1,0\n0,2\n")
    fac = _write(tmp_path / "f.csv", "0,0,3\n5,5,6\n")
    inst = load_euclidean(pts, fac)
    assert inst.n == 3 and len(inst.universe) == 2
    assert inst.universe.L == 2
    assert inst.dist_matrix[2, 0] == 2.0


def test_load_euclidean_default_cost(tmp_path):
    pts = _write(tmp_path / "p.csv", "0,0\n1,1\n")
    fac = _write(tmp_path / "f.csv", "0,0\n2,2\n")
    inst = load_euclidean(pts, fac)
    assert list(inst.universe.raw_cost) == [1.0, 1.0]


def test_load_euclidean_errors(tmp_path):
    fac = _write(tmp_path / "f.csv", "0,0\n")
    with pytest.raises(ValidationError):
        load_euclidean(_write(tmp_path / "empty.csv", ""), fac)
    with pytest.raises(ParseError) as e:
        load_euclidean(_write(tmp_path / "bad.csv", "0,0\n1,x\n"), fac)
    assert e.value.line == 2
    with pytest.raises(ValidationError):
        load_euclidean(_write(tmp_path / "p.csv", "0,0\n"), _write(tmp_path / "f3.csv", "0,0,1,9\n"))


def test_load_graph(tmp_path):
    edges = _write(tmp_path / "e.txt", "0 1 1\n1 2 1\n0 2 1.5\n")
    dem = _write(tmp_path / "d.csv", "0\n2\n")
    fac = _write(tmp_path / "f.csv", "1,2\n")
    inst = load_graph(edges, dem, fac)
    assert inst.n == 2 and len(inst.universe) == 1
    assert list(inst.dist_matrix[:, 0]) == [1.0, 1.0]


def test_load_graph_errors(tmp_path):
    dem = _write(tmp_path / "d.csv", "0\n")
    fac = _write(tmp_path / "f.csv", "1\n")
    with pytest.raises(ValidationError, match="disconnected"):
        load_graph(_write(tmp_path / "e1.txt", "0 1 1\n2 3 1\n"), dem, fac)
    with pytest.raises(ValidationError, match="conflicting"):
        load_graph(_write(tmp_path / "e2.txt", "0 1 1\n1 0 2\n"), dem, fac)
    with pytest.raises(ParseError):
        load_graph(_write(tmp_path / "e3.txt", "0 1\n"), dem, fac)


def test_roundtrip_euclidean(tmp_path):
    rng = np.random.default_rng(3)
    inst = line_instance(rng.normal(size=6), rng.normal(size=3), rng.uniform(1, 9, 3))
    save_euclidean(inst, tmp_path / "p.csv", tmp_path / "f.csv")
    back = load_euclidean(tmp_path / "p.csv", tmp_path / "f.csv")
    assert np.array_equal(back.dist_matrix, inst.dist_matrix)
    assert np.array_equal(back.universe.raw_cost, inst.universe.raw_cost)


def test_roundtrip_graph_and_predictions(tmp_path):
    edges = _write(tmp_path / "e.txt", "0 1 0.1\n1 2 0.7\n")
    inst = load_graph(edges, _write(tmp_path / "d.csv", "0\n2\n2\n"), _write(tmp_path / "f.csv", "0,1\n2,3\n"))
    save_graph(inst, tmp_path / "e2.txt", tmp_path / "d2.csv", tmp_path / "f2.csv")
    back = load_graph(tmp_path / "e2.txt", tmp_path / "d2.csv", tmp_path / "f2.csv")
    assert np.array_equal(back.dist_matrix, inst.dist_matrix)
    preds = PredictionStream([1, 0, 1])
    save_predictions(tmp_path / "p.txt", preds)
    assert list(load_predictions(tmp_path / "p.txt", back).pred) == [1, 0, 1]


def test_prediction_validation(tmp_path):
    inst = line_instance([0, 1], [0])
    with pytest.raises(ValidationError):
        PredictionStream([0]).validate(inst)
    with pytest.raises(ValidationError):
        PredictionStream([0, 1]).validate(inst)
    with pytest.raises(ParseError):
        load_predictions(_write(tmp_path / "p.txt", "0\nfoo\n"))


def test_error_aggregates():
    rep = ErrorReport(np.array([3.0, 1.0, 2.0]))
    assert rep.eta_inf == 3.0
    assert rep.eta_1 == 6.0
    assert rep.eta_t_inf(2) == 2.0
    assert rep.eta_t_1(2) == 3.0
    single = ErrorReport(np.array([0.5]))
    assert single.eta_inf == single.eta_1 == 0.5


def test_compute_errors():
    # facilities at 0, 1, 4; offline opens 0 and 4
    inst = line_instance([0, 0.5, 4], [0, 1, 4])
    off = evaluate(inst, [0, 2])
    assert list(off.opt_of) == [0, 0, 2]
    perfect = compute_errors(inst, PredictionStream(off.opt_of), off)
    assert perfect.eta_inf == perfect.eta_1 == 0.0
    rep = compute_errors(inst, PredictionStream([1, 2, 1]), off)
    assert list(rep.per_demand_error) == [1.0, 4.0, 3.0]
