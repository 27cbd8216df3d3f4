import json
import math
import os
from fractions import Fraction

import numpy as np
import pytest

import tropjac

DATA = os.environ.get("TROPJAC_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def load(name):
    with open(os.path.join(DATA, name)) as f:
        return json.load(f)


def theta(a, b, c):
    return {"vertices": 2, "edges": [{"id": i, "src": 0, "dst": 1, "length": str(x)} for i, x in enumerate((a, b, c))]}


MARKING = {"basis": [[1, -1, 0], [0, -1, 1]]}


def test_validate_and_genus():
    g = load("theta.json")
    assert tropjac.validate(g)["is_outer_space_point"]
    assert tropjac.genus(g) == 2


def test_theta_period_exact():
    a, b = Fraction(2, 7), Fraction(3, 11)
    m = tropjac.period_matrix(theta(a, b, 1 - a - b), MARKING, exact=True)
    assert [[Fraction(x) for x in row] for row in m] == [[a + b, b], [b, 1 - a]]


def test_period_matrix_float():
    p = tropjac.period_matrix(load("theta.json"), load("theta_marking.json"))
    np.testing.assert_allclose(p, [[0.8, 0.3], [0.3, 0.5]], atol=1e-15)
    assert np.all(np.linalg.eigvalsh(p) > 0)


def test_affine_invariant_distance():
    assert tropjac.d_inv(np.eye(2), [[2 / 3, 1 / 3], [1 / 3, 2 / 3]]) == pytest.approx(math.log(3), abs=1e-12)


def test_shortest_vector_and_glnz():
    q = np.array([[2 / 3, 1 / 3], [1 / 3, 2 / 3]])
    value, v = tropjac.shortest_vector(q)
    assert value == pytest.approx(2 / 3)
    assert v @ q @ v == pytest.approx(2 / 3)
    u = tropjac.glnz_equivalent(q, q)
    assert u is not None and abs(round(np.linalg.det(u))) == 1


def test_torelli_pair():
    a, b = load("looped_banana_a.json"), load("looped_banana_b.json")
    assert tropjac.torelli_equal(a, b)
    assert tropjac.cyclically_equivalent(a, b) is None
    assert tropjac.c1_sets(a) == [[0], [1], [2, 3]]
    q = tropjac.connectivize(a)["quotient"]
    assert sorted(Fraction(e["length"]) for e in q["edges"]) == [Fraction(3, 10), Fraction(7, 20), Fraction(7, 20)]


def test_principality():
    g = load("k4.json")
    m = tropjac.cycle_basis(g)
    assert tropjac.principality_check(g, m)
    m["basis"][0] = [2 * c for c in m["basis"][0]]
    assert not tropjac.principality_check(g, m)


def test_distances_on_theta_pair():
    p, q = load("theta_center.json"), load("theta_point.json")
    lo, hi = tropjac.distance_interval(p, q, "d1")
    d0 = math.sqrt((1 / 6) ** 2 + (1 / 30) ** 2 + (2 / 15) ** 2)
    assert lo <= hi
    assert hi - lo == pytest.approx(d0, abs=1e-9)
    assert tropjac.distance_interval(q, p, "d1")[1] == pytest.approx(hi, abs=1e-12)


def test_tensor_is_positive_definite():
    t = tropjac.tensor(load("theta_point.json"), "ds2")
    assert np.all(np.linalg.eigvalsh(t) > 0)
    flat = tropjac.tensor(load("theta_point.json"), "ds0")
    np.testing.assert_allclose(flat, [[2, 1], [1, 2]])


def test_path_length_grows_toward_missing_face():
    path = load("theta_path.json")
    short = tropjac.path_length(path)
    path["legs"][0]["nodes"][1] = ["0.0001", "0.0001", "0.9998"]
    long = tropjac.path_length(path)
    assert short["converged"] and long["converged"]
    assert long["value"] > short["value"]


def test_theta_area_converges():
    r = tropjac.simplex_area(tol=1e-2)
    assert r["converged"]
    assert 8.0 < r["value"] < 9.0


def test_tropical_plane():
    line = load("line.json")
    assert Fraction(tropjac.tropical_eval(line, "1/2", -3)) == Fraction(1, 2)
    locus = tropjac.corner_locus(line)
    assert len(locus["vertices"]) == 1 and locus["vertices"][0]["balanced"]


def test_cli_roundtrip(tmp_path):
    code, out, err = tropjac.run_cli(["validate", os.path.join(DATA, "theta.json")])
    assert code == 0 and json.loads(out)["is_outer_space_point"]
    bad = tmp_path / "bad.json"
    bad.write_text("{\"vertices\": ")
    code, out, err = tropjac.run_cli(["validate", str(bad)])
    assert code == 2 and "malformed JSON" in err


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        tropjac.genus({"vertices": 0, "edges": []})
