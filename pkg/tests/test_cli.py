import json

import numpy as np
import pytest

from mobius_rigidity import fixtures
from mobius_rigidity.cli import main
from mobius_rigidity.configio import load_config, load_map, save_map
from mobius_rigidity.inversive import HalfSpace, ball_error
from mobius_rigidity.minkowski import LorentzMap


def fx(name):
    return str(fixtures.path(name))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


# gram


def test_gram_square(capsys):
    code, out, _ = run(capsys, "--json", "gram", fx("example3_square"))
    assert code == 0
    G = np.array(json.loads(out)["matrix"])
    np.testing.assert_allclose(G, [[1, -1, 0, 0], [-1, 1, 0, 0], [0, 0, 1, -1], [0, 0, -1, 1]], atol=1e-15)


def test_gram_concentric(capsys):
    code, out, _ = run(capsys, "gram", fx("concentric"), "--json")
    assert code == 0
    assert json.loads(out)["matrix"][0][1] == pytest.approx(5 / 4)


def test_gram_points_text(capsys):
    code, out, _ = run(capsys, "gram", fx("triangle_points"))
    assert code == 0 and "chordal" in out


def test_gram_empty(tmp_path, capsys):
    p = write(tmp_path, "e.json", {"version": 1, "dim": 2, "kind": "balls", "items": []})
    code, _, err = run(capsys, "gram", p)
    assert code == 3 and "empty configuration" in err


def test_gram_parse_errors(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "gram", p)[0] == 2
    p = write(tmp_path, "nov.json", {"dim": 2, "kind": "balls", "items": []})
    assert run(capsys, "gram", p)[0] == 2
    p = write(tmp_path, "lab.json", {"version": 1, "dim": 2, "kind": "balls",
                                     "items": [{"label": "Bx", "type": "sphere", "center": [0], "radius": 1}]})
    code, _, err = run(capsys, "gram", p)
    assert code == 2 and "Bx" in err
    p = write(tmp_path, "rad.json", {"version": 1, "dim": 2, "kind": "balls",
                                     "items": [{"label": "Bneg", "type": "sphere", "center": [0, 0], "radius": -1}]})
    code, _, err = run(capsys, "gram", p)
    assert code == 3 and "Bneg" in err
    assert run(capsys, "gram", tmp_path / "missing.json")[0] == 2


def test_usage_error():
    with pytest.raises(SystemExit) as ei:
        main(["frobnicate"])
    assert ei.value.code == 2


# solve


def test_solve_square_rectangle(capsys):
    code, out, _ = run(capsys, "solve", "balls", fx("example3_square"), fx("example3_rectangle"), "--json")
    assert code == 4 and json.loads(out)["error"] == "CommonBoundaryPoint"


def test_solve_points_generated(tmp_path, capsys):
    assert run(capsys, "generate", "--kind", "points", "--n", "12", "--dim", "2", "--seed", "5", "--out", tmp_path)[0] == 0
    out_map = tmp_path / "sol.json"
    code, out, _ = run(capsys, "--json", "solve", "points", tmp_path / "A.json", tmp_path / "B.json", "-o", out_map)
    assert code == 0
    d = json.loads(out)
    assert d["mode"] == "Direct"
    code, out, _ = run(capsys, "--json", "verify", tmp_path / "A.json", tmp_path / "B.json", "--map", out_map)
    assert code == 0 and json.loads(out)["max_error"] <= 1e-7


def test_solve_json_is_a_map_file(tmp_path, capsys):
    run(capsys, "generate", "--kind", "balls", "--n", "6", "--dim", "2", "--seed", "1", "--out", tmp_path)
    code, out, _ = run(capsys, "--json", "solve", "balls", tmp_path / "A.json", tmp_path / "B.json")
    assert code == 0
    (tmp_path / "m.json").write_text(out)
    assert load_map(tmp_path / "m.json").positive


def test_solve_dim_mismatch(capsys):
    assert run(capsys, "solve", "balls", fx("generic4"), fx("triangle_points"))[0] == 2


def test_solve_kind_mismatch(capsys):
    assert run(capsys, "solve", "points", fx("generic4"), fx("generic4"))[0] == 2


def test_solve_gram_mismatch_text(capsys):
    code, out, _ = run(capsys, "solve", "balls", fx("example2_a"), fx("example2_b"))
    assert code == 4 and "GramMismatch" in out


def test_rank_ambiguous_exit(tmp_path, capsys):
    items = [{"label": "B1", "type": "halfspace", "normal": [1, 0], "offset": 0},
             {"label": "B2", "type": "halfspace", "normal": [np.cos(1e-8), np.sin(1e-8)], "offset": 0}]
    p = write(tmp_path, "amb.json", {"version": 1, "dim": 2, "kind": "balls", "items": items})
    code, out, _ = run(capsys, "--json", "classify", p)
    assert code == 4
    d = json.loads(out)
    assert d["error"] == "RankAmbiguous" and len(d["singular_values"]) >= 2


# classify


def test_classify_fixtures(capsys):
    code, out, _ = run(capsys, "--json", "classify", fx("coaxial"))
    d = json.loads(out)
    assert code == 0 and d["uniqueness"] == "StronglySymmetric"
    w = d["witness"]
    assert w["type"] == "sphere" and w["radius"] == pytest.approx(1)
    np.testing.assert_allclose(w["center"], [0, 0], atol=1e-12)
    d = json.loads(run(capsys, "--json", "classify", fx("example3_square"))[1])
    assert d["span"] == {"kind": "LightLike", "dim": 3} and d["common_boundary_point"]
    assert d["witness"] == {"type": "infinity"}
    d = json.loads(run(capsys, "--json", "classify", fx("generic4"))[1])
    assert d["uniqueness"] == "Unique"
    code, out, _ = run(capsys, "classify", fx("circle_points"))
    assert code == 0 and "PointsOnCommonSphere" in out


# apply


def test_apply_identity(tmp_path, capsys):
    m = tmp_path / "id.json"
    save_map(LorentzMap.identity(4), 2, m)
    code, out, _ = run(capsys, "apply", m, fx("generic4"))
    assert code == 0
    d, ref = json.loads(out), fixtures.load_dict("generic4")
    assert {k: d[k] for k in ("version", "dim", "kind")} == {k: ref[k] for k in ("version", "dim", "kind")}
    assert [(x["label"], x["type"]) for x in d["items"]] == [(x["label"], x["type"]) for x in ref["items"]]
    # equal up to the last bits of the float formatting
    a, b = load_config(d), fixtures.load("generic4")
    assert all(ball_error(x, y) <= 1e-14 for x, y in zip(a.items, b.items))


def test_apply_rotation(tmp_path, capsys):
    R = np.eye(4)
    R[:2, :2] = [[0, -1], [1, 0]]
    m = tmp_path / "rot.json"
    save_map(LorentzMap(R), 2, m)
    code, out, _ = run(capsys, "apply", m, fx("example3_square"))
    assert code == 0
    c = load_config(json.loads(out))
    assert ball_error(c.items[0], HalfSpace([0, 1], 0)) <= 1e-15


def test_apply_non_positive(tmp_path, capsys):
    m = tmp_path / "neg.json"
    save_map(LorentzMap(np.diag([1.0, 1, 1, -1])), 2, m)
    assert run(capsys, "apply", m, fx("generic4"))[0] == 4


def test_apply_not_lorentz(tmp_path, capsys):
    m = write(tmp_path, "bad.json", {"version": 1, "dim": 2, "matrix": (2 * np.eye(4)).tolist()})
    assert run(capsys, "apply", m, fx("generic4"))[0] == 3
    m = write(tmp_path, "short.json", {"version": 1, "dim": 2, "matrix": np.eye(3).tolist()})
    assert run(capsys, "apply", m, fx("generic4"))[0] == 2


# verify


def test_verify_example2(capsys):
    code, out, _ = run(capsys, "--json", "verify", fx("example2_a"), fx("example2_b"))
    d = json.loads(out)
    assert code == 4
    assert d["unsigned_discrepancy"] <= 1e-12
    assert len(d["side_assignments"]) == 8
    assert all(a["max_discrepancy"] >= 0.1 for a in d["side_assignments"])


def test_verify_perturbed_points(tmp_path, capsys):
    run(capsys, "generate", "--kind", "points", "--n", "7", "--dim", "2", "--seed", "3", "--out", tmp_path)
    code, out, _ = run(capsys, "verify", tmp_path / "A.json", tmp_path / "B.json", "--full-cross-ratios")
    assert code == 0
    B = json.loads((tmp_path / "B.json").read_text())
    item = next(x for x in B["items"] if x["type"] == "finite")
    item["coords"][0] += 1e-3
    (tmp_path / "B.json").write_text(json.dumps(B))
    code, out, _ = run(capsys, "--json", "verify", tmp_path / "A.json", tmp_path / "B.json", "--full-cross-ratios")
    d = json.loads(out)
    assert code == 4 and item["label"] in d["cross_ratios"]["witness"]


# generate


def test_generate_deterministic(tmp_path, capsys):
    for d in ("one", "two"):
        assert run(capsys, "generate", "--kind", "balls", "--n", "6", "--dim", "2", "--seed", "7",
                   "--out", tmp_path / d)[0] == 0
    for f in ("A.json", "B.json", "map.json"):
        assert (tmp_path / "one" / f).read_bytes() == (tmp_path / "two" / f).read_bytes()


def test_generate_bad_flags(capsys, tmp_path):
    assert run(capsys, "generate", "--kind", "points", "--n", "4", "--dim", "2",
               "--structure", "common-point", "--out", tmp_path)[0] == 2
    assert run(capsys, "generate", "--kind", "balls", "--n", "0", "--dim", "2", "--out", tmp_path)[0] == 2
    with pytest.raises(SystemExit):
        main(["generate", "--kind", "cubes", "--n", "3", "--dim", "2"])


@pytest.mark.parametrize("structure", ["full", "strongly-symmetric", "common-sphere", "fixed-point", "common-point"])
def test_pipeline(structure, tmp_path, capsys):
    assert run(capsys, "generate", "--kind", "balls", "--n", "6", "--dim", "2", "--seed", "11",
               "--structure", structure, "--out", tmp_path)[0] == 0
    A, B = tmp_path / "A.json", tmp_path / "B.json"
    code, out, _ = run(capsys, "--json", "solve", "balls", A, B, "-o", tmp_path / "sol.json")
    if structure == "common-point":
        assert code == 4 and json.loads(out)["error"] == "CommonBoundaryPoint"
        return
    assert code == 0
    assert run(capsys, "verify", A, B, "--map", tmp_path / "sol.json")[0] == 0
    assert run(capsys, "verify", A, B, "--map", tmp_path / "map.json")[0] == 0
    if structure in ("strongly-symmetric", "common-sphere"):
        assert json.loads(run(capsys, "--json", "classify", A)[1])["uniqueness"] == "StronglySymmetric"


def test_verify_identity_map_fails(tmp_path, capsys):
    run(capsys, "generate", "--kind", "balls", "--n", "5", "--dim", "2", "--seed", "2", "--out", tmp_path)
    m = tmp_path / "id.json"
    save_map(LorentzMap.identity(4), 2, m)
    code, out, _ = run(capsys, "verify", tmp_path / "A.json", tmp_path / "B.json", "--map", m)
    assert code == 4 and "FAIL" in out


# render


def test_render_dim_check(capsys):
    assert run(capsys, "render", fx("triangle_points"))[0] == 2


def test_render_to_file(tmp_path, capsys):
    out = tmp_path / "sq.svg"
    assert run(capsys, "render", fx("example3_square"), "-o", out)[0] == 0
    assert out.read_text().startswith("<svg")
