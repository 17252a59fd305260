import csv
import io
import json
import math
from fractions import Fraction

import pytest
from scipy.special import j0

from gelfand_schwarz.catalog import z2_pair
from gelfand_schwarz.cli import main
from gelfand_schwarz.exceptions import ValidationError
from gelfand_schwarz.io import atomic_write, load_pair, pair_spec_dict, parse_pair_spec, sha256_file
from gelfand_schwarz.polynomial import Polynomial

ID2 = [["1", "0"], ["0", "1"]]
MINUS = [["-1", "0"], ["0", "-1"]]


def mono_spec(*e):
    return {"n": len(e), "terms": [{"exp": list(e), "coeff": "1"}]}


def write_spec(tmp_path, gens, name="custom", **extra):
    raw = {"version": 1, "name": name, "group": {"n": 2, "kind": "finite", "matrices": [ID2, MINUS]},
           "generators": gens, **extra}
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(raw))
    return str(path)


def read_csv(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


# spec files -----------------------------------------------------------------------------

def test_spec_round_trip():
    pair, defaults = parse_pair_spec(pair_spec_dict(z2_pair(), {"max_degree": 12}))
    assert pair.generators == z2_pair().generators
    assert defaults["max_degree"] == 12 and defaults["quad_nodes"] == 64


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(colour=1),
    lambda d: d.pop("version"),
    lambda d: d.update(version=2),
    lambda d: d.pop("generators"),
    lambda d: d.update(defaults={"speed": 3}),
    lambda d: d.update(name=5),
])
def test_spec_is_strict(mutate):
    raw = pair_spec_dict(z2_pair())
    mutate(raw)
    with pytest.raises(ValidationError):
        parse_pair_spec(raw)


def test_load_pair_unknown(tmp_path):
    with pytest.raises(ValidationError):
        load_pair("no-such-pair")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValidationError):
        load_pair(str(bad))


def test_atomic_write_replaces_and_leaves_no_temp(tmp_path):
    target = tmp_path / "sub" / "a.txt"
    atomic_write(target, "one")
    atomic_write(target, "two")
    assert target.read_text() == "two"
    assert [p.name for p in target.parent.iterdir()] == ["a.txt"]


# pair-check -----------------------------------------------------------------------------

def test_pair_check_z2(capsys, tmp_path):
    assert main(["pair-check", "--spec", "z2-r2", "-M", "4", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "assumption fails, witness J=(1, 0, 1), J'=(0, 2, 0)" in out
    report = json.loads((tmp_path / "pair_check.json").read_text())
    assert report["special_assumption"]["counterexample"] == {"J": [1, 0, 1], "J_prime": [0, 2, 0], "value": "4"}


def test_pair_check_so2(capsys):
    assert main(["pair-check", "--spec", "so2", "-M", "30"]) == 0
    assert "holds up to" in capsys.readouterr().out


def test_pair_check_non_invariant_spec(tmp_path, capsys):
    path = write_spec(tmp_path, [mono_spec(1, 0)])
    assert main(["pair-check", "--spec", path]) == 2
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "InvarianceError"


def test_bad_arguments_exit_2(capsys):
    assert main_exit(["verify", "--spec", "z2-r2", "--suite", "nope"]) == 2
    assert main_exit(["demo", "unknown"]) == 2


def main_exit(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    return exc.value.code


# coeffs ---------------------------------------------------------------------------------

def test_coeffs_z2_contains_cross_term(tmp_path):
    assert main(["coeffs", "--spec", "z2-r2", "-M", "4", "--out", str(tmp_path)]) == 0
    rows = json.loads((tmp_path / "coeffs.json").read_text())["rows"]
    a = {tuple(r["index"]): r["q"] for r in rows if r["kind"] == "a"}
    assert a[(0, 1, 0)] == {"n": 3, "terms": [{"exp": [0, 1, 0], "coeff": "-1"}]}
    # graded-lex: degree ascending, lex-descending inside a degree
    b_idx = [tuple(r["index"]) for r in rows if r["kind"] == "b"]
    assert b_idx[:3] == [(0, 0), (1, 0), (0, 1)]


def test_coeffs_depth_zero(tmp_path):
    assert main(["coeffs", "--spec", "z2-r2", "-M", "0", "--out", str(tmp_path), "--format", "csv"]) == 0
    rows = read_csv(tmp_path / "coeffs.csv")
    assert [(r["kind"], r["index"]) for r in rows] == [("b", "[0,0]"), ("a", "[0,0,0]")]


def test_coeffs_so2_closed_form(tmp_path):
    assert main(["coeffs", "--spec", "so2", "-M", "8", "--out", str(tmp_path)]) == 0
    rows = json.loads((tmp_path / "coeffs.json").read_text())["rows"]
    for r in rows:
        if r["kind"] != "a":
            continue
        k = r["index"][0]
        expected = Fraction((-1) ** k, 4 ** k * math.factorial(k) ** 2)
        assert r["q"]["terms"] == [{"exp": [k], "coeff": str(expected)}]


def test_incomplete_generators_exit_3(tmp_path, capsys):
    path = write_spec(tmp_path, [mono_spec(2, 0)], name="partial")
    assert main(["coeffs", "--spec", path, "-M", "2"]) == 3
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "ExpressibilityError" and err["degree"] == 2


# verify ---------------------------------------------------------------------------------

def test_verify_eigen_z2(tmp_path):
    assert main(["verify", "--spec", "z2-r2", "--suite", "eigen", "-M", "20", "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "verify_eigen.json").read_text())
    assert payload["passed"] and all(r["residual"] == "0" for r in payload["rows"])


def test_verify_eigen_failure_path(tmp_path, monkeypatch):
    import gelfand_schwarz.cli as cli
    monkeypatch.setattr(cli, "verify_eigenfunction", lambda table, xi, j: Fraction(1, 10))
    assert main(["verify", "--spec", "z2-r2", "--suite", "eigen", "-M", "4", "--out", str(tmp_path)]) == 1
    assert not json.loads((tmp_path / "verify_eigen.json").read_text())["passed"]


def test_verify_schwarz_z2(tmp_path):
    argv = ["verify", "--spec", "z2-r2", "--suite", "schwarz", "--quad-radius", "1", "--quad-nodes", "64",
            "--points", "20", "--out", str(tmp_path)]
    assert main(argv) == 0
    payload = json.loads((tmp_path / "verify_schwarz.json").read_text())
    assert payload["max_abs_error"] <= 1e-6 and payload["worst"]["err"] == payload["max_abs_error"]


def test_verify_schwarz_tight_tol_fails(tmp_path):
    argv = ["verify", "--spec", "so2", "--suite", "schwarz", "--quad-nodes", "16", "--points", "5",
            "--tol", "1e-14", "--out", str(tmp_path)]
    assert main(argv) == 1


def test_verify_symmetry_so2(tmp_path):
    assert main(["verify", "--spec", "so2", "--suite", "symmetry", "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "verify_symmetry.json").read_text())
    assert payload["max_defect"] <= 1e-10 and len(payload["rows"]) == 100


def test_verify_special_reports_without_failing(capsys):
    assert main(["verify", "--spec", "z2-r2", "--suite", "special", "-M", "4"]) == 0
    assert "assumption fails" in capsys.readouterr().out


# demo / manifests -----------------------------------------------------------------------

def test_demo_so2_matches_bessel(tmp_path):
    assert main(["demo", "so2", "--out", str(tmp_path)]) == 0
    xi_norm = math.hypot(1.2, 0.9)
    for r in read_csv(tmp_path / "grid.csv"):
        x = json.loads(r["x"])
        assert abs(float(r["h_re"]) - j0(xi_norm * math.hypot(*x))) < 1e-10
        assert abs(float(r["h_im"])) < 1e-10


@pytest.mark.parametrize("name", ["trivial", "z2-r2", "so3"])
def test_demo_grid_agreement(tmp_path, name):
    assert main(["demo", name, "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "grid.csv")
    assert len(rows) == 41
    assert max(float(r["abs_diff"]) for r in rows) <= 1e-10


def test_manifest_digests(tmp_path):
    assert main(["demo", "z2-r2", "-M", "10", "--out", str(tmp_path)]) == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert set(manifest) == {"command", "inputs", "parameters", "version", "wall_clock_s", "outputs"}
    assert set(manifest["outputs"]) == {"h_terms.csv", "grid.csv"}
    for name, digest in manifest["outputs"].items():
        assert sha256_file(tmp_path / name) == digest


def test_outputs_are_deterministic(tmp_path):
    for sub in ("a", "b"):
        assert main(["coeffs", "--spec", "so3", "-M", "6", "--out", str(tmp_path / sub)]) == 0
        assert main(["demo", "z2-r2", "-M", "8", "--out", str(tmp_path / sub / "demo")]) == 0
    for rel in ("coeffs.json", "demo/grid.csv", "demo/h_terms.csv"):
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()


def test_custom_spec_matches_builtin(tmp_path, capsys):
    path = tmp_path / "z2.json"
    path.write_text(json.dumps(pair_spec_dict(z2_pair())))
    assert main(["coeffs", "--spec", str(path), "-M", "6"]) == 0
    custom = json.loads(capsys.readouterr().out)
    assert main(["coeffs", "--spec", "z2-r2", "-M", "6"]) == 0
    assert json.loads(capsys.readouterr().out)["rows"] == custom["rows"]


def test_polynomial_spec_rejects_bad_coeff():
    with pytest.raises(ValidationError):
        Polynomial.from_json_dict({"n": 2, "terms": [{"exp": [1, 0], "coeff": "abc"}]})
