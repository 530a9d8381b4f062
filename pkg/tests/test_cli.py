import json

import pytest

from looptor.cli import main
from test_simplicial import CORRUPT


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_loop_homology_text(capsys):
    code, out, _ = run(capsys, "loop-homology", "--space", "builtin:sphere:3", "--max-degree", "4")
    assert code == 0
    assert out.splitlines() == ["H_0 = Z", "H_1 = 0", "H_2 = Z", "H_3 = 0", "H_4 = Z"]


def test_loop_homology_json(capsys):
    code, out, _ = run(capsys, "loop-homology", "--space", "builtin:sphere:2", "--max-degree", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema_version"] == 1
    assert data["results"]["homology"]["2"] == {"betti": 1, "torsion": [], "group": "Z"}


def test_loop_homology_needs_finite_basis(capsys):
    code, _, err = run(capsys, "loop-homology", "--space", "builtin:circle")
    assert code == 2 and "nondegenerate edges" in err


def test_malformed_json(capsys, write_json):
    path = write_json("bad.json", '{"generators": {"0": ["v"]},')
    code, _, err = run(capsys, "loop-homology", "--space", path)
    assert code == 2 and "malformed JSON at line 1" in err


def test_missing_file_and_unknown_builtin(capsys, tmp_path):
    assert run(capsys, "loop-homology", "--space", str(tmp_path / "nope.json"))[0] == 2
    assert run(capsys, "loop-homology", "--space", "builtin:torus")[0] == 2


def test_negative_argument(capsys):
    code, _, err = run(capsys, "loop-homology", "--space", "builtin:sphere:2", "--max-degree", "-1")
    assert code == 2 and "non-negative" in err


def test_corrupted_face_table(capsys, write_json):
    path = write_json("corrupt.json", CORRUPT)
    code, out, _ = run(capsys, "verify", "prisms", path)
    assert code == 1
    assert "generator t" in out and "FAILURES FOUND" in out


@pytest.mark.parametrize("suite", ["prisms", "conventions", "twisting", "cobar", "psi"])
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", suite, "builtin:reduced-simplex:3", "--max-dim", "3", "--cases", "50")
    assert code == 0, out
    assert out.rstrip().endswith("ALL PASS")


def _strip_timings(text):
    data = json.loads(text)
    data.pop("timings")
    return data


def test_verify_json_is_deterministic(capsys, monkeypatch):
    argv = ("verify", "all", "builtin:sphere:3", "--max-dim", "3", "--cases", "30", "--seed", "7", "--format", "json")
    first = _strip_timings(run(capsys, *argv)[1])
    monkeypatch.setenv("LOOPTOR_THREADS", "4")
    second = _strip_timings(run(capsys, *argv)[1])
    assert first == second
    assert first["status"] == "pass"
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_compare_twisted_circle_cover(capsys):
    code, out, _ = run(
        capsys, "compare-twisted", "--base", "builtin:circle", "--fiber", "builtin:discrete:3",
        "--group", "builtin:cyclic:3", "--twist", "builtin:edges:1", "--max-degree", "3",
    )
    assert code == 0
    assert "EQUAL: (Z, Z, 0, 0),(Z, Z, 0, 0)" in out


def test_compare_twisted_trivial_kunneth(capsys):
    code, out, _ = run(
        capsys, "compare-twisted", "--base", "builtin:sphere:2", "--fiber", "builtin:discrete:2",
        "--max-degree", "2", "--format", "json",
    )
    data = json.loads(out)
    assert code == 0 and data["results"]["equal"]
    assert data["results"]["kunneth"]["2"]["betti"] == 2


def test_compare_twisted_invalid_twist(capsys, write_json):
    # edge values 1, 1, 1 on reduced Delta^2 are not a cocycle once the 2-cell is fixed to 0
    path = write_json("twist.json", {"0,1": "1", "1,2": "1", "0,2": "1", "0,1,2": "0"})
    code, _, err = run(
        capsys, "compare-twisted", "--base", "builtin:reduced-simplex:2", "--fiber", "builtin:discrete:3",
        "--group", "builtin:cyclic:3", "--twist", path,
    )
    assert code == 2 and "invalid twisting function" in err


def test_group_file_with_action(capsys, write_json):
    group = write_json("g.json", {"cyclic": 2, "action": {"1": {"0": "1", "1": "0"}}})
    code, out, _ = run(
        capsys, "compare-twisted", "--base", "builtin:circle", "--fiber", "builtin:discrete:2",
        "--group", group, "--twist", "builtin:edges:1", "--max-degree", "2",
    )
    assert code == 0 and "EQUAL: (Z, Z, 0),(Z, Z, 0)" in out
