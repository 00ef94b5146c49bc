import json
import subprocess
import sys

import numpy as np
import pytest

from prodsys.cli import main
from prodsys.specfile import SpecError, parse_spec

N2_23 = {"monoid": {"type": "free_abelian", "rank": 2}, "dims": [2, 3]}
FP_22 = {"monoid": {"type": "free_product", "components": 2}, "dims": [2, 2]}


def write_spec(tmp_path, obj, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


# -- system description files ------------------------------------------------------------------------------

def test_spec_defaults():
    spec = parse_spec(N2_23)
    assert (spec.L, spec.tol, spec.seed) == (2, 1e-9, 0)
    assert spec.system.dims == (2, 3) and spec.system.twist is None


def test_spec_with_bicharacter():
    spec = parse_spec({**N2_23, "multiplier": {"type": "bicharacter", "phases": [[0, 0], [1, 0]]}, "L": 3})
    assert spec.L == 3
    assert abs(spec.system.mu((0, 1), (1, 0)) - np.exp(1j)) < 1e-12


@pytest.mark.parametrize(
    "bad",
    [
        {**N2_23, "extra": 1},
        {"monoid": {"type": "free_abelian", "rank": 2, "x": 1}, "dims": [1, 1]},
        {"monoid": {"type": "free_abelian"}, "dims": [1]},
        {"monoid": {"type": "lattice", "rank": 2}, "dims": [1, 1]},
        {**N2_23, "dims": [2, 0]},
        {**N2_23, "dims": [2]},
        {**N2_23, "multiplier": "sometimes"},
        {**N2_23, "multiplier": {"type": "bicharacter", "phases": [[0]]}},
        {**N2_23, "L": -1},
        {"dims": [1]},
    ],
)
def test_spec_rejections(bad):
    with pytest.raises(SpecError):
        parse_spec(bad)


# -- commands ----------------------------------------------------------------------------------

def test_relations_23(tmp_path, capsys):
    spec = write_spec(tmp_path, N2_23)
    assert main(["relations", spec, "--out", str(tmp_path / "out")]) == 0
    out = capsys.readouterr().out
    assert "U_1V_2 = V_1U_2" in out
    assert "U_1^*V_1 = V_1U_1^* + V_2U_2^*" in out
    mult = (tmp_path / "out" / "multiplication.txt").read_text().splitlines()
    adj = (tmp_path / "out" / "adjoint.txt").read_text().splitlines()
    assert len(mult) == 6 and len(adj) == 6 + 13
    data = json.loads((tmp_path / "out" / "adjoint.json").read_text())
    assert sum(d["kind"] == "covariance" for d in data) == 6


def test_relations_trivial_dims(tmp_path, capsys):
    spec = write_spec(tmp_path, {**N2_23, "dims": [1, 1]})
    assert main(["relations", spec, "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "UV = VU" in out and "U^*V = VU^*" in out


def test_relations_over_N(tmp_path, capsys):
    spec = write_spec(tmp_path, {"monoid": {"type": "free_abelian", "rank": 1}, "dims": [2]})
    assert main(["relations", spec, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "multiplication.txt").read_text() == ""
    assert (tmp_path / "adjoint.txt").read_text().splitlines() == [
        "S[0,0]' S[0,0] = I",
        "S[0,0]' S[0,1] = 0",
        "S[0,1]' S[0,0] = 0",
        "S[0,1]' S[0,1] = I",
    ]


@pytest.mark.parametrize("obj", [N2_23, FP_22], ids=["n2", "fp"])
def test_fock_command(tmp_path, capsys, obj):
    spec = write_spec(tmp_path, obj)
    report = tmp_path / "r.json"
    assert main(["fock", spec, "--samples", "5", "--json", str(report)]) == 0
    assert "all checks passed" in capsys.readouterr().out
    records = json.loads(report.read_text())
    assert all(r["passed"] for r in records)
    assert all(r["anchor"] for r in records)


def test_fock_command_L0_and_export(tmp_path, capsys):
    spec = write_spec(tmp_path, N2_23)
    assert main(["fock", spec, "--L", "0", "--samples", "3", "--export", str(tmp_path / "ops")]) == 0
    assert sorted(p.name for p in (tmp_path / "ops").iterdir()) == [
        "l_g0_0.txt", "l_g0_1.txt", "l_g1_0.txt", "l_g1_1.txt", "l_g1_2.txt"
    ]
    assert (tmp_path / "ops" / "l_g0_0.txt").read_text() == "# 1 1\n"


def test_fock_reports_are_deterministic(tmp_path):
    spec = write_spec(tmp_path, FP_22)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["fock", spec, "--samples", "5", "--json", str(a)])
    main(["fock", spec, "--samples", "5", "--json", str(b)])
    assert a.read_text() == b.read_text()


def test_join_command(tmp_path, capsys):
    assert main(["join", write_spec(tmp_path, N2_23), "(1,0)", "(0,1)"]) == 0
    assert "sigma{(1,0), (0,1)} = (1,1)" in capsys.readouterr().out
    fp = write_spec(tmp_path, FP_22, "fp.json")
    assert main(["join", fp, "x", "y"]) == 0
    assert "join(x1, y1) = INFINITY" in capsys.readouterr().out
    assert main(["join", fp, "x y x"]) == 0
    assert "theta(x1 y1 x1) = (2,1)" in capsys.readouterr().out


def test_join_parse_error(tmp_path, capsys):
    assert main(["join", write_spec(tmp_path, N2_23), "(1,"]) == 2
    assert "error" in capsys.readouterr().err


def test_oracle_command(tmp_path, capsys):
    spec = write_spec(tmp_path, FP_22)
    assert main(["oracle", spec, "--pairs", "100", "--monomials", "10", "--max-length", "3"]) == 0
    assert "all checks passed" in capsys.readouterr().out


def test_faithful_fock(tmp_path, capsys):
    spec = write_spec(tmp_path, N2_23)
    assert main(["faithful", spec, "--fock", "(1,0)", "(0,1)", "(1,1)"]) == 0
    out = capsys.readouterr().out
    assert "criterion: (I - U_1U_1^* - U_2U_2^*)(I - V_1V_1^* - V_2V_2^* - V_3V_3^*) \\ne 0" in out
    assert "witness: (0,0):0 -> 1+0j" in out
    over_n = write_spec(tmp_path, {"monoid": {"type": "free_abelian", "rank": 1}, "dims": [2]}, "n.json")
    assert main(["faithful", over_n, "--fock", "(1)"]) == 0
    assert "criterion: \\sum V_kV_k^* < I" in capsys.readouterr().out


def test_faithful_assignment(tmp_path, capsys):
    spec = write_spec(tmp_path, {"monoid": {"type": "free_abelian", "rank": 1}, "dims": [1]})
    shift = np.eye(4, k=-1)
    np.savez(tmp_path / "shift.npz", g0_0=shift, interior=np.diag([1.0, 1, 1, 0]))
    assert main(["faithful", spec, "--assignment", str(tmp_path / "shift.npz"), "(1)"]) == 0
    np.savez(tmp_path / "unitary.npz", g0_0=np.eye(1))
    assert main(["faithful", spec, "--assignment", str(tmp_path / "unitary.npz"), "(1)"]) == 1
    assert "product vanishes" in capsys.readouterr().out
    np.savez(tmp_path / "missing.npz", g1_0=np.eye(1))
    assert main(["faithful", spec, "--assignment", str(tmp_path / "missing.npz"), "(1)"]) == 2


def test_faithful_rejects_identity(tmp_path, capsys):
    assert main(["faithful", write_spec(tmp_path, N2_23), "--fock", "(0,0)"]) == 2
    assert "identity" in capsys.readouterr().err


def test_expect_command(tmp_path, capsys):
    spec = write_spec(tmp_path, FP_22)
    expr = "2 * E[x y:0] * E[y x:1]' + E[x:0] * B[y] * E[x:1]'"
    assert main(["expect", spec, expr]) == 0
    out = capsys.readouterr().out
    assert "Phi_delta(X) = 1 * E[x1:0] * B[y1] * E[x1:1]'" in out
    assert "Phi_theta(X) = 1 * E[x1:0] * B[y1] * E[x1:1]' + 2 * E[x1 y1:0] * E[y1 x1:1]'" in out
    assert "all checks passed" in out


def test_cap_exceeded_is_an_input_error(tmp_path, capsys):
    spec = write_spec(tmp_path, {**N2_23, "cap": 10})
    assert main(["fock", spec]) == 2
    assert "cap" in capsys.readouterr().err


def test_invalid_spec_exit_code(tmp_path, capsys):
    assert main(["fock", write_spec(tmp_path, {**N2_23, "bogus": True})]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["relations", str(bad)]) == 2


def test_console_script_entry_point(tmp_path):
    spec = write_spec(tmp_path, N2_23)
    res = subprocess.run(
        [sys.executable, "-m", "prodsys.cli", "join", spec, "(2,0)", "(1,3)"], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert "join((2,0), (1,3)) = (2,3)" in res.stdout
