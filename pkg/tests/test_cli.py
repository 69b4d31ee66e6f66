import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from qaoa_hadamard import circuit as circuit_mod
from qaoa_hadamard import ising
from qaoa_hadamard.cli import main
from qaoa_hadamard.problems import BUILTIN_NAMES, WilliamsonSpec, builtin_hamiltonian, williamson_cost
from qaoa_hadamard.runtime import PelGrid

from conftest import all_bitstrings

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestBruteForce:
    def test_williamson12(self, capsys):
        code, out, _ = run(capsys, "brute-force", "builtin:williamson12")
        d = json.loads(out)
        assert code == 0
        assert d["S_R"] == 64 and d["E_max"] == 18.0 and d["E_tot"] == 1024.0
        assert '"S_R": 64' in out and '"E_max": 18.0' in out and '"E_tot": 1024.0' in out

    def test_golden_turyn44(self, capsys):
        code, out, _ = run(capsys, "brute-force", "--hamiltonian", "builtin:turyn44", "--json")
        assert code == 0
        assert out == (GOLDEN / "brute_force_turyn44.json").read_text()

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_round_trip_via_file(self, capsys, tmp_path, name):
        path = tmp_path / f"{name}.txt"
        assert run(capsys, "hamiltonian", "--problem", f"builtin:{name}", "--out", path)[0] == 0
        from_file = run(capsys, "brute-force", "--hamiltonian", path)[1]
        from_builtin = run(capsys, "brute-force", f"builtin:{name}")[1]
        assert from_file == from_builtin


class TestHamiltonian:
    def test_golden_williamson_k3(self, capsys, tmp_path):
        out = tmp_path / "w.txt"
        assert run(capsys, "hamiltonian", "--problem", "williamson", "--k", 3, "--out", out)[0] == 0
        assert out.read_text() == (GOLDEN / "williamson_k3.txt").read_text()

    def test_scaled_matches_literal(self, capsys):
        _, out, _ = run(capsys, "hamiltonian", "--problem", "williamson", "--k", 3, "--scale", 1 / 48)
        H = ising.loads(out)
        lit = builtin_hamiltonian("williamson12")
        assert [t.support for t in H.terms] == [t.support for t in lit.terms]
        assert np.allclose([t.coefficient for t in H.terms], [t.coefficient for t in lit.terms], atol=1e-12)

    def test_turyn_template(self, capsys, tmp_path):
        tpl = tmp_path / "t.txt"
        tpl.write_text("v0 + v1 -\n+ v2 - v3\nv4 - + +\n- + -\n")
        code, out, _ = run(capsys, "hamiltonian", "--problem", "turyn-template", "--template", tpl)
        assert code == 0 and ising.loads(out).n_qubits == 5

    def test_missing_k(self, capsys):
        code, _, err = run(capsys, "hamiltonian", "--problem", "williamson")
        assert code == 1 and err.startswith("error:") and err.count("\n") == 1


class TestAssembleVerify:
    def test_zero_cost_matrix_verifies(self, capsys, tmp_path):
        spec = WilliamsonSpec(3)
        s = next(b for b in all_bitstrings(8) if williamson_cost(spec, b) == 0)
        m = tmp_path / "m.txt"
        assert run(capsys, "assemble", "--problem", "williamson", "--k", 3, "--string", s, "--out", m)[0] == 0
        code, out, _ = run(capsys, "verify", "--matrix", m)
        assert code == 0
        assert "direct_cost 0" in out and "hadamard yes" in out

    def test_nonzero_cost_fails_verification(self, capsys, tmp_path):
        m = tmp_path / "m.txt"
        run(capsys, "assemble", "--k", 3, "--string", "00000000", "--out", m)
        code, out, _ = run(capsys, "verify", "--matrix", m, "--json")
        assert code == 2
        d = json.loads(out)
        assert d["hadamard"] is False and d["direct_cost"] > 0

    def test_wrong_string_length(self, capsys, tmp_path):
        m = tmp_path / "m.txt"
        code, _, err = run(capsys, "assemble", "--k", 3, "--string", "0101", "--out", m)
        assert code == 1 and not m.exists()

    def test_malformed_matrix(self, capsys, tmp_path):
        m = tmp_path / "bad.txt"
        m.write_text("+-\n+\n")
        assert run(capsys, "verify", "--matrix", m)[0] == 1


class TestEmit:
    def test_golden(self, capsys):
        code, out, _ = run(capsys, "emit", "builtin:proto2", "--layers", 2, "--gamma", "0.25,0.5", "--beta", "0.125,-0.5")
        assert code == 0
        assert out == (GOLDEN / "emit_proto2_p2.txt").read_text()

    def test_gate_count_turyn44(self, capsys):
        _, out, _ = run(capsys, "emit", "builtin:turyn44", "--gamma", "0.1", "--beta", "0.2")
        assert len(circuit_mod.loads(out)) == 66

    def test_wrong_angle_count(self, capsys):
        code, _, _ = run(capsys, "emit", "builtin:proto2", "--layers", 3, "--gamma", "0.1,0.2", "--beta", "0.1")
        assert code == 1


class TestPel:
    def test_single_qubit_analytic(self, capsys, tmp_path):
        out = tmp_path / "g.csv"
        code, _, _ = run(capsys, "pel", "builtin:proto1", "--gamma", "-1:1:5", "--beta", "-pi/2:pi/3:4", "--out", out)
        assert code == 0
        grid = PelGrid.from_csv(out.read_text())
        G, B = np.meshgrid(grid.gammas, grid.betas, indexing="ij")
        # H = 2 + 2 Z: the Bloch vector of |+> rotated by 4 gamma about z, then 2 beta about x
        assert np.allclose(grid.values, 2 + 2 * np.sin(4 * G) * np.sin(2 * B), atol=1e-12)

    def test_williamson_origin(self, capsys):
        _, out, _ = run(capsys, "pel", "builtin:williamson12", "--gamma", "-pi:pi:11", "--beta", "-pi:pi:11")
        assert PelGrid.from_csv(out).value_at(0, 0) == pytest.approx(4.0, abs=1e-9)

    def test_bad_axis(self, capsys):
        assert run(capsys, "pel", "builtin:proto1", "--gamma", "0:1")[0] == 1


class TestSolve:
    def test_proto4(self, capsys):
        code, out, _ = run(capsys, "solve", "builtin:proto4", "--layers", 1, "--mode", "exact", "--shots", 4096,
                           "--restarts", 10, "--reproducible")
        d = json.loads(out)
        assert code == 0
        assert d["metrics"]["xRAR"] >= 1.9
        assert d["histogram"]["shots"] == 4096

    def test_byte_identical(self, capsys, tmp_path):
        args = ["solve", "builtin:mixed_uniform", "--layers", 2, "--restarts", 3, "--seed", 4, "--reproducible"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, *args, "--out", a)
        run(capsys, *args, "--threads", 3, "--out", b)
        assert a.read_bytes() == b.read_bytes()

    def test_timestamp_without_reproducible(self, capsys):
        _, out, _ = run(capsys, "solve", "builtin:proto1", "--no-trace")
        assert "created" in json.loads(out)

    def test_negative_init_range(self, capsys):
        _, out, _ = run(capsys, "solve", "builtin:proto1", "--init-lo", "-0.2", "--init-hi", "0.1", "--reproducible")
        assert json.loads(out)["config"]["init_range"] == [-0.2, 0.1]

    def test_sampled(self, capsys):
        code, out, _ = run(capsys, "solve", "builtin:proto2", "--mode", "sampled", "--shots", 200, "--reproducible")
        assert code == 0 and json.loads(out)["config"]["mode"] == "sampled"

    def test_resource_cap(self, capsys, tmp_path):
        h = tmp_path / "big.txt"
        h.write_text("qubits 27\n1 26\n")
        out = tmp_path / "r.json"
        code, _, err = run(capsys, "solve", "--hamiltonian", h, "--out", out)
        assert code == 3 and "qubit" in err and not out.exists()

    def test_lower_cap(self, capsys):
        assert run(capsys, "solve", "builtin:williamson12", "--max-qubits", 4)[0] == 3


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["frobnicate"],
            ["solve"],
            ["solve", "builtin:nope"],
            ["solve", "builtin:proto1", "--layers", "0"],
            ["solve", "builtin:proto1", "--mode", "noisy"],
            ["brute-force", "/nonexistent/file.txt"],
            ["assemble", "--k", "4", "--string", "0000000000"],
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 1
        assert err.startswith("error:") and err.count("\n") == 1

    def test_malformed_hamiltonian_leaves_no_output(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("qubits 2\n1 0 7\n")
        out = tmp_path / "out.json"
        assert run(capsys, "brute-force", bad, "--out", out)[0] == 1
        assert not out.exists()
        assert list(tmp_path.iterdir()) == [bad]


def test_console_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "qaoa_hadamard.cli", "brute-force", "builtin:proto1"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["S_R"] == 1
