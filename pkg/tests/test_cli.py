import numpy as np
import pytest

from freezemaj.cli import chain_configuration, main
from freezemaj.grid import (
    MINUS,
    PLUS,
    TOOM,
    Configuration,
    format_grid,
    parse_grid,
    run_to_fixed_point,
)


def write_grid(tmp_path, x, name="g.txt"):
    p = tmp_path / name
    p.write_text(format_grid(x))
    return str(p)


def run(capsys, *argv):
    rc = main(list(argv))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


def test_simulate_all_minus_identity(tmp_path, capsys):
    x = Configuration.filled(4, MINUS)
    path = write_grid(tmp_path, x)
    rc, out, _ = run(capsys, "simulate", path, "--north", "1", "--east", "1",
                     "--steps", "5")
    assert rc == 0
    assert out == format_grid(x)


def test_simulate_all_plus_identity(tmp_path, capsys):
    x = Configuration.filled(4, PLUS)
    path = write_grid(tmp_path, x)
    rc, out, _ = run(capsys, "simulate", path, "--north", "1", "--east", "1",
                     "--steps", "3")
    assert rc == 0
    assert out == format_grid(x)


def test_simulate_to_fixed_point_reports_steps(tmp_path, capsys):
    rng = np.random.default_rng(7)
    x = Configuration.from_plus_mask(rng.random((16, 16)) < 0.5)
    path = write_grid(tmp_path, x)
    rc, out, err = run(capsys, "simulate", path, "--north", "1",
                       "--east", "1", "--to-fixed-point")
    assert rc == 0
    fp, steps = run_to_fixed_point(x, TOOM)
    assert out == format_grid(fp)
    assert err.strip() == f"steps {steps}"
    assert steps <= 16 * 16


def test_simulate_emit_every_stacks_grids(tmp_path, capsys):
    rng = np.random.default_rng(3)
    x = Configuration.from_plus_mask(rng.random((8, 8)) < 0.5)
    path = write_grid(tmp_path, x)
    rc, out, _ = run(capsys, "simulate", path, "--north", "1", "--east", "1",
                     "--steps", "4", "--emit-every", "2")
    assert rc == 0
    # one intermediate grid (t=2) plus the final one (t=4)
    assert out.count("\n8\n") + out.startswith("8\n") == 2


def test_simulate_out_file(tmp_path, capsys):
    x = Configuration.filled(5, MINUS)
    path = write_grid(tmp_path, x)
    outp = tmp_path / "out.txt"
    rc, out, _ = run(capsys, "simulate", path, "--north", "1", "--east", "1",
                     "--steps", "1", "--out", str(outp))
    assert rc == 0
    assert out == ""
    assert parse_grid(outp.read_text()) == x


@pytest.mark.parametrize("method", ["auto", "sim", "graph", "matrix"])
def test_predict_plus_cell_unchanged(tmp_path, capsys, method):
    x = Configuration.filled(4, PLUS)
    path = write_grid(tmp_path, x)
    rc, out, _ = run(capsys, "predict", path, "--north", "1", "--east", "1",
                     "--cell", "2,2", "--time", "9", "--method", method)
    assert rc == 0
    assert out.strip() == "UNCHANGED"


@pytest.mark.parametrize("method", ["auto", "sim", "graph", "matrix"])
def test_predict_both_neighbors_plus_changed(tmp_path, capsys, method):
    cells = np.full((4, 4), MINUS, dtype=np.int8)
    cells[1, 2] = PLUS  # north neighbor of (1, 1)
    cells[2, 1] = PLUS  # east neighbor of (1, 1)
    path = write_grid(tmp_path, Configuration(cells))
    rc, out, _ = run(capsys, "predict", path, "--north", "1", "--east", "1",
                     "--cell", "1,1", "--time", "1", "--method", method)
    assert rc == 0
    assert out.strip() == "CHANGED"


def test_predict_methods_agree_on_random_grids(tmp_path, capsys):
    rng = np.random.default_rng(11)
    for trial in range(25):
        x = Configuration.from_plus_mask(rng.random((6, 6)) < 0.5)
        path = write_grid(tmp_path, x)
        cell = f"{rng.integers(6)},{rng.integers(6)}"
        t = int(rng.integers(0, 40))
        words = []
        for method in ("sim", "graph", "matrix"):
            rc, out, _ = run(capsys, "predict", path, "--north", "1",
                             "--east", "1", "--cell", cell, "--time", str(t),
                             "--method", method)
            assert rc == 0
            words.append(out.strip())
        assert words[0] == words[1] == words[2]


def test_predict_graph_rejects_wide_neighborhood(tmp_path, capsys):
    x = Configuration.filled(8, MINUS)
    path = write_grid(tmp_path, x)
    rc, _, err = run(capsys, "predict", path, "--north", "1,2", "--east", "1",
                     "--cell", "0,0", "--time", "1", "--method", "graph")
    assert rc == 2
    assert "error" in err


def test_predict_auto_falls_back_to_sim(tmp_path, capsys):
    x = Configuration.filled(8, MINUS)
    path = write_grid(tmp_path, x)
    rc, out, _ = run(capsys, "predict", path, "--north", "1,2", "--east", "1",
                     "--cell", "0,0", "--time", "5", "--method", "auto")
    assert rc == 0
    assert out.strip() == "UNCHANGED"


def test_gen_circuit_roundtrip(tmp_path, capsys):
    rc, out, _ = run(capsys, "gen-circuit", "--inputs", "3", "--gates", "6",
                     "--seed", "5")
    assert rc == 0
    from freezemaj.circuit import parse_circuit
    c = parse_circuit(out)
    assert len(c.gates) == 6


def test_compile_check_ok(tmp_path, capsys):
    netlist = "input a 1\noutput a\n"
    p = tmp_path / "c.txt"
    p.write_text(netlist)
    rc, out, err = run(capsys, "compile", str(p), "--family", "contiguous",
                       "--params", "2,2", "--check")
    assert rc == 0
    assert "check ok" in err
    assert out.startswith(out.split("\n")[0])


def test_compile_check_false_circuit(tmp_path, capsys):
    netlist = "input a 1\ninput b 0\nand g a b\noutput g\n"
    p = tmp_path / "c.txt"
    p.write_text(netlist)
    rc, _, err = run(capsys, "compile", str(p), "--family", "contiguous",
                     "--params", "2,2", "--check")
    assert rc == 0
    assert "UNCHANGED" in err


def test_compile_malformed_netlist(tmp_path, capsys):
    p = tmp_path / "c.txt"
    p.write_text("inptu a 1\noutput a\n")
    rc, _, err = run(capsys, "compile", str(p), "--family", "contiguous",
                     "--params", "2,2")
    assert rc == 2
    assert "error" in err


def test_verify_gadgets_table(capsys):
    rc, out, _ = run(capsys, "verify-gadgets", "--family", "contiguous",
                     "--params", "2,2")
    assert rc == 0
    lines = [ln for ln in out.splitlines() if ln.strip()]
    assert all(ln.endswith("pass") for ln in lines)
    names = {ln.split()[0] for ln in lines}
    assert {"vwire", "hwire", "and", "or", "cross", "dup"} <= names


def test_bench_csv_and_agreement(tmp_path, capsys):
    outp = tmp_path / "bench.csv"
    rc, _, _ = run(capsys, "bench", "--sizes", "16,32", "--seed", "2",
                   "--out", str(outp))
    assert rc == 0
    lines = outp.read_text().strip().splitlines()
    assert lines[0] == "n,method,wall_ms,answer_hash"
    assert len(lines) == 5
    by_n = {}
    for ln in lines[1:]:
        n, method, ms, h = ln.split(",")
        assert float(ms) >= 0
        by_n.setdefault(n, set()).add(h)
    assert all(len(hs) == 1 for hs in by_n.values())


def test_chain_configuration_has_long_chains():
    x = chain_configuration(32, 0)
    fp, steps = run_to_fixed_point(x, TOOM)
    assert fp == Configuration.filled(32, PLUS)
    assert steps >= 32


def test_unknown_flag_exits_2(capsys):
    assert main(["simulate", "nope.txt", "--north", "1", "--east", "1",
                 "--steps", "1", "--bogus"]) == 2


def test_missing_file_exits_2(capsys):
    rc = main(["simulate", "/nonexistent/g.txt", "--north", "1",
               "--east", "1", "--steps", "1"])
    assert rc == 2
