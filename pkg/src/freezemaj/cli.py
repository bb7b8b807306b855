"""Command-line front end: simulate, predict, compile, verify, bench.

Exit codes: 0 success, 1 verification or check failure, 2 usage or
parse error.  Messages go to stderr; data goes to stdout or --out.
"""

import argparse
import hashlib
import sys
import time

import numpy as np

from .circuit import evaluate_circuit, format_circuit, parse_circuit, \
    random_circuit
from .compile import check_compiled, compile_circuit, format_compiled
from .errors import FreezemajError, WrongNeighborhoodArity, InstanceTooLarge
from .gadgets import build_gadget_set, parse_family, verify_gadget
from .grid import Configuration, LNeighborhood, MINUS, PLUS, flip_time_map, \
    format_grid, parse_grid, predict_by_simulation, run_to_fixed_point, \
    simulate, step
from .predict import MATRIX_SIZE_CAP, build_cell_digraph, flip_times, \
    predict_fast


def _offsets(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad offset list {text!r}")
    return vals


def _cell(text: str) -> tuple[int, int]:
    try:
        i, j = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad cell {text!r}, want i,j")
    return (i, j)


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    x = parse_grid(_read(args.grid))
    nb = LNeighborhood(args.north, args.east)
    nb.validate_for(x.n)
    if args.to_fixed_point:
        chunks = []
        if args.emit_every:
            y, t = x, 0
            while True:
                z = step(y, nb)
                if z == y:
                    break
                y, t = z, t + 1
                if t % args.emit_every == 0:
                    chunks.append(format_grid(y))
        else:
            y, t = run_to_fixed_point(x, nb)
        chunks.append(format_grid(y))
        _write_out("".join(chunks), args.out)
        print(f"steps {t}", file=sys.stderr)
    else:
        chunks = []
        y = x
        for s in range(1, args.steps + 1):
            y = step(y, nb)
            if args.emit_every and s % args.emit_every == 0 and s < args.steps:
                chunks.append(format_grid(y))
        chunks.append(format_grid(y))
        _write_out("".join(chunks), args.out)
    return 0


# ---------------------------------------------------------------------------
# predict


def _predict_matrix(x: Configuration, nb: LNeighborhood, t: int,
                    c: tuple[int, int]) -> bool:
    """Exact time-t answer by boolean matrix powers (reference oracle).

    A cell initially -1 is still -1 at time t exactly when some length-t
    walk from it stays inside the -1 dependency digraph, i.e. row c of
    A^t is nonzero.  Flip times never exceed n^2, so t is clamped there.
    """
    if x.n > MATRIX_SIZE_CAP:
        raise InstanceTooLarge(
            f"matrix predictor capped at n={MATRIX_SIZE_CAP}")
    i, j = c
    if x.cells[i, j] == PLUS or t <= 0:
        return False
    g = build_cell_digraph(x, nb)
    a = g.adjacency_matrix()
    e = min(t, x.n * x.n)
    r = np.eye(a.shape[0], dtype=bool)
    base = a
    while e:
        if e & 1:
            r = r @ base
        base = base @ base
        e >>= 1
    row = i * x.n + j
    return not r[row].any()


def cmd_predict(args) -> int:
    x = parse_grid(_read(args.grid))
    nb = LNeighborhood(args.north, args.east)
    nb.validate_for(x.n)
    method = args.method
    singleton = len(nb.s_north) == 1 and len(nb.s_east) == 1
    if method == "auto":
        method = "graph" if singleton else "sim"
    if method in ("graph", "matrix") and not singleton:
        raise WrongNeighborhoodArity(
            f"method {method} needs singleton offset sets")
    if method == "sim":
        changed = predict_by_simulation(x, nb, args.time, args.cell)
    elif method == "graph":
        changed = predict_fast(x, nb, args.time, args.cell)
    else:
        changed = _predict_matrix(x, nb, args.time, args.cell)
    print("CHANGED" if changed else "UNCHANGED")
    return 0


# ---------------------------------------------------------------------------
# compile


def cmd_compile(args) -> int:
    circuit = parse_circuit(_read(args.circuit))
    family = parse_family(args.family, args.params)
    inst = compile_circuit(circuit, family)
    _write_out(format_compiled(inst), args.out)
    if args.check:
        want = evaluate_circuit(circuit)
        got = check_compiled(inst)
        if got != want:
            print(f"check failed: fixed point says {got}, "
                  f"circuit evaluates to {want}", file=sys.stderr)
            return 1
        print(f"check ok: output {'CHANGED' if got else 'UNCHANGED'}",
              file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# verify-gadgets


def cmd_verify_gadgets(args) -> int:
    family = parse_family(args.family, args.params)
    gs = build_gadget_set(family, verify=False)
    failures = 0
    for name, tile in gs.tiles.items():
        if not tile.truth:
            continue
        report = verify_gadget(tile, gs)
        word = "pass" if report.ok else "FAIL"
        print(f"{name:12s} {report.checked_combos:2d} combos  {word}")
        if not report.ok:
            failures += 1
            for v in report.violations:
                print(f"  violation: {v}", file=sys.stderr)
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# gen-circuit


def cmd_gen_circuit(args) -> int:
    c = random_circuit(args.inputs, args.gates, args.seed)
    _write_out(format_circuit(c), args.out)
    return 0


# ---------------------------------------------------------------------------
# bench


def chain_configuration(n: int, seed: int) -> Configuration:
    """All -1 except one +1 row and one +1 column, plus a seeded sprinkle.

    The +1 boundary breaks every wrapping cycle, so all cells flip and the
    longest dependency chain (hence the step count to the fixed point) grows
    linearly with n: a worst-case-style input for step-by-step simulation.
    """
    cells = np.full((n, n), MINUS, dtype=np.int8)
    cells[n - 1, :] = PLUS
    cells[:, n - 1] = PLUS
    rng = np.random.default_rng(seed)
    extra = rng.integers(0, n, size=(n // 8, 2))
    cells[extra[:, 0], extra[:, 1]] = PLUS
    return Configuration(cells)


def _answers_sim(x: Configuration, nb: LNeighborhood, t: int) -> np.ndarray:
    y = x
    for _ in range(t):
        z = step(y, nb)
        if z == y:
            break
        y = z
    return (y.cells != x.cells)


def _answers_graph(x: Configuration, nb: LNeighborhood, t: int) -> np.ndarray:
    sched = flip_times(x, build_cell_digraph(x, nb))
    return (sched.times >= 1) & (sched.times <= t)


def cmd_bench(args) -> int:
    nb = LNeighborhood((1,), (1,))
    rows = ["n,method,wall_ms,answer_hash"]
    ok = True
    for n in args.sizes:
        x = chain_configuration(n, args.seed)
        t = n * n
        hashes = {}
        for method, fn in (("sim", _answers_sim), ("graph", _answers_graph)):
            t0 = time.perf_counter()
            ans = fn(x, nb, t)
            ms = (time.perf_counter() - t0) * 1000.0
            h = hashlib.sha256(np.packbits(ans).tobytes()).hexdigest()[:16]
            hashes[method] = h
            rows.append(f"{n},{method},{ms:.2f},{h}")
        if hashes["sim"] != hashes["graph"]:
            print(f"n={n}: sim and graph answers differ", file=sys.stderr)
            ok = False
    _write_out("\n".join(rows) + "\n", args.out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freezemaj")
    sub = p.add_subparsers(dest="command", required=True)

    def add_nb(sp):
        sp.add_argument("--north", type=_offsets, required=True,
                        help="comma list of north offsets, e.g. 1,3")
        sp.add_argument("--east", type=_offsets, required=True,
                        help="comma list of east offsets")

    def add_family(sp):
        sp.add_argument("--family", required=True,
                        choices=["contiguous", "periodic", "sparse2"])
        sp.add_argument("--params", type=_offsets, required=True,
                        help="family parameters as a comma list")

    sp = sub.add_parser("simulate", help="run the dynamics on a grid file")
    sp.add_argument("grid")
    add_nb(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--steps", type=int)
    g.add_argument("--to-fixed-point", action="store_true")
    sp.add_argument("--emit-every", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("predict", help="answer the one-cell state-change"
                        " question")
    sp.add_argument("grid")
    add_nb(sp)
    sp.add_argument("--cell", type=_cell, required=True)
    sp.add_argument("--time", type=int, required=True)
    sp.add_argument("--method", default="auto",
                    choices=["auto", "sim", "graph", "matrix"])
    sp.set_defaults(fn=cmd_predict)

    sp = sub.add_parser("compile", help="compile a monotone circuit netlist")
    sp.add_argument("circuit")
    add_family(sp)
    sp.add_argument("--check", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_compile)

    sp = sub.add_parser("verify-gadgets", help="verify a family's tile set")
    add_family(sp)
    sp.set_defaults(fn=cmd_verify_gadgets)

    sp = sub.add_parser("gen-circuit", help="emit a seeded random netlist")
    sp.add_argument("--inputs", type=int, required=True)
    sp.add_argument("--gates", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_gen_circuit)

    sp = sub.add_parser("bench", help="time sim vs graph prediction")
    sp.add_argument("--sizes", type=_offsets, default=(128, 256, 512))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.fn(args)
    except FreezemajError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
