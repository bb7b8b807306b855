"""Compiling monotone circuits into initial configurations.

The layout places gadget tiles on a tile grid.  Every circuit node (input
or gate) owns one tile column; consumers sit strictly west of their
sources, so signals only ever travel south and west.  Every gate owns a
two-row band: the upper row routes its left input to the gate's north
port, the lower row routes its right input to the east port and holds the
gate tile itself.  A node's value travels as a vertical bus down its
column; the first of two consumers taps the bus with a duplicator tile
(which restarts the bus on a shifted lane), the last consumer turns it
west and ends it.  The output node's bus runs to the bottom row, where a
single cell reports the circuit value at the fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Gate, MonotoneCircuit, normalize_fanout
from .errors import LayoutOverflow, ParseError
from .gadgets import (Contiguous, GadgetSet, NeighborhoodFamily, Periodic,
                      Sparse2, build_gadget_set)
from .grid import (MINUS, PLUS, Configuration, LNeighborhood, flip_time_map,
                   format_grid, parse_grid)

DEFAULT_MAX_N = 8192


@dataclass
class CompiledInstance:
    """An initial configuration whose fixed point computes a circuit."""

    family: NeighborhoodFamily
    config: Configuration
    output_cell: tuple[int, int]
    time_bound: int
    input_cells: dict[str, tuple[tuple[int, int], ...]]

    def neighborhood(self) -> LNeighborhood:
        return self.family.neighborhood()


def prune_dead_gates(c: MonotoneCircuit) -> MonotoneCircuit:
    """Drop gates that cannot influence the output."""
    live = {c.output}
    for g in reversed(c.gates):
        if g.name in live:
            live.add(g.left)
            live.add(g.right)
    return MonotoneCircuit(list(c.inputs),
                           [g for g in c.gates if g.name in live], c.output)


def _canonical_family(family: NeighborhoodFamily):
    """Return (canonical family, transposed?) with the larger span east."""
    if isinstance(family, Contiguous):
        if family.k_e < family.k_n:
            return Contiguous(family.k_n, family.k_e), True
    elif isinstance(family, Periodic):
        if family.n_e < family.n_n:
            return Periodic(family.p_prime, family.p,
                            family.n_n, family.n_e), True
    elif isinstance(family, Sparse2):
        if family.j_e < family.j_n:
            return Sparse2(family.i_n, family.j_n,
                           family.i_e, family.j_e), True
    return family, False


def layout_circuit(circuit: MonotoneCircuit, gs: GadgetSet,
                   max_n: int = DEFAULT_MAX_N):
    """Place tiles for a fanout-normalized circuit.

    Returns (config, output_cell, input_cells).  Requires every node to
    have at most two consumers (counting the output as one); run
    normalize_fanout first.  gs must be a canonical-orientation set.
    """
    counts = circuit.consumer_counts()
    if any(v > 2 for v in counts.values()):
        raise ValueError("layout requires fanout <= 2; normalize the circuit")
    nodes = circuit.node_names()
    num = len(nodes)
    col = {name: num - 1 - i for i, name in enumerate(nodes)}
    gates = circuit.gates
    G = len(gates)
    rows = 2 * G + 2
    top = rows - 1

    geom = gs.geom
    is_gate = {g.name for g in gates}
    # gate consumptions per node, in band order (top band first)
    cons: dict[str, list[int]] = {n: [] for n in nodes}
    band = {}
    for i, g in enumerate(gates):
        rn = 2 * (G - i)
        band[g.name] = (rn, rn - 1)
        if g.left == g.right:
            cons[g.left].append(rn)
        else:
            cons[g.left].append(rn)
            cons[g.right].append(rn - 1)

    # vertical extent and turn kinds per node
    origin = {n: (band[n][1] if n in is_gate else top) for n in nodes}
    dup_row: dict[str, int] = {}
    turn: dict[tuple[int, int], str] = {}
    low_occ = {}
    for m in nodes:
        uses = cons[m]
        ext = m == circuit.output
        for k, r in enumerate(uses):
            if k == 0 and (len(uses) == 2 or ext):
                turn[(col[m], r)] = "dup"
                dup_row[m] = r
            elif m in dup_row:
                turn[(col[m], r)] = "corner_nw2"
            else:
                turn[(col[m], r)] = "corner_nw"
        if ext:
            low_occ[m] = 0
        elif uses:
            low_occ[m] = min(uses)
        else:
            low_occ[m] = origin[m]

    def lane_tag(m, r):
        return "2" if m in dup_row and r < dup_row[m] else ""

    tilemap: dict[tuple[int, int], str] = dict(turn)

    def place(c, r, name):
        if (c, r) in tilemap:
            raise LayoutOverflow(
                f"tile collision at column {c}, row {r}: "
                f"{tilemap[(c, r)]} vs {name}")
        tilemap[(c, r)] = name

    col_node = {c: m for m, c in col.items()}

    def run_west(c_src, c_dst, r):
        """Horizontal feed tiles strictly between source and gate columns."""
        for c in range(c_dst + 1, c_src):
            m = col_node.get(c)
            if m is not None and low_occ[m] <= r < origin[m]:
                place(c, r, "cross" + lane_tag(m, r))
            else:
                place(c, r, "hwire")

    for g in gates:
        cg = col[g.name]
        rn, re = band[g.name]
        if g.left == g.right:
            # a gate fed twice from one node computes the identity either
            # way, so realize it as an OR with only the north port driven
            place(cg, rn, "corner_es")
            place(cg, re, "or")
            run_west(col[g.left], cg, rn)
        else:
            place(cg, rn, "corner_es")
            place(cg, re, g.kind.lower())
            run_west(col[g.left], cg, rn)
            run_west(col[g.right], cg, re)

    for m in nodes:
        c = col[m]
        lo = low_occ[m] if m != circuit.output else 0
        hi = origin[m] if m in is_gate else origin[m] + 1
        for r in range(lo, hi):
            if (c, r) not in tilemap:
                place(c, r, "vwire" + lane_tag(m, r))

    tw, th = gs.pitch
    need = max(num * tw, rows * th)
    mult = int(np.lcm(gs.scale[0], gs.scale[1]))
    n = ((need + mult - 1) // mult) * mult
    if n > max_n:
        raise LayoutOverflow(f"layout needs n={n} > max_n={max_n}")

    cells = np.full((n, n), MINUS, dtype=np.int8)
    for (c, r), name in tilemap.items():
        tile = gs.tiles[name]
        cells[c * tw:(c + 1) * tw, r * th:(r + 1) * th] = tile.pattern

    input_cells = {}
    for name, val in circuit.inputs:
        c = col[name]
        port = gs.tiles["vwire"].ports["n"]
        cells_g = tuple((c * tw + i, top * th + j) for (i, j) in port.cells)
        input_cells[name] = cells_g
        if val:
            for (i, j) in cells_g:
                cells[i, j] = PLUS

    out_tile = tilemap[(col[circuit.output], 0)]
    port = [p for p in gs.tiles[out_tile].ports.values()
            if p.kind == "out" and p.side == "S"][0]
    output_cell = (col[circuit.output] * tw + port.cells[0][0],
                   port.cells[0][1])
    return Configuration(cells), output_cell, input_cells


def compile_circuit(circuit: MonotoneCircuit, family: NeighborhoodFamily,
                    max_n: int = DEFAULT_MAX_N) -> CompiledInstance:
    """Compile a circuit into an initial configuration for a family.

    The fixed point of the returned configuration has +1 at output_cell
    exactly when the circuit evaluates to True on its stored input values,
    and the fixed point is reached within time_bound steps.
    """
    canon, transposed = _canonical_family(family)
    gs = build_gadget_set(canon)
    # after pruning, every remaining gate is an ancestor of the output, so
    # the output node itself ends up with no gate consumers and its bus can
    # always run straight to the bottom row
    c = normalize_fanout(prune_dead_gates(circuit))
    config, output_cell, input_cells = layout_circuit(c, gs, max_n)
    if transposed:
        config = Configuration(config.cells.T.copy())
        output_cell = (output_cell[1], output_cell[0])
        input_cells = {k: tuple((j, i) for (i, j) in v)
                       for k, v in input_cells.items()}
    n = config.n
    return CompiledInstance(family, config, output_cell, n * n, input_cells)


def check_compiled(inst: CompiledInstance) -> bool:
    """Run the compiled configuration to its fixed point; True iff the
    output cell ends at +1."""
    times = flip_time_map(inst.config, inst.neighborhood())
    t = int(times[inst.output_cell])
    if t > inst.time_bound:
        raise LayoutOverflow(
            f"output settled at t={t}, past the bound {inst.time_bound}")
    return t >= 0


# ---------------------------------------------------------------------------
# File format


def _fmt_family_line(family: NeighborhoodFamily) -> str:
    if isinstance(family, Contiguous):
        return f"family contiguous {family.k_e} {family.k_n}"
    if isinstance(family, Periodic):
        return (f"family periodic {family.p} {family.p_prime} "
                f"{family.n_e} {family.n_n}")
    return (f"family sparse2 {family.i_e} {family.j_e} "
            f"{family.i_n} {family.j_n}")


def format_compiled(inst: CompiledInstance) -> str:
    nb = inst.neighborhood()
    lines = [format_grid(inst.config).rstrip("\n")]
    lines.append(f"output {inst.output_cell[0]} {inst.output_cell[1]}")
    lines.append(f"time {inst.time_bound}")
    lines.append("neighborhood N=%s E=%s" % (
        ",".join(map(str, nb.s_north)), ",".join(map(str, nb.s_east))))
    lines.append(_fmt_family_line(inst.family))
    for name, cells in inst.input_cells.items():
        cl = ";".join(f"{i},{j}" for (i, j) in cells)
        lines.append(f"input-cells {name} {cl}")
    return "\n".join(lines) + "\n"


def parse_compiled(text: str) -> CompiledInstance:
    from .gadgets import parse_family
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty compiled-instance file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(1, "first line must be the grid size") from None
    config = parse_grid("\n".join(lines[:n + 1]) + "\n")
    output_cell = None
    time_bound = None
    family = None
    input_cells = {}
    for k, ln in enumerate(lines[n + 1:], start=n + 2):
        parts = ln.split()
        if not parts:
            continue
        if parts[0] == "output":
            output_cell = (int(parts[1]), int(parts[2]))
        elif parts[0] == "time":
            time_bound = int(parts[1])
        elif parts[0] == "neighborhood":
            pass  # redundant with the family line
        elif parts[0] == "family":
            family = parse_family(parts[1], [int(x) for x in parts[2:]])
        elif parts[0] == "input-cells":
            input_cells[parts[1]] = tuple(
                tuple(int(v) for v in c.split(",")) for c in parts[2].split(";"))
        else:
            raise ParseError(k, f"unknown directive {parts[0]!r}")
    if output_cell is None or time_bound is None or family is None:
        raise ParseError(len(lines), "missing output, time, or family line")
    return CompiledInstance(family, config, output_cell, time_bound,
                            input_cells)
