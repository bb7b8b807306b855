"""Monotone circuits: netlist format, evaluation, fan-out normalization.

Netlist format, one statement per line ('#' starts a comment):

    input <name> <0|1>
    and   <name> <src> <src>
    or    <name> <src> <src>
    output <src>

Statements must be in topological order (sources name earlier lines); the
single output line comes last.  Names match [A-Za-z0-9_]+.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from .errors import ParseError

AND = "and"
OR = "or"

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class Gate:
    name: str
    kind: str  # AND or OR
    left: str
    right: str


@dataclass
class MonotoneCircuit:
    inputs: list[tuple[str, bool]]
    gates: list[Gate]
    output: str

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        seen: set[str] = set()
        for name, _ in self.inputs:
            if name in seen:
                raise ValueError(f"duplicate name {name!r}")
            seen.add(name)
        for g in self.gates:
            if g.kind not in (AND, OR):
                raise ValueError(f"bad gate kind {g.kind!r}")
            if g.name in seen:
                raise ValueError(f"duplicate name {g.name!r}")
            for src in (g.left, g.right):
                if src not in seen:
                    raise ValueError(f"gate {g.name!r} uses unknown source {src!r}")
            seen.add(g.name)
        if self.output not in seen:
            raise ValueError(f"unknown output source {self.output!r}")

    def node_names(self) -> list[str]:
        return [n for n, _ in self.inputs] + [g.name for g in self.gates]

    def input_values(self) -> dict[str, bool]:
        return dict(self.inputs)

    def consumer_counts(self) -> dict[str, int]:
        """Uses of each node as a gate source or as the output.

        A gate naming the same source twice counts as a single use: it is
        wired to the value once.
        """
        cnt = {n: 0 for n in self.node_names()}
        for g in self.gates:
            cnt[g.left] += 1
            if g.right != g.left:
                cnt[g.right] += 1
        cnt[self.output] += 1
        return cnt

    def with_input_values(self, values: dict[str, bool]) -> "MonotoneCircuit":
        new_inputs = [(n, bool(values.get(n, v))) for n, v in self.inputs]
        return MonotoneCircuit(new_inputs, list(self.gates), self.output)


def evaluate_circuit(c: MonotoneCircuit) -> bool:
    val = {n: bool(v) for n, v in c.inputs}
    for g in c.gates:
        l, r = val[g.left], val[g.right]
        val[g.name] = (l and r) if g.kind == AND else (l or r)
    return val[c.output]


def format_circuit(c: MonotoneCircuit) -> str:
    lines = [f"input {n} {1 if v else 0}" for n, v in c.inputs]
    lines += [f"{g.kind} {g.name} {g.left} {g.right}" for g in c.gates]
    lines.append(f"output {c.output}")
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> MonotoneCircuit:
    inputs: list[tuple[str, bool]] = []
    gates: list[Gate] = []
    output: str | None = None
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if output is not None:
            raise ParseError(lineno, "statement after the output line")
        parts = line.split()
        op = parts[0].lower()
        if op == "input":
            if len(parts) != 3:
                raise ParseError(lineno, "expected: input <name> <0|1>")
            name, value = parts[1], parts[2]
            _check_name(lineno, name, seen)
            if value not in ("0", "1"):
                raise ParseError(lineno, f"input value must be 0 or 1, got {value!r}")
            inputs.append((name, value == "1"))
            seen.add(name)
        elif op in (AND, OR):
            if len(parts) != 4:
                raise ParseError(lineno, f"expected: {op} <name> <src> <src>")
            name, left, right = parts[1], parts[2], parts[3]
            _check_name(lineno, name, seen)
            for src in (left, right):
                if src not in seen:
                    raise ParseError(lineno, f"unknown source {src!r} (forward reference?)")
            gates.append(Gate(name, op, left, right))
            seen.add(name)
        elif op == "output":
            if len(parts) != 2:
                raise ParseError(lineno, "expected: output <src>")
            if parts[1] not in seen:
                raise ParseError(lineno, f"unknown output source {parts[1]!r}")
            output = parts[1]
        else:
            raise ParseError(lineno, f"unknown statement {op!r}")
    if output is None:
        raise ParseError(len(text.splitlines()) + 1, "missing output line")
    return MonotoneCircuit(inputs, gates, output)


def _check_name(lineno: int, name: str, seen: set[str]) -> None:
    if not _NAME_RE.match(name):
        raise ParseError(lineno, f"invalid name {name!r}")
    if name in seen:
        raise ParseError(lineno, f"duplicate name {name!r}")


def normalize_fanout(c: MonotoneCircuit) -> MonotoneCircuit:
    """Insert OR(x, x) duplicators so every node feeds at most 2 consumers.

    Evaluation is unchanged on every input assignment.  A duplicator chain
    node OR(x, x) counts as one consumer of x and can itself feed two.
    """
    cnt = c.consumer_counts()
    gates: list[Gate] = []
    existing = set(c.node_names())
    fresh = 0

    def fresh_name(base: str) -> str:
        nonlocal fresh
        while True:
            fresh += 1
            cand = f"{base}_dup{fresh}"
            if cand not in existing:
                existing.add(cand)
                return cand

    def expand(node: str) -> list[str]:
        """Stand-in names for each consumer of node, inserting duplicators."""
        need = cnt[node]
        if need <= 2:
            return [node] * max(need, 1)
        outs: list[str] = []
        cur = node
        remaining = need
        while remaining > 2:
            d = fresh_name(node)
            gates.append(Gate(d, OR, cur, cur))
            outs.append(cur)  # cur's remaining slot goes to a real consumer
            cur = d
            remaining -= 1
        outs.extend([cur, cur])
        return outs

    slots: dict[str, list[str]] = {}
    for name, _ in c.inputs:
        slots[name] = expand(name)
    for g in c.gates:
        left = slots[g.left].pop()
        right = left if g.right == g.left else slots[g.right].pop()
        gates.append(Gate(g.name, g.kind, left, right))
        slots[g.name] = expand(g.name)
    out = slots[c.output].pop()
    return MonotoneCircuit(list(c.inputs), gates, out)


def random_circuit(num_inputs: int, num_gates: int, seed: int) -> MonotoneCircuit:
    """Seed-deterministic random circuit; sources drawn from earlier nodes."""
    if num_inputs < 1 or num_gates < 1:
        raise ValueError("need at least 1 input and 1 gate")
    rng = random.Random(seed)
    inputs = [(f"x{i}", bool(rng.getrandbits(1))) for i in range(num_inputs)]
    names = [n for n, _ in inputs]
    gates = []
    for k in range(num_gates):
        kind = rng.choice((AND, OR))
        left = rng.choice(names)
        right = rng.choice(names)
        name = f"g{k}"
        gates.append(Gate(name, kind, left, right))
        names.append(name)
    return MonotoneCircuit(inputs, gates, gates[-1].name)
