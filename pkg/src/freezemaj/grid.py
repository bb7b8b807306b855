"""Torus grid, L-shaped neighborhoods, and the freezing majority rule.

A configuration assigns a spin in {-1, +1} to every cell of an n x n torus.
Cells are addressed as (i, j) with i the column index (east is +i) and j the
row index (north is +j); all coordinate arithmetic is modulo n.  A cell in
state +1 is frozen forever; a cell in state -1 adopts +1 exactly when the
spin sum over its L-shaped neighborhood is strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CellOutOfRange, OffsetCollision, ParseError

PLUS = 1
MINUS = -1


@dataclass(frozen=True)
class LNeighborhood:
    """The offset sets (s_north, s_east) defining an L-shaped neighborhood.

    Both sets contain positive integers; the central cell is never part of
    its own neighborhood.
    """

    s_north: tuple[int, ...]
    s_east: tuple[int, ...]

    def __post_init__(self):
        sn = tuple(sorted(set(self.s_north)))
        se = tuple(sorted(set(self.s_east)))
        if not sn or not se:
            raise ValueError("both offset sets must be nonempty")
        if sn[0] < 1 or se[0] < 1:
            raise ValueError("all offsets must be >= 1")
        if sn != tuple(self.s_north) or se != tuple(self.s_east):
            object.__setattr__(self, "s_north", sn)
            object.__setattr__(self, "s_east", se)

    @property
    def size(self) -> int:
        return len(self.s_north) + len(self.s_east)

    def offsets(self) -> list[tuple[int, int]]:
        """(di, dj) offsets: north offsets ascending, then east ascending."""
        return [(0, k) for k in self.s_north] + [(k, 0) for k in self.s_east]

    def validate_for(self, n: int) -> None:
        """Reject offsets that collide (or hit the center) modulo n."""
        for name, ks in (("s_north", self.s_north), ("s_east", self.s_east)):
            residues = [k % n for k in ks]
            if 0 in residues:
                raise OffsetCollision(
                    f"{name} offset congruent to 0 mod n={n}: {ks}"
                )
            if len(set(residues)) != len(residues):
                raise OffsetCollision(
                    f"{name} offsets collide mod n={n}: {ks}"
                )


TOOM = LNeighborhood((1,), (1,))


@dataclass
class Configuration:
    """An n x n torus of spins, stored as an int8 array indexed [i, j]."""

    cells: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.cells, dtype=np.int8)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError("cells must be a square 2-d array")
        if not np.isin(a, (MINUS, PLUS)).all():
            raise ValueError("cells must hold only -1 and +1")
        self.cells = a

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    def __getitem__(self, cell: tuple[int, int]) -> int:
        i, j = cell
        return int(self.cells[i % self.n, j % self.n])

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and np.array_equal(
            self.cells, other.cells
        )

    def copy(self) -> "Configuration":
        return Configuration(self.cells.copy())

    def plus_mask(self) -> np.ndarray:
        return self.cells == PLUS

    @staticmethod
    def filled(n: int, state: int) -> "Configuration":
        return Configuration(np.full((n, n), state, dtype=np.int8))

    @staticmethod
    def from_plus_mask(mask: np.ndarray) -> "Configuration":
        return Configuration(np.where(mask, PLUS, MINUS).astype(np.int8))


def check_cell(c: tuple[int, int], n: int) -> tuple[int, int]:
    i, j = c
    if not (0 <= i < n and 0 <= j < n):
        raise CellOutOfRange(f"cell {c} outside {n}x{n} grid")
    return (i, j)


def local_rule(self_state: int, neighbor_states: list[int]) -> int:
    """+1 iff already +1 or the neighbor spin sum is strictly positive."""
    if self_state == PLUS:
        return PLUS
    return PLUS if sum(neighbor_states) > 0 else MINUS


def _neighbor_plus_counts(plus: np.ndarray, nb: LNeighborhood) -> np.ndarray:
    """Number of +1 neighbors of every cell (torus wrap via roll)."""
    cnt = np.zeros(plus.shape, dtype=np.int16)
    for di, dj in nb.offsets():
        cnt += np.roll(plus, (-di, -dj), axis=(0, 1))
    return cnt


def step(x: Configuration, nb: LNeighborhood) -> Configuration:
    """One synchronous application of the global rule; x is unmodified."""
    nb.validate_for(x.n)
    plus = x.plus_mask()
    cnt = _neighbor_plus_counts(plus, nb)
    # spin sum > 0  <=>  2 * (#plus) > |N|
    new_plus = plus | (2 * cnt > nb.size)
    return Configuration.from_plus_mask(new_plus)


def simulate(x: Configuration, nb: LNeighborhood, t: int) -> Configuration:
    """F^t(x).  t is clamped to n*n: the dynamics is constant afterwards."""
    if t < 0:
        raise ValueError("t must be >= 0")
    nb.validate_for(x.n)
    t = min(t, x.n * x.n)
    cur = x
    for _ in range(t):
        nxt = step(cur, nb)
        if nxt == cur:
            break
        cur = nxt
    return cur


def flip_time_map(x: Configuration, nb: LNeighborhood) -> np.ndarray:
    """Exact flip times for every cell, by event propagation.

    Returns an int32 array: 0 where the cell starts at +1, -1 where the
    cell never leaves -1, and t >= 1 where the cell flips at step t.
    Equivalent to iterating step(); cost is O(n^2 + flips * |N|).
    """
    nb.validate_for(x.n)
    n = x.n
    offs = nb.offsets()
    thr = nb.size // 2 + 1  # plus count making the spin sum positive
    plus = x.plus_mask()
    cnt = _neighbor_plus_counts(plus, nb)
    times = np.full((n, n), -1, dtype=np.int32)
    times[plus] = 0
    frontier = np.argwhere(~plus & (cnt >= thr))
    frontier = [tuple(c) for c in frontier]
    t = 1
    rounds = 0
    while frontier:
        rounds += 1
        assert rounds <= n * n, "fixed point not reached within n^2 steps"
        nxt = []
        for (i, j) in frontier:
            times[i, j] = t
        for (i, j) in frontier:
            for di, dj in offs:
                a, b = (i - di) % n, (j - dj) % n
                if times[a, b] == -1:
                    cnt[a, b] += 1
                    if cnt[a, b] == thr:
                        nxt.append((a, b))
        frontier = nxt
        t += 1
    return times


def run_to_fixed_point(
    x: Configuration, nb: LNeighborhood
) -> tuple[Configuration, int]:
    """Iterate to the attractor; returns (fixed point, steps taken <= n^2)."""
    times = flip_time_map(x, nb)
    fp = Configuration.from_plus_mask(times != -1)
    steps = int(times.max(initial=0))
    return fp, max(steps, 0)


def predict_by_simulation(
    x: Configuration, nb: LNeighborhood, t: int, c: tuple[int, int]
) -> bool:
    """Does cell c change state within t steps?  Brute-force reference."""
    i, j = check_cell(c, x.n)
    if x.cells[i, j] == PLUS:
        return False  # freezing: +1 never changes
    return simulate(x, nb, t).cells[i, j] == PLUS


# ---------------------------------------------------------------------------
# Grid file format: line 1 is n; then n lines of n characters from {+,-}.
# Text row r (0-based) holds cells (i=column, j=n-1-r): the top line is the
# northernmost row.

def format_grid(x: Configuration) -> str:
    n = x.n
    lines = [str(n)]
    for r in range(n):
        j = n - 1 - r
        lines.append(
            "".join("+" if x.cells[i, j] == PLUS else "-" for i in range(n))
        )
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> Configuration:
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty grid file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError(1, f"expected grid size, got {lines[0]!r}") from None
    if n < 1:
        raise ParseError(1, f"grid size must be >= 1, got {n}")
    if len(lines) < n + 1:
        raise ParseError(len(lines), f"expected {n} grid rows, got {len(lines) - 1}")
    cells = np.full((n, n), MINUS, dtype=np.int8)
    for r in range(n):
        row = lines[r + 1]
        if len(row) != n:
            raise ParseError(r + 2, f"expected {n} characters, got {len(row)}")
        j = n - 1 - r
        for i, ch in enumerate(row):
            if ch == "+":
                cells[i, j] = PLUS
            elif ch == "-":
                cells[i, j] = MINUS
            else:
                raise ParseError(r + 2, f"invalid character {ch!r}")
    for extra in range(n + 1, len(lines)):
        if lines[extra].strip():
            raise ParseError(extra + 1, "trailing content after grid rows")
    return Configuration(cells)
