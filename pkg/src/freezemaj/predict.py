"""Fast prediction for size-1 L-shaped neighborhoods.

For neighborhoods with a single north offset and a single east offset, a
cell in state -1 stays -1 forever exactly when, in the digraph over -1
cells whose edges follow the neighborhood, it lies on a directed cycle or
on a path into one.  Everything else flips, and the exact flip time is a
longest-path computation on the acyclic part of that digraph.

The grid decomposes into independent residue-class subgrids whenever all
east offsets share a period p and all north offsets a period p'; each class
relabels onto a smaller torus where the offsets become the unit ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CellOutOfRange, InstanceTooLarge, WrongNeighborhoodArity
from .grid import MINUS, PLUS, Configuration, LNeighborhood, check_cell

# FlipSchedule entry codes (in the .times array)
ALREADY_PLUS = 0
NEVER = -1
# any value >= 1 means FlipsAt(t)


@dataclass
class CellDigraph:
    """Digraph over the -1 cells of a (possibly rectangular) torus.

    Vertices are the cells with value -1; there is an edge c -> c' exactly
    when c' is the east or north neighbor of c and both are -1.  Out-degree
    is therefore at most 2.
    """

    minus: np.ndarray  # bool [w, h], True where the cell is -1
    k_east: int
    k_north: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.minus.shape

    def edge_masks(self) -> list[tuple[tuple[int, int], np.ndarray]]:
        """[(offset, mask)] where mask[c] says the edge c -> c+offset exists."""
        out = []
        for di, dj in ((self.k_east, 0), (0, self.k_north)):
            tgt_minus = np.roll(self.minus, (-di, -dj), axis=(0, 1))
            out.append(((di, dj), self.minus & tgt_minus))
        return out

    def out_neighbors(self, c: tuple[int, int]) -> list[tuple[int, int]]:
        w, h = self.shape
        i, j = c
        res = []
        if self.minus[i, j]:
            for di, dj in ((self.k_east, 0), (0, self.k_north)):
                a, b = (i + di) % w, (j + dj) % h
                if self.minus[a, b]:
                    res.append((a, b))
        return res

    def num_edges(self) -> int:
        return int(sum(m.sum() for _, m in self.edge_masks()))

    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency over all w*h cells (row-major flat ids)."""
        w, h = self.shape
        size = w * h
        a = np.zeros((size, size), dtype=bool)
        for (di, dj), mask in self.edge_masks():
            src = np.argwhere(mask)
            if len(src):
                s = src[:, 0] * h + src[:, 1]
                t = ((src[:, 0] + di) % w) * h + (src[:, 1] + dj) % h
                a[s, t] = True
        return a


def build_cell_digraph(x: Configuration, nb: LNeighborhood) -> CellDigraph:
    """Digraph of Lemma-style -1 dependencies; needs |S_N| = |S_E| = 1."""
    if len(nb.s_north) != 1 or len(nb.s_east) != 1:
        raise WrongNeighborhoodArity(
            f"need singleton offset sets, got {nb.s_north}/{nb.s_east}"
        )
    nb.validate_for(x.n)
    return CellDigraph(x.cells == MINUS, nb.s_east[0], nb.s_north[0])


def _scc_labels(g: CellDigraph) -> tuple[int, np.ndarray]:
    """Strongly connected component labels over all cells (flat ids)."""
    w, h = g.shape
    size = w * h
    rows, cols = [], []
    for (di, dj), mask in g.edge_masks():
        src = np.argwhere(mask)
        if len(src):
            rows.append(src[:, 0] * h + src[:, 1])
            cols.append(((src[:, 0] + di) % w) * h + (src[:, 1] + dj) % h)
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        mat = csr_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(size, size))
    else:
        mat = csr_matrix((size, size), dtype=np.int8)
    ncomp, labels = connected_components(mat, directed=True, connection="strong")
    return ncomp, labels


def cycle_vertices(g: CellDigraph) -> set[tuple[int, int]]:
    """Vertices on a directed cycle: members of an SCC of size >= 2.

    Self-loops are impossible because offsets are >= 1 and collisions
    modulo n are rejected upstream.
    """
    w, h = g.shape
    ncomp, labels = _scc_labels(g)
    counts = np.bincount(labels, minlength=ncomp)
    on_cycle = counts[labels] >= 2
    on_cycle &= g.minus.reshape(-1)
    idx = np.nonzero(on_cycle)[0]
    return {(int(f) // h, int(f) % h) for f in idx}


def _pred_ids(flat: np.ndarray, g: CellDigraph) -> tuple[np.ndarray, np.ndarray]:
    """Flat ids of the two edge-reversed neighbors of each given flat id."""
    w, h = g.shape
    i, j = flat // h, flat % h
    p_east = ((i - g.k_east) % w) * h + j
    p_north = i * h + (j - g.k_north) % h
    return p_east, p_north


def _never_flip_mask(g: CellDigraph) -> np.ndarray:
    """Bool mask of cells frozen at -1: on a cycle or on a path into one.

    Reverse breadth-first traversal from the cycle vertices, processed a
    whole frontier at a time.
    """
    w, h = g.shape
    ncomp, labels = _scc_labels(g)
    counts = np.bincount(labels, minlength=ncomp)
    seen = (counts[labels] >= 2) & g.minus.reshape(-1)
    minus = g.minus.reshape(-1)
    frontier = np.nonzero(seen)[0]
    while frontier.size:
        cand = np.concatenate(_pred_ids(frontier, g))
        cand = np.unique(cand[minus[cand] & ~seen[cand]])
        seen[cand] = True
        frontier = cand
    return seen.reshape(w, h)


def never_flip_set(g: CellDigraph) -> set[tuple[int, int]]:
    """Cells frozen at -1: on a cycle or with a directed path to one."""
    h = g.shape[1]
    idx = np.nonzero(_never_flip_mask(g).reshape(-1))[0]
    return {(int(f) // h, int(f) % h) for f in idx}


@dataclass
class FlipSchedule:
    """Per-cell flip classification.

    times[c] is ALREADY_PLUS (0) for cells starting at +1, NEVER (-1) for
    cells frozen at -1, and t >= 1 for cells that flip exactly at step t.
    """

    times: np.ndarray

    def entry(self, c: tuple[int, int]) -> int:
        return int(self.times[c[0], c[1]])

    def changes_within(self, c: tuple[int, int], t: int) -> bool:
        tau = self.entry(c)
        return tau >= 1 and tau <= t


def flip_times(x: Configuration, g: CellDigraph) -> FlipSchedule:
    """Exact flip times via longest paths on the acyclic part of g.

    A -1 cell flips one step after the later of its two neighbors has
    become +1; neighbors starting at +1 contribute time 0.  Cells that can
    reach a cycle never flip.  g must have been built from x.
    """
    if not np.array_equal(g.minus, x.cells == MINUS):
        raise ValueError("digraph does not match the configuration")
    return _flip_times(g)


def _flip_times(g: CellDigraph) -> FlipSchedule:
    """Longest paths on the acyclic part of g, one ready layer at a time.

    live cells (those that flip) satisfy t(c) = 1 + max over c's -1
    out-neighbors of t, where out-neighbors starting at +1 contribute 0.
    A live cell never depends on a frozen one, so Kahn's algorithm over
    the live subgraph terminates with every live cell resolved.
    """
    w, h = g.shape
    size = w * h
    minus = g.minus.reshape(-1)
    live = minus & ~_never_flip_mask(g).reshape(-1)
    times = np.zeros(size, dtype=np.int64)
    times[minus] = NEVER  # overwritten below for the live part
    idx = np.nonzero(live)[0]
    i, j = idx // h, idx % h
    n_east = ((i + g.k_east) % w) * h + j
    n_north = i * h + (j + g.k_north) % h
    pend = np.zeros(size, dtype=np.int16)
    pend[idx] = live[n_east].astype(np.int16) + live[n_north]
    best = np.zeros(size, dtype=np.int64)  # max resolved out-neighbor time
    frontier = idx[pend[idx] == 0]
    times[frontier] = 1  # all out-neighbors started at +1
    while frontier.size:
        cand = []
        for p in _pred_ids(frontier, g):
            keep = live[p]
            p, tau = p[keep], times[frontier][keep]
            np.maximum.at(best, p, tau)
            np.add.at(pend, p, -1)
            cand.append(p)
        cand = np.unique(np.concatenate(cand))
        frontier = cand[pend[cand] == 0]
        times[frontier] = best[frontier] + 1
    return FlipSchedule(times.reshape(w, h))


@dataclass(frozen=True)
class SubgridMap:
    """Residue-class partition of the torus for periodic offset sets.

    Cells (s + q*p mod n, t + q'*p_north mod n) form class (s, t) with
    s < gcd(p, n), t < gcd(p_north, n); each class relabels onto an
    (n/gcd(p,n)) x (n/gcd(p_north,n)) torus with unit offsets.
    """

    p: int
    p_north: int
    n: int

    def __post_init__(self):
        if self.p < 1 or self.p_north < 1 or self.n < 1:
            raise ValueError("periods and size must be >= 1")

    @property
    def g_east(self) -> int:
        return gcd(self.p, self.n)

    @property
    def g_north(self) -> int:
        return gcd(self.p_north, self.n)

    @property
    def sub_shape(self) -> tuple[int, int]:
        return (self.n // self.g_east, self.n // self.g_north)

    def classes(self):
        for s in range(self.g_east):
            for t in range(self.g_north):
                yield (s, t)

    def class_cells(self, s: int, t: int) -> list[tuple[int, int]]:
        w, h = self.sub_shape
        return [
            ((s + q * self.p) % self.n, (t + qq * self.p_north) % self.n)
            for q in range(w)
            for qq in range(h)
        ]

    def _log(self, residue_free: int, period: int, g: int, m: int) -> int:
        # solve q * period == residue_free (mod n) with period = g * unit
        unit = period // g
        inv = pow(unit, -1, m) if m > 1 else 0
        return ((residue_free // g) * inv) % m if m > 1 else 0

    def to_sub(self, c: tuple[int, int]) -> tuple[tuple[int, int], tuple[int, int]]:
        """cell -> ((class s, t), (subtorus q, q'))."""
        i, j = check_cell(c, self.n)
        s, t = i % self.g_east, j % self.g_north
        w, h = self.sub_shape
        q = self._log(i - s, self.p, self.g_east, w)
        qq = self._log(j - t, self.p_north, self.g_north, h)
        return (s, t), (q, qq)

    def from_sub(self, cls: tuple[int, int], sub: tuple[int, int]) -> tuple[int, int]:
        s, t = cls
        q, qq = sub
        return ((s + q * self.p) % self.n, (t + qq * self.p_north) % self.n)

    def extract_class(self, x: Configuration, s: int, t: int) -> np.ndarray:
        """int8 [w, h] view of class (s, t) relabeled to its subtorus."""
        w, h = self.sub_shape
        qi = (s + self.p * np.arange(w)) % self.n
        qj = (t + self.p_north * np.arange(h)) % self.n
        return x.cells[np.ix_(qi, qj)]


def subgrid_map(p: int, p_north: int, n: int) -> SubgridMap:
    return SubgridMap(p, p_north, n)


def locate(
    c: tuple[int, int], m: SubgridMap
) -> tuple[tuple[int, int], tuple[int, int]]:
    """Residue class of c and its coordinate on the class subtorus."""
    return m.to_sub(c)


def predict_fast(
    x: Configuration, nb: LNeighborhood, t: int, c: tuple[int, int]
) -> bool:
    """Graph-based answer to the prediction question for singleton sets.

    Restricts x to c's residue-class subgrid, relabels it to the unit
    neighborhood, and reads the cell's exact flip time.
    """
    if len(nb.s_north) != 1 or len(nb.s_east) != 1:
        raise WrongNeighborhoodArity(
            f"need singleton offset sets, got {nb.s_north}/{nb.s_east}"
        )
    nb.validate_for(x.n)
    i, j = check_cell(c, x.n)
    if x.cells[i, j] == PLUS:
        return False
    if t <= 0:
        return False
    m = subgrid_map(nb.s_east[0], nb.s_north[0], x.n)
    (s, tt), sub_c = locate((i, j), m)
    sub = m.extract_class(x, s, tt)
    sched = _flip_times(CellDigraph(sub == MINUS, 1, 1))
    return sched.changes_within(sub_c, t)


IN_CYCLE = "InCycle"
REACHES_CYCLE = "ReachesCycle"
FLIPS = "Flips"

MATRIX_SIZE_CAP = 12


def _bool_matpow_cumulative(a: np.ndarray, bound: int) -> np.ndarray:
    """OR of A^1 .. A^k for some k >= bound, by repeated squaring.

    C_1 = A and C_{2k} = C_k OR C_k C_k covers all walk lengths 1..2k;
    overshooting the bound is harmless for the cycle/reachability queries
    because any witnessing walk can be shortened below the bound.
    """
    c = a.copy()
    k = 1
    while k < bound:
        c = c | (c @ c)
        k *= 2
    return c


def matrix_power_predictor(x: Configuration, c: tuple[int, int]) -> str:
    """Classify cell c by boolean powers of the dependency matrices.

    InCycle when some power of the adjacency matrix has a 1 on c's
    diagonal entry; ReachesCycle when the matrix augmented with a sink fed
    by every cycle vertex connects c to the sink; Flips otherwise.
    Reference oracle only: cost grows as n^8, so n is capped.
    """
    n = x.n
    if n > MATRIX_SIZE_CAP:
        raise InstanceTooLarge(f"matrix predictor capped at n={MATRIX_SIZE_CAP}")
    i, j = check_cell(c, n)
    g = CellDigraph(x.cells == MINUS, 1, 1)
    a = g.adjacency_matrix()
    size = n * n
    cum = _bool_matpow_cumulative(a, n * n)
    diag = np.diagonal(cum)
    me = i * n + j
    if x.cells[i, j] == MINUS and diag[me]:
        return IN_CYCLE
    # augment with sink u: edge from every cycle vertex to u
    b = np.zeros((size + 1, size + 1), dtype=bool)
    b[:size, :size] = a
    b[:size, size] = diag
    cum_b = _bool_matpow_cumulative(b, n * n + 1)
    if x.cells[i, j] == MINUS and cum_b[me, size]:
        return REACHES_CYCLE
    return FLIPS
