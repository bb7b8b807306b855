"""Gadget tiles for compiling monotone circuits into initial configurations.

A gadget set is a collection of fixed-size tiles (frozen +1 scaffolds on a
-1 background) for one neighborhood family.  Signals are travelling fronts
of flipped cells: a vertical signal descends a "lane" column held up by
static support columns east of it, a horizontal signal travels west on two
adjacent rows held up by static support rows above it.  Tiles abut on a
uniform pitch so an output port of one tile aligns with an input port of
its neighbor.

Wire and corner tiles are constructed directly from the support-budget
arithmetic below.  The junction tiles (AND, OR, crossover, duplicator)
combine a constructed scaffold with a small frozen interior window that was
found by a bounded pattern search and is shipped as package data; every
tile is re-verified by exhaustive simulation in build_gadget_set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import FamilyOutOfRange, GadgetConstructionFailed
from .grid import MINUS, PLUS, Configuration, LNeighborhood, flip_time_map

# ---------------------------------------------------------------------------
# Neighborhood families


@dataclass(frozen=True)
class Contiguous:
    """S_E = {1..k_e}, S_N = {1..k_n} with k_e, k_n >= 2."""

    k_e: int
    k_n: int

    def __post_init__(self):
        if self.k_e < 2 or self.k_n < 2:
            raise FamilyOutOfRange("contiguous family needs k_e, k_n >= 2")

    def neighborhood(self) -> LNeighborhood:
        return LNeighborhood(tuple(range(1, self.k_n + 1)),
                             tuple(range(1, self.k_e + 1)))


@dataclass(frozen=True)
class Periodic:
    """S_E = {p, 2p, ..., n_e * p}, S_N = {p', ..., n_n * p'}."""

    p: int
    p_prime: int
    n_e: int
    n_n: int

    def __post_init__(self):
        if self.p < 1 or self.p_prime < 1:
            raise FamilyOutOfRange("periods must be >= 1")
        if self.n_e < 2 or self.n_n < 2:
            raise FamilyOutOfRange("periodic family needs |S_E|, |S_N| >= 2")

    def neighborhood(self) -> LNeighborhood:
        return LNeighborhood(
            tuple(self.p_prime * k for k in range(1, self.n_n + 1)),
            tuple(self.p * k for k in range(1, self.n_e + 1)))


@dataclass(frozen=True)
class Sparse2:
    """S_E = {i_e, j_e}, S_N = {i_n, j_n} with 0 < i < j-1 and j != 2i."""

    i_e: int
    j_e: int
    i_n: int
    j_n: int

    def __post_init__(self):
        for i, j, axis in ((self.i_e, self.j_e, "E"), (self.i_n, self.j_n, "N")):
            if not (0 < i < j - 1):
                raise FamilyOutOfRange(f"S_{axis} needs 0 < i < j - 1")
            if j == 2 * i:
                raise FamilyOutOfRange(f"S_{axis} needs j != 2i")

    def neighborhood(self) -> LNeighborhood:
        return LNeighborhood((self.i_n, self.j_n), (self.i_e, self.j_e))


NeighborhoodFamily = Contiguous | Periodic | Sparse2


@dataclass(frozen=True)
class WireParams:
    """Vertical-wire shape constants for a contiguous family."""

    a: int  # static support columns
    b: int  # left offset of the supports from the signal lane
    c: int  # cells per signal row in a horizontal activation template


def wire_params(k_e: int, k_n: int) -> WireParams:
    """Support-column budget for Contiguous(k_e, k_n); axes swap if k_e < k_n."""
    if k_e < 2 or k_n < 2:
        raise FamilyOutOfRange("wire parameters need k_e, k_n >= 2")
    if k_e < k_n:
        k_e, k_n = k_n, k_e
    a = (k_e + k_n) // 2
    b = k_e - a
    c = b + 1 if (k_e + k_n) % 2 == 0 else b
    return WireParams(a, b, c)


# ---------------------------------------------------------------------------
# Canonical geometry (largest east offset >= largest north offset)


class _Geometry:
    """Derived tile geometry for one canonical offset pair.

    T: tile pitch; VX: lane column of a vertical signal; RY: lower row of a
    horizontal signal; v_sup / h_sup: static support offsets east of a lane
    / north of a signal row pair; dashed support rows break into segments
    of `seg` cells so a horizontal signal cannot run without supports.
    """

    def __init__(self, s_north: tuple[int, ...], s_east: tuple[int, ...]):
        self.s_north = tuple(s_north)
        self.s_east = tuple(s_east)
        self.nb = LNeighborhood(self.s_north, self.s_east)
        m = len(self.s_north) + len(self.s_east)
        self.thr = m // 2 + 1
        self.ke = max(self.s_east)
        self.kn = max(self.s_north)
        if self.ke < self.kn:
            raise ValueError("geometry requires max(S_E) >= max(S_N)")
        self.contiguous = (
            self.s_east == tuple(range(1, self.ke + 1))
            and self.s_north == tuple(range(1, self.kn + 1)))
        if self.contiguous:
            wp = wire_params(self.ke, self.kn)
            self.v_sup = tuple(range(wp.b + 1, wp.b + wp.a + 1))
            self.h_sup = tuple(range(1, self.kn + 1))
            self.seed_c = wp.c
            self.dash = self.ke >= self.thr
            self.seg = wp.a
        else:
            self.v_sup = self.s_east
            self.h_sup = self.s_north
            self.seed_c = self.ke
            self.dash = False
            self.seg = 0
        pad = max(self.ke, self.kn)
        self.T = 6 * (pad + 1)
        if self.dash:
            per = self.seg + 1
            self.T = ((self.T + per - 1) // per) * per
        self.VX = 2 * pad + 2
        self.RY = 2 * pad + 2
        # dash phase: a gap column sits immediately east of the lane column
        self.phi = (self.VX + 1 - self.seg) % (self.seg + 1) if self.dash else 0

    def col_solid(self, x: int) -> bool:
        if not self.dash:
            return True
        return ((x - self.phi) % (self.seg + 1)) != self.seg

    def solid_at_most(self, x: int) -> int:
        while not self.col_solid(x):
            x -= 1
        return x

    def solid_at_least(self, x: int) -> int:
        while not self.col_solid(x):
            x += 1
        return x


# ---------------------------------------------------------------------------
# Tiles


@dataclass
class Port:
    name: str
    kind: str  # "in" | "out"
    side: str  # "N" | "E" | "S" | "W"
    cells: tuple[tuple[int, int], ...]  # activation template / probe cells


@dataclass
class Tile:
    """Rectangular pattern plus port metadata.

    pattern is indexed [i, j] with i growing east and j growing north.
    truth maps each subset of input port names to the expected activation
    of every output port at the fixed point.  allow marks cells permitted
    to flip when the tile carries a live signal (used for containment).
    """

    name: str
    pattern: np.ndarray
    ports: dict[str, Port] = field(default_factory=dict)
    truth: dict[frozenset, dict[str, bool]] = field(default_factory=dict)
    allow: np.ndarray | None = None
    zones: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def width(self) -> int:
        return self.pattern.shape[0]

    @property
    def height(self) -> int:
        return self.pattern.shape[1]

    def add_port(self, name, kind, side, cells):
        self.ports[name] = Port(name, kind, side, tuple(cells))

    def in_ports(self) -> list[str]:
        return [p.name for p in self.ports.values() if p.kind == "in"]

    def out_ports(self) -> list[str]:
        return [p.name for p in self.ports.values() if p.kind == "out"]


def _blank(geom: _Geometry, name: str) -> Tile:
    pattern = np.full((geom.T, geom.T), MINUS, dtype=np.int8)
    return Tile(name, pattern)


def _lane(tile, geom, y0, y1, x0):
    """Static support columns for a vertical lane at column x0, rows [y0,y1)."""
    for o in geom.v_sup:
        tile.pattern[x0 + o, y0:y1] = PLUS


def _corridor(tile, geom, x0, x1):
    """Static support rows for the horizontal signal over columns [x0, x1)."""
    for o in geom.h_sup:
        for x in range(x0, x1):
            if geom.col_solid(x):
                tile.pattern[x, geom.RY + 1 + o] = PLUS


def _descent_budget(geom):
    """Support thinning for a rail dropping out of a corridor junction.

    Returns keep[d] for depths d = 1..max(S_N): which v_sup offsets remain
    static at row RY - d so every rail cell still reaches threshold while
    cells west of it do not.
    """
    sn, hs, thr = geom.s_north, set(geom.h_sup), geom.thr
    fired = {0, -1}
    keep = [None]
    for d in range(1, max(sn) + 2):
        plugs = sum(1 for p in hs if p + 1 + d in sn)
        dyn = sum(1 for o in sn if d - o in fired)
        need = max(0, thr - plugs - dyn)
        cap = thr - 1 - plugs
        if need <= cap and dyn > 0:
            fired.add(d)
        keep.append(tuple(sorted(geom.v_sup)[-need:]) if need else ())
    return keep


def _entry_rail(geom):
    """Per-row east support offsets for a rail fed by a vertical wire above.

    The wire's support columns reach k_n rows into the tile, so naive
    support placement drives cells east of the rail to threshold on statics
    alone.  A depth-first search picks per-row support offsets (or rail
    holes) keeping the whole seam quiescent while the rail still fires on
    every row down to the corridor band.  Returns {row: offsets}.
    """
    sn, se = geom.s_north, geom.s_east
    thr, ke, kn, T, ry = geom.thr, geom.ke, geom.kn, geom.T, geom.RY
    band_top = -1 if geom.contiguous else ry + 2 * kn + 2
    launch_top = ry + 1 + kn
    band_opts = [(ke,)]
    pre = {(j, r): True for j in geom.v_sup for r in range(T, T + kn + 1)}

    def quiet_ok(statics, r):
        for j in range(1, ke + 1):
            if statics.get((j, r)):
                continue
            acts = sum(1 for o in sn if statics.get((j, r + o)))
            acts += sum(1 for e in se if statics.get((j + e, r)))
            if acts >= thr:
                return False
        worst = max(sum(1 for e in se if statics.get((e - j, r)))
                    for j in range(1, ke + 1))
        return worst + 1 < thr

    choices = [tuple(q) for q in
               sorted((c for m in range(len(se) + 1)
                       for c in itertools.combinations(se, m)), key=len)]
    failed = set()

    def state_key(r, statics, fired):
        win = range(r + 1, r + kn + 1)
        return (r, tuple(fired.get(w, w >= T) for w in win),
                frozenset(k for k in statics if k[1] in win))

    def dfs(r, statics, fired):
        if r < ry:
            return {}
        key = state_key(r, statics, fired)
        if key in failed:
            return None
        opts = band_opts if r <= band_top else choices
        for q in opts:
            dyns = sum(1 for o in sn if fired.get(r + o, r + o >= T))
            st = dict(statics)
            for e in q:
                st[(e, r)] = True
            fires = dyns + len(q) >= thr
            if r <= launch_top and not fires:
                continue
            if not quiet_ok(st, r):
                continue
            fired[r] = fires
            sub = dfs(r - 1, st, fired)
            if sub is not None:
                if q:
                    sub[r] = q
                return sub
            del fired[r]
        failed.add(key)
        return None

    out = dfs(T - 1, pre, {})
    if out is None:
        raise GadgetConstructionFailed(
            f"no quiescent rail entry for offsets {sn}/{se}")
    return out


def _lower_plugs(tile, geom, vx, ry):
    """Statics letting the lower signal row start from a rail column when
    the north offsets are non-contiguous."""
    thr = geom.thr
    lower_fired = {0}
    for w in range(1, 2 * geom.ke + 2):
        x = vx - w
        acts = 0
        for o in geom.s_north:
            r = ry + o
            if r == ry + 1 or tile.pattern[x, r] == PLUS:
                acts += 1
        for o in geom.s_east:
            if w - o in lower_fired:
                acts += 1
        if acts < thr:
            for o in geom.s_north:
                if acts >= thr:
                    break
                r = ry + o
                if r != ry + 1 and tile.pattern[x, r] == MINUS:
                    tile.pattern[x, r] = PLUS
                    acts += 1
        lower_fired.add(w)


def _vlane_mask(geom, lane_x):
    """Exact vertical signal: only the lane column may fire."""
    allow = np.zeros((geom.T, geom.T), dtype=bool)
    allow[lane_x, :] = True
    return allow


def _hrows_mask(geom):
    """Exact horizontal signal: only the two signal rows may fire."""
    allow = np.zeros((geom.T, geom.T), dtype=bool)
    allow[:, geom.RY:geom.RY + 2] = True
    return allow


def _interface_masks(geom, kind, lane_x):
    """Allow mask and exit zones for a tile with a junction region.

    Outside the central window, fired cells must form the exact wire
    signal (one lane column vertically, two signal rows horizontally), so
    an abutting tile of any type sees precisely the interface it was
    itself verified against.  zones[port] is the exit strip that must stay
    completely unfired whenever that output is expected False; otherwise a
    partial leak could die against one neighbor type yet survive another.
    """
    vx, ry, T = lane_x, geom.RY, geom.T
    mn, mv, mh = max(geom.s_north), max(geom.v_sup), max(geom.h_sup)
    ke = geom.ke
    yw0, yw1 = ry - mn - 2, ry + mn + 3
    if kind in ("or", "and"):
        xw0, xw1 = vx, vx + mv + 2
    elif kind == "cross":
        xw0, xw1 = vx - ke - 2, vx + ke + 2
    elif kind == "dup":
        xw0, xw1 = max(0, vx - 2 * ke - 2), vx + 2
    elif kind == "corner_es":
        xw0, xw1 = vx - 2, vx + mv + 2
    elif kind == "corner_nw":
        xw0, xw1 = max(0, vx - ke - 2), vx + mv + 2
    else:
        raise ValueError(kind)
    allow = np.zeros((T, T), dtype=bool)
    allow[max(xw0, 0):xw1, yw0:yw1] = True
    allow[vx, yw1:T] = True                # N interface: rail column only
    allow[xw1:T, ry:ry + 2] = True         # E interface: signal rows only
    zones = {}
    if kind != "corner_nw":
        s_lane = vx - ke if kind == "dup" else vx
        allow[s_lane, 0:yw0] = True        # S interface
        s_strip = np.zeros((T, T), dtype=bool)
        s_strip[max(s_lane - 2, 0):s_lane + mv + 1, 0:yw0] = True
        zones["s2" if kind == "dup" else "s"] = s_strip
    if kind in ("cross", "dup", "corner_nw"):
        allow[0:xw0, ry:ry + 2] = True     # W interface
        w_strip = np.zeros((T, T), dtype=bool)
        w_strip[0:xw0, ry - 3:ry + 2 + mh] = True
        zones["w"] = w_strip
    return allow, zones


def _t1(inp, out_names):
    """Truth table: each output follows the single input."""
    return {frozenset(): {o: False for o in out_names},
            frozenset([inp]): {o: True for o in out_names}}


def build_vwire(geom, lane_x=None) -> Tile:
    vx = geom.VX if lane_x is None else lane_x
    t = _blank(geom, "vwire" if vx == geom.VX else "vwire2")
    _lane(t, geom, 0, geom.T, vx)
    t.add_port("n", "in", "N", [(vx, geom.T - 1)])
    t.add_port("s", "out", "S", [(vx, 0)])
    t.truth = _t1("n", ["s"])
    t.allow = _vlane_mask(geom, vx)
    return t


def build_hwire(geom) -> Tile:
    t = _blank(geom, "hwire")
    _corridor(t, geom, 0, geom.T)
    ry, c = geom.RY, geom.seed_c
    xe = geom.solid_at_most(geom.T - 1)
    xw = geom.solid_at_least(0)
    t.add_port("e", "in", "E",
               [(xe - i, ry + dj) for i in range(c) for dj in (0, 1)])
    t.add_port("w", "out", "W", [(xw, ry), (xw, ry + 1)])
    t.truth = _t1("e", ["w"])
    t.allow = _hrows_mask(geom)
    return t


def build_corner_es(geom) -> Tile:
    """East input turns south: corridor ends on the lane column."""
    t = _blank(geom, "corner_es")
    vx, ry = geom.VX, geom.RY
    _corridor(t, geom, vx, geom.T)
    keep = _descent_budget(geom)
    for d in range(1, len(keep)):
        for o in keep[d]:
            t.pattern[vx + o, ry - d] = PLUS
    _lane(t, geom, 0, ry - len(keep) + 1, vx)
    c = geom.seed_c
    xe = geom.solid_at_most(geom.T - 1)
    t.add_port("e", "in", "E",
               [(xe - i, ry + dj) for i in range(c) for dj in (0, 1)])
    t.add_port("s", "out", "S", [(vx, 0)])
    t.truth = _t1("e", ["s"])
    t.allow, t.zones = _interface_masks(geom, "corner_es", vx)
    return t


def build_corner_nw(geom, lane_x=None) -> Tile:
    """North input turns west: the rail ends on the corridor rows."""
    vx = geom.VX if lane_x is None else lane_x
    t = _blank(geom, "corner_nw" if vx == geom.VX else "corner_nw2")
    ry = geom.RY
    for r, offs in _entry_rail(geom).items():
        for o in offs:
            t.pattern[vx + o, r] = PLUS
    _corridor(t, geom, 0, vx - geom.ke + 1 if geom.contiguous else vx)
    if not geom.contiguous:
        _lower_plugs(t, geom, vx, ry)
    xw = geom.solid_at_least(0)
    t.add_port("n", "in", "N", [(vx, geom.T - 1)])
    t.add_port("w", "out", "W", [(xw, ry), (xw, ry + 1)])
    t.truth = _t1("n", ["w"])
    t.allow, t.zones = _interface_masks(geom, "corner_nw", vx)
    return t


def _junction_base(geom, kind, lane_x) -> Tile:
    """Scaffold around a searched junction interior."""
    vx, ry, T = lane_x, geom.RY, geom.T
    suffix = "" if lane_x == geom.VX else "2"
    t = _blank(geom, kind + suffix)
    if kind in ("or", "and"):
        _lane(t, geom, 0, T, vx)
        _corridor(t, geom, vx, T)
    elif kind == "cross":
        for r, offs in _entry_rail(geom).items():
            for o in offs:
                t.pattern[vx + o, r] = PLUS
        _lane(t, geom, 0, ry - 2, vx)
        _corridor(t, geom, vx + 2, T)
        _corridor(t, geom, 0, vx - geom.ke)
    elif kind == "dup":
        v2 = vx - geom.ke
        for r, offs in _entry_rail(geom).items():
            for o in offs:
                t.pattern[vx + o, r] = PLUS
        _corridor(t, geom, 0, vx - geom.ke + 1 if geom.contiguous else vx)
        if not geom.contiguous:
            _lower_plugs(t, geom, vx, ry)
        _lane(t, geom, 0, ry, v2)
    else:
        raise ValueError(kind)
    return t


def _junction_window(geom, kind, lane_x):
    """Tile-local cells overridden by the searched interior pattern."""
    vx, ry = lane_x, geom.RY
    mn = max(geom.s_north)
    if kind in ("or", "and"):
        mv = max(geom.v_sup)
        return [(x, y) for x in range(vx, vx + mv + 2)
                for y in range(ry - mn - 2, ry + mn + 3)]
    if kind == "cross":
        return [(x, y) for x in range(vx - geom.ke - 2, vx + geom.ke + 2)
                for y in range(ry - mn - 2, ry + mn + 3)]
    if kind == "dup":
        v2 = vx - geom.ke
        return [(x, y) for x in range(max(0, v2 - geom.ke - 2), vx + 2)
                for y in range(ry - mn - 2, ry + mn + 3)]
    raise ValueError(kind)


_TRUTH_2IN = {
    "or": lambda n, e: {"s": n or e},
    "and": lambda n, e: {"s": n and e},
    "cross": lambda n, e: {"s": n, "w": e},
}


def build_junction(geom, kind, interior, lane_x=None) -> Tile:
    """Junction tile from scaffold plus searched interior bits."""
    vx = geom.VX if lane_x is None else lane_x
    t = _junction_base(geom, kind, vx)
    window = _junction_window(geom, kind, vx)
    if len(interior) != len(window):
        raise GadgetConstructionFailed(
            f"interior size {len(interior)} != window {len(window)} "
            f"for {kind} on {geom.s_north}/{geom.s_east}")
    for (x, y), bit in zip(window, interior):
        t.pattern[x, y] = PLUS if bit else MINUS
    ry, c = geom.RY, geom.seed_c
    xe = geom.solid_at_most(geom.T - 1)
    xw = geom.solid_at_least(0)
    if kind in ("or", "and", "cross"):
        t.add_port("n", "in", "N", [(vx, geom.T - 1)])
        t.add_port("e", "in", "E",
                   [(xe - i, ry + dj) for i in range(c) for dj in (0, 1)])
        t.add_port("s", "out", "S", [(vx, 0)])
        if kind == "cross":
            t.add_port("w", "out", "W", [(xw, ry), (xw, ry + 1)])
        fn = _TRUTH_2IN[kind]
        t.truth = {
            frozenset(k for k, v in (("n", n), ("e", e)) if v): fn(n, e)
            for n in (False, True) for e in (False, True)}
    else:  # dup
        v2 = vx - geom.ke
        t.add_port("n", "in", "N", [(vx, geom.T - 1)])
        t.add_port("w", "out", "W", [(xw, ry), (xw, ry + 1)])
        t.add_port("s2", "out", "S", [(v2, 0)])
        t.truth = _t1("n", ["w", "s2"])
    t.allow, t.zones = _interface_masks(geom, kind, vx)
    return t


# ---------------------------------------------------------------------------
# Shipped junction interiors


def _family_tag(fam: NeighborhoodFamily) -> str:
    if isinstance(fam, Contiguous):
        return f"contiguous_{fam.k_e}_{fam.k_n}"
    if isinstance(fam, Sparse2):
        return f"sparse2_{fam.i_e}_{fam.j_e}_{fam.i_n}_{fam.j_n}"
    raise ValueError("interiors are stored per contiguous/sparse2 tuple")


def load_interiors(tag: str) -> dict[str, np.ndarray]:
    """Read searched junction interiors shipped as package data."""
    ref = resources.files("freezemaj").joinpath(f"data/interiors_{tag}.txt")
    try:
        text = ref.read_text()
    except FileNotFoundError:
        raise GadgetConstructionFailed(
            f"no shipped junction interiors for family {tag}") from None
    out: dict[str, np.ndarray] = {}
    lines = [ln.rstrip("\n") for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    i = 0
    while i < len(lines):
        head = lines[i].split()
        if head[0] != "interior":
            raise GadgetConstructionFailed(f"bad interiors file near {lines[i]!r}")
        kind = head[1]
        w, h = int(lines[i + 1].split()[1]), int(lines[i + 1].split()[2])
        rows = lines[i + 2:i + 2 + h]
        grid = np.zeros((w, h), dtype=bool)
        for r, row in enumerate(rows):
            for x, ch in enumerate(row):
                grid[x, h - 1 - r] = ch == "+"
        # window order is x-major, matching _junction_window
        out[kind] = np.array([grid[x, y] for x in range(w) for y in range(h)])
        i += 2 + h
    return out


def format_interiors(interiors: dict[str, tuple[int, int, np.ndarray]]) -> str:
    """Inverse of load_interiors; values are (w, h, flat bits)."""
    chunks = []
    for kind, (w, h, bits) in interiors.items():
        grid = np.array(bits, dtype=bool).reshape(w, h)
        rows = ["".join("+" if grid[x, h - 1 - r] else "-" for x in range(w))
                for r in range(h)]
        chunks.append("\n".join([f"interior {kind}", f"size {w} {h}"] + rows))
    return "\n".join(chunks) + "\n"


# ---------------------------------------------------------------------------
# Gadget sets


@dataclass
class GadgetSet:
    """Verified tiles on a uniform pitch for one neighborhood family.

    tiles always includes the five public gadgets (vwire, hwire, and, or,
    cross) plus the routing tiles used by the circuit layout.  scale is the
    per-axis inflation factor ((1, 1) except for Periodic families), and
    scale_k records the uniform pitch constant of Sparse2 sets.
    """

    family: NeighborhoodFamily
    geom: _Geometry
    tiles: dict[str, Tile]
    pitch: tuple[int, int]
    scale: tuple[int, int] = (1, 1)
    transposed: bool = False
    scale_k: int | None = None

    def neighborhood(self) -> LNeighborhood:
        return self.family.neighborhood()


_PUBLIC = ("vwire", "hwire", "and", "or", "cross")
_ROUTING = ("empty", "corner_es", "corner_nw", "dup",
            "vwire2", "cross2", "corner_nw2")


def _build_canonical_tiles(geom: _Geometry, tag: str) -> dict[str, Tile]:
    interiors = load_interiors(tag)
    v2 = geom.VX - geom.ke
    tiles = {
        "empty": _blank(geom, "empty"),
        "vwire": build_vwire(geom),
        "vwire2": build_vwire(geom, lane_x=v2),
        "hwire": build_hwire(geom),
        "corner_es": build_corner_es(geom),
        "corner_nw": build_corner_nw(geom),
        "corner_nw2": build_corner_nw(geom, lane_x=v2),
    }
    tiles["empty"].allow = np.zeros((geom.T, geom.T), dtype=bool)
    for kind in ("or", "and", "cross", "dup"):
        if kind not in interiors:
            raise GadgetConstructionFailed(
                f"shipped interiors for {tag} lack the {kind} junction")
        tiles[kind] = build_junction(geom, kind, interiors[kind])
    tiles["cross2"] = build_junction(geom, "cross", interiors["cross"],
                                     lane_x=v2)
    return tiles


_SIDE_T = {"N": "E", "E": "N", "S": "W", "W": "S"}
_NAME_T = {"n": "e", "e": "n", "s": "w", "w": "s", "s2": "w2", "w2": "s2",
           "n2": "e2", "e2": "n2"}
_TILE_T = {"vwire": "hwire", "hwire": "vwire", "corner_es": "corner_nw",
           "corner_nw": "corner_es", "vwire2": "hwire2",
           "corner_nw2": "corner_es2", "cross2": "cross2"}


def transpose_tile(tile: Tile) -> Tile:
    """Mirror a tile across the main diagonal, swapping the two axes."""
    t = Tile(_TILE_T.get(tile.name, tile.name), tile.pattern.T.copy())
    for p in tile.ports.values():
        t.add_port(_NAME_T[p.name], p.kind, _SIDE_T[p.side],
                   [(j, i) for (i, j) in p.cells])
    t.truth = {
        frozenset(_NAME_T[n] for n in combo):
            {_NAME_T[o]: v for o, v in outs.items()}
        for combo, outs in tile.truth.items()}
    t.allow = tile.allow.T.copy() if tile.allow is not None else None
    t.zones = {_NAME_T[k]: z.T.copy() for k, z in tile.zones.items()}
    return t


def inflate_tile(tile: Tile, sx: int, sy: int) -> Tile:
    """Spread a tile onto the (sx, sy) subgrid; off-class cells stay -1."""
    w, h = tile.pattern.shape
    pattern = np.full((w * sx, h * sy), MINUS, dtype=np.int8)
    pattern[::sx, ::sy] = tile.pattern
    t = Tile(tile.name, pattern)
    for p in tile.ports.values():
        t.add_port(p.name, p.kind, p.side,
                   [(i * sx, j * sy) for (i, j) in p.cells])
    t.truth = dict(tile.truth)
    if tile.allow is not None:
        allow = np.zeros((w * sx, h * sy), dtype=bool)
        allow[::sx, ::sy] = tile.allow
        t.allow = allow
    for k, z in tile.zones.items():
        zz = np.zeros((w * sx, h * sy), dtype=bool)
        zz[::sx, ::sy] = z
        t.zones[k] = zz
    return t


_SET_CACHE: dict[NeighborhoodFamily, GadgetSet] = {}


def build_gadget_set(family: NeighborhoodFamily, verify: bool = True) -> GadgetSet:
    """Construct (and verify) the tile set for a neighborhood family."""
    if family in _SET_CACHE:
        return _SET_CACHE[family]
    if isinstance(family, Contiguous):
        transposed = family.k_e < family.k_n
        ke, kn = ((family.k_n, family.k_e) if transposed
                  else (family.k_e, family.k_n))
        geom = _Geometry(tuple(range(1, kn + 1)), tuple(range(1, ke + 1)))
        tiles = _build_canonical_tiles(geom, f"contiguous_{ke}_{kn}")
        if transposed:
            tiles = {transpose_tile(t).name: transpose_tile(t)
                     for t in tiles.values()}
        gs = GadgetSet(family, geom, tiles, (geom.T, geom.T),
                       transposed=transposed)
    elif isinstance(family, Sparse2):
        transposed = family.j_e < family.j_n
        if transposed:
            sn, se = (family.i_e, family.j_e), (family.i_n, family.j_n)
            tag = f"sparse2_{family.i_n}_{family.j_n}_{family.i_e}_{family.j_e}"
        else:
            sn, se = (family.i_n, family.j_n), (family.i_e, family.j_e)
            tag = _family_tag(family)
        geom = _Geometry(sn, se)
        tiles = _build_canonical_tiles(geom, tag)
        if transposed:
            tiles = {transpose_tile(t).name: transpose_tile(t)
                     for t in tiles.values()}
        gs = GadgetSet(family, geom, tiles, (geom.T, geom.T),
                       transposed=transposed, scale_k=geom.T)
    elif isinstance(family, Periodic):
        transposed = family.n_e < family.n_n
        ne, nn = ((family.n_n, family.n_e) if transposed
                  else (family.n_e, family.n_n))
        sx, sy = ((family.p_prime, family.p) if transposed
                  else (family.p, family.p_prime))
        geom = _Geometry(tuple(range(1, nn + 1)), tuple(range(1, ne + 1)))
        tiles = _build_canonical_tiles(geom, f"contiguous_{ne}_{nn}")
        if transposed:
            tiles = {transpose_tile(t).name: transpose_tile(t)
                     for t in tiles.values()}
            sx, sy = sy, sx
        tiles = {n: inflate_tile(t, sx, sy) for n, t in tiles.items()}
        gs = GadgetSet(family, geom, tiles, (geom.T * sx, geom.T * sy),
                       scale=(sx, sy), transposed=transposed)
    else:
        raise FamilyOutOfRange(f"unknown family {family!r}")
    if verify:
        for name, tile in gs.tiles.items():
            if not tile.in_ports():
                continue
            report = verify_gadget(tile, gs)
            if not report.ok:
                raise GadgetConstructionFailed(
                    f"tile {name} failed verification: {report.violations[:3]}")
        _SET_CACHE[family] = gs
    return gs


# ---------------------------------------------------------------------------
# Verification harness


@dataclass
class GadgetReport:
    tile: str
    ok: bool
    violations: list
    checked_combos: int


def _partner(gs: GadgetSet, port: Port) -> Tile | None:
    """Wire tile continuing the scaffold across the given port's side."""
    want_side = {"N": "S", "S": "N", "E": "W", "W": "E"}[port.side]
    want_kind = "out" if port.kind == "in" else "in"
    axis = 0 if port.side in ("N", "S") else 1
    coord = port.cells[0][axis]
    for name in ("vwire", "vwire2", "hwire", "hwire2"):
        tile = gs.tiles.get(name)
        if tile is None:
            continue
        for p in tile.ports.values():
            if (p.kind == want_kind and p.side == want_side
                    and p.cells[0][axis] == coord):
                return tile
    return None


def _assemble_harness(gs: GadgetSet, tile: Tile):
    """3x3 tile neighborhood: tile centered, wire continuations per port."""
    w, h = tile.width, tile.height
    margin = max(max(gs.neighborhood().s_east), max(gs.neighborhood().s_north)) + 2
    pos = {"N": (1, 2), "S": (1, 0), "E": (2, 1), "W": (0, 1)}
    grid: dict[tuple[int, int], Tile | None] = {(x, y): None
                                                for x in range(3)
                                                for y in range(3)}
    grid[(1, 1)] = tile
    for p in tile.ports.values():
        partner = _partner(gs, p)
        if partner is None:
            raise GadgetConstructionFailed(
                f"no scaffold continuation for port {p.name} of {tile.name}")
        grid[pos[p.side]] = partner
    n = max(3 * w, 3 * h) + 2 * margin
    cells = np.full((n, n), MINUS, dtype=np.int8)
    allow = np.zeros((n, n), dtype=bool)
    for (gx, gy), t in grid.items():
        if t is None:
            continue
        ox, oy = margin + gx * w, margin + gy * h
        cells[ox:ox + w, oy:oy + h] = np.maximum(
            cells[ox:ox + w, oy:oy + h], t.pattern)
        if t.allow is not None:
            allow[ox:ox + w, oy:oy + h] |= t.allow
    return grid, cells, allow, margin


def verify_gadget(tile: Tile, gs: GadgetSet, truth_table=None) -> GadgetReport:
    """Check a tile's truth table and containment by exhaustive simulation.

    For every combination of activated input ports: run to the fixed point,
    require each output port (probed across the abutting wire tile) to match
    the truth table, and require that no cell outside the allowed strips
    flips.  The empty combination additionally requires the fixed point to
    equal the initial configuration.
    """
    truth = tile.truth if truth_table is None else truth_table
    nb = gs.neighborhood()
    grid, base, allow, margin = _assemble_harness(gs, tile)
    w, h = tile.width, tile.height
    pos = {"N": (1, 2), "S": (1, 0), "E": (2, 1), "W": (0, 1)}
    violations = []
    combos = 0
    for combo, expected in sorted(truth.items(), key=lambda kv: len(kv[0])):
        combos += 1
        start = base.copy()
        for pname in combo:
            port = tile.ports[pname]
            side_tile = grid[pos[port.side]]
            gx, gy = pos[port.side]
            inj = [p for p in side_tile.ports.values() if p.kind == "in"][0]
            for (i, j) in inj.cells:
                start[margin + gx * w + i, margin + gy * h + j] = PLUS
        times = flip_time_map(Configuration(start), nb)
        fired = times > 0
        if not combo and fired.any():
            violations.append(("quiescence", int(fired.sum())))
        for pname, want in expected.items():
            port = tile.ports[pname]
            gx, gy = pos[port.side]
            side_tile = grid[pos[port.side]]
            probe = [p for p in side_tile.ports.values() if p.kind == "out"][0]
            got = all(fired[margin + gx * w + i, margin + gy * h + j]
                      for (i, j) in probe.cells)
            if got != want:
                violations.append((tuple(sorted(combo)), pname, "want", want,
                                   "got", got))
            if not want and pname in tile.zones:
                zone = fired[margin + w:margin + 2 * w,
                             margin + h:margin + 2 * h] & tile.zones[pname]
                if zone.any():
                    cell = tuple(int(v) for v in np.argwhere(zone)[0])
                    violations.append((tuple(sorted(combo)), pname,
                                       "exit-zone", int(zone.sum()), cell))
        stray = fired & ~allow
        if stray.any():
            cell = tuple(int(v) for v in np.argwhere(stray)[0])
            violations.append((tuple(sorted(combo)), "containment",
                               int(stray.sum()), cell))
    return GadgetReport(tile.name, not violations, violations, combos)


# ---------------------------------------------------------------------------
# Gadget-set file format


def _fmt_family(family: NeighborhoodFamily) -> str:
    if isinstance(family, Contiguous):
        return f"family contiguous {family.k_e} {family.k_n}"
    if isinstance(family, Periodic):
        return (f"family periodic {family.p} {family.p_prime} "
                f"{family.n_e} {family.n_n}")
    return (f"family sparse2 {family.i_e} {family.j_e} "
            f"{family.i_n} {family.j_n}")


def parse_family(kind: str, params: list[int]) -> NeighborhoodFamily:
    if kind == "contiguous":
        return Contiguous(*params)
    if kind == "periodic":
        return Periodic(*params)
    if kind == "sparse2":
        return Sparse2(*params)
    raise FamilyOutOfRange(f"unknown family variant {kind!r}")


def format_gadget_set(gs: GadgetSet) -> str:
    lines = [_fmt_family(gs.family)]
    for name, tile in gs.tiles.items():
        w, h = tile.width, tile.height
        lines.append(f"tile {name} {w} {h}")
        for r in range(h):
            lines.append("".join(
                "+" if tile.pattern[i, h - 1 - r] == PLUS else "-"
                for i in range(w)))
        for p in tile.ports.values():
            axis = 0 if p.side in ("N", "S") else 1
            off = p.cells[0][axis]
            cl = ";".join(f"{i},{j}" for (i, j) in p.cells)
            lines.append(f"port {p.kind} {p.side} {p.name} {off} {cl}")
    return "\n".join(lines) + "\n"


def _truth_from_ports(name: str, tile: Tile) -> None:
    ins = sorted(tile.in_ports())
    outs = sorted(tile.out_ports())
    base = name.rstrip("2")
    truth: dict[frozenset, dict[str, bool]] = {}
    for k in range(len(ins) + 1):
        for combo in itertools.combinations(ins, k):
            on = set(combo)
            if base in ("or", "and"):
                val = (len(on) > 0) if base == "or" else (len(on) == len(ins))
                truth[frozenset(on)] = {o: val for o in outs}
            elif base == "cross":
                pair = {"s": "n", "w": "e", "n": "s", "e": "w"}
                truth[frozenset(on)] = {o: pair[o] in on for o in outs}
            else:
                val = len(on) > 0
                truth[frozenset(on)] = {o: val for o in outs}
    tile.truth = truth


def parse_gadget_set(text: str) -> GadgetSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "family":
        raise FamilyOutOfRange("gadget-set file must start with a family line")
    family = parse_family(head[1], [int(x) for x in head[2:]])
    gs = build_gadget_set(family, verify=False)
    tiles: dict[str, Tile] = {}
    i = 1
    while i < len(lines):
        parts = lines[i].split()
        if parts[0] != "tile":
            raise FamilyOutOfRange(f"expected a tile line, got {lines[i]!r}")
        name, w, h = parts[1], int(parts[2]), int(parts[3])
        pattern = np.full((w, h), MINUS, dtype=np.int8)
        for r in range(h):
            row = lines[i + 1 + r]
            for x, ch in enumerate(row):
                if ch == "+":
                    pattern[x, h - 1 - r] = PLUS
        tile = Tile(name, pattern)
        i += 1 + h
        while i < len(lines) and lines[i].split()[0] == "port":
            _, kind, side, pname, _off, cl = lines[i].split()
            cells = [tuple(int(v) for v in c.split(",")) for c in cl.split(";")]
            tile.add_port(pname, kind, side, cells)
            i += 1
        _truth_from_ports(name, tile)
        ref = gs.tiles.get(name)
        tile.allow = ref.allow if ref is not None else None
        tiles[name] = tile
    return GadgetSet(gs.family, gs.geom, tiles, gs.pitch, gs.scale,
                     gs.transposed, gs.scale_k)
