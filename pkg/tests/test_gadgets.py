import numpy as np
import pytest

from freezemaj.errors import FamilyOutOfRange, GadgetConstructionFailed
from freezemaj.gadgets import (
    Contiguous,
    Periodic,
    Sparse2,
    build_gadget_set,
    format_gadget_set,
    parse_family,
    parse_gadget_set,
    transpose_tile,
    verify_gadget,
    wire_params,
)
from freezemaj.grid import PLUS


def test_wire_params_examples():
    assert (wire_params(2, 2).a, wire_params(2, 2).b, wire_params(2, 2).c) == (2, 0, 1)
    assert (wire_params(3, 2).a, wire_params(3, 2).b, wire_params(3, 2).c) == (2, 1, 1)
    assert (wire_params(4, 3).a, wire_params(4, 3).b, wire_params(4, 3).c) == (3, 1, 1)


def test_wire_params_axis_swap():
    # parameters depend only on the unordered pair
    assert wire_params(2, 3) == wire_params(3, 2)
    assert wire_params(3, 4) == wire_params(4, 3)


def test_wire_params_even_odd_rule():
    for ke in range(2, 7):
        for kn in range(2, ke + 1):
            wp = wire_params(ke, kn)
            a, b, c = wp.a, wp.b, wp.c
            assert a == (ke + kn) // 2
            assert b == max(ke, kn) - a
            assert c == (b + 1 if (ke + kn) % 2 == 0 else b)


def test_family_invariants():
    with pytest.raises(FamilyOutOfRange):
        Contiguous(1, 2)
    with pytest.raises(FamilyOutOfRange):
        Periodic(2, 3, 1, 2)
    with pytest.raises(FamilyOutOfRange):
        Sparse2(1, 2, 1, 3)  # needs i < j - 1
    with pytest.raises(FamilyOutOfRange):
        Sparse2(2, 4, 1, 3)  # needs j != 2i
    Sparse2(1, 3, 1, 3)


def test_parse_family():
    assert parse_family("contiguous", [2, 2]) == Contiguous(2, 2)
    assert parse_family("periodic", [2, 3, 2, 2]) == Periodic(2, 3, 2, 2)
    assert parse_family("sparse2", [1, 3, 1, 3]) == Sparse2(1, 3, 1, 3)
    with pytest.raises(FamilyOutOfRange):
        parse_family("hexagonal", [1])


def test_contiguous_2_2_set_verifies():
    gs = build_gadget_set(Contiguous(2, 2))
    for name in ("vwire", "hwire", "and", "or", "cross", "dup"):
        assert name in gs.tiles


def test_every_tile_passes_verify_gadget_again():
    gs = build_gadget_set(Contiguous(2, 2))
    for tile in gs.tiles.values():
        if not tile.truth:
            continue
        report = verify_gadget(tile, gs)
        assert report.ok, report.violations


def test_gate_truth_tables():
    gs = build_gadget_set(Contiguous(2, 2))
    t_and, t_or = gs.tiles["and"], gs.tiles["or"]
    for combo, expected in t_and.truth.items():
        assert expected["s"] == ({"n", "e"} <= set(combo))
    for combo, expected in t_or.truth.items():
        assert expected["s"] == bool(combo)


def test_cross_truth_table_routes_independently():
    gs = build_gadget_set(Contiguous(2, 2))
    for combo, expected in gs.tiles["cross"].truth.items():
        assert expected["s"] == ("n" in combo)
        assert expected["w"] == ("e" in combo)


def test_transpose_tile_involution():
    gs = build_gadget_set(Contiguous(2, 2))
    for tile in gs.tiles.values():
        back = transpose_tile(transpose_tile(tile))
        assert np.array_equal(back.pattern, tile.pattern)
        assert back.name == tile.name
        assert set(back.ports) == set(tile.ports)
        for k, z in tile.zones.items():
            assert np.array_equal(back.zones[k], z)


def test_periodic_set_lives_on_subgrid():
    gs = build_gadget_set(Periodic(2, 3, 2, 2))
    assert gs.scale == (2, 3)
    for tile in gs.tiles.values():
        plus = tile.pattern == PLUS
        off = plus.copy()
        off[::2, ::3] = False
        assert not off.any(), tile.name


def test_uniform_pitch():
    gs = build_gadget_set(Contiguous(2, 2))
    w, h = gs.pitch
    for tile in gs.tiles.values():
        assert (tile.width, tile.height) == (w, h)


def test_port_alignment_across_tiles():
    # abutting tiles meet: every in-port coordinate on a side has a matching
    # out-port coordinate on the opposite side of the wire tile family
    gs = build_gadget_set(Contiguous(2, 2))
    v_in = gs.tiles["vwire"].ports["n"].cells
    v_out = gs.tiles["vwire"].ports["s"].cells
    assert [c[0] for c in v_in] == [c[0] for c in v_out]
    h_in = gs.tiles["hwire"].ports["e"].cells
    h_out = gs.tiles["hwire"].ports["w"].cells
    assert [c[1] for c in h_in] == [c[1] for c in h_out]


def test_gadget_set_roundtrip():
    gs = build_gadget_set(Contiguous(2, 2))
    text = format_gadget_set(gs)
    back = parse_gadget_set(text)
    assert back.family == gs.family
    assert set(back.tiles) == set(gs.tiles)
    for name, tile in gs.tiles.items():
        assert np.array_equal(back.tiles[name].pattern, tile.pattern)
        for pname, port in tile.ports.items():
            other = back.tiles[name].ports[pname]
            assert (other.kind, other.side, other.cells) == \
                (port.kind, port.side, port.cells)


def test_missing_interiors_raise():
    with pytest.raises(GadgetConstructionFailed):
        build_gadget_set(Contiguous(7, 7))
