import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from hitailor import model as m
from hitailor.errors import (
    AmbiguousSequence,
    DuplicateSibling,
    NonContiguous,
    RaggedDepth,
    UnknownLabel,
)

from oracles import brute_match, brute_resolve
from strategies import random_block, random_table


def test_leaf_sequences_row_axis(sales):
    assert [s.labels for s in m.leaf_sequences(sales.row_axis)] == [
        ("Asia", "CHN", "PEK"), ("Asia", "CHN", "SHA"),
        ("Asia", "JPN", "OSA"), ("Asia", "JPN", "TKY"),
        ("Europe", "FRA", "PAR"), ("Europe", "FRA", "MRS"),
        ("Europe", "GBR", "LON"), ("Europe", "GBR", "LIV"),
    ]


def test_leaf_sequences_col_axis(sales):
    assert [s.labels for s in m.leaf_sequences(sales.col_axis)] == [
        ("2020", "&"), ("2020", "spr"), ("2020", "aut"),
        ("2021", "&"), ("2021", "spr"), ("2021", "aut"),
    ]
    assert all(not s.wildcard_tail for s in m.leaf_sequences(sales.col_axis))


def test_leaf_sequences_single_level():
    axis = m.make_axis([m.make_node(m.Label("a")), m.make_node(m.Label("b"))])
    assert [s.labels for s in m.leaf_sequences(axis)] == [("a",), ("b",)]


def test_detect_structure_bicluster(sales):
    ann = m.detect_structure(sales.col_axis)
    assert ann.bicluster_from == 1
    assert ann.uniform_boundaries == (True,)


def test_detect_structure_hierarchy(sales):
    ann = m.detect_structure(sales.row_axis)
    assert ann.bicluster_from is None
    assert ann.uniform_boundaries == (False, False)


def test_detect_structure_single_path():
    axis = m.make_axis([m.make_node(m.Label("a"), [m.make_node(m.Label("b"))])])
    assert m.detect_structure(axis).bicluster_from == 1


def test_detect_structure_partial_suffix():
    # distinct countries but identical season leaves: bicluster from the bottom level
    roots = [
        m.make_node(m.Label(c), [m.make_node(m.Label(s)) for s in ("spr", "aut")])
        for c in ("CHN", "JPN")
    ]
    deeper = m.make_axis([
        m.make_node(m.Label("Asia"), [roots[0]]),
        m.make_node(m.Label("Europe"), [roots[1]]),
    ])
    ann = m.detect_structure(deeper)
    assert ann.uniform_boundaries == (False, True)
    assert ann.bicluster_from == 3


def test_resolve_cell(sales):
    block = m.resolve_locator(sales,
                              m.Locator.parse([["Asia", "CHN", "SHA"]]),
                              m.Locator.parse([["2020", "spr"]]))
    assert block == m.Block(1, 2, 1, 2)
    assert sales.entries[block.row_start][block.col_start] == 131.0


def test_resolve_wildcard_block(sales):
    block = m.resolve_locator(sales,
                              m.Locator.parse([["Europe", "FRA", "*"]]),
                              m.Locator.parse([["2021", "*"]]))
    assert block == m.Block(4, 6, 3, 6)


def test_resolve_region_block(sales):
    block = m.resolve_locator(sales,
                              m.Locator.parse([["Asia", "*"]]),
                              m.Locator.parse([["2020", "*"]]))
    assert block == m.Block(0, 4, 0, 3)
    assert brute_resolve(sales.row_axis, [["Asia", "*"]]) == (0, 4)
    assert brute_resolve(sales.col_axis, [["2020", "*"]]) == (0, 3)


def test_resolve_unknown_label(sales):
    with pytest.raises(UnknownLabel):
        m.resolve_locator(sales, m.Locator.parse([["Asia", "XXX", "*"]]),
                          m.Locator.parse([["2020", "spr"]]))


def test_resolve_non_contiguous(sales):
    row = m.Locator.parse([["Asia", "CHN", "*"], ["Europe", "FRA", "*"]])
    with pytest.raises(NonContiguous):
        m.resolve_locator(sales, row, m.Locator.parse([["2020", "*"]]))


def test_resolve_ambiguous_distinct_paths():
    # two distinct parents each holding an "x" leaf, built outside the factories
    roots = (
        m.HeadingNode(m.Label("a"), (m.HeadingNode(m.Label("x")),)),
        m.HeadingNode(m.Label("gap")),
        m.HeadingNode(m.Label("a"), (m.HeadingNode(m.Label("x")),)),
    )
    # pad "gap" to depth 2 so only the duplicate paths are at fault
    roots = (roots[0], m.HeadingNode(m.Label("gap"), (m.HeadingNode(m.Label("y")),)), roots[2])
    axis = m.HeadingAxis(roots, 2, ("l1", "l2"))
    with pytest.raises(AmbiguousSequence):
        m.resolve_axis_locator(axis, m.Locator.parse([["a", "x"]]))


def test_locator_of_block(sales):
    row, col = m.locator_of(sales, m.Block(4, 6, 3, 6))
    assert row.render() == [["Europe", "FRA", "*"]]
    assert col.render() == [["2021", "*"]]


def test_locator_of_cell(sales):
    row, col = m.locator_of(sales, m.Block(1, 2, 1, 2))
    assert row.render() == [["Asia", "CHN", "SHA"]]
    assert col.render() == [["2020", "spr"]]


def test_locator_of_full_table(sales):
    row, col = m.locator_of(sales, m.Block(0, 8, 0, 6))
    assert row.render() == [["Asia", "*"], ["Europe", "*"]]
    assert col.render() == [["2020", "*"], ["2021", "*"]]


def test_make_unit_flags(sales):
    unit = m.make_unit(sales, m.Block(4, 6, 3, 6))
    assert unit.row_single_subtree and unit.col_single_subtree
    cross = m.make_unit(sales, m.Block(5, 7, 0, 3))
    assert not cross.row_single_subtree


def test_validate_ok(sales):
    assert m.validate_model(sales) == []


def test_validate_shape_mismatch(sales):
    bad = dataclasses.replace(sales, entries=sales.entries[:7])
    assert any("shape mismatch" in p for p in m.validate_model(bad))


def test_validate_id_collision(sales):
    leaf = m.HeadingNode(m.Label("X"), (), "dup")
    leaf2 = m.HeadingNode(m.Label("Y"), (), "dup")
    axis = m.HeadingAxis((leaf, leaf2), 1, ("l1",))
    bad = m.TableModel(axis, sales.col_axis, tuple(tuple(r[:6]) for r in sales.entries[:2]))
    assert any("id collision" in p for p in m.validate_model(bad))


def test_make_axis_rejects_ragged():
    with pytest.raises(RaggedDepth):
        m.make_axis([
            m.make_node(m.Label("a"), [m.make_node(m.Label("b"))]),
            m.make_node(m.Label("c")),
        ])


def test_make_axis_rejects_duplicate_siblings():
    with pytest.raises(DuplicateSibling):
        m.make_axis([m.make_node(m.Label("a")), m.make_node(m.Label("a"))])


def test_wildcard_only_final():
    with pytest.raises(UnknownLabel):
        m.LabelSequence.parse(["a", "*", "b"])
    with pytest.raises(UnknownLabel):
        m.LabelSequence.parse(["*"])


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=80, deadline=None)
@given(st.randoms(use_true_random=False))
def test_locator_round_trip(rng):
    table = random_table(rng)
    block = random_block(rng, table)
    row, col = m.locator_of(table, block)
    assert m.resolve_locator(table, row, col) == block


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_wildcard_expansion_is_prefix_match(rng):
    table = random_table(rng)
    paths = m.leaf_paths(table.row_axis)
    block = random_block(rng, table)
    row, _ = m.locator_of(table, block)
    matched = sorted(
        i for seq in row.sequences for i in brute_match(paths, list(seq.render()))
    )
    assert matched == list(range(block.row_start, block.row_end))


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_uniformity_flags_match_brute_force(rng):
    table = random_table(rng)
    axis = table.col_axis
    ann = m.detect_structure(axis)
    for i in range(1, axis.depth):
        lists = [tuple(c.name for c in n.children) for n in m.level_nodes(axis, i)]
        assert ann.uniform_boundaries[i - 1] == (len(set(lists)) == 1)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_leaf_order_addresses_entries(rng):
    table = random_table(rng)
    seqs = m.leaf_sequences(table.row_axis)
    for i, seq in enumerate(seqs):
        lo, hi = m.resolve_axis_locator(table.row_axis, m.Locator((seq,)))
        assert lo <= i < hi
