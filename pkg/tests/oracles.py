"""Brute-force reference implementations the production code is checked against.

Everything here is deliberately naive: prefix scans, path intersections
and full enumerations, independent of the engine's own data structures.
"""

from collections import Counter

from hitailor import model as m


def brute_match(paths, rendered_seq):
    """Leaf indices matched by one rendered sequence (prefix scan)."""
    if rendered_seq[-1] == "*":
        prefix = tuple(rendered_seq[:-1])
        return [i for i, p in enumerate(paths) if p[: len(prefix)] == prefix]
    target = tuple(rendered_seq)
    return [i for i, p in enumerate(paths) if p == target]


def brute_resolve(axis, rendered_locator):
    """Half-open leaf range for a list of rendered sequences."""
    paths = m.leaf_paths(axis)
    hits = sorted(i for seq in rendered_locator for i in brute_match(paths, seq))
    assert hits and hits[-1] - hits[0] + 1 == len(set(hits)) == len(hits)
    return hits[0], hits[-1] + 1


def node_chains(axis):
    """For each node: the chain of HeadingNodes from its root down to it."""
    chains = []

    def rec(node, prefix):
        chain = prefix + [node]
        chains.append(chain)
        for c in node.children:
            rec(c, chain)

    for r in axis.roots:
        rec(r, [])
    return chains


def leaf_label_chains(axis):
    """Per leaf (in order): the list of Labels from root to leaf."""
    out = []

    def rec(node, prefix):
        chain = prefix + [node.label]
        if not node.children:
            out.append(chain)
        for c in node.children:
            rec(c, chain)

    for r in axis.roots:
        rec(r, [])
    return out


def brute_lca_level(axis, node_a, node_b):
    """Level of the lowest common ancestor via path intersection; 0 if none."""
    chains = {chain[-1].node_id: chain for chain in node_chains(axis)}
    pa, pb = chains[node_a.node_id], chains[node_b.node_id]
    level = 0
    for x, y in zip(pa, pb):
        if x.node_id != y.node_id:
            break
        level += 1
    return level


def _axis_pairs(level_names, chain):
    pairs = set()
    for lname, label in zip(level_names, chain):
        if label.is_key():
            continue
        if lname == "value" and label.name == "value":
            continue  # synthesized container column from a full fold
        pairs.add((lname, label.name))
    return pairs


def coordinate_multiset(model, skip_derived_cells=False):
    """Multiset of (label coordinate, value) over all non-key cells.

    A coordinate is the set of (level name, label name) pairs from both
    axes; key lines contribute (key name, cell text) instead of their
    heading labels, so melting and pivoting preserve coordinates.
    """
    row_chains = leaf_label_chains(model.row_axis)
    col_chains = leaf_label_chains(model.col_axis)
    key_rows = [i for i, ch in enumerate(row_chains) if any(l.is_key() for l in ch)]
    key_cols = [j for j, ch in enumerate(col_chains) if any(l.is_key() for l in ch)]
    out = Counter()
    for i, rch in enumerate(row_chains):
        if i in key_rows:
            continue
        for j, cch in enumerate(col_chains):
            if j in key_cols:
                continue
            if skip_derived_cells and (
                any(l.is_derived() for l in rch) or any(l.is_derived() for l in cch)
            ):
                continue
            coord = _axis_pairs(model.row_axis.level_names, rch)
            coord |= _axis_pairs(model.col_axis.level_names, cch)
            for kc in key_cols:
                coord.add((col_chains[kc][-1].name, model.entries[i][kc]))
            for kr in key_rows:
                coord.add((row_chains[kr][-1].name, model.entries[kr][j]))
            out[(frozenset(coord), model.entries[i][j])] += 1
    return out


def swap_expected_paths(axis, i):
    """Leaf paths after exchanging levels i and i+1, derived by reordering
    the path list itself (no tree surgery)."""
    paths = m.leaf_paths(axis)
    out = []
    seen_prefix = []
    for p in paths:
        pre = p[: i - 1]
        if pre not in seen_prefix:
            seen_prefix.append(pre)
    for pre in seen_prefix:
        group = [p for p in paths if p[: i - 1] == pre]
        upper = list(dict.fromkeys(p[i] for p in group))
        lower = list(dict.fromkeys(p[i - 1] for p in group))
        for u in upper:
            for lo in lower:
                for p in group:
                    if p[i - 1] == lo and p[i] == u:
                        out.append(pre + (u, lo) + p[i + 1:])
    return out


def congruent_level_nodes(axis, level, leaf_extent):
    """All nodes at a level whose subtree spans exactly leaf_extent leaves."""
    return [n for n, _, lv in m.walk(axis) if lv == level and n.leaf_count() == leaf_extent]
