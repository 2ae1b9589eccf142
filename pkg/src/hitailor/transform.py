"""Structure-preserving rewrites of hierarchical tables.

Three operator pairs, all pure ``TableModel -> TableModel``:

* swap / transpose — reorder levels within an axis, or move a level
  (or the whole heading) across axes;
* to_linear / to_stacked — insert or remove derived aggregate labels;
* fold / unfold — melt heading labels into a key entry column, or
  pivot a key/value column pair back into a heading level.

Every entry keeps its value and is re-addressed through its label
coordinates, so each operator touches each entry O(1) times.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from . import model as m
from .errors import (
    DerivedPresent,
    DuplicateDerived,
    EmptyHistory,
    HiTailorError,
    IrregularGroups,
    LastLevel,
    NonNumeric,
    NotCategorical,
    NothingToRemove,
    NotUniform,
    ScriptError,
    ShapeError,
)

ROW, COL = "row", "col"


@dataclass(frozen=True)
class Swap:
    axis: str
    upper_level: int


@dataclass(frozen=True)
class TransposeLevel:
    source_axis: str
    level: int


@dataclass(frozen=True)
class TransposeTable:
    pass


@dataclass(frozen=True)
class ToLinear:
    axis: str
    level: int
    stat: str


@dataclass(frozen=True)
class ToStacked:
    axis: str
    level: int


@dataclass(frozen=True)
class Fold:
    level: int


@dataclass(frozen=True)
class Unfold:
    key_col_leaf: int
    value_col_leaf: int


TransformOp = Union[Swap, TransposeLevel, TransposeTable, ToLinear, ToStacked, Fold, Unfold]

_OP_TAGS = {
    "swap": Swap, "transpose_level": TransposeLevel, "transpose_table": TransposeTable,
    "to_linear": ToLinear, "to_stacked": ToStacked, "fold": Fold, "unfold": Unfold,
}


def op_from_dict(doc: dict) -> TransformOp:
    try:
        tag = doc["op"]
        cls = _OP_TAGS[tag]
    except (KeyError, TypeError) as e:
        raise ShapeError(f"unknown transform op {doc!r}") from e
    params = {k: v for k, v in doc.items() if k != "op"}
    try:
        return cls(**params)
    except TypeError as e:
        raise ShapeError(f"bad parameters for {tag}: {e}") from e


def op_to_dict(op: TransformOp) -> dict:
    tag = next(t for t, c in _OP_TAGS.items() if isinstance(op, c))
    out = {"op": tag}
    out.update(op.__dict__)
    return out


# ---------------------------------------------------------------------------
# entry lines: a line is the entry vector of one leaf of the chosen axis


def _axis(model: m.TableModel, which: str) -> m.HeadingAxis:
    if which not in (ROW, COL):
        raise ShapeError(f"axis must be 'row' or 'col', not {which!r}")
    return model.row_axis if which == ROW else model.col_axis


def _gathered(model: m.TableModel, which: str, axis: m.HeadingAxis,
              perm: Sequence[int]) -> m.TableModel:
    """New model whose leaf i of `which` is the old leaf perm[i]."""
    if which == ROW:
        entries = tuple(model.entries[p] for p in perm)
        return m.bump(model, row_axis=axis, entries=entries)
    entries = tuple(tuple(row[p] for p in perm) for row in model.entries)
    return m.bump(model, col_axis=axis, entries=entries)


def _path_index(paths: Sequence[tuple[str, ...]]) -> dict[tuple[str, ...], deque]:
    """Ordered multiset of leaf indices per path; replicated paths queue up."""
    index: dict[tuple[str, ...], deque] = {}
    for i, p in enumerate(paths):
        index.setdefault(p, deque()).append(i)
    return index


def _pop_path(index: dict, path: tuple[str, ...], what: str) -> int:
    bucket = index.get(path)
    if not bucket:
        raise NotUniform(f"{what}: no leaf left for path {path}")
    return bucket.popleft()


# ---------------------------------------------------------------------------
# Swap


def swap(model: m.TableModel, axis: str, upper_level: int) -> m.TableModel:
    """Exchange adjacent levels i and i+1 of one axis."""
    ax = _axis(model, axis)
    i = upper_level
    if not 1 <= i < ax.depth:
        raise ShapeError(f"upper_level {i} out of range for depth {ax.depth}")
    if not m.boundary_is_uniform(ax, i):
        raise NotUniform(
            f"levels {i} and {i + 1} of the {axis} headings do not form a cross product"
        )

    def swap_children(nodes: Sequence[m.HeadingNode]) -> list[m.HeadingNode]:
        k = len(nodes[0].children)
        out = []
        for j in range(k):
            lifted = nodes[0].children[j].label
            kids = [m.make_node(x.label, x.children[j].children) for x in nodes]
            out.append(m.make_node(lifted, kids))
        return out

    def rebuild(node: m.HeadingNode, level: int) -> m.HeadingNode:
        if level == i - 1:
            return m.make_node(node.label, swap_children(node.children))
        return m.make_node(node.label, [rebuild(c, level + 1) for c in node.children])

    if i == 1:
        roots = swap_children(ax.roots)
    else:
        roots = [rebuild(r, 1) for r in ax.roots]
    names = list(ax.level_names)
    names[i - 1], names[i] = names[i], names[i - 1]
    new_axis = m.HeadingAxis(tuple(roots), ax.depth, tuple(names))

    old_index = _path_index(m.leaf_paths(ax))
    perm = []
    for path in m.leaf_paths(new_axis):
        old_path = list(path)
        old_path[i - 1], old_path[i] = old_path[i], old_path[i - 1]
        perm.append(_pop_path(old_index, tuple(old_path), "swap"))
    return _gathered(model, axis, new_axis, perm)


# ---------------------------------------------------------------------------
# Transpose


def transpose_table(model: m.TableModel) -> m.TableModel:
    entries = tuple(zip(*model.entries))
    return m.TableModel(model.col_axis, model.row_axis, entries, model.version + 1)


def _uniform_level_labels(roots: Sequence[m.HeadingNode], level: int,
                          what: str) -> list[m.Label]:
    """The shared ordered label list of one level, or NotUniform."""
    if level == 1:
        return [r.label for r in roots]
    parents = [n for r in roots for n, _, lv in _walk_nodes(r) if lv == level - 1]
    lists = [tuple(c.name for c in p.children) for p in parents]
    if len(set(lists)) != 1:
        raise NotUniform(f"{what}: level {level} differs between parents")
    return [c.label for c in parents[0].children]


def _walk_nodes(root: m.HeadingNode, level: int = 1):
    yield root, root.name, level
    for c in root.children:
        yield from _walk_nodes(c, level + 1)


def _names_tree(node: m.HeadingNode):
    return (node.name, node.label.kind, node.label.stat,
            tuple(_names_tree(c) for c in node.children))


def _splice_level(roots: Sequence[m.HeadingNode], level: int, depth: int,
                  what: str) -> list[m.HeadingNode]:
    """Remove one level from a forest; sibling subtrees below it must agree."""

    def below(node: m.HeadingNode):
        return tuple(_names_tree(c) for c in node.children)

    def merge(removed: Sequence[m.HeadingNode]) -> list[m.HeadingNode]:
        if len({below(c) for c in removed}) != 1:
            raise NotUniform(f"{what}: subtrees under level {level} differ, removal is undefined")
        return list(removed[0].children)

    def rebuild(node: m.HeadingNode, lv: int) -> m.HeadingNode:
        if lv == level - 1:
            if level == depth:
                return m.make_node(node.label)
            return m.make_node(node.label, merge(node.children))
        return m.make_node(node.label, [rebuild(c, lv + 1) for c in node.children])

    if level == 1:
        if depth == 1:
            raise LastLevel("cannot remove the only level of an axis")
        if len({below(r) for r in roots}) != 1:
            raise NotUniform(f"{what}: root subtrees differ, removal is undefined")
        return list(roots[0].children)
    return [rebuild(r, 1) for r in roots]


def transpose_level(model: m.TableModel, source_axis: str, level: int) -> m.TableModel:
    """Move level ``level`` of one axis to the bottom of the other axis."""
    src = _axis(model, source_axis)
    if src.depth == 1:
        raise LastLevel("cannot remove the only level of an axis")
    if not 1 <= level <= src.depth:
        raise ShapeError(f"level {level} out of range for depth {src.depth}")
    labels = _uniform_level_labels(src.roots, level, "transpose")
    reduced_roots = _splice_level(src.roots, level, src.depth, "transpose")
    red_names = tuple(n for j, n in enumerate(src.level_names) if j != level - 1)
    reduced = m.HeadingAxis(tuple(reduced_roots), src.depth - 1, red_names)

    target_which = COL if source_axis == ROW else ROW
    tgt = _axis(model, target_which)

    def extend(node: m.HeadingNode) -> m.HeadingNode:
        if not node.children:
            return m.make_node(node.label, [m.make_node(lb) for lb in labels])
        return m.make_node(node.label, [extend(c) for c in node.children])

    new_target = m.HeadingAxis(
        tuple(extend(r) for r in tgt.roots), tgt.depth + 1,
        tgt.level_names + (src.level_names[level - 1],),
    )

    # address old source leaves by (path without the level, moved label)
    old_paths = m.leaf_paths(src)
    combo_index: dict[tuple, deque] = {}
    for idx, p in enumerate(old_paths):
        key = (p[:level - 1] + p[level:], p[level - 1])
        combo_index.setdefault(key, deque()).append(idx)
    reduced_paths = m.leaf_paths(reduced)
    k = len(labels)
    lookup = [[_pop_path(combo_index, (rp, lb.name), "transpose") for lb in labels]
              for rp in reduced_paths]
    if any(combo_index.values()):
        raise NotUniform("transpose: some leaves were not covered by the level removal")

    if source_axis == COL:
        # each old row fans out into k rows, columns shrink to the reduced paths
        entries = tuple(
            tuple(old_row[lookup[i][j]] for i in range(len(reduced_paths)))
            for old_row in model.entries for j in range(k)
        )
        return m.TableModel(new_target, reduced, entries, model.version + 1)
    # rows shrink to the reduced paths, each old column fans out into k columns
    n_cols = model.n_cols
    entries = []
    for i in range(len(reduced_paths)):
        sources = [model.entries[lookup[i][j]] for j in range(k)]
        entries.append(tuple(sources[j][c] for c in range(n_cols) for j in range(k)))
    return m.TableModel(reduced, new_target, tuple(entries), model.version + 1)


# ---------------------------------------------------------------------------
# ToLinear / ToStacked


def _stat_value(stat: str, values: list[float]) -> float:
    if stat == "sum":
        return float(sum(values))
    if stat == "avg":
        return float(sum(values) / len(values))
    if stat == "min":
        return float(min(values))
    if stat == "max":
        return float(max(values))
    raise ShapeError(f"unknown stat {stat!r}")


def _agg_over(stat: str, values_at, members: list[int], owner: str) -> m.Value:
    vals: list[float] = []
    for j in members:
        v = values_at[j]
        if v is None:
            continue
        if isinstance(v, str):
            raise NonNumeric(f"text entry {v!r} inside the aggregated slice of {owner!r}")
        vals.append(v)
    return _stat_value(stat, vals) if vals else None


def to_linear(model: m.TableModel, axis: str, level: int, stat: str) -> m.TableModel:
    """Insert a derived aggregate as the first child of every node at ``level``."""
    if stat not in m.STATS:
        raise ShapeError(f"stat must be one of {m.STATS}, not {stat!r}")
    ax = _axis(model, axis)
    if not 1 <= level < ax.depth:
        raise ShapeError(f"level {level} must be above the bottom level {ax.depth}")

    leaf_pos = {n.node_id: i for i, n in enumerate(m.leaf_nodes(ax))}

    def plain_leaf_ids(node: m.HeadingNode) -> list[str]:
        # leaves under a node reached without crossing a derived label
        if not node.children:
            return [node.node_id]
        out: list[str] = []
        for c in node.children:
            if c.label.is_derived():
                continue
            out.extend(plain_leaf_ids(c))
        return out

    groups: list[tuple[str, list[int]]] = []   # (owner name, member leaf indices)
    group_of_leaf: dict[str, int] = {}         # derived leaf id -> group number

    def make_chain(node: m.HeadingNode, chain_depth: int) -> m.HeadingNode:
        for existing in node.children:
            if existing.label.is_derived() and existing.label.stat == stat:
                raise DuplicateDerived(
                    f"{existing.name!r} already aggregates {stat} under {node.name!r}"
                )
        leaf = m.make_node(m.derived_label(stat))
        group_of_leaf[leaf.node_id] = len(groups)
        groups.append((node.name, [leaf_pos[x] for x in plain_leaf_ids(node)]))
        chain = leaf
        for _ in range(chain_depth - 1):
            chain = m.make_node(m.derived_label(stat), [chain])
        return chain

    def rebuild(node: m.HeadingNode, lv: int) -> m.HeadingNode:
        if lv == level:
            if node.label.is_derived() or node.label.is_key():
                return node  # never aggregate inside derived or key chains
            chain = make_chain(node, ax.depth - level)
            return m.make_node(node.label, [chain] + list(node.children))
        return m.make_node(node.label, [rebuild(c, lv + 1) for c in node.children])

    roots = [rebuild(r, 1) for r in ax.roots]
    if not groups:
        raise ShapeError(f"no aggregatable nodes at level {level}")
    new_axis = m.HeadingAxis(tuple(roots), ax.depth, ax.level_names)

    # per new leaf: a source column/row to copy or a group to aggregate
    plan: list[tuple[bool, int]] = []
    for leaf in m.leaf_nodes(new_axis):
        g = group_of_leaf.get(leaf.node_id)
        if g is not None:
            plan.append((True, g))
        else:
            plan.append((False, leaf_pos[leaf.node_id]))

    if axis == COL:
        out = []
        for row in model.entries:
            aggs = [_agg_over(stat, row, members, owner) for owner, members in groups]
            out.append(tuple(aggs[i] if is_agg else row[i]
                             for is_agg, i in plan))
        return m.bump(model, col_axis=new_axis, entries=tuple(out))
    agg_rows = []
    for owner, members in groups:
        sources = [model.entries[r] for r in members]
        agg_rows.append(tuple(
            _agg_over(stat, [srow[j] for srow in sources], range(len(sources)), owner)
            for j in range(model.n_cols)
        ))
    entries = tuple(agg_rows[i] if is_agg else model.entries[i] for is_agg, i in plan)
    return m.bump(model, row_axis=new_axis, entries=entries)


def to_stacked(model: m.TableModel, axis: str, level: int) -> m.TableModel:
    """Remove every derived child directly below the nodes at ``level``."""
    ax = _axis(model, axis)
    if not 1 <= level < ax.depth:
        raise ShapeError(f"level {level} must be above the bottom level {ax.depth}")
    removed = 0

    def rebuild(node: m.HeadingNode, lv: int) -> m.HeadingNode:
        nonlocal removed
        if lv == level:
            kept = [c for c in node.children if not c.label.is_derived()]
            removed += len(node.children) - len(kept)
            if not kept:
                raise ShapeError(
                    f"removing derived children would leave {node.name!r} empty"
                )
            return m.make_node(node.label, kept)
        return m.make_node(node.label, [rebuild(c, lv + 1) for c in node.children])

    roots = [rebuild(r, 1) for r in ax.roots]
    if removed == 0:
        raise NothingToRemove(f"no derived labels below level {level}")
    new_axis = m.HeadingAxis(tuple(roots), ax.depth, ax.level_names)
    leaf_pos = {n.node_id: i for i, n in enumerate(m.leaf_nodes(ax))}
    perm = [leaf_pos[n.node_id] for n in m.leaf_nodes(new_axis)]
    return _gathered(model, axis, new_axis, perm)


# ---------------------------------------------------------------------------
# Fold / Unfold


def _key_chain(name: str, depth: int) -> m.HeadingNode:
    node = m.make_node(m.Label(name, m.KEY))
    for _ in range(depth - 1):
        node = m.make_node(m.Label(name, m.KEY), [node])
    return node


def fold(model: m.TableModel, level: int) -> m.TableModel:
    """Melt column level ``level`` into a leftmost key column of text cells."""
    ax = model.col_axis
    if not 1 <= level <= ax.depth:
        raise ShapeError(f"level {level} out of range for depth {ax.depth}")
    key_roots = [r for r in ax.roots if r.label.is_key()]
    value_roots = [r for r in ax.roots if not r.label.is_key()]
    if not value_roots:
        raise ShapeError("no value columns left to fold")

    labels = _uniform_level_labels(value_roots, level, "fold")
    if any(lb.is_derived() for lb in labels):
        raise DerivedPresent(
            f"level {level} holds derived labels; remove them with to_stacked first"
        )
    k = len(labels)

    if ax.depth == 1:
        reduced_roots = [m.make_node(m.Label("value"))]
        red_names: tuple[str, ...] = ("value",)
        new_depth = 1
    else:
        reduced_roots = _splice_level(value_roots, level, ax.depth, "fold")
        red_names = tuple(n for j, n in enumerate(ax.level_names) if j != level - 1)
        new_depth = ax.depth - 1

    new_key = _key_chain(ax.level_names[level - 1], new_depth)
    old_keys = [_key_chain(r.name, new_depth) for r in key_roots]
    new_col_axis = m.HeadingAxis(tuple([new_key] + old_keys + list(reduced_roots)),
                                 new_depth, red_names)

    # replicate each row leaf k times, key varying fastest
    def replicate(node: m.HeadingNode) -> list[m.HeadingNode]:
        if not node.children:
            return [m.make_node(node.label) for _ in range(k)]
        return [m.make_node(node.label, [g for c in node.children for g in replicate(c)])]

    new_row_axis = m.HeadingAxis(
        tuple(r for root in model.row_axis.roots for r in replicate(root)),
        model.row_axis.depth, model.row_axis.level_names,
    )

    old_key_pos: list[int] = []
    combo_index: dict[tuple, deque] = {}
    value_cols: list[int] = []
    offset = 0
    spans = {}
    pos = 0
    for r in ax.roots:
        n = r.leaf_count()
        spans[r.node_id] = (pos, pos + n)
        pos += n
    key_leaf_set = set()
    for r in key_roots:
        s, e = spans[r.node_id]
        old_key_pos.extend(range(s, e))
        key_leaf_set.update(range(s, e))
    old_paths = m.leaf_paths(ax)
    for idx, p in enumerate(old_paths):
        if idx in key_leaf_set:
            continue
        # path positions are absolute; value roots keep the axis-wide level indexing
        key = (p[:level - 1] + p[level:], p[level - 1])
        combo_index.setdefault(key, deque()).append(idx)

    if ax.depth == 1:
        reduced_paths = [("value",)]
        lookup = [[None] * k]
        for j, lb in enumerate(labels):
            lookup[0][j] = _pop_path(combo_index, ((), lb.name), "fold")
    else:
        reduced_paths = m.leaf_paths(m.HeadingAxis(tuple(reduced_roots), new_depth, red_names))
        lookup = []
        for rp in reduced_paths:
            row = []
            for lb in labels:
                row.append(_pop_path(combo_index, (rp, lb.name), "fold"))
            lookup.append(row)
    if any(bucket for bucket in combo_index.values()):
        raise NotUniform("fold: some value columns were not covered by the level removal")

    entries = []
    for r, old_row in enumerate(model.entries):
        for j, lb in enumerate(labels):
            row: list[m.Value] = [lb.name]
            row.extend(old_row[p] for p in old_key_pos)
            row.extend(old_row[lookup[rp_i][j]] for rp_i in range(len(reduced_paths)))
            entries.append(tuple(row))
    return m.TableModel(new_row_axis, new_col_axis, tuple(entries), model.version + 1)


def _prune_leaves(roots: Sequence[m.HeadingNode], keep: set[str]) -> list[m.HeadingNode]:
    def rebuild(node: m.HeadingNode) -> Optional[m.HeadingNode]:
        if not node.children:
            return m.make_node(node.label) if node.node_id in keep else None
        kids = [k for k in (rebuild(c) for c in node.children) if k is not None]
        if not kids:
            return None
        return m.make_node(node.label, kids)

    return [r for r in (rebuild(root) for root in roots) if r is not None]


def unfold(model: m.TableModel, key_col_leaf: int, value_col_leaf: int) -> m.TableModel:
    """Pivot a text key column against a numeric value column."""
    n_cols = model.n_cols
    if not (0 <= key_col_leaf < n_cols and 0 <= value_col_leaf < n_cols):
        raise ShapeError(f"column indices out of range for {n_cols} columns")
    if key_col_leaf == value_col_leaf:
        raise ShapeError("key and value columns must differ")

    key_vals = [row[key_col_leaf] for row in model.entries]
    if not all(isinstance(v, str) and v for v in key_vals):
        raise NotCategorical("key column must hold non-empty text in every row")
    for row in model.entries:
        if isinstance(row[value_col_leaf], str):
            raise NonNumeric(f"value column holds text entry {row[value_col_leaf]!r}")

    other_cols = [j for j in range(n_cols) if j not in (key_col_leaf, value_col_leaf)]
    row_paths = m.leaf_paths(model.row_axis)

    keys: list[str] = []
    seen_keys: set[str] = set()
    for v in key_vals:
        if v not in seen_keys:
            seen_keys.add(v)
            keys.append(v)
    groups: dict[tuple, dict[str, int]] = {}
    order: list[tuple] = []
    for i, row in enumerate(model.entries):
        gid = (row_paths[i], tuple(row[j] for j in other_cols))
        if gid not in groups:
            groups[gid] = {}
            order.append(gid)
        if key_vals[i] in groups[gid]:
            raise IrregularGroups(
                f"two rows share all other columns and the key {key_vals[i]!r}"
            )
        groups[gid][key_vals[i]] = i
    for gid in order:
        if len(groups[gid]) != len(keys):
            raise IrregularGroups(
                f"group {gid[0]} is missing keys {sorted(seen_keys - set(groups[gid]))}"
            )

    row_leaves = m.leaf_nodes(model.row_axis)
    first_row = {gid: min(groups[gid].values()) for gid in order}
    keep_rows = {row_leaves[first_row[gid]].node_id for gid in order}
    new_row_roots = _prune_leaves(model.row_axis.roots, keep_rows)
    new_row_axis = m.HeadingAxis(tuple(new_row_roots), model.row_axis.depth,
                                 model.row_axis.level_names)

    col_leaves = m.leaf_nodes(model.col_axis)
    value_name = col_leaves[value_col_leaf].name
    drop = {col_leaves[key_col_leaf].node_id, col_leaves[value_col_leaf].node_id}
    keep_cols = {n.node_id for n in col_leaves if n.node_id not in drop}
    surviving = _prune_leaves(model.col_axis.roots, keep_cols)

    spans = m.leaf_span(model.col_axis)
    value_root = next(r for r in model.col_axis.roots
                      if spans[r.node_id][0] <= value_col_leaf < spans[r.node_id][1])
    insert_at = 0
    for r in model.col_axis.roots:
        if r.node_id == value_root.node_id:
            break
        lo, hi = spans[r.node_id]
        if any(col_leaves[i].node_id in keep_cols for i in range(lo, hi)):
            insert_at += 1

    # the pivoted keys land on the bottom level, which takes the key
    # column's name (the exact inverse of fold's key-column naming)
    key_name = col_leaves[key_col_leaf].name
    if surviving:
        new_depth = model.col_axis.depth
        key_nodes = [m.make_node(m.Label(kv)) for kv in keys]
        if new_depth == 1:
            inserted = key_nodes
        else:
            chain = m.make_node(m.Label(value_name), key_nodes)
            for _ in range(new_depth - 2):
                chain = m.make_node(m.Label(value_name), [chain])
            inserted = [chain]
        new_col_names = model.col_axis.level_names[:-1] + (key_name,)
    else:
        new_depth = 1
        inserted = [m.make_node(m.Label(kv)) for kv in keys]
        new_col_names = (key_name,)
        insert_at = 0
    new_col_roots = surviving[:insert_at] + inserted + surviving[insert_at:]
    new_col_axis = m.HeadingAxis(tuple(new_col_roots), new_depth, new_col_names)

    # surviving old columns, in presentation order
    kept_old = [j for j in range(n_cols) if j not in (key_col_leaf, value_col_leaf)]
    cut = sum(r.leaf_count() for r in surviving[:insert_at])
    entries = []
    for gid in order:
        head = [model.entries[first_row[gid]][j] for j in kept_old]
        pivoted = [model.entries[groups[gid][kv]][value_col_leaf] for kv in keys]
        entries.append(tuple(head[:cut] + pivoted + head[cut:]))
    return m.TableModel(new_row_axis, new_col_axis, tuple(entries), model.version + 1)


# ---------------------------------------------------------------------------
# Scripts and history


def apply_op(model: m.TableModel, op: TransformOp) -> m.TableModel:
    if isinstance(op, Swap):
        return swap(model, op.axis, op.upper_level)
    if isinstance(op, TransposeLevel):
        return transpose_level(model, op.source_axis, op.level)
    if isinstance(op, TransposeTable):
        return transpose_table(model)
    if isinstance(op, ToLinear):
        return to_linear(model, op.axis, op.level, op.stat)
    if isinstance(op, ToStacked):
        return to_stacked(model, op.axis, op.level)
    if isinstance(op, Fold):
        return fold(model, op.level)
    if isinstance(op, Unfold):
        return unfold(model, op.key_col_leaf, op.value_col_leaf)
    raise ShapeError(f"unknown op {op!r}")


def apply_script(model: m.TableModel, ops: Sequence[TransformOp]) -> m.TableModel:
    """Apply ops left to right; on failure report the op index and keep the last good model."""
    current = model
    for i, op in enumerate(ops):
        try:
            current = apply_op(current, op)
        except HiTailorError as e:
            raise ScriptError(i, e, current) from e
    return current


class History:
    """Undo/redo stack over one model; single-owner, one actor at a time."""

    def __init__(self, base: m.TableModel):
        self.base = base
        self._done: list[tuple[TransformOp, m.TableModel]] = []
        self._redo: list[tuple[TransformOp, m.TableModel]] = []

    @property
    def current(self) -> m.TableModel:
        return self._done[-1][1] if self._done else self.base

    def apply(self, op: TransformOp) -> m.TableModel:
        result = apply_op(self.current, op)
        self._done.append((op, result))
        self._redo.clear()
        return result

    def undo(self) -> m.TableModel:
        if not self._done:
            raise EmptyHistory("nothing to undo")
        self._redo.append(self._done.pop())
        return self.current

    def redo(self) -> m.TableModel:
        if not self._redo:
            raise EmptyHistory("nothing to redo")
        self._done.append(self._redo.pop())
        return self.current

    def ops(self) -> list[TransformOp]:
        return [op for op, _ in self._done]

    def replay(self) -> m.TableModel:
        """Recompute the current model from the base; sanity check for exports."""
        current = self.base
        for op in self.ops():
            current = apply_op(current, op)
        return current
