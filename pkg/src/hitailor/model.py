"""Abstract model of a hierarchical table.

A table is two heading forests (rows and columns) plus a rectangular
matrix of entry values. Leaves of each forest address entry rows and
columns in presentation order: leaf i of the row axis is entry row i.
Cells and blocks are addressed by label paths (sequences), not by
coordinates; a trailing wildcard stands for every leaf under a node.

Models are immutable values. Transformations build new models.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

from .errors import (
    AmbiguousSequence,
    DuplicateSibling,
    NonContiguous,
    RaggedDepth,
    UnknownLabel,
)

WILDCARD = "*"

# Entry values: finite float, text, or None for missing.
Value = Union[float, str, None]

PLAIN = "plain"
DERIVED = "derived"
KEY = "key"

STATS = ("sum", "avg", "min", "max")
# The sum aggregate renders with the reserved "&" symbol.
DERIVED_NAMES = {"sum": "&", "avg": "avg", "min": "min", "max": "max"}

_node_ids = itertools.count(1)


def _next_id() -> str:
    return f"n{next(_node_ids)}"


@dataclass(frozen=True)
class Label:
    name: str
    kind: str = PLAIN
    stat: Optional[str] = None

    def is_derived(self) -> bool:
        return self.kind == DERIVED

    def is_key(self) -> bool:
        return self.kind == KEY


def derived_label(stat: str) -> Label:
    return Label(DERIVED_NAMES[stat], DERIVED, stat)


@dataclass(frozen=True)
class HeadingNode:
    label: Label
    children: tuple["HeadingNode", ...] = ()
    node_id: str = field(default_factory=_next_id)

    @property
    def name(self) -> str:
        return self.label.name

    def leaf_count(self) -> int:
        if not self.children:
            return 1
        return sum(c.leaf_count() for c in self.children)


def make_node(label: Label, children: Sequence[HeadingNode] = ()) -> HeadingNode:
    return HeadingNode(label, tuple(children), _next_id())


@dataclass(frozen=True)
class HeadingAxis:
    roots: tuple[HeadingNode, ...]
    depth: int
    level_names: tuple[str, ...]


@dataclass(frozen=True)
class StructureAnnotation:
    # uniform_boundaries[i] covers the boundary between levels i+1 and i+2.
    uniform_boundaries: tuple[bool, ...]
    bicluster_from: Optional[int]


@dataclass(frozen=True)
class TableModel:
    row_axis: HeadingAxis
    col_axis: HeadingAxis
    entries: tuple[tuple[Value, ...], ...]
    version: int = 1

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def n_cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


@dataclass(frozen=True)
class LabelSequence:
    """Label names from the root, optionally ending in a wildcard.

    ``labels`` holds only concrete names; a wildcard is the flag, never
    a list element. Without a wildcard the sequence names a full path.
    """

    labels: tuple[str, ...]
    wildcard_tail: bool = False

    def render(self) -> tuple[str, ...]:
        return self.labels + ((WILDCARD,) if self.wildcard_tail else ())

    @classmethod
    def parse(cls, parts: Sequence[str]) -> "LabelSequence":
        parts = list(parts)
        if not parts:
            raise UnknownLabel("empty label sequence")
        wild = parts[-1] == WILDCARD
        if wild:
            parts = parts[:-1]
        if WILDCARD in parts:
            raise UnknownLabel("wildcard may appear only as the final element")
        if not parts:
            raise UnknownLabel("wildcard needs at least one leading label")
        return cls(tuple(parts), wild)


@dataclass(frozen=True)
class Locator:
    sequences: tuple[LabelSequence, ...]

    @classmethod
    def parse(cls, seqs: Sequence[Sequence[str]]) -> "Locator":
        return cls(tuple(LabelSequence.parse(s) for s in seqs))

    def render(self) -> list[list[str]]:
        return [list(s.render()) for s in self.sequences]


@dataclass(frozen=True)
class Block:
    row_start: int
    row_end: int
    col_start: int
    col_end: int

    @property
    def height(self) -> int:
        return self.row_end - self.row_start

    @property
    def width(self) -> int:
        return self.col_end - self.col_start


@dataclass(frozen=True)
class TableUnit:
    block: Block
    row_locator: Locator
    col_locator: Locator
    row_single_subtree: bool
    col_single_subtree: bool


# ---------------------------------------------------------------------------
# Axis construction


def make_axis(roots: Sequence[HeadingNode], level_names: Optional[Sequence[str]] = None,
              axis: str = "row") -> HeadingAxis:
    """Build an axis from a forest, rejecting ragged depths and duplicate siblings."""
    roots = tuple(roots)
    if not roots:
        raise RaggedDepth("axis must have at least one root")
    depths = {d for r in roots for d in _leaf_depths(r, 1)}
    if len(depths) != 1:
        raise RaggedDepth(f"leaves at mixed depths {sorted(depths)}; headings must be uniform-depth")
    depth = depths.pop()
    _reject_duplicate_siblings(roots)
    if level_names is None:
        level_names = [f"{axis}-level-{i}" for i in range(1, depth + 1)]
    level_names = tuple(level_names)
    if len(level_names) != depth:
        raise RaggedDepth(f"{len(level_names)} level names for depth {depth}")
    return HeadingAxis(roots, depth, level_names)


def _leaf_depths(node: HeadingNode, level: int) -> Iterator[int]:
    if not node.children:
        yield level
    else:
        for c in node.children:
            yield from _leaf_depths(c, level + 1)


def _reject_duplicate_siblings(siblings: Sequence[HeadingNode]) -> None:
    seen: set[str] = set()
    for n in siblings:
        if n.name in seen:
            raise DuplicateSibling(f"duplicate sibling label {n.name!r}")
        seen.add(n.name)
    for n in siblings:
        _reject_duplicate_siblings(n.children)


# ---------------------------------------------------------------------------
# Walking and label sequences


def walk(axis: HeadingAxis) -> Iterator[tuple[HeadingNode, tuple[str, ...], int]]:
    """Yield (node, name path, level) in presentation (pre)order; levels from 1."""
    stack = [(r, (), 1) for r in reversed(axis.roots)]
    while stack:
        node, prefix, level = stack.pop()
        path = prefix + (node.name,)
        yield node, path, level
        for c in reversed(node.children):
            stack.append((c, path, level + 1))


def leaf_nodes(axis: HeadingAxis) -> list[HeadingNode]:
    out: list[HeadingNode] = []

    def rec(node: HeadingNode) -> None:
        if not node.children:
            out.append(node)
        else:
            for c in node.children:
                rec(c)

    for r in axis.roots:
        rec(r)
    return out


def leaf_paths(axis: HeadingAxis) -> list[tuple[str, ...]]:
    out: list[tuple[str, ...]] = []

    def rec(node: HeadingNode, prefix: tuple[str, ...]) -> None:
        path = prefix + (node.name,)
        if not node.children:
            out.append(path)
        else:
            for c in node.children:
                rec(c, path)

    for r in axis.roots:
        rec(r, ())
    return out


def leaf_sequences(axis: HeadingAxis) -> list[LabelSequence]:
    """One full-depth sequence per leaf, in presentation order."""
    return [LabelSequence(p) for p in leaf_paths(axis)]


def level_nodes(axis: HeadingAxis, level: int) -> list[HeadingNode]:
    return [n for n, _, lv in walk(axis) if lv == level]


def leaf_span(axis: HeadingAxis) -> dict[str, tuple[int, int]]:
    """Half-open leaf index range covered by each node, keyed by node_id."""
    spans: dict[str, tuple[int, int]] = {}
    counter = itertools.count()

    def rec(node: HeadingNode) -> tuple[int, int]:
        if not node.children:
            i = next(counter)
            spans[node.node_id] = (i, i + 1)
            return i, i + 1
        start = None
        end = None
        for c in node.children:
            s, e = rec(c)
            start = s if start is None else start
            end = e
        spans[node.node_id] = (start, end)
        return start, end

    for r in axis.roots:
        rec(r)
    return spans


# ---------------------------------------------------------------------------
# Structure detection


def detect_structure(axis: HeadingAxis) -> StructureAnnotation:
    """Per-boundary uniformity flags plus the level where a bicluster starts.

    A boundary between levels i and i+1 is uniform when every level-i
    node has the identical ordered list of child names. The bicluster
    starts at the smallest level k whose labels are shared by all
    parents and below which every boundary is uniform; a depth-1 axis
    is trivially a bicluster.
    """
    flags = []
    for i in range(1, axis.depth):
        lists = [tuple(c.name for c in n.children) for n in level_nodes(axis, i)]
        flags.append(len(set(lists)) == 1)
    bicluster_from: Optional[int] = None
    if all(flags):
        bicluster_from = 1
    else:
        # smallest k >= 2 with boundary (k-1,k) and everything below uniform
        for k in range(2, axis.depth + 1):
            if all(flags[k - 2:]):
                bicluster_from = k
                break
    return StructureAnnotation(tuple(flags), bicluster_from)


def boundary_is_uniform(axis: HeadingAxis, upper_level: int) -> bool:
    if not 1 <= upper_level < axis.depth:
        return False
    return detect_structure(axis).uniform_boundaries[upper_level - 1]


# ---------------------------------------------------------------------------
# Locator resolution


def _axis_for(model: TableModel, which: str) -> HeadingAxis:
    return model.row_axis if which == "row" else model.col_axis


def resolve_axis_locator(axis: HeadingAxis, locator: Locator) -> tuple[int, int]:
    """Resolve one locator to a half-open contiguous leaf range."""
    paths = leaf_paths(axis)
    matched: list[int] = []
    for seq in locator.sequences:
        hits = _match_sequence(paths, seq)
        matched.extend(hits)
    if not matched:
        raise UnknownLabel("locator matches no leaves")
    matched.sort()
    lo, hi = matched[0], matched[-1] + 1
    if len(set(matched)) != len(matched):
        raise NonContiguous("locator sequences overlap")
    if hi - lo != len(matched):
        raise NonContiguous(f"matched leaves {matched} are not one contiguous run")
    return lo, hi


def _match_sequence(paths: list[tuple[str, ...]], seq: LabelSequence) -> list[int]:
    depth = len(paths[0]) if paths else 0
    if seq.wildcard_tail:
        if len(seq.labels) >= depth:
            raise UnknownLabel(f"wildcard sequence {seq.render()} is as long as the axis depth")
        hits = [i for i, p in enumerate(paths) if p[: len(seq.labels)] == seq.labels]
    else:
        if len(seq.labels) != depth:
            raise UnknownLabel(
                f"sequence {seq.render()} has {len(seq.labels)} labels for depth {depth}"
            )
        hits = [i for i, p in enumerate(paths) if p == seq.labels]
        if len(hits) > 1:
            # Replicated leaves share one path and form one run; matches under
            # genuinely distinct paths would be ambiguous, but duplicate full
            # paths only ever arise adjacent (from folding), so a gap means
            # the model was built outside the factories.
            if hits[-1] - hits[0] + 1 != len(hits):
                raise AmbiguousSequence(f"sequence {seq.render()} matches under multiple paths")
    if not hits:
        raise UnknownLabel(f"no leaf matches sequence {seq.render()}")
    return hits


def resolve_locator(model: TableModel, row: Locator, col: Locator) -> Block:
    r0, r1 = resolve_axis_locator(model.row_axis, row)
    c0, c1 = resolve_axis_locator(model.col_axis, col)
    return Block(r0, r1, c0, c1)


def axis_locator_of(axis: HeadingAxis, start: int, end: int) -> Locator:
    """Minimal locator for a leaf range: fully covered subtrees merge to wildcards."""
    if not 0 <= start < end:
        raise NonContiguous(f"empty or negative range [{start},{end})")
    spans = leaf_span(axis)
    total = sum(r.leaf_count() for r in axis.roots)
    if end > total:
        raise NonContiguous(f"range [{start},{end}) exceeds {total} leaves")
    sequences: list[LabelSequence] = []

    def rec(node: HeadingNode, prefix: tuple[str, ...]):
        s, e = spans[node.node_id]
        if e <= start or s >= end:
            return
        path = prefix + (node.name,)
        if s >= start and e <= end:
            if node.children:
                sequences.append(LabelSequence(path, wildcard_tail=True))
            else:
                if sequences and sequences[-1].labels == path and not sequences[-1].wildcard_tail:
                    return  # adjacent replicated leaf, already covered
                sequences.append(LabelSequence(path))
            return
        if not node.children:
            # Partially covered leaf group (replicated paths): not addressable.
            raise AmbiguousSequence(
                f"range [{start},{end}) splits replicated leaves under {path}"
            )
        for c in node.children:
            rec(c, path)

    for r in axis.roots:
        rec(r, ())
    return Locator(tuple(sequences))


def locator_of(model: TableModel, block: Block) -> tuple[Locator, Locator]:
    row = axis_locator_of(model.row_axis, block.row_start, block.row_end)
    col = axis_locator_of(model.col_axis, block.col_start, block.col_end)
    return row, col


def make_unit(model: TableModel, block: Block) -> TableUnit:
    row, col = locator_of(model, block)
    return TableUnit(block, row, col,
                     row_single_subtree=len(row.sequences) == 1,
                     col_single_subtree=len(col.sequences) == 1)


def unit_from_locators(model: TableModel, row: Locator, col: Locator) -> TableUnit:
    """Canonicalize user-supplied locators into a TableUnit."""
    block = resolve_locator(model, row, col)
    return make_unit(model, block)


# ---------------------------------------------------------------------------
# Validation


def validate_model(model: TableModel) -> list[str]:
    """Check every structural invariant; returns violations instead of raising."""
    problems: list[str] = []
    ids: set[str] = set()
    for which, axis in (("row", model.row_axis), ("col", model.col_axis)):
        depths = set()
        n_leaves = 0
        for node, path, level in walk(axis):
            if not node.name:
                problems.append(f"{which} axis: empty label name at level {level}")
            if node.label.kind == DERIVED and node.label.stat not in STATS:
                problems.append(f"{which} axis: derived label {node.name!r} lacks a stat")
            if node.node_id in ids:
                problems.append(f"id collision: {node.node_id}")
            ids.add(node.node_id)
            if not node.children:
                depths.add(level)
                n_leaves += 1
        if len(depths) > 1:
            problems.append(f"{which} axis: ragged leaf depths {sorted(depths)}")
        if depths and axis.depth not in depths:
            problems.append(f"{which} axis: declared depth {axis.depth} != leaf depth")
        if n_leaves < 1:
            problems.append(f"{which} axis: no leaves")
        if len(axis.level_names) != axis.depth:
            problems.append(f"{which} axis: {len(axis.level_names)} level names for depth {axis.depth}")
    n_rows = sum(r.leaf_count() for r in model.row_axis.roots)
    n_cols = sum(r.leaf_count() for r in model.col_axis.roots)
    if len(model.entries) != n_rows:
        problems.append(f"shape mismatch: {len(model.entries)} entry rows for {n_rows} row leaves")
    for i, row in enumerate(model.entries):
        if len(row) != n_cols:
            problems.append(f"shape mismatch: entry row {i} has {len(row)} cells for {n_cols} col leaves")
            break
    for i, row in enumerate(model.entries):
        for j, v in enumerate(row):
            if isinstance(v, float) and not math.isfinite(v):
                problems.append(f"non-finite number at ({i},{j})")
            elif v is not None and not isinstance(v, (float, str)):
                problems.append(f"unsupported value type {type(v).__name__} at ({i},{j})")
    if model.version < 1:
        problems.append(f"version {model.version} < 1")
    return problems


# ---------------------------------------------------------------------------
# Structural signatures (identity up to node ids and version)


def _node_signature(node: HeadingNode):
    return (node.name, node.label.kind, node.label.stat,
            tuple(_node_signature(c) for c in node.children))


def axis_signature(axis: HeadingAxis):
    return (tuple(_node_signature(r) for r in axis.roots), axis.level_names)


def model_signature(model: TableModel):
    return (axis_signature(model.row_axis), axis_signature(model.col_axis), model.entries)


def models_equal(a: TableModel, b: TableModel) -> bool:
    """Structural equality: node ids and version counters are ignored."""
    return model_signature(a) == model_signature(b)


def bump(model: TableModel, row_axis=None, col_axis=None, entries=None) -> TableModel:
    """New model with version + 1; unspecified parts are carried over."""
    return TableModel(
        row_axis if row_axis is not None else model.row_axis,
        col_axis if col_axis is not None else model.col_axis,
        entries if entries is not None else model.entries,
        model.version + 1,
    )
