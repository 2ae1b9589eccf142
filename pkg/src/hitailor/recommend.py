"""TableUnit recommendation.

A selected unit's locators name one label per axis (the descriptor).
Candidates are the same-level labels whose blocks are congruent to the
selection; each gets a (row, column) priority pair from the chosen
mechanism: topology (reference level minus lowest-common-ancestor
level) or name (1 for an identical name, 2 otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from . import model as m
from .errors import LevelMismatch, NoRecommendation, ShapeError, UnknownLabel

TOPOLOGY = "topology"
NAME = "name"
MECHANISMS = (TOPOLOGY, NAME)


@dataclass(frozen=True)
class Descriptor:
    nodes: tuple[m.HeadingNode, ...]
    axis: str
    level: int

    def single(self) -> m.HeadingNode:
        if len(self.nodes) != 1:
            raise NoRecommendation("descriptor names more than one subtree")
        return self.nodes[0]


@dataclass(frozen=True)
class PriorityPair:
    row: int
    col: int


@dataclass(frozen=True)
class Recommendation:
    unit: m.TableUnit
    priority: PriorityPair


def node_at_path(axis: m.HeadingAxis, path: tuple[str, ...]) -> m.HeadingNode:
    nodes = axis.roots
    found = None
    for name in path:
        found = next((n for n in nodes if n.name == name), None)
        if found is None:
            raise UnknownLabel(f"no node at path {path}")
        nodes = found.children
    return found


def descriptor_of(axis: m.HeadingAxis, locator: m.Locator, axis_name: str) -> Descriptor:
    """The last non-wildcard label of every sequence, with its level."""
    nodes = []
    levels = set()
    for seq in locator.sequences:
        nodes.append(node_at_path(axis, seq.labels))
        levels.add(len(seq.labels))
    if len(levels) != 1:
        raise LevelMismatch("descriptor labels sit at mixed levels")
    return Descriptor(tuple(nodes), axis_name, levels.pop())


@lru_cache(maxsize=64)
def _ancestor_chains(axis: m.HeadingAxis) -> dict[str, tuple[str, ...]]:
    chains: dict[str, tuple[str, ...]] = {}

    def rec(node: m.HeadingNode, prefix: tuple[str, ...]):
        chain = prefix + (node.node_id,)
        chains[node.node_id] = chain
        for c in node.children:
            rec(c, chain)

    for r in axis.roots:
        rec(r, ())
    return chains


def lca_level(axis: m.HeadingAxis, a: m.HeadingNode, b: m.HeadingNode) -> int:
    """Level of the lowest common ancestor; 0 when none exists."""
    chains = _ancestor_chains(axis)
    ca, cb = chains[a.node_id], chains[b.node_id]
    level = 0
    for x, y in zip(ca, cb):
        if x != y:
            break
        level += 1
    return level


def _check_pair(ref: Descriptor, cand: Descriptor) -> None:
    if ref.axis != cand.axis or ref.level != cand.level:
        raise LevelMismatch(
            f"descriptors at level {ref.level}/{cand.level} on {ref.axis}/{cand.axis}"
        )


def topo_priority(axis: m.HeadingAxis, ref: Descriptor, cand: Descriptor) -> int:
    _check_pair(ref, cand)
    return ref.level - lca_level(axis, ref.single(), cand.single())


def name_priority(ref: Descriptor, cand: Descriptor) -> int:
    _check_pair(ref, cand)
    a, b = ref.single(), cand.single()
    if a.node_id == b.node_id:
        return 0
    return 1 if a.name == b.name else 2


@dataclass(frozen=True)
class _Candidate:
    node: m.HeadingNode       # representative (first) node of the path group
    path: tuple[str, ...]
    start: int
    end: int


def _level_candidates(axis: m.HeadingAxis, level: int, extent: int) -> list[_Candidate]:
    """Path groups at a level whose leaf runs have the requested extent.

    Replicated paths (from folding) act as one group spanning their run.
    """
    spans = m.leaf_span(axis)
    groups: list[_Candidate] = []
    for node, path, lv in m.walk(axis):
        if lv != level:
            continue
        s, e = spans[node.node_id]
        if groups and groups[-1].path == path and groups[-1].end == s:
            last = groups[-1]
            groups[-1] = _Candidate(last.node, path, last.start, e)
        else:
            groups.append(_Candidate(node, path, s, e))
    return [g for g in groups if g.end - g.start == extent]


def enumerate_candidates(model: m.TableModel, unit: m.TableUnit,
                         mechanism: str) -> list[Recommendation]:
    """Congruent candidate units across both axes, with priority pairs."""
    if mechanism not in MECHANISMS:
        raise ShapeError(f"mechanism must be one of {MECHANISMS}")
    if not (unit.row_single_subtree and unit.col_single_subtree):
        raise NoRecommendation(
            "the selection does not lie within a single subtree on both axes"
        )
    row_seq = unit.row_locator.sequences[0]
    col_seq = unit.col_locator.sequences[0]
    ref_row = descriptor_of(model.row_axis, unit.row_locator, "row")
    ref_col = descriptor_of(model.col_axis, unit.col_locator, "col")

    rows = _level_candidates(model.row_axis, len(row_seq.labels), unit.block.height)
    cols = _level_candidates(model.col_axis, len(col_seq.labels), unit.block.width)

    def priority(axis: m.HeadingAxis, ref: Descriptor, cand: _Candidate, axis_name: str) -> int:
        d = Descriptor((cand.node,), axis_name, ref.level)
        if mechanism == TOPOLOGY:
            return topo_priority(axis, ref, d)
        return name_priority(ref, d)

    out = []
    for rg in rows:
        rp = priority(model.row_axis, ref_row, rg, "row")
        for cg in cols:
            cp = priority(model.col_axis, ref_col, cg, "col")
            block = m.Block(rg.start, rg.end, cg.start, cg.end)
            out.append(Recommendation(m.make_unit(model, block), PriorityPair(rp, cp)))
    return out


def recommend(model: m.TableModel, unit: m.TableUnit, mechanism: str,
              row_range: tuple[int, Optional[int]],
              col_range: tuple[int, Optional[int]]) -> list[Recommendation]:
    """Candidates whose priorities fall inside both inclusive ranges."""
    r_lo, r_hi = row_range
    c_lo, c_hi = col_range
    picked = [
        rec for rec in enumerate_candidates(model, unit, mechanism)
        if r_lo <= rec.priority.row and (r_hi is None or rec.priority.row <= r_hi)
        and c_lo <= rec.priority.col and (c_hi is None or rec.priority.col <= c_hi)
    ]
    picked.sort(key=lambda rec: (rec.priority.row, rec.priority.col,
                                 rec.unit.block.row_start, rec.unit.block.col_start))
    return picked


def recommendation_dict(rec: Recommendation) -> dict:
    b = rec.unit.block
    return {
        "block": {"row_start": b.row_start, "row_end": b.row_end,
                  "col_start": b.col_start, "col_end": b.col_end},
        "row_locator": rec.unit.row_locator.render(),
        "col_locator": rec.unit.col_locator.render(),
        "row_priority": rec.priority.row,
        "col_priority": rec.priority.col,
    }
