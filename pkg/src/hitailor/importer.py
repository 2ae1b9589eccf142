"""Parsers between external table documents and the abstract model.

Two formats:

* GridDoc — a span-tiled grid (the shape of a spreadsheet with merged
  cells) with explicit heading extents. Input only.
* HTJ — the native JSON interchange format; lossless and canonical
  (serializing equal models yields identical bytes).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

import jsonschema

from . import model as m
from .errors import ModelError, OrphanHeading, OverlapError, SchemaError, ShapeError

HTJ_SCHEMA_TAG = "htj-1"

_NUMBER_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class GridCell:
    row: int
    col: int
    row_span: int
    col_span: int
    text: str


@dataclass(frozen=True)
class GridDoc:
    n_heading_rows: int
    n_heading_cols: int
    width: int
    height: int
    cells: tuple[GridCell, ...]
    row_level_names: Optional[tuple[str, ...]] = None
    col_level_names: Optional[tuple[str, ...]] = None

    @classmethod
    def from_dict(cls, doc: dict) -> "GridDoc":
        try:
            cells = tuple(
                GridCell(int(c["row"]), int(c["col"]),
                         int(c.get("row_span", 1)), int(c.get("col_span", 1)),
                         str(c.get("text", "")))
                for c in doc["cells"]
            )
            return cls(
                int(doc["n_heading_rows"]), int(doc["n_heading_cols"]),
                int(doc["width"]), int(doc["height"]), cells,
                tuple(doc["row_level_names"]) if doc.get("row_level_names") else None,
                tuple(doc["col_level_names"]) if doc.get("col_level_names") else None,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"malformed grid document: {e}") from e


def grid_from_csv(rows: list[list[str]], merges: list[dict],
                  n_heading_rows: int, n_heading_cols: int,
                  row_level_names=None, col_level_names=None) -> GridDoc:
    """Adapter from a CSV matrix plus an explicit merge list."""
    height = len(rows)
    width = max((len(r) for r in rows), default=0)
    covered = [[False] * width for _ in range(height)]
    cells = []
    for mg in merges:
        r, c = int(mg["row"]), int(mg["col"])
        rs, cs = int(mg.get("row_span", 1)), int(mg.get("col_span", 1))
        text = rows[r][c] if c < len(rows[r]) else ""
        cells.append(GridCell(r, c, rs, cs, text))
        for i in range(r, r + rs):
            for j in range(c, c + cs):
                if covered[i][j]:
                    raise OverlapError(f"merge ranges overlap at ({i},{j})")
                covered[i][j] = True
    for i in range(height):
        for j in range(width):
            if not covered[i][j]:
                text = rows[i][j] if j < len(rows[i]) else ""
                cells.append(GridCell(i, j, 1, 1, text))
    return GridDoc(n_heading_rows, n_heading_cols, width, height, tuple(cells),
                   tuple(row_level_names) if row_level_names else None,
                   tuple(col_level_names) if col_level_names else None)


def _parse_body_value(text: str) -> m.Value:
    text = text.strip()
    if text == "":
        return None
    if _NUMBER_RE.match(text):
        v = float(text)
        return v
    return text


def _check_tiling(doc: GridDoc) -> dict[tuple[int, int], GridCell]:
    owner: dict[tuple[int, int], GridCell] = {}
    for cell in doc.cells:
        if cell.row_span < 1 or cell.col_span < 1:
            raise OverlapError(f"cell at ({cell.row},{cell.col}) has empty span")
        for i in range(cell.row, cell.row + cell.row_span):
            for j in range(cell.col, cell.col + cell.col_span):
                if not (0 <= i < doc.height and 0 <= j < doc.width):
                    raise OverlapError(f"cell at ({cell.row},{cell.col}) exceeds the grid")
                if (i, j) in owner:
                    raise OverlapError(f"overlapping spans at ({i},{j})")
                owner[(i, j)] = cell
    if len(owner) != doc.width * doc.height:
        missing = next((i, j) for i in range(doc.height) for j in range(doc.width)
                       if (i, j) not in owner)
        raise OverlapError(f"grid has a gap at {missing}")
    return owner


@dataclass
class _HeadingItem:
    start: int
    end: int
    text: str
    children: list = field(default_factory=list)


def _build_heading_forest(items_per_level: list[list[_HeadingItem]], lo: int, hi: int,
                          axis_word: str) -> list[m.HeadingNode]:
    for level, items in enumerate(items_per_level):
        items.sort(key=lambda it: it.start)
        pos = lo
        for it in items:
            if it.start != pos:
                raise OverlapError(f"{axis_word} heading level {level + 1} has a gap at {pos}")
            pos = it.end
        if pos != hi:
            raise OverlapError(f"{axis_word} heading level {level + 1} does not reach the edge")
    for level in range(1, len(items_per_level)):
        for it in items_per_level[level]:
            parent = next((p for p in items_per_level[level - 1]
                           if p.start <= it.start and it.end <= p.end), None)
            if parent is None:
                raise OrphanHeading(
                    f"{axis_word} heading cell {it.text!r} straddles parents at level {level + 1}"
                )
            parent.children.append(it)
    if items_per_level:
        for it in items_per_level[-1]:
            if it.end - it.start != 1:
                raise ShapeError(
                    f"bottom-level {axis_word} heading {it.text!r} spans {it.end - it.start} entry lines"
                )

    def to_node(it: _HeadingItem) -> m.HeadingNode:
        if not it.text:
            raise OrphanHeading(f"empty {axis_word} heading label over [{it.start},{it.end})")
        label = m.derived_label("sum") if it.text == "&" else m.Label(it.text)
        return m.make_node(label, [to_node(c) for c in it.children])

    return [to_node(it) for it in items_per_level[0]]


def parse_grid(doc: GridDoc) -> m.TableModel:
    """Turn a span-tiled grid into a model, by relative cell position."""
    hr, hc = doc.n_heading_rows, doc.n_heading_cols
    if hr >= doc.height or hc >= doc.width:
        raise ShapeError("heading region leaves no body")
    owner = _check_tiling(doc)

    seen: set[int] = set()
    col_levels: list[list[_HeadingItem]] = [[] for _ in range(hr)]
    row_levels: list[list[_HeadingItem]] = [[] for _ in range(hc)]
    for cell in doc.cells:
        if id(cell) in seen:
            continue
        seen.add(id(cell))
        in_top = cell.row < hr
        in_left = cell.col < hc
        if in_top and in_left:
            if cell.row + cell.row_span > hr or cell.col + cell.col_span > hc:
                raise OverlapError("corner cell crosses into the heading region")
            continue
        if in_top:
            if cell.row + cell.row_span > hr:
                raise OverlapError(f"column heading at ({cell.row},{cell.col}) crosses into the body")
            # a cell spanning several heading rows is a chain of one label per level
            for level in range(cell.row, cell.row + cell.row_span):
                col_levels[level].append(_HeadingItem(cell.col, cell.col + cell.col_span, cell.text))
        elif in_left:
            if cell.col + cell.col_span > hc:
                raise OverlapError(f"row heading at ({cell.row},{cell.col}) crosses into the body")
            for level in range(cell.col, cell.col + cell.col_span):
                row_levels[level].append(_HeadingItem(cell.row, cell.row + cell.row_span, cell.text))
        else:
            if cell.row_span != 1 or cell.col_span != 1:
                raise ShapeError(f"body cell at ({cell.row},{cell.col}) is merged")

    if hc > 0:
        row_roots = _build_heading_forest(row_levels, hr, doc.height, "row")
        row_names = doc.row_level_names
    else:
        row_roots = [m.make_node(m.Label(f"r{i + 1}")) for i in range(doc.height - hr)]
        row_names = None
    if hr > 0:
        col_roots = _build_heading_forest(col_levels, hc, doc.width, "column")
        col_names = doc.col_level_names
    else:
        col_roots = [m.make_node(m.Label(f"c{j + 1}")) for j in range(doc.width - hc)]
        col_names = None

    row_axis = m.make_axis(row_roots, row_names, axis="row")
    col_axis = m.make_axis(col_roots, col_names, axis="col")

    entries = tuple(
        tuple(_parse_body_value(owner[(i, j)].text) for j in range(hc, doc.width))
        for i in range(hr, doc.height)
    )
    table = m.TableModel(row_axis, col_axis, entries)
    problems = m.validate_model(table)
    if problems:
        raise ShapeError("; ".join(problems))
    return table


# ---------------------------------------------------------------------------
# HTJ


def _htj_schema() -> dict:
    path = resources.files("hitailor").joinpath("htj.schema.json")
    return json.loads(path.read_text(encoding="utf-8"))


def parse_htj(doc: dict) -> m.TableModel:
    """Reconstruct a model from its HTJ document."""
    schema = _htj_schema()
    validator = jsonschema.Draft202012Validator(schema)
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise SchemaError(f"{error.message} at {error.json_path}")

    def to_node(node: dict, pointer: str) -> m.HeadingNode:
        kind = node.get("kind", m.PLAIN)
        stat = node.get("stat")
        if kind == m.DERIVED and stat not in m.STATS:
            raise SchemaError(f"derived label without stat at {pointer}")
        if kind != m.DERIVED and stat is not None:
            raise SchemaError(f"stat on non-derived label at {pointer}")
        label = m.Label(node["name"], kind, stat)
        children = [to_node(c, f"{pointer}.children[{i}]")
                    for i, c in enumerate(node.get("children", []))]
        return m.make_node(label, children)

    axes = {}
    for key, word in (("row_axis", "row"), ("col_axis", "col")):
        spec = doc[key]
        roots = [to_node(n, f"$.{key}.nodes[{i}]") for i, n in enumerate(spec["nodes"])]
        try:
            axes[key] = m.make_axis(roots, spec.get("level_names"), axis=word)
        except ModelError as e:
            raise SchemaError(f"{e} at $.{key}") from e

    entries = []
    for i, row in enumerate(doc["entries"]):
        out = []
        for j, v in enumerate(row):
            if v is None or isinstance(v, str):
                out.append(v)
            elif isinstance(v, bool):
                raise SchemaError(f"boolean entry at $.entries[{i}][{j}]")
            else:
                out.append(float(v))
        entries.append(tuple(out))
    version = int(doc.get("meta", {}).get("version", 1))
    table = m.TableModel(axes["row_axis"], axes["col_axis"], tuple(entries), version)
    problems = m.validate_model(table)
    if problems:
        raise SchemaError("; ".join(problems) + " at $.entries")
    return table


def node_to_dict(node: m.HeadingNode) -> dict:
    out: dict[str, Any] = {"name": node.name}
    if node.label.kind != m.PLAIN:
        out["kind"] = node.label.kind
    if node.label.stat is not None:
        out["stat"] = node.label.stat
    if node.children:
        out["children"] = [node_to_dict(c) for c in node.children]
    return out


def serialize_htj(model: m.TableModel) -> dict:
    """Canonical HTJ document for a model; equal models serialize identically."""

    def axis_dict(axis: m.HeadingAxis) -> dict:
        return {
            "level_names": list(axis.level_names),
            "nodes": [node_to_dict(r) for r in axis.roots],
        }

    return {
        "schema": HTJ_SCHEMA_TAG,
        "row_axis": axis_dict(model.row_axis),
        "col_axis": axis_dict(model.col_axis),
        "entries": [list(row) for row in model.entries],
        "meta": {"version": model.version},
    }


def htj_bytes(doc: dict) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def structural_htj(model: m.TableModel) -> dict:
    """HTJ document without the version counter; for structural comparisons."""
    doc = serialize_htj(model)
    doc.pop("meta")
    return doc
