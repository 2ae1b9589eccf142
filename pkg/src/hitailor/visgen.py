"""Chart-grammar emission for TableUnits.

A unit decomposes into x-nominal labels (columns), y-nominal labels
(rows) and quantitative values. Bindings are restricted: horizontal
positional channels take x-nominal data or values, vertical ones take
y-nominal data or values. Documents are Vega-Lite v5 specs with inline
data; the embedding rectangle rides in ``usermeta._hitailor.geometry``
so renderers ignore it.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import model as m
from .errors import (
    EmptyInput,
    ForbiddenBinding,
    MissingChannel,
    NonNumeric,
    ShapeError,
    UnknownTemplate,
)

X_NOMINAL, Y_NOMINAL, VALUE = "x_nominal", "y_nominal", "value"
ROLES = (X_NOMINAL, Y_NOMINAL, VALUE)

UNIT, OVERVIEW, TREND, CORRELATION = "Unit", "Overview", "Trend", "Correlation"

VEGA_LITE_SCHEMA_URL = "https://vega.github.io/schema/vega-lite/v5.json"


@dataclass(frozen=True)
class Channel:
    name: str
    accepted_roles: tuple[str, ...]
    required: bool = False


@dataclass(frozen=True)
class VisTemplate:
    id: str
    category: str
    channels: tuple[Channel, ...]
    aggregation: str = "none"

    def channel(self, name: str) -> Optional[Channel]:
        return next((c for c in self.channels if c.name == name), None)


@dataclass(frozen=True)
class VisConfig:
    template_id: str
    bindings: dict[str, str]
    options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CellGeometry:
    cell_width: float = 80.0
    cell_height: float = 24.0
    origin_x: float = 0.0
    origin_y: float = 0.0


@dataclass(frozen=True)
class Decomposition:
    x_nominal: tuple[str, ...]
    y_nominal: tuple[str, ...]
    values: tuple[tuple[m.Value, ...], ...]
    row_label_paths: tuple[tuple[str, ...], ...]
    col_label_paths: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class SummaryStats:
    min: float
    max: float
    mean: float
    median: float
    q1: float
    q3: float
    n: int


@dataclass(frozen=True)
class VisGrammarDoc:
    doc: dict
    geometry: dict
    unit_ref: dict


def _ch(name, roles, required=False):
    return Channel(name, tuple(roles), required)


_NOMINAL = (X_NOMINAL, Y_NOMINAL)

_TEMPLATES = (
    VisTemplate("unit_color", UNIT, (_ch("color", (VALUE,), True),)),
    VisTemplate("unit_size", UNIT, (_ch("size", (VALUE,), True),)),
    VisTemplate("unit_bar", UNIT, (_ch("y", (VALUE,), True),)),
    VisTemplate("bar", OVERVIEW, (
        _ch("x", (X_NOMINAL, VALUE), True), _ch("y", (Y_NOMINAL, VALUE), True),
        _ch("color", _NOMINAL),
    )),
    VisTemplate("stacked_bar", OVERVIEW, (
        _ch("x", (X_NOMINAL, VALUE), True), _ch("y", (Y_NOMINAL, VALUE), True),
        _ch("color", _NOMINAL, True),
    )),
    VisTemplate("ranged_dot", OVERVIEW, (
        _ch("x", (X_NOMINAL, VALUE), True), _ch("y", (Y_NOMINAL, VALUE), True),
    ), aggregation="min_max"),
    VisTemplate("box", OVERVIEW, (
        _ch("x", (X_NOMINAL, VALUE), True), _ch("y", (Y_NOMINAL, VALUE), True),
    ), aggregation="quartiles"),
    VisTemplate("strip", OVERVIEW, (
        _ch("x", (X_NOMINAL, VALUE), True), _ch("y", (Y_NOMINAL, VALUE), True),
    )),
    VisTemplate("parallel_coordinates", OVERVIEW, (
        _ch("x", (X_NOMINAL,), True), _ch("y", (VALUE,), True), _ch("color", (Y_NOMINAL,)),
    )),
    VisTemplate("multi_line", OVERVIEW, (
        _ch("x", (X_NOMINAL, VALUE), True), _ch("y", (Y_NOMINAL, VALUE), True),
        _ch("color", _NOMINAL, True),
    )),
    VisTemplate("pie", OVERVIEW, (
        _ch("theta", (VALUE,), True), _ch("color", _NOMINAL, True),
    )),
    VisTemplate("radial", OVERVIEW, (
        _ch("theta", (VALUE,), True), _ch("radius", (VALUE,)), _ch("color", _NOMINAL, True),
    )),
    VisTemplate("horizon", TREND, (
        _ch("x", (X_NOMINAL, VALUE), True), _ch("y", (Y_NOMINAL, VALUE), True),
    )),
    VisTemplate("line", TREND, (
        _ch("x", (X_NOMINAL, VALUE), True), _ch("y", (Y_NOMINAL, VALUE), True),
    )),
    VisTemplate("scatter", CORRELATION, (
        _ch("x", (VALUE,), True), _ch("y", (VALUE,), True), _ch("color", _NOMINAL),
    )),
    VisTemplate("heatmap", CORRELATION, (
        _ch("x", (X_NOMINAL,), True), _ch("y", (Y_NOMINAL,), True), _ch("color", (VALUE,), True),
    )),
)

_HORIZONTAL_POSITIONAL = ("x", "x2", "theta")
_VERTICAL_POSITIONAL = ("y", "y2")


def template_catalog() -> list[VisTemplate]:
    """All templates: three per-cell unit variants plus the summary charts."""
    return list(_TEMPLATES)


def get_template(template_id: str) -> VisTemplate:
    t = next((t for t in _TEMPLATES if t.id == template_id), None)
    if t is None:
        raise UnknownTemplate(f"no template {template_id!r}")
    return t


def decompose(model: m.TableModel, unit: m.TableUnit) -> Decomposition:
    """Split a unit into nominal label lists and its value slice."""
    b = unit.block
    row_paths = m.leaf_paths(model.row_axis)[b.row_start:b.row_end]
    col_paths = m.leaf_paths(model.col_axis)[b.col_start:b.col_end]
    values = tuple(
        tuple(model.entries[i][b.col_start:b.col_end])
        for i in range(b.row_start, b.row_end)
    )
    return Decomposition(
        x_nominal=tuple(p[-1] for p in col_paths),
        y_nominal=tuple(p[-1] for p in row_paths),
        values=values,
        row_label_paths=tuple(row_paths),
        col_label_paths=tuple(col_paths),
    )


def validate_mapping(template: VisTemplate, config: VisConfig,
                     decomp: Optional[Decomposition] = None) -> None:
    """Reject bindings outside the template's accepted roles."""
    for name, role in config.bindings.items():
        ch = template.channel(name)
        if ch is None:
            raise ForbiddenBinding(f"template {template.id} has no channel {name!r}",
                                   channel=name, role=role)
        if role not in ROLES:
            raise ForbiddenBinding(f"unknown role {role!r}", channel=name, role=role)
        if role not in ch.accepted_roles:
            raise ForbiddenBinding(
                f"channel {name!r} of {template.id} does not accept {role!r}",
                channel=name, role=role,
            )
        if name in _HORIZONTAL_POSITIONAL and role == Y_NOMINAL:
            raise ForbiddenBinding("y-nominal data cannot drive a horizontal position",
                                   channel=name, role=role)
        if name in _VERTICAL_POSITIONAL and role == X_NOMINAL:
            raise ForbiddenBinding("x-nominal data cannot drive a vertical position",
                                   channel=name, role=role)
    for ch in template.channels:
        if ch.required and ch.name not in config.bindings:
            raise MissingChannel(f"channel {ch.name!r} of {template.id} must be bound",
                                 channel=ch.name)


def summary_stats(values: Sequence[Optional[float]]) -> SummaryStats:
    """Order statistics with linearly interpolated quartiles at p*(n-1)."""
    data = sorted(v for v in values if v is not None)
    if not data:
        raise EmptyInput("no values to summarize")
    if any(isinstance(v, str) for v in data):
        raise NonNumeric("text value in summary input")
    n = len(data)
    if n == 1:
        v = float(data[0])
        return SummaryStats(v, v, v, v, v, v, 1)
    q1, med, q3 = statistics.quantiles(data, n=4, method="inclusive")
    return SummaryStats(float(data[0]), float(data[-1]), float(statistics.fmean(data)),
                        float(med), float(q1), float(q3), n)


def normalize_unit_values(cells: Sequence[tuple[object, float]]) -> list[tuple[object, float]]:
    """Min-max normalization over the whole set; a constant set maps to 0.5."""
    if not cells:
        raise EmptyInput("no cells to normalize")
    values = []
    for _, v in cells:
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise NonNumeric(f"cannot normalize {v!r}")
        values.append(float(v))
    lo, hi = min(values), max(values)
    if lo == hi:
        return [(ref, 0.5) for (ref, _) in cells]
    return [(ref, (float(v) - lo) / (hi - lo)) for (ref, v) in cells]


# ---------------------------------------------------------------------------
# Emission


def _unit_ref(unit: m.TableUnit) -> dict:
    b = unit.block
    return {
        "block": {"row_start": b.row_start, "row_end": b.row_end,
                  "col_start": b.col_start, "col_end": b.col_end},
        "row_locator": unit.row_locator.render(),
        "col_locator": unit.col_locator.render(),
    }


def _geometry(unit: m.TableUnit, cell: CellGeometry) -> dict:
    b = unit.block
    return {
        "x": cell.origin_x + b.col_start * cell.cell_width,
        "y": cell.origin_y + b.row_start * cell.cell_height,
        "width": b.width * cell.cell_width,
        "height": b.height * cell.cell_height,
    }


def _data_rows(decomp: Decomposition) -> list[dict]:
    rows = []
    for i, y in enumerate(decomp.y_nominal):
        for j, x in enumerate(decomp.x_nominal):
            rows.append({
                "x": x,
                "y": y,
                "value": decomp.values[i][j],
                "row_path": "/".join(decomp.row_label_paths[i]),
                "col_path": "/".join(decomp.col_label_paths[j]),
            })
    return rows


_TOOLTIP = [
    {"field": "row_path", "type": "nominal", "title": "row"},
    {"field": "col_path", "type": "nominal", "title": "column"},
    {"field": "value", "type": "quantitative"},
]


def _numeric_values(decomp: Decomposition) -> list[float]:
    out = []
    for row in decomp.values:
        for v in row:
            if isinstance(v, str):
                raise NonNumeric(f"text entry {v!r} cannot be charted")
            if v is not None:
                out.append(v)
    return out


def _nominal_enc(field_name: str, title: str, values: Sequence[str]) -> dict:
    # sort: null keeps the table's presentation order instead of alphabetical
    return {"field": field_name, "type": "nominal", "sort": None, "title": title,
            "scale": {"domain": list(dict.fromkeys(values))}}


def _role_encoding(role: str, decomp: Decomposition, model: m.TableModel) -> dict:
    if role == X_NOMINAL:
        return _nominal_enc("x", model.col_axis.level_names[-1], decomp.x_nominal)
    if role == Y_NOMINAL:
        return _nominal_enc("y", model.row_axis.level_names[-1], decomp.y_nominal)
    return {"field": "value", "type": "quantitative"}


def emit_spec(model: m.TableModel, unit: m.TableUnit, config: VisConfig,
              cell_geometry: CellGeometry = CellGeometry(),
              norm_domain: Optional[tuple[float, float]] = None) -> VisGrammarDoc:
    """One deterministic Vega-Lite document for one unit."""
    template = get_template(config.template_id)
    decomp = decompose(model, unit)
    validate_mapping(template, config, decomp)

    h, w = len(decomp.y_nominal), len(decomp.x_nominal)
    if template.category == UNIT and (h, w) != (1, 1):
        raise ShapeError(f"{template.id} covers exactly one cell, unit is {h}x{w}")
    if template.category == TREND and not (h == 1 or w == 1):
        raise ShapeError(f"{template.id} tracks one row or one column, unit is {h}x{w}")
    if template.category == CORRELATION and (h < 2 or w < 2):
        raise ShapeError(f"{template.id} correlates rows or columns, unit is {h}x{w}")
    if template.id in ("pie", "radial") and any(v < 0 for v in _numeric_values(decomp)):
        raise ShapeError(f"{template.id} requires non-negative values")

    geometry = _geometry(unit, cell_geometry)
    spec = _build_spec(template, config, decomp, model, norm_domain)
    spec["$schema"] = VEGA_LITE_SCHEMA_URL
    spec["width"] = geometry["width"]
    spec["height"] = geometry["height"]
    spec["usermeta"] = {"_hitailor": {"geometry": geometry, "unit": _unit_ref(unit)}}
    return VisGrammarDoc(spec, geometry, _unit_ref(unit))


def _build_spec(template: VisTemplate, config: VisConfig, decomp: Decomposition,
                model: m.TableModel, norm_domain) -> dict:
    rows = _data_rows(decomp)
    tid = template.id

    if template.category == UNIT:
        v = decomp.values[0][0]
        if isinstance(v, str) or v is None:
            raise NonNumeric(f"unit visualization needs a number, got {v!r}")
        lo, hi = norm_domain if norm_domain else (v, v)
        norm = 0.5 if lo == hi else (v - lo) / (hi - lo)
        rows[0]["norm_value"] = norm
        enc_field = {"field": "norm_value", "type": "quantitative",
                     "scale": {"domain": [0, 1]}}
        channel = template.channels[0].name
        mark = {"unit_color": "rect", "unit_size": "circle", "unit_bar": "bar"}[tid]
        encoding = {channel: enc_field, "tooltip": _TOOLTIP}
        if tid == "unit_bar":
            encoding["y"] = {**enc_field, "title": None}
        return {"data": {"values": rows}, "mark": mark, "encoding": encoding}

    bindings = config.bindings
    encoding: dict = {"tooltip": _TOOLTIP}

    if tid == "ranged_dot":
        agg_rows, nominal = _aggregate(decomp, model, config, ("min", "max"))
        layers = [
            {"mark": "rule", "encoding": {
                nominal["channel"]: nominal["encoding"],
                nominal["other"]: {"field": "value_min", "type": "quantitative", "title": "value"},
                nominal["other"] + "2": {"field": "value_max"},
            }},
            {"mark": {"type": "point", "filled": True}, "encoding": {
                nominal["channel"]: nominal["encoding"],
                nominal["other"]: {"field": "value_min", "type": "quantitative", "title": "value"},
            }},
            {"mark": {"type": "point", "filled": True}, "encoding": {
                nominal["channel"]: nominal["encoding"],
                nominal["other"]: {"field": "value_max", "type": "quantitative", "title": "value"},
            }},
        ]
        return {"data": {"values": agg_rows}, "layer": layers}

    if tid == "box":
        for name in ("x", "y"):
            encoding[name] = _role_encoding(bindings[name], decomp, model)
        return {"data": {"values": rows}, "mark": {"type": "boxplot"}, "encoding": encoding}

    if tid == "horizon":
        return _horizon_spec(config, decomp, model)

    if tid == "scatter":
        return _scatter_spec(config, decomp)

    marks = {
        "bar": "bar", "stacked_bar": "bar", "strip": "tick",
        "parallel_coordinates": "line", "multi_line": "line", "line": "line",
        "pie": "arc", "radial": "arc", "heatmap": "rect",
    }
    for name, role in bindings.items():
        encoding[name] = _role_encoding(role, decomp, model)
        if name == "color" and role == VALUE:
            encoding[name] = {"field": "value", "type": "quantitative"}
        elif name == "color":
            src = "x" if role == X_NOMINAL else "y"
            title = (model.col_axis if role == X_NOMINAL else model.row_axis).level_names[-1]
            encoding[name] = {"field": src, "type": "nominal", "title": title}
        if name == "theta":
            encoding[name] = {"field": "value", "type": "quantitative"}
        if name == "radius":
            encoding[name] = {"field": "value", "type": "quantitative"}
    if tid in ("parallel_coordinates", "multi_line", "line"):
        detail_src = "y" if len(decomp.y_nominal) > 1 else "x"
        if "color" not in encoding or encoding.get("color", {}).get("field") != detail_src:
            encoding["detail"] = {"field": detail_src, "type": "nominal"}
    mark: object = marks[tid]
    if tid == "stacked_bar":
        mark = {"type": "bar"}
    if tid == "radial":
        mark = {"type": "arc", "innerRadius": 20}
        encoding.setdefault("radius", {"field": "value", "type": "quantitative"})
    if tid == "pie":
        mark = {"type": "arc"}
    return {"data": {"values": rows}, "mark": mark, "encoding": encoding}


def _aggregate(decomp: Decomposition, model: m.TableModel, config: VisConfig,
               stats: tuple[str, ...]):
    """Per-column (default) or per-row min/max rows for aggregating templates."""
    axis = config.options.get("aggregate_axis", "col")
    _numeric_values(decomp)  # reject text early
    out = []
    if axis == "col":
        for j, x in enumerate(decomp.x_nominal):
            vals = [decomp.values[i][j] for i in range(len(decomp.y_nominal))
                    if decomp.values[i][j] is not None]
            if not vals:
                raise EmptyInput(f"column {x!r} holds no values")
            out.append({"x": x, "col_path": "/".join(decomp.col_label_paths[j]),
                        "value_min": min(vals), "value_max": max(vals)})
        nominal = {"channel": "x",
                   "encoding": _nominal_enc("x", model.col_axis.level_names[-1],
                                            decomp.x_nominal),
                   "other": "y"}
    else:
        for i, y in enumerate(decomp.y_nominal):
            vals = [v for v in decomp.values[i] if v is not None]
            if not vals:
                raise EmptyInput(f"row {y!r} holds no values")
            out.append({"y": y, "row_path": "/".join(decomp.row_label_paths[i]),
                        "value_min": min(vals), "value_max": max(vals)})
        nominal = {"channel": "y",
                   "encoding": _nominal_enc("y", model.row_axis.level_names[-1],
                                            decomp.y_nominal),
                   "other": "x"}
    return out, nominal


def _horizon_spec(config: VisConfig, decomp: Decomposition, model: m.TableModel) -> dict:
    """Two-band layered area folded at the series midrange."""
    rows = _data_rows(decomp)
    values = _numeric_values(decomp)
    if not values:
        raise EmptyInput("horizon graph needs at least one value")
    lo, hi = min(values), max(values)
    mid = lo + (hi - lo) / 2.0
    for r in rows:
        v = r["value"]
        if v is None:
            r["band_low"], r["band_high"] = None, None
        else:
            r["band_low"] = min(v, mid) - lo
            r["band_high"] = (v - mid) if v > mid else 0.0
    along_row = len(decomp.y_nominal) == 1
    if along_row:
        x_enc = _nominal_enc("x", model.col_axis.level_names[-1], decomp.x_nominal)
    else:
        x_enc = _nominal_enc("y", model.row_axis.level_names[-1], decomp.y_nominal)
        x_enc = {**x_enc, "field": "y"}
    layers = []
    for band, opacity in (("band_low", 0.5), ("band_high", 0.9)):
        layers.append({
            "mark": {"type": "area", "interpolate": "monotone", "opacity": opacity},
            "encoding": {
                "x": x_enc,
                "y": {"field": band, "type": "quantitative", "title": "value"},
                "tooltip": _TOOLTIP,
            },
        })
    return {"data": {"values": rows}, "layer": layers}


def _scatter_spec(config: VisConfig, decomp: Decomposition) -> dict:
    """Two rows (or columns) plotted against each other."""
    series = config.options.get("series", "rows")
    a = int(config.options.get("series_a", 0))
    b = int(config.options.get("series_b", 1))
    _numeric_values(decomp)
    points = []
    if series == "rows":
        if len(decomp.y_nominal) < 2:
            raise ShapeError("rows-as-series scatter needs at least two rows")
        name_a, name_b = decomp.y_nominal[a], decomp.y_nominal[b]
        for j, x in enumerate(decomp.x_nominal):
            points.append({"label": x, "a": decomp.values[a][j], "b": decomp.values[b][j]})
    else:
        if len(decomp.x_nominal) < 2:
            raise ShapeError("columns-as-series scatter needs at least two columns")
        name_a, name_b = decomp.x_nominal[a], decomp.x_nominal[b]
        for i, y in enumerate(decomp.y_nominal):
            points.append({"label": y, "a": decomp.values[i][a], "b": decomp.values[i][b]})
    return {
        "data": {"values": points},
        "mark": {"type": "point", "filled": True},
        "encoding": {
            "x": {"field": "a", "type": "quantitative", "title": name_a},
            "y": {"field": "b", "type": "quantitative", "title": name_b},
            "tooltip": [{"field": "label", "type": "nominal"}],
        },
    }


def rebind_all(model: m.TableModel, config: VisConfig,
               recommendations: Sequence, cell_geometry: CellGeometry = CellGeometry()
               ) -> list[VisGrammarDoc]:
    """Re-slice one configuration across every recommended unit.

    Unit templates share a single min-max normalization domain computed
    over the whole recommendation set before fan-out.
    """
    template = get_template(config.template_id)
    units = [rec.unit for rec in recommendations]
    norm_domain = None
    if template.category == UNIT and units:
        cells = []
        for unit in units:
            d = decompose(model, unit)
            v = d.values[0][0] if d.values and d.values[0] else None
            if isinstance(v, str):
                raise NonNumeric(f"text entry {v!r} cannot be normalized")
            if v is not None:
                cells.append(v)
        if not cells:
            raise EmptyInput("no numeric cells across the recommendation set")
        norm_domain = (min(cells), max(cells))
    return [emit_spec(model, unit, config, cell_geometry, norm_domain) for unit in units]
