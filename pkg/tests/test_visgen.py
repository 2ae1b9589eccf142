import json
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from hitailor import model as m
from hitailor import recommend as rc
from hitailor import visgen as vg
from hitailor.errors import (
    EmptyInput,
    ForbiddenBinding,
    MissingChannel,
    NonNumeric,
    ShapeError,
    UnknownTemplate,
)

VL_SCHEMA = json.loads(
    (Path(__file__).parent.parent / "docs" / "vega-lite-v5.schema.json").read_text()
)
VL_VALIDATOR = jsonschema.Draft7Validator(VL_SCHEMA)


def _unit(sales, row, col):
    return m.unit_from_locators(sales, m.Locator.parse(row), m.Locator.parse(col))


def _valid_config(template: vg.VisTemplate) -> vg.VisConfig:
    bindings = {}
    for ch in template.channels:
        if ch.required:
            bindings[ch.name] = ch.accepted_roles[0]
    return vg.VisConfig(template.id, bindings)


def _suitable_unit(sales, template: vg.VisTemplate):
    if template.category == vg.UNIT:
        return _unit(sales, [["Asia", "CHN", "SHA"]], [["2020", "spr"]])
    if template.category == vg.TREND:
        return _unit(sales, [["Asia", "CHN", "SHA"]], [["2020", "*"], ["2021", "*"]])
    return _unit(sales, [["Europe", "FRA", "*"]], [["2021", "*"]])


# ---------------------------------------------------------------------------
# decomposition


def test_decompose_block(sales):
    unit = _unit(sales, [["Europe", "FRA", "*"]], [["2021", "spr"], ["2021", "aut"]])
    d = vg.decompose(sales, unit)
    assert d.x_nominal == ("spr", "aut")
    assert d.y_nominal == ("PAR", "MRS")
    assert d.values == ((121.0, 109.0), (76.0, 68.0))
    assert d.row_label_paths == (("Europe", "FRA", "PAR"), ("Europe", "FRA", "MRS"))


def test_decompose_single_cell(sales):
    d = vg.decompose(sales, _unit(sales, [["Asia", "CHN", "SHA"]], [["2020", "spr"]]))
    assert d.x_nominal == ("spr",) and d.y_nominal == ("SHA",)
    assert d.values == ((131.0,),)


def test_decompose_full_table(sales):
    d = vg.decompose(sales, m.make_unit(sales, m.Block(0, 8, 0, 6)))
    assert len(d.y_nominal) == 8 and len(d.x_nominal) == 6


# ---------------------------------------------------------------------------
# catalog


def test_catalog_contents():
    cat = vg.template_catalog()
    assert len(cat) == 16
    ids = {t.id for t in cat}
    assert {"unit_color", "unit_size", "unit_bar"} <= ids
    assert {"bar", "stacked_bar", "ranged_dot", "box", "strip",
            "parallel_coordinates", "multi_line", "pie", "radial"} <= ids
    assert {"horizon", "line"} <= ids
    assert {"scatter", "heatmap"} <= ids
    by_cat = {}
    for t in cat:
        by_cat.setdefault(t.category, []).append(t.id)
    assert len(by_cat[vg.UNIT]) == 3 and len(by_cat[vg.OVERVIEW]) == 9
    assert len(by_cat[vg.TREND]) == 2 and len(by_cat[vg.CORRELATION]) == 2


def test_catalog_ranged_dot_aggregation():
    assert vg.get_template("ranged_dot").aggregation == "min_max"
    assert vg.get_template("box").aggregation == "quartiles"


def test_catalog_channel_restriction_invariant():
    for t in vg.template_catalog():
        for ch in t.channels:
            if ch.name in vg._HORIZONTAL_POSITIONAL:
                assert vg.Y_NOMINAL not in ch.accepted_roles
            if ch.name in vg._VERTICAL_POSITIONAL:
                assert vg.X_NOMINAL not in ch.accepted_roles


def test_unknown_template():
    with pytest.raises(UnknownTemplate):
        vg.get_template("sparkline")


# ---------------------------------------------------------------------------
# mapping validation


def test_validate_stacked_bar_ok(sales):
    d = vg.decompose(sales, _suitable_unit(sales, vg.get_template("stacked_bar")))
    vg.validate_mapping(vg.get_template("stacked_bar"),
                        vg.VisConfig("stacked_bar",
                                     {"x": "x_nominal", "y": "value", "color": "y_nominal"}),
                        d)


def test_validate_forbidden_binding(sales):
    with pytest.raises(ForbiddenBinding):
        vg.validate_mapping(vg.get_template("stacked_bar"),
                            vg.VisConfig("stacked_bar",
                                         {"x": "y_nominal", "y": "value", "color": "y_nominal"}))


def test_validate_missing_channel():
    with pytest.raises(MissingChannel):
        vg.validate_mapping(vg.get_template("box"), vg.VisConfig("box", {"x": "x_nominal"}))


# ---------------------------------------------------------------------------
# stats and normalization


def test_summary_stats_worked_example():
    s = vg.summary_stats([1.0, 2.0, 3.0, 4.0])
    assert (s.min, s.max, s.mean, s.median) == (1.0, 4.0, 2.5, 2.5)
    assert (s.q1, s.q3, s.n) == (1.75, 3.25, 4)


def test_summary_stats_singleton():
    s = vg.summary_stats([5.0])
    assert (s.min, s.max, s.mean, s.median, s.q1, s.q3, s.n) == (5.0,) * 6 + (1,)


def test_summary_stats_empty():
    with pytest.raises(EmptyInput):
        vg.summary_stats([])
    with pytest.raises(EmptyInput):
        vg.summary_stats([None, None])


def test_summary_stats_drops_missing():
    assert vg.summary_stats([None, 2.0, None, 4.0]).n == 2


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=1000))
def test_summary_stats_matches_sort_oracle(xs):
    values = [float(x) for x in xs]
    s = vg.summary_stats(values)
    data = sorted(values)
    n = len(data)

    def quantile(p):
        pos = p * (n - 1)
        lo = int(pos)
        hi = min(lo + 1, n - 1)
        return data[lo] + (pos - lo) * (data[hi] - data[lo])

    assert s.min == data[0] and s.max == data[-1]
    assert s.mean == pytest.approx(sum(data) / n)
    assert s.q1 == pytest.approx(quantile(0.25))
    assert s.median == pytest.approx(quantile(0.5))
    assert s.q3 == pytest.approx(quantile(0.75))
    assert s.min <= s.q1 <= s.median <= s.q3 <= s.max


def test_normalize_min_max():
    out = vg.normalize_unit_values([("a", 1.0), ("b", 3.0), ("c", 5.0)])
    assert [v for _, v in out] == [0.0, 0.5, 1.0]


def test_normalize_constant_input():
    out = vg.normalize_unit_values([("a", 7.0), ("b", 7.0)])
    assert [v for _, v in out] == [0.5, 0.5]


def test_normalize_non_numeric():
    with pytest.raises(NonNumeric):
        vg.normalize_unit_values([("a", "text")])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=50))
def test_normalize_bounds(xs):
    out = vg.normalize_unit_values(list(enumerate(xs)))
    values = [v for _, v in out]
    assert all(0.0 <= v <= 1.0 for v in values)
    if min(xs) != max(xs):
        assert min(values) == 0.0 and max(values) == 1.0


def test_normalize_against_recommendation_set(sales):
    unit = _unit(sales, [["Asia", "CHN", "SHA"]], [["2020", "spr"]])
    recs = rc.enumerate_candidates(sales, unit, rc.TOPOLOGY)
    cells = [(r.unit.block, sales.entries[r.unit.block.row_start][r.unit.block.col_start])
             for r in recs]
    out = dict((id(ref), v) for (ref, _), (_, v) in zip(cells, vg.normalize_unit_values(cells)))
    raw = [v for _, v in cells]
    lo, hi = min(raw), max(raw)
    for (ref, v), norm in zip(cells, out.values()):
        assert norm == pytest.approx((v - lo) / (hi - lo))


# ---------------------------------------------------------------------------
# emission


def test_emit_stacked_bar_geometry_and_determinism(sales):
    unit = _unit(sales, [["Europe", "FRA", "*"]], [["2021", "*"]])
    cfg = vg.VisConfig("stacked_bar", {"x": "x_nominal", "y": "value", "color": "y_nominal"})
    cell = vg.CellGeometry(cell_width=50.0, cell_height=20.0)
    doc_a = vg.emit_spec(sales, unit, cfg, cell)
    doc_b = vg.emit_spec(sales, unit, cfg, cell)
    assert doc_a.geometry == {"x": 150.0, "y": 80.0, "width": 150.0, "height": 40.0}
    assert json.dumps(doc_a.doc, sort_keys=True) == json.dumps(doc_b.doc, sort_keys=True)
    assert doc_a.doc["usermeta"]["_hitailor"]["geometry"] == doc_a.geometry
    assert doc_a.doc["width"] == unit.block.width * 50.0
    assert doc_a.doc["height"] == unit.block.height * 20.0


def test_emit_horizon_two_bands(sales):
    unit = _unit(sales, [["Asia", "CHN", "SHA"]], [["2020", "*"], ["2021", "*"]])
    doc = vg.emit_spec(sales, unit, vg.VisConfig("horizon", {"x": "x_nominal", "y": "value"}))
    assert len(doc.doc["layer"]) == 2
    rows = doc.doc["layer"][0]["encoding"]
    values = doc.doc["data"]["values"]
    assert all("band_low" in r and "band_high" in r for r in values)


def test_emit_unit_color_normalized(sales):
    unit = _unit(sales, [["Asia", "CHN", "SHA"]], [["2020", "spr"]])
    doc = vg.emit_spec(sales, unit, vg.VisConfig("unit_color", {"color": "value"}),
                       norm_domain=(73.0, 276.0))
    row = doc.doc["data"]["values"][0]
    assert row["norm_value"] == pytest.approx((131.0 - 73.0) / (276.0 - 73.0))
    assert doc.doc["encoding"]["color"]["scale"]["domain"] == [0, 1]
    assert doc.doc["mark"] == "rect"


def test_emit_trend_on_block_rejected(sales):
    unit = _unit(sales, [["Europe", "FRA", "*"]], [["2021", "*"]])
    with pytest.raises(ShapeError):
        vg.emit_spec(sales, unit, vg.VisConfig("horizon", {"x": "x_nominal", "y": "value"}))


def test_emit_scatter_single_row_rejected(sales):
    unit = _unit(sales, [["Asia", "CHN", "SHA"]], [["2020", "*"], ["2021", "*"]])
    with pytest.raises(ShapeError):
        vg.emit_spec(sales, unit, vg.VisConfig("scatter", {"x": "value", "y": "value"},
                                               {"series": "rows"}))


def test_emit_pie_rejects_negatives(sales):
    bad = m.TableModel(sales.row_axis, sales.col_axis,
                       tuple(tuple(-v if v else v for v in row) for row in sales.entries))
    unit = _unit(bad, [["Europe", "FRA", "*"]], [["2021", "*"]])
    with pytest.raises(ShapeError):
        vg.emit_spec(bad, unit, vg.VisConfig("pie", {"theta": "value", "color": "x_nominal"}))


def test_emit_keeps_presentation_order(sales):
    unit = _unit(sales, [["Europe", "FRA", "*"]], [["2021", "*"]])
    doc = vg.emit_spec(sales, unit,
                       vg.VisConfig("stacked_bar",
                                    {"x": "x_nominal", "y": "value", "color": "y_nominal"}))
    x_enc = doc.doc["encoding"]["x"]
    assert x_enc["sort"] is None
    assert x_enc["scale"]["domain"] == ["&", "spr", "aut"]
    assert x_enc["title"] == "season"


def test_all_templates_emit_schema_valid_docs(sales):
    for template in vg.template_catalog():
        unit = _suitable_unit(sales, template)
        cfg = _valid_config(template)
        doc = vg.emit_spec(sales, unit, cfg,
                           norm_domain=(0.0, 300.0) if template.category == vg.UNIT else None)
        errors = list(VL_VALIDATOR.iter_errors(doc.doc))
        assert not errors, f"{template.id}: {errors[0].message}"


def test_no_emitted_doc_binds_nominals_to_wrong_axis(sales):
    """Mapping restriction holds over all templates x valid configs."""
    for template in vg.template_catalog():
        unit = _suitable_unit(sales, template)
        doc = vg.emit_spec(sales, unit, _valid_config(template),
                           norm_domain=(0.0, 300.0) if template.category == vg.UNIT else None)

        def check_encoding(enc):
            for channel, spec in enc.items():
                if not isinstance(spec, dict):
                    continue
                field = spec.get("field")
                if channel in ("x", "x2", "theta"):
                    assert field != "y", f"{template.id} binds y-nominal horizontally"
                if channel in ("y", "y2"):
                    assert field != "x", f"{template.id} binds x-nominal vertically"

        if "encoding" in doc.doc:
            check_encoding(doc.doc["encoding"])
        for layer in doc.doc.get("layer", []):
            check_encoding(layer.get("encoding", {}))


def test_rebind_preserves_config_and_domain(sales):
    unit = _unit(sales, [["Europe", "FRA", "*"]], [["2021", "*"]])
    recs = rc.recommend(sales, unit, rc.TOPOLOGY, (0, None), (0, None))
    cfg = vg.VisConfig("stacked_bar", {"x": "x_nominal", "y": "value", "color": "y_nominal"})
    docs = vg.rebind_all(sales, cfg, recs)
    assert len(docs) == 8
    channel_maps = {json.dumps(sorted(d.doc["encoding"].keys())) for d in docs}
    assert len(channel_maps) == 1
    gbr = next(d for d in docs if d.unit_ref["row_locator"] == [["Europe", "GBR", "*"]])
    assert [r["y"] for r in gbr.doc["data"]["values"][::3]] == ["LON", "LIV"]


def test_rebind_unit_template_shares_domain(sales):
    unit = _unit(sales, [["Asia", "CHN", "SHA"]], [["2020", "spr"]])
    recs = rc.enumerate_candidates(sales, unit, rc.TOPOLOGY)
    docs = vg.rebind_all(sales, vg.VisConfig("unit_color", {"color": "value"}), recs)
    assert len(docs) == 48
    norms = [d.doc["data"]["values"][0]["norm_value"] for d in docs]
    assert min(norms) == 0.0 and max(norms) == 1.0
    domains = {json.dumps(d.doc["encoding"]["color"]["scale"]["domain"]) for d in docs}
    assert domains == {"[0, 1]"}


def test_rebind_empty():
    assert vg.rebind_all(None, vg.VisConfig("unit_color", {"color": "value"}), []) == []
