import pytest

from hitailor import model as m
from hitailor.importer import GridDoc


# Seasonal sales of eight cities: two region hierarchies in the rows, a
# year x season bicluster in the columns, with "&" sum columns first.
CITY_VALUES = {
    # city: (2020 spr, 2020 aut, 2021 spr, 2021 aut)
    "PEK": (108.0, 96.0, 112.0, 104.0),
    "SHA": (131.0, 119.0, 135.0, 123.0),
    "OSA": (87.0, 79.0, 90.0, 82.0),
    "TKY": (142.0, 128.0, 146.0, 130.0),
    "PAR": (118.0, 102.0, 121.0, 109.0),
    "MRS": (73.0, 65.0, 76.0, 68.0),
    "LON": (125.0, 111.0, 129.0, 115.0),
    "LIV": (95.0, 83.0, 98.0, 88.0),
}
ROW_FOREST = {
    "Asia": {"CHN": ["PEK", "SHA"], "JPN": ["OSA", "TKY"]},
    "Europe": {"FRA": ["PAR", "MRS"], "GBR": ["LON", "LIV"]},
}
CITIES = [c for region in ROW_FOREST.values() for cs in region.values() for c in cs]


def _row_roots():
    return [
        m.make_node(m.Label(region), [
            m.make_node(m.Label(country), [m.make_node(m.Label(city)) for city in cities])
            for country, cities in countries.items()
        ])
        for region, countries in ROW_FOREST.items()
    ]


def sales_table() -> m.TableModel:
    """8x6 table with derived "&" sum columns before spr/aut."""
    col_roots = [
        m.make_node(m.Label(year), [
            m.make_node(m.derived_label("sum")),
            m.make_node(m.Label("spr")),
            m.make_node(m.Label("aut")),
        ])
        for year in ("2020", "2021")
    ]
    entries = []
    for city in CITIES:
        s20, a20, s21, a21 = CITY_VALUES[city]
        entries.append((s20 + a20, s20, a20, s21 + a21, s21, a21))
    return m.TableModel(
        m.make_axis(_row_roots(), ["region", "country", "city"]),
        m.make_axis(col_roots, ["year", "season"]),
        tuple(entries),
    )


def stacked_sales_table() -> m.TableModel:
    """8x4 variant without the derived sum columns."""
    col_roots = [
        m.make_node(m.Label(year), [m.make_node(m.Label("spr")), m.make_node(m.Label("aut"))])
        for year in ("2020", "2021")
    ]
    entries = []
    for city in CITIES:
        s20, a20, s21, a21 = CITY_VALUES[city]
        entries.append((s20, a20, s21, a21))
    return m.TableModel(
        m.make_axis(_row_roots(), ["region", "country", "city"]),
        m.make_axis(col_roots, ["year", "season"]),
        tuple(entries),
    )


def sales_grid_doc() -> GridDoc:
    """The same table as a span-tiled grid: 2 heading rows, 3 heading columns."""
    cells = [
        {"row": 0, "col": 0, "row_span": 2, "col_span": 3, "text": ""},
        {"row": 0, "col": 3, "col_span": 3, "text": "2020"},
        {"row": 0, "col": 6, "col_span": 3, "text": "2021"},
    ]
    for j, season in enumerate(["&", "spr", "aut", "&", "spr", "aut"]):
        cells.append({"row": 1, "col": 3 + j, "text": season})
    cells.append({"row": 2, "col": 0, "row_span": 4, "text": "Asia"})
    cells.append({"row": 6, "col": 0, "row_span": 4, "text": "Europe"})
    for i, country in enumerate(["CHN", "JPN", "FRA", "GBR"]):
        cells.append({"row": 2 + 2 * i, "col": 1, "row_span": 2, "text": country})
    for i, city in enumerate(CITIES):
        cells.append({"row": 2 + i, "col": 2, "text": city})
        s20, a20, s21, a21 = CITY_VALUES[city]
        for j, v in enumerate((s20 + a20, s20, a20, s21 + a21, s21, a21)):
            cells.append({"row": 2 + i, "col": 3 + j, "text": repr(v)})
    return GridDoc.from_dict({
        "n_heading_rows": 2,
        "n_heading_cols": 3,
        "width": 9,
        "height": 10,
        "cells": cells,
        "row_level_names": ["region", "country", "city"],
        "col_level_names": ["year", "season"],
    })


@pytest.fixture
def sales():
    return sales_table()


@pytest.fixture
def stacked():
    return stacked_sales_table()


@pytest.fixture
def grid_doc():
    return sales_grid_doc()
