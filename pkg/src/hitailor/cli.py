"""Batch command line: import, transform scripts, and chart emission.

Exit codes: 0 ok, 2 parse error, 3 transform error (message names the
failing op index), 4 visualization validation error. HTJ paths accept
"-" for stdin/stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import importer, model as m, recommend as rc, transform as tf, visgen as vg
from .errors import HiTailorError, ScriptError

EXIT_PARSE, EXIT_TRANSFORM, EXIT_VIS = 2, 3, 4


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _write_bytes(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        return
    Path(path).write_bytes(data)


def _load_table(path: str, args) -> m.TableModel:
    if getattr(args, "csv", None):
        with open(args.csv, newline="", encoding="utf-8") as f:
            rows = [list(r) for r in csv.reader(f)]
        merges = _read_json(args.merges) if args.merges else []
        doc = importer.grid_from_csv(rows, merges, args.heading_rows, args.heading_cols)
        return importer.parse_grid(doc)
    doc = _read_json(path)
    if "cells" in doc:
        return importer.parse_grid(importer.GridDoc.from_dict(doc))
    return importer.parse_htj(doc)


def _structure_summary(table: m.TableModel) -> str:
    lines = []
    for word, axis in (("row", table.row_axis), ("column", table.col_axis)):
        ann = m.detect_structure(axis)
        leaf_count = sum(r.leaf_count() for r in axis.roots)
        desc = f"{word} headings: {axis.depth} level(s), {leaf_count} leaves"
        if ann.bicluster_from is not None:
            desc += f"; {word} bicluster at level {ann.bicluster_from}"
        lines.append(desc)
    lines.append(f"entries: {table.n_rows} x {table.n_cols}")
    return "\n".join(lines)


def cmd_import(args) -> int:
    try:
        table = _load_table(args.infile, args)
    except (HiTailorError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    _write_bytes(args.out, importer.htj_bytes(importer.serialize_htj(table)))
    print(_structure_summary(table), file=sys.stderr)
    return 0


def cmd_transform(args) -> int:
    try:
        table = _load_table(args.infile, args)
        ops = [tf.op_from_dict(d) for d in _read_json(args.ops)]
    except (HiTailorError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        result = tf.apply_script(table, ops)
    except ScriptError as e:
        print(f"error: {e.cause.code} at op {e.index}: {e.cause}", file=sys.stderr)
        return EXIT_TRANSFORM
    _write_bytes(args.out, importer.htj_bytes(importer.serialize_htj(result)))
    return 0


def _parse_range(text: str) -> tuple[int, int | None]:
    lo, _, hi = text.partition(":")
    return int(lo or 0), (int(hi) if hi else None)


def cmd_vis(args) -> int:
    try:
        table = _load_table(args.infile, args)
        unit_doc = _read_json(args.unit)
        config_doc = _read_json(args.config)
    except (HiTailorError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    mechanism = {"topo": rc.TOPOLOGY, "topology": rc.TOPOLOGY, "name": rc.NAME}.get(args.mechanism)
    if mechanism is None:
        print(f"error: unknown mechanism {args.mechanism!r}", file=sys.stderr)
        return EXIT_PARSE
    config = vg.VisConfig(config_doc["template_id"], dict(config_doc.get("bindings", {})),
                          dict(config_doc.get("options", {})))
    cell = vg.CellGeometry(args.cell_width, args.cell_height)
    try:
        unit = m.unit_from_locators(table, m.Locator.parse(unit_doc["row"]),
                                    m.Locator.parse(unit_doc["col"]))
        recs = rc.recommend(table, unit, mechanism,
                            _parse_range(args.row_range), _parse_range(args.col_range))
        docs = vg.rebind_all(table, config, recs, cell)
    except HiTailorError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return EXIT_VIS
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for rec, doc in zip(recs, docs):
        b = rec.unit.block
        path = out_dir / f"unit-{b.row_start}-{b.col_start}.vl.json"
        path.write_bytes((json.dumps(doc.doc, sort_keys=True, indent=2,
                                     ensure_ascii=False) + "\n").encode("utf-8"))
    print(f"wrote {len(docs)} documents to {out_dir}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    app = create_app(snapshot_dir=args.snapshot_dir, max_table_cells=args.max_table_cells)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hitailor",
                                     description="hierarchical table toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_imp = sub.add_parser("import", help="parse a grid or HTJ document into canonical HTJ")
    p_imp.add_argument("--in", dest="infile", default="-", help="grid.json or table.htj.json")
    p_imp.add_argument("--out", default="-", help="output HTJ path")
    p_imp.add_argument("--csv", help="CSV body instead of --in")
    p_imp.add_argument("--merges", help="JSON merge list for --csv")
    p_imp.add_argument("--heading-rows", type=int, default=1)
    p_imp.add_argument("--heading-cols", type=int, default=1)
    p_imp.set_defaults(func=cmd_import)

    p_tr = sub.add_parser("transform", help="apply a JSON op script to an HTJ table")
    p_tr.add_argument("--in", dest="infile", default="-")
    p_tr.add_argument("--ops", required=True, help="JSON list of transform ops")
    p_tr.add_argument("--out", default="-")
    p_tr.set_defaults(func=cmd_transform)

    p_vis = sub.add_parser("vis", help="emit chart documents for a unit and its recommendations")
    p_vis.add_argument("--in", dest="infile", required=True)
    p_vis.add_argument("--unit", required=True, help='JSON {"row": [[..]], "col": [[..]]}')
    p_vis.add_argument("--config", required=True, help="JSON visualization config")
    p_vis.add_argument("--mechanism", default="topo")
    p_vis.add_argument("--row-range", default="0:")
    p_vis.add_argument("--col-range", default="0:")
    p_vis.add_argument("--cell-width", type=float, default=80.0)
    p_vis.add_argument("--cell-height", type=float, default=24.0)
    p_vis.add_argument("--out", required=True, help="output directory")
    p_vis.set_defaults(func=cmd_vis)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int,
                       default=int(os.environ.get("HITAILOR_PORT", "8000")))
    p_srv.add_argument("--snapshot-dir", default=None)
    p_srv.add_argument("--max-table-cells", type=int, default=1_000_000)
    p_srv.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
