"""HTTP JSON API for the full authoring loop.

Upload a table, transform it, select a unit, ask for recommendations,
fan a visualization config out over them, export the result. Sessions
are in-memory; writes on one session are serialized, reads see the
last committed model.
"""

from __future__ import annotations

import os
from contextlib import asynccontextmanager

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .. import importer, recommend as rc, transform as tf, visgen as vg
from .. import model as m
from ..errors import (
    AmbiguousSequence,
    EmptyHistory,
    HiTailorError,
    NonContiguous,
    UnknownLabel,
)
from . import schemas as sc
from .sessions import Session, SessionStore

LOCATOR_ERRORS = (UnknownLabel, NonContiguous, AmbiguousSequence)

DEFAULT_MAX_CELLS = 1_000_000


def _error(status: int, exc: HiTailorError) -> JSONResponse:
    body = sc.ApiError(code=exc.code, message=str(exc), detail=exc.detail or None)
    return JSONResponse(status_code=status, content=body.model_dump())


def _not_found(session_id: str) -> JSONResponse:
    body = sc.ApiError(code="UnknownSession", message=f"no session {session_id!r}")
    return JSONResponse(status_code=404, content=body.model_dump())


def _axis_summary(axis: m.HeadingAxis) -> sc.AxisSummary:
    ann = m.detect_structure(axis)
    return sc.AxisSummary(
        depth=axis.depth,
        leaf_count=sum(r.leaf_count() for r in axis.roots),
        level_names=list(axis.level_names),
        nodes=[importer.node_to_dict(r) for r in axis.roots],
        uniform_boundaries=list(ann.uniform_boundaries),
        bicluster_from=ann.bicluster_from,
    )


def summarize(model: m.TableModel) -> sc.ModelSummary:
    return sc.ModelSummary(
        version=model.version,
        n_rows=model.n_rows,
        n_cols=model.n_cols,
        row_axis=_axis_summary(model.row_axis),
        col_axis=_axis_summary(model.col_axis),
    )


def _parse_locators(session: Session, row: list, col: list) -> m.TableUnit:
    return m.unit_from_locators(session.current,
                                m.Locator.parse(row), m.Locator.parse(col))


def create_app(snapshot_dir: str | None = None,
               max_table_cells: int = DEFAULT_MAX_CELLS,
               debug: bool | None = None) -> FastAPI:
    if debug is None:
        debug = os.environ.get("HITAILOR_DEBUG", "") not in ("", "0")
    store = SessionStore(snapshot_dir)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        store.start_snapshot_timer()
        yield
        store.stop_snapshot_timer()
        store.save_snapshots()

    app = FastAPI(title="hitailor", version="0.1.0", lifespan=lifespan)
    app.state.store = store
    app.state.max_table_cells = max_table_cells
    app.state.debug = debug

    @app.exception_handler(HiTailorError)
    async def engine_error(request: Request, exc: HiTailorError):
        return _error(422, exc)

    @app.get("/templates", response_model=list[sc.TemplateOut])
    def templates():
        return [
            sc.TemplateOut(
                id=t.id, category=t.category, aggregation=t.aggregation,
                channels=[{"channel_name": c.name, "accepted_roles": list(c.accepted_roles),
                           "required": c.required} for c in t.channels],
            )
            for t in vg.template_catalog()
        ]

    @app.post("/tables", response_model=sc.UploadResponse, status_code=201)
    def upload(body: dict):
        try:
            if "cells" in body:
                doc = importer.GridDoc.from_dict(body)
                if doc.width * doc.height > max_table_cells:
                    return _error(400, HiTailorError(
                        f"grid exceeds {max_table_cells} cells"))
                table = importer.parse_grid(doc)
            else:
                table = importer.parse_htj(body)
        except HiTailorError as e:
            return _error(400, e)
        if table.n_rows * table.n_cols > max_table_cells:
            return _error(400, HiTailorError(f"table exceeds {max_table_cells} cells"))
        sess = store.create(table)
        return sc.UploadResponse(session_id=sess.id, summary=summarize(table))

    @app.get("/tables/{session_id}", response_model=sc.ModelSummary)
    def table_summary(session_id: str):
        sess = store.get(session_id)
        if sess is None:
            return _not_found(session_id)
        return summarize(sess.current)

    @app.get("/tables/{session_id}/entries", response_model=sc.EntriesPage)
    def entries_page(session_id: str, offset: int = 0, limit: int = 200):
        sess = store.get(session_id)
        if sess is None:
            return _not_found(session_id)
        model = sess.current
        rows = [list(r) for r in model.entries[offset:offset + limit]]
        return sc.EntriesPage(offset=offset, rows=rows, total_rows=model.n_rows)

    @app.post("/tables/{session_id}/transform", response_model=sc.TransformResponse)
    def apply_transform(session_id: str, body: sc.TransformRequest):
        sess = store.get(session_id)
        if sess is None:
            return _not_found(session_id)
        try:
            op = tf.op_from_dict(body.model_dump())
            with sess.lock:
                model = sess.history.apply(op)
                sess.selections.clear()
        except HiTailorError as e:
            return _error(422, e)
        return sc.TransformResponse(version=model.version, summary=summarize(model))

    @app.post("/tables/{session_id}/undo", response_model=sc.TransformResponse)
    def undo(session_id: str):
        sess = store.get(session_id)
        if sess is None:
            return _not_found(session_id)
        try:
            with sess.lock:
                model = sess.history.undo()
                sess.selections.clear()
        except EmptyHistory as e:
            return _error(422, e)
        return sc.TransformResponse(version=model.version, summary=summarize(model))

    @app.post("/tables/{session_id}/redo", response_model=sc.TransformResponse)
    def redo(session_id: str):
        sess = store.get(session_id)
        if sess is None:
            return _not_found(session_id)
        try:
            with sess.lock:
                model = sess.history.redo()
                sess.selections.clear()
        except EmptyHistory as e:
            return _error(422, e)
        return sc.TransformResponse(version=model.version, summary=summarize(model))

    @app.post("/tables/{session_id}/select", response_model=sc.SelectResponse)
    def select(session_id: str, body: sc.SelectRequest):
        sess = store.get(session_id)
        if sess is None:
            return _not_found(session_id)
        try:
            unit = _parse_locators(sess, body.row, body.col)
        except LOCATOR_ERRORS as e:
            return _error(400, e)
        with sess.lock:
            sess.selections[body.name] = unit
        b = unit.block
        return sc.SelectResponse(
            name=body.name,
            block={"row_start": b.row_start, "row_end": b.row_end,
                   "col_start": b.col_start, "col_end": b.col_end},
            row_locator=unit.row_locator.render(),
            col_locator=unit.col_locator.render(),
            row_single_subtree=unit.row_single_subtree,
            col_single_subtree=unit.col_single_subtree,
        )

    @app.get("/tables/{session_id}/recommend",
             response_model=list[sc.RecommendationOut])
    def get_recommendations(
        session_id: str,
        row: str = Query(..., description="JSON row locator"),
        col: str = Query(..., description="JSON column locator"),
        mechanism: str = "topology",
        row_lo: int = 0, row_hi: int | None = None,
        col_lo: int = 0, col_hi: int | None = None,
    ):
        import json as _json
        sess = store.get(session_id)
        if sess is None:
            return _not_found(session_id)
        try:
            row_loc = _json.loads(row)
            col_loc = _json.loads(col)
        except ValueError as e:
            return _error(400, HiTailorError(f"locator is not valid JSON: {e}"))
        try:
            unit = _parse_locators(sess, row_loc, col_loc)
        except LOCATOR_ERRORS as e:
            return _error(400, e)
        recs = rc.recommend(sess.current, unit, mechanism,
                            (row_lo, row_hi), (col_lo, col_hi))
        return [sc.RecommendationOut(**rc.recommendation_dict(r)) for r in recs]

    @app.post("/tables/{session_id}/visualize", response_model=sc.VisualizeResponse)
    def visualize(session_id: str, body: sc.VisualizeRequest):
        sess = store.get(session_id)
        if sess is None:
            return _not_found(session_id)
        if body.unit is not None:
            try:
                unit = _parse_locators(sess, body.unit.row, body.unit.col)
            except LOCATOR_ERRORS as e:
                return _error(400, e)
        else:
            unit = sess.selections.get(body.selection or "default")
            if unit is None:
                return _error(400, HiTailorError("no such stored selection"))
        config = vg.VisConfig(body.config.template_id, dict(body.config.bindings),
                              dict(body.config.options))
        cell = vg.CellGeometry(body.cell_geometry.cell_width, body.cell_geometry.cell_height,
                               body.cell_geometry.origin_x, body.cell_geometry.origin_y)
        model = sess.current
        if body.apply_to == "recommended":
            recs = rc.recommend(model, unit, body.mechanism,
                                tuple(body.row_range), tuple(body.col_range))
        else:
            recs = [rc.Recommendation(unit, rc.PriorityPair(0, 0))]
        docs = vg.rebind_all(model, config, recs, cell)
        name = body.name or body.config.template_id
        with sess.lock:
            sess.configs[name] = {
                "config": body.config.model_dump(),
                "docs": [d.doc for d in docs],
            }
        return sc.VisualizeResponse(name=name, docs=[d.doc for d in docs])

    @app.get("/tables/{session_id}/export")
    def export(session_id: str, format: str = "htj"):
        sess = store.get(session_id)
        if sess is None:
            return _not_found(session_id)
        model = sess.current
        if debug:
            replayed = sess.history.replay()
            if importer.htj_bytes(importer.serialize_htj(replayed)) != \
                    importer.htj_bytes(importer.serialize_htj(model)):
                return JSONResponse(status_code=500, content=sc.ApiError(
                    code="ReplayMismatch",
                    message="history replay diverged from the session model").model_dump())
        htj = importer.serialize_htj(model)
        if format == "htj":
            return JSONResponse(content=htj)
        if format == "bundle":
            return JSONResponse(content={
                "model": htj,
                "ops": [tf.op_to_dict(op) for op in sess.history.ops()],
                "configs": {name: c["config"] for name, c in sess.configs.items()},
                "docs": {name: c["docs"] for name, c in sess.configs.items()},
            })
        return _error(400, HiTailorError(f"unknown export format {format!r}"))

    return app


app = create_app()
