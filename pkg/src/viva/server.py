"""Local HTTP service tying the engine, analytics, concerns, and config together.

One process serves one logical session: upload data, query charts, customize,
curate, inspect and prune the operation history, export SVGs. Uploaded row
data lives only in memory; the only files the service writes are the metadata
logs inside the config directory. Mutating endpoints are serialized through a
session lock; queries read immutable snapshots and never change state.
"""

from __future__ import annotations

import json
import threading
from datetime import date, datetime, timezone
from pathlib import Path
from uuid import uuid4

from fastapi import FastAPI, Request, Response
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from . import analytics, svg
from .analytics import Snapshot
from .concerns import ConcernEdit, ConcernManager
from .configio import (
    ConfigStore,
    append_logged,
    load_config,
    resolve_color,
    resolve_level_order,
    rewrite_ops_log,
)
from .core import TimeRange
from .engine import LEVEL_OP_KINDS, Engine, Operation
from .errors import (
    DependencyViolation,
    EmptyLog,
    InvalidOperation,
    IoError,
    MalformedCsv,
    MissingColumn,
    NoTimeAttribute,
    VivaError,
)
from .ingest import parse_csv

_STATUS_BY_CODE = {
    "MalformedCsv": 400,
    "MissingColumn": 400,
    "NoTimeAttribute": 400,
    "UnknownDataset": 404,
    "UnknownAttribute": 404,
    "UnknownSeq": 404,
    "UnknownConcern": 404,
    "DependencyViolation": 409,
    "InconsistentLog": 409,
    "IoError": 500,
}
_DEFAULT_STATUS = 422  # validation errors


def error_status(exc: VivaError) -> int:
    return _STATUS_BY_CODE.get(exc.code, _DEFAULT_STATUS)


def _canonical_json(doc) -> bytes:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode(
        "utf-8"
    )


def json_response(doc, status_code: int = 200) -> Response:
    """Deterministic JSON bytes: sorted keys, fixed separators."""
    return Response(
        content=_canonical_json(doc), status_code=status_code, media_type="application/json"
    )


# ---------------------------------------------------------------------------
# session
# ---------------------------------------------------------------------------


class Session:
    """All mutable state of one server process."""

    def __init__(self, config_dir: str | Path):
        self.config_dir = Path(config_dir)
        self.store, self.diagnostics = load_config(self.config_dir)
        self.lock = threading.RLock()
        self.session_id = uuid4().hex[:12]
        self.engine = Engine({}, level_order=self._level_order)
        self.concerns = ConcernManager(self.engine)
        self.active_range: TimeRange | None = None
        self.customized: set = set()
        self.seq_counter = self.store.next_seq() - 1

    def _level_order(self, attr) -> list:
        return resolve_level_order(self.store, attr)

    def _alloc_seq(self) -> int:
        self.seq_counter += 1
        return self.seq_counter

    @staticmethod
    def _now() -> str:
        return datetime.now(timezone.utc).isoformat(timespec="seconds")

    # ---- data ----

    def upload(self, files: list) -> None:
        """Ingest (name, bytes) CSVs as the base datasets, then replay both logs."""
        base: dict = {}
        for name, data in files:
            base[name] = parse_csv(data, name, self.store.schema, self.store.merges)
        with self.lock:
            engine = Engine(base, level_order=self._level_order)
            engine.replay_from(self.store.logged_ops)
            concerns = ConcernManager(engine)
            concerns.rebuild(self.store.concerns_spec, self.store.logged_concern_edits, engine.log)
            self.engine = engine
            self.concerns = concerns
            self.concerns.engine = engine
            self.active_range = self._full_extent(engine)
            self.customized = set()

    @staticmethod
    def _full_extent(engine: Engine) -> TimeRange | None:
        extents = [ds.time_extent() for ds in engine.base.values()]
        extents = [e for e in extents if e is not None]
        if not extents:
            return None
        return TimeRange(min(e.start for e in extents), max(e.end for e in extents))

    def query_range(self) -> TimeRange:
        # No data yet: any date works, every count is zero.
        return self.active_range or TimeRange(date(1970, 1, 1), date(1970, 1, 1))

    def snapshot(self) -> Snapshot:
        return Snapshot(datasets=dict(self.engine.derived), store=self.store)

    # ---- operations ----

    def default_mode(self, target_attribute_id: str) -> str:
        """First customization of an attribute this session derives a new
        attribute; later ones modify in place."""
        return "ModifyCurrent" if target_attribute_id in self.customized else "MakeNew"

    def apply_operation(self, kind: str, dataset_id: str, target_attribute_id: str, params: dict) -> dict:
        with self.lock:
            params = dict(params)
            if kind in LEVEL_OP_KINDS and not params.get("mode"):
                params["mode"] = self.default_mode(target_attribute_id)
            op = Operation(
                seq=self._alloc_seq(),
                kind=kind,
                dataset_id=dataset_id,
                target_attribute_id=target_attribute_id,
                params=params,
                timestamp=self._now(),
                session_id=self.session_id,
            )
            prev_derived = dict(self.engine.derived)
            prev_log = list(self.engine.log)
            self.engine.apply(op)
            logged = self.engine.log[-1]
            created_concern = self.concerns.on_operation(logged)
            try:
                append_logged(self.store, logged)
            except IoError:
                self.engine.derived = prev_derived
                self.engine.log = prev_log
                self._rebuild_concerns()
                raise
            self.customized.add(target_attribute_id)
            self.customized.update(logged.created_attribute_ids)
            return {
                "seq": logged.seq,
                "kind": logged.kind,
                "mode": logged.params.get("mode"),
                "created_attribute_ids": logged.created_attribute_ids,
                "created_concern_name": created_concern,
            }

    def _rebuild_concerns(self) -> None:
        self.concerns.rebuild(
            self.store.concerns_spec, self.store.logged_concern_edits, self.engine.log
        )

    def delete_operation(self, seq: int, cascade: bool) -> dict:
        with self.lock:
            closure = self.engine.dependents(seq)
            if not cascade:
                raise DependencyViolation(
                    f"deleting operation {seq} also removes {len(closure)} dependent(s)",
                    details={"seq": seq, "dependents": sorted(closure)},
                )
            removed = {seq} | closure
            self.engine.remove_ops(removed)
            rewrite_ops_log(self.store, self.engine.log)
            self._rebuild_concerns()
            return {"removed": sorted(removed)}

    def undo(self) -> dict:
        with self.lock:
            if not self.engine.log:
                raise EmptyLog("nothing to undo")
            last = self.engine.log[-1].seq
            self.engine.remove_ops({last})
            rewrite_ops_log(self.store, self.engine.log)
            self._rebuild_concerns()
            return {"removed_seq": last}

    def edit_concern(self, kind: str, params: dict) -> None:
        with self.lock:
            edit = ConcernEdit(
                seq=self._alloc_seq(),
                kind=kind,
                params=dict(params),
                timestamp=self._now(),
                session_id=self.session_id,
            )
            self.concerns.apply_edit(edit, strict=True)
            try:
                append_logged(self.store, edit)
            except IoError:
                self._rebuild_concerns()
                raise

    # ---- documents ----

    def catalog_doc(self) -> dict:
        return catalog_doc(self.engine, self.concerns, self.store, self.active_range)

    def ops_doc(self) -> dict:
        ops = []
        for op in reversed(self.engine.log):
            ops.append(
                {
                    "seq": op.seq,
                    "kind": op.kind,
                    "dataset_id": op.dataset_id,
                    "target_attribute_id": op.target_attribute_id,
                    "params": op.params,
                    "created_attribute_ids": op.created_attribute_ids,
                    "timestamp": op.timestamp,
                    "session_id": op.session_id,
                    "dependents": sorted(self.engine.dependents(op.seq)),
                }
            )
        return {"ops": ops}


def catalog_doc(engine: Engine, concerns: ConcernManager, store: ConfigStore, active_range) -> dict:
    """The full dataset/attribute/concern catalog; deterministic for a given
    (base data, logs, specified config) regardless of session identity."""
    datasets = []
    for ds in engine.derived.values():
        attributes = []
        for attr in ds.attributes:
            levels = None
            if attr.leveled:
                levels = [
                    {"name": level, "color": resolve_color(store, ds.id, attr.id, level)}
                    for level in resolve_level_order(store, attr)
                ]
            attributes.append(
                {
                    "id": attr.id,
                    "name": attr.name,
                    "kind": attr.kind,
                    "units": attr.units,
                    "origin": attr.origin,
                    "chartable": attr.chartable,
                    "levels": levels,
                }
            )
        datasets.append(
            {
                "id": ds.id,
                "name": ds.name,
                "row_count": ds.num_rows,
                "time_attribute": ds.time_attribute,
                "attributes": attributes,
            }
        )
    return {
        "datasets": datasets,
        "concerns": [
            {"name": c.name, "members": c.members, "origin": c.origin}
            for c in concerns.all_concerns()
        ],
        "active_concern": concerns.active_name(),
        "active_range": _range_doc(active_range),
    }


def _range_doc(active_range) -> dict | None:
    if active_range is None:
        return None
    return {"start": active_range.start.isoformat(), "end": active_range.end.isoformat()}


# ---------------------------------------------------------------------------
# chart dispatch (shared by /api/chart and /api/export/svg)
# ---------------------------------------------------------------------------


def _parse_bool(raw: str | None, default: bool = False) -> bool:
    if raw is None:
        return default
    return raw.lower() in ("1", "true", "yes")


def compute_chart(session: Session, params: dict):
    """Run the chart query described by the request parameters.

    Returns (mode, result). ``attrs`` is an ordered comma-separated id list;
    selection order drives bar-vs-segment mapping and flow stage order.
    """
    mode = params.get("mode")
    dataset_id = params.get("dataset")
    attrs = [a for a in (params.get("attrs") or "").split(",") if a]
    if not dataset_id:
        raise InvalidOperation("missing dataset parameter")
    if not attrs:
        raise InvalidOperation("missing attrs parameter")
    state = session.snapshot()
    active = session.query_range()

    if mode == "rollup":
        _require_arity(attrs, 1, mode)
        return mode, analytics.rollup(state, dataset_id, attrs[0], active)
    if mode == "histogram":
        _require_arity(attrs, 1, mode)
        bins = int(params.get("bins", 20))
        return mode, analytics.histogram(state, dataset_id, attrs[0], active, bin_count=bins)
    if mode == "partition":
        _require_arity(attrs, 1, mode)
        # partitioning the time attribute itself means "row count over time"
        # (the dataset-header thumbnail in the multiples grid)
        if attrs[0] == state.dataset(dataset_id).time_attribute:
            return mode, analytics.item_counts(
                state, dataset_id, active, granularity=params.get("granularity", "day")
            )
        return mode, analytics.partition(
            state,
            dataset_id,
            attrs[0],
            active,
            granularity=params.get("granularity", "day"),
            value_mode=params.get("values", "absolute"),
            accumulate=_parse_bool(params.get("accumulate")),
        )
    if mode == "stratify":
        _require_arity(attrs, 2, mode)
        return mode, analytics.cross_tab(state, dataset_id, attrs[0], attrs[1], active)
    if mode == "flow":
        return mode, analytics.sankey(state, dataset_id, attrs, active)
    raise InvalidOperation(f"unknown chart mode {mode!r}")


def _require_arity(attrs: list, expected: int, mode: str) -> None:
    if len(attrs) != expected:
        from .errors import WrongArity

        raise WrongArity(f"mode {mode} takes exactly {expected} attribute(s), got {len(attrs)}")


def render_chart_svg(session: Session, params: dict) -> str:
    mode, result = compute_chart(session, params)
    state = session.snapshot()
    store = session.store
    dataset_id = params["dataset"]

    def colors_for(attribute_id: str) -> dict:
        attr = state.attribute(dataset_id, attribute_id)
        return {
            level: resolve_color(store, dataset_id, attribute_id, level)
            for level in (attr.levels or [])
        }

    def display_name(attribute_id: str) -> str:
        return state.attribute(dataset_id, attribute_id).name

    if mode == "rollup":
        return svg.render_rollup(result, display_name(result.attribute_id))
    if mode == "histogram":
        return svg.render_histogram(result, display_name(result.attribute_id))
    if mode == "partition":
        title = f"{display_name(result.attribute_id)} by {result.granularity}"
        return svg.render_partition(result, title, colors_for(result.attribute_id))
    if mode == "stratify":
        title = f"{display_name(result.bar_attribute_id)} by {display_name(result.segment_attribute_id)}"
        return svg.render_cross_tab(
            result,
            title,
            colors_for(result.segment_attribute_id),
            percentage=params.get("values") == "percentage",
        )
    title = " → ".join(display_name(a) for a in result.stages)
    return svg.render_sankey(result, title, [colors_for(a) for a in result.stages])


# ---------------------------------------------------------------------------
# app
# ---------------------------------------------------------------------------

UPLOAD_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>viva</title></head>
<body>
<h1>viva</h1>
<p>Upload the CSV data sources to start a session. Field names become dataset names.</p>
<form method="post" action="/api/data" enctype="multipart/form-data">
  <p><input type="file" name="Encounters"> Encounters</p>
  <p><input type="file" name="IntervalOps"> IntervalOps</p>
  <p><input type="file" name="Survey"> Survey</p>
  <p><input type="file" name="CallBack"> CallBack</p>
  <button type="submit">Upload</button>
</form>
</body></html>
"""


def create_app(config_dir: str | Path, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="viva", docs_url=None, redoc_url=None)
    session = Session(config_dir)
    app.state.session = session

    @app.exception_handler(VivaError)
    async def handle_viva_error(_request: Request, exc: VivaError):
        doc = {"code": exc.code, "message": exc.message, "details": exc.details}
        return json_response(doc, status_code=error_status(exc))

    @app.get("/api/health")
    def health():
        return json_response({"status": "ok"})

    @app.post("/api/data")
    async def upload(request: Request):
        form = await request.form()
        files = []
        for name, value in form.multi_items():
            if hasattr(value, "read"):
                files.append((name, await value.read()))
            else:
                files.append((name, str(value).encode("utf-8")))
        if not files:
            raise MalformedCsv("no files uploaded")
        try:
            session.upload(files)
        except (MalformedCsv, MissingColumn, NoTimeAttribute) as exc:
            raise MalformedCsv(
                "ingest failed",
                details={"diagnostics": [{"code": exc.code, "message": exc.message}]},
            ) from exc
        return json_response(
            {
                "catalog": session.catalog_doc(),
                "diagnostics": [
                    {"file": d.file, "line_no": d.line_no, "message": d.message}
                    for d in session.diagnostics
                ],
            }
        )

    @app.get("/api/catalog")
    def catalog():
        return json_response(session.catalog_doc())

    @app.put("/api/range")
    async def set_range(request: Request):
        body = await request.json()
        try:
            start = date.fromisoformat(body["start"])
            end = date.fromisoformat(body["end"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidOperation(f"range body needs ISO 'start' and 'end' dates: {exc}") from exc
        with session.lock:
            session.active_range = TimeRange(start, end)
        return json_response({"active_range": _range_doc(session.active_range)})

    @app.get("/api/chart")
    def chart(request: Request):
        _, result = compute_chart(session, dict(request.query_params))
        return json_response(result.to_doc())

    @app.get("/api/export/svg")
    def export_svg(request: Request):
        document = render_chart_svg(session, dict(request.query_params))
        return Response(content=document, media_type="image/svg+xml")

    @app.post("/api/ops")
    async def post_op(request: Request):
        body = await request.json()
        for field in ("kind", "dataset_id", "target_attribute_id"):
            if field not in body:
                raise InvalidOperation(f"missing field {field!r}")
        outcome = session.apply_operation(
            kind=body["kind"],
            dataset_id=body["dataset_id"],
            target_attribute_id=body["target_attribute_id"],
            params=dict(body.get("params", {})),
        )
        return json_response(outcome)

    @app.get("/api/ops")
    def get_ops():
        return json_response(session.ops_doc())

    @app.delete("/api/ops/{seq}")
    def delete_op(seq: int, cascade: bool = False):
        return json_response(session.delete_operation(seq, cascade))

    @app.post("/api/undo")
    def undo():
        return json_response(session.undo())

    @app.post("/api/concerns")
    async def post_concern(request: Request):
        body = await request.json()
        if "kind" not in body:
            raise InvalidOperation("missing field 'kind'")
        session.edit_concern(body["kind"], dict(body.get("params", {})))
        return json_response(
            {
                "concerns": [
                    {"name": c.name, "members": c.members, "origin": c.origin}
                    for c in session.concerns.all_concerns()
                ],
                "active_concern": session.concerns.active_name(),
            }
        )

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return HTMLResponse(UPLOAD_PAGE)

    return app
