"""HTTP interface for the curation UI and scripted access.

Endpoints (all responses are JSON envelopes
``{"status", "snapshot", "payload", "issues"}``)::

    GET  /                                  service and report index
    GET  /records?filter=...&limit=...      filtered record list
    GET  /records/{id}                      one record
    PUT  /records/{id}/annotation           usage + application + curator
    POST /records/{id}/gate                 run the inclusion gate
    GET  /entities/{id}                     one entity
    GET  /entities/{id}/neighborhood?depth=n   link-graph neighborhood
    GET  /reports/{name}?...&format=json|table rendered report content
    GET  /qc?severity=error                 consistency check issues

Reads are snapshot-consistent; writes serialize through the store and bump
the snapshot version echoed in every envelope. Report payload ``content``
carries exactly the bytes the CLI would print for the same snapshot and
parameters.
"""

from __future__ import annotations

import json
import threading
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import curation, reports
from .errors import (
    BindFailureError,
    DuplicateShortNameError,
    EmptyCorpusError,
    EmptyInputError,
    InvalidEnumValueError,
    InvalidRecordError,
    LitmonError,
    MalformedRangeError,
    MalformedResponseError,
    MissingOrdinalError,
    NotFoundError,
    ReferentialIntegrityError,
    UnknownDepthError,
    UnknownEntityError,
    UnknownFieldError,
    UnknownRecordError,
    UnknownReportError,
    VocabularyViolationError,
)
from .store import CorpusStore

_STATUS_BY_ERROR = {
    UnknownRecordError: 404,
    UnknownEntityError: 404,
    NotFoundError: 404,
    UnknownReportError: 404,
    DuplicateShortNameError: 409,
    InvalidEnumValueError: 400,
    InvalidRecordError: 400,
    UnknownDepthError: 400,
    UnknownFieldError: 400,
    MalformedRangeError: 400,
    MalformedResponseError: 400,
    VocabularyViolationError: 400,
    EmptyCorpusError: 400,
    EmptyInputError: 400,
    MissingOrdinalError: 400,
    ReferentialIntegrityError: 409,
}


class ApiContext:
    """Shared state behind the request handlers."""

    def __init__(self, store: CorpusStore, corpus_path: str | None = None):
        self.store = store
        self.corpus_path = corpus_path
        self.write_lock = threading.Lock()

    def persist(self):
        if self.corpus_path:
            self.store.save(self.corpus_path)


class ApiHandler(BaseHTTPRequestHandler):
    context: ApiContext  # set by make_server
    protocol_version = "HTTP/1.1"

    # -- plumbing ----------------------------------------------------------

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, payload, issues=None):
        body = json.dumps(
            {"status": "Ok" if status < 400 else "Error",
             "snapshot": self.context.store.version,
             "payload": payload,
             "issues": [i.to_dict() for i in (issues or [])]},
            ensure_ascii=False, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods",
                         "GET, PUT, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(body)

    def _fail(self, status: int, code: str, message: str):
        body = json.dumps(
            {"status": "Error", "snapshot": self.context.store.version,
             "payload": None, "code": code, "message": message, "issues": []},
            ensure_ascii=False, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _error(self, exc: Exception):
        if isinstance(exc, LitmonError):
            status = _STATUS_BY_ERROR.get(type(exc), 500)
            self._fail(status, exc.code, exc.message)
        else:
            self._fail(500, "Internal", str(exc))

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            doc = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise MalformedResponseError(f"request body is not valid JSON: "
                                         f"{exc}") from exc
        if not isinstance(doc, dict):
            raise MalformedResponseError("request body must be a JSON object")
        return doc

    def _route(self) -> tuple[list[str], dict[str, str]]:
        parsed = urllib.parse.urlparse(self.path)
        parts = [urllib.parse.unquote(p) for p in parsed.path.split("/") if p]
        query = {k: v[-1] for k, v in
                 urllib.parse.parse_qs(parsed.query).items()}
        return parts, query

    # -- methods ------------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods",
                         "GET, PUT, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        store = self.context.store
        try:
            parts, query = self._route()
            if not parts:
                self._send(200, {
                    "service": "litmon",
                    "reports": list(reports.REPORT_NAMES),
                    "records": len(store.documents),
                    "entities": len(store.entities)})
            elif parts[0] == "records" and len(parts) == 1:
                records = store.query(query.get("filter", ""))
                try:
                    limit = int(query["limit"]) if query.get("limit") else None
                except ValueError:
                    raise MalformedRangeError(
                        f"limit must be an integer, got {query['limit']!r}"
                    ) from None
                if query.get("status"):
                    records = [r for r in records
                               if r.curation_status.value.lower()
                               == query["status"].lower()]
                total = len(records)
                if limit is not None:
                    records = records[:limit]
                self._send(200, {"count": total,
                                 "records": [r.to_dict() for r in records]})
            elif parts[0] == "records" and len(parts) == 2:
                record = store.get_record(parts[1])
                self._send(200, record.to_dict())
            elif parts[0] == "entities" and len(parts) == 2:
                entity = store.get_entity(parts[1])
                payload = entity.to_dict()
                payload["doc_count"] = store.entity_doc_count(parts[1])
                self._send(200, payload)
            elif parts[0] == "entities" and len(parts) == 3 \
                    and parts[2] == "neighborhood":
                try:
                    depth = int(query.get("depth", "1"))
                except ValueError:
                    raise UnknownDepthError(
                        f"depth must be an integer, got {query['depth']!r}"
                    ) from None
                subgraph = store.neighborhood(parts[1], depth)
                self._send(200, subgraph.to_dict())
            elif parts[0] == "reports" and len(parts) == 2:
                fmt = query.pop("format", "json")
                report = reports.build_report(store, parts[1], query)
                content = reports.render(report, fmt)
                self._send(200, {"name": report.name, "format": fmt,
                                 "params": report.params,
                                 "snapshot_hash": report.snapshot,
                                 "content": content.decode("utf-8")})
            elif parts[0] == "qc" and len(parts) == 1:
                issues = curation.quality_check(store)
                wanted = query.get("severity")
                if wanted:
                    issues = [i for i in issues
                              if i.severity.value.lower() == wanted.lower()]
                self._send(200, {"count": len(issues),
                                 "issues": [i.to_dict() for i in issues]})
            else:
                self._fail(404, "NotFound", f"no route for {self.path}")
        except Exception as exc:  # mapped to an error envelope
            self._error(exc)

    def do_PUT(self):
        try:
            parts, _query = self._route()
            if len(parts) == 3 and parts[0] == "records" \
                    and parts[2] == "annotation":
                body = self._body()
                usage = curation.parse_usage(body.get("usage") or {})
                application = None
                if body.get("application") is not None:
                    application = curation.parse_application(
                        body["application"])
                with self.context.write_lock:
                    record = curation.apply_annotation(
                        self.context.store, parts[1], usage,
                        application=application,
                        curator=body.get("curator", "api"))
                    self.context.persist()
                self._send(200, record.to_dict())
            else:
                self._fail(404, "NotFound", f"no route for {self.path}")
        except Exception as exc:
            self._error(exc)

    def do_POST(self):
        try:
            parts, _query = self._route()
            if len(parts) == 3 and parts[0] == "records" and parts[2] == "gate":
                body = self._body()
                usage = None
                if body.get("usage") is not None:
                    usage = curation.parse_usage(body["usage"])
                with self.context.write_lock:
                    decision = curation.inclusion_gate(
                        self.context.store, parts[1], usage=usage,
                        apply=bool(body.get("apply", True)))
                    self.context.persist()
                record = self.context.store.get_record(parts[1])
                self._send(200, {"decision": decision.to_dict(),
                                 "curation_status":
                                     record.curation_status.value})
            elif len(parts) == 3 and parts[0] == "records" \
                    and parts[2] == "validate":
                with self.context.write_lock:
                    record = curation.validate_record(self.context.store,
                                                      parts[1])
                    self.context.persist()
                self._send(200, record.to_dict())
            else:
                self._fail(404, "NotFound", f"no route for {self.path}")
        except Exception as exc:
            self._error(exc)


def make_server(store: CorpusStore, host: str = "127.0.0.1", port: int = 8044,
                corpus_path: str | None = None) -> ThreadingHTTPServer:
    """Bind the service; returns the server ready for serve_forever()."""
    context = ApiContext(store, corpus_path)
    handler = type("BoundApiHandler", (ApiHandler,), {"context": context})
    try:
        server = ThreadingHTTPServer((host, port), handler)
    except OSError as exc:
        raise BindFailureError(f"cannot bind {host}:{port}: {exc}") from exc
    server.daemon_threads = True
    return server


def serve(bind_address: str, corpus_path: str,
          store: CorpusStore | None = None) -> ThreadingHTTPServer:
    """Load a corpus and bind the API on "host:port"."""
    host, _, port_s = bind_address.partition(":")
    try:
        port = int(port_s) if port_s else 8044
    except ValueError:
        raise BindFailureError(f"bad bind address {bind_address!r}") from None
    if store is None:
        store = CorpusStore.load(corpus_path)
    return make_server(store, host or "127.0.0.1", port,
                       corpus_path=corpus_path)
