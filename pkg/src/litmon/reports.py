"""Report building and export.

One registry maps report names to builders; the CLI and the HTTP API both
go through ``build_report`` and the same renderers, which is what makes
their outputs byte-identical for the same snapshot. JSON renderings are
self-describing documents carrying the snapshot hash and the query that
produced them; tabular renderings are CSV, except graphs which export as
two tab-separated tables (nodes, then edges) loadable by common
bibliometric mapping tools.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Callable

from . import analytics
from .errors import IoFailureError, MalformedRangeError, UnknownReportError
from .model import DocumentRecord, UsageFlags
from .store import CorpusStore


@dataclass
class Report:
    name: str
    params: dict
    snapshot: str
    data: dict

    def to_dict(self) -> dict:
        return {"report": self.name, "params": self.params,
                "snapshot": self.snapshot, "data": self.data}


def _records_for(store: CorpusStore, filter_expr: str | None
                 ) -> list[DocumentRecord] | None:
    """Validated records, optionally narrowed by a filter expression.
    None means "default validated set" (lets analytics use its own default)."""
    if not filter_expr:
        return None
    matched = {r.record_id for r in store.query(filter_expr)}
    return [r for r in store.validated_records() if r.record_id in matched]


def _int_param(params: dict, key: str, default: int) -> int:
    raw = params.get(key)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise MalformedRangeError(f"parameter {key!r} must be an integer, "
                                  f"got {raw!r}") from None


def _bool_param(params: dict, key: str, default: bool = False) -> bool:
    raw = params.get(key)
    if raw is None or raw == "":
        return default
    if isinstance(raw, bool):
        return raw
    return str(raw).lower() in ("1", "true", "yes", "on")


def _build_years(store, params):
    records = _records_for(store, params.get("filter"))
    year_range = None
    if params.get("from") or params.get("to"):
        year_range = (_int_param(params, "from", store.year_min),
                      _int_param(params, "to", store.year_max))
    hist = analytics.yearly_histogram(store, records=records,
                                      year_range=year_range)
    return hist.to_dict(), {"from": min(hist.counts), "to": max(hist.counts)}


def _build_dist(store, params):
    dim_raw = params.get("dim", "resource-type")
    try:
        dim = analytics.Dimension(dim_raw)
    except ValueError:
        raise UnknownReportError(
            f"unknown distribution dimension {dim_raw!r}; one of "
            + ", ".join(d.value for d in analytics.Dimension)) from None
    counting = None
    if params.get("counting"):
        try:
            counting = analytics.Counting(params["counting"])
        except ValueError:
            raise UnknownReportError(
                f"unknown counting mode {params['counting']!r}") from None
    records = _records_for(store, params.get("filter"))
    rows = analytics.distribution(store, dim, counting=counting,
                                  records=records)
    data = {"dimension": dim.value,
            "counting": counting.value if counting else
            ("first-author" if dim is analytics.Dimension.INSTITUTION
             else "all-links"),
            "rows": [{"label": label, "count": count}
                     for label, count in rows],
            "total": sum(count for _label, count in rows)}
    return data, {"dim": dim.value}


def _build_usage_shares(store, params):
    records = _records_for(store, params.get("filter"))
    shares = analytics.usage_shares(store, records=records)
    return {"shares": shares}, {}


def _build_coauthors(store, params):
    min_docs = _int_param(params, "min_docs", 3)
    records = _records_for(store, params.get("filter"))
    graph = analytics.coauthorship_graph(store, min_docs=min_docs,
                                         records=records)
    return graph.to_dict(), {"min_docs": min_docs}


def _build_terms(store, params):
    top = _int_param(params, "top", 50)
    records = _records_for(store, params.get("filter"))
    stats = analytics.term_frequencies(store, records=records)
    total = sum(s.count for s in stats)
    return ({"terms": [s.to_dict() for s in stats[:top]],
             "distinct_terms": len(stats),
             "total_occurrences": total},
            {"top": top})


def _build_cooccur(store, params):
    min_occ = _int_param(params, "min_occ", 5)
    records = _records_for(store, params.get("filter"))
    graph = analytics.term_cooccurrence(store, min_occurrence=min_occ,
                                        records=records)
    return graph.to_dict(), {"min_occ": min_occ}


def _build_sankey(store, params):
    source = params.get("from", "fos")
    target = params.get("to", "product")
    normalized = _bool_param(params, "normalized")
    records = _records_for(store, params.get("filter"))
    flows = analytics.sankey_flows(store, source, target,
                                   normalized=normalized, records=records)
    return flows.to_dict(), {"from": source, "to": target,
                             "normalized": normalized}


def _build_coupled(store, params):
    records = _records_for(store, params.get("filter"))
    stats = analytics.coupled_tool_distribution(store, records=records)
    return stats.to_dict(), {}


def _build_field_time(store, params):
    lo = _int_param(params, "from", 2015)
    hi = _int_param(params, "to", 2025)
    records = _records_for(store, params.get("filter"))
    matrix = analytics.field_time_matrix(store, year_range=(lo, hi),
                                         records=records)
    return matrix.to_dict(), {"from": lo, "to": hi}


_BUILDERS: dict[str, Callable] = {
    "years": _build_years,
    "dist": _build_dist,
    "usage-shares": _build_usage_shares,
    "coauthors": _build_coauthors,
    "terms": _build_terms,
    "cooccur": _build_cooccur,
    "sankey": _build_sankey,
    "coupled": _build_coupled,
    "field-time": _build_field_time,
}

REPORT_NAMES = tuple(_BUILDERS)

# Which tabular rendering a report uses.
_TABLE_KINDS = {
    "years": "csv", "dist": "csv", "usage-shares": "csv", "terms": "csv",
    "sankey": "csv", "coupled": "csv", "field-time": "csv",
    "coauthors": "graph", "cooccur": "graph",
}


def build_report(store: CorpusStore, name: str,
                 params: dict | None = None) -> Report:
    if name not in _BUILDERS:
        raise UnknownReportError(
            f"unknown report {name!r}; available: " + ", ".join(REPORT_NAMES))
    params = {k: v for k, v in (params or {}).items() if v is not None}
    data, effective = _BUILDERS[name](store, params)
    if params.get("filter"):
        effective["filter"] = params["filter"]
    return Report(name=name, params=effective,
                  snapshot=store.content_hash(), data=data)


# -- renderers -----------------------------------------------------------------

def render_json(report: Report) -> bytes:
    text = json.dumps(report.to_dict(), ensure_ascii=False, sort_keys=True,
                      indent=2)
    return (text + "\n").encode("utf-8")


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.4f}".rstrip("0").rstrip(".")
    return str(value)


def _csv_bytes(header: list[str], rows: list[list]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue().encode("utf-8")


def _graph_tables(data: dict) -> tuple[bytes, bytes]:
    nodes = _csv_tsv(
        ["id", "label", "doc_count", "strength", "overlay", "cluster"],
        [[n["id"], n["label"], n["doc_count"], n["total_link_strength"],
          "" if n["overlay_score"] is None else n["overlay_score"],
          "" if n["cluster"] is None else n["cluster"]]
         for n in data["nodes"]])
    edges = _csv_tsv(["a", "b", "weight"],
                     [[e["a"], e["b"], e["weight"]] for e in data["edges"]])
    return nodes, edges


def _csv_tsv(header: list[str], rows: list[list]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue().encode("utf-8")


def render_table(report: Report) -> bytes:
    kind = _TABLE_KINDS[report.name]
    data = report.data
    if kind == "graph":
        nodes, edges = _graph_tables(data)
        return nodes + b"\n" + edges
    if report.name == "years":
        rows = [[year, data["counts"][year], data["cumulative"][year]]
                for year in sorted(data["counts"], key=int)]
        return _csv_bytes(["year", "count", "cumulative"], rows)
    if report.name == "dist":
        return _csv_bytes(["label", "count"],
                          [[r["label"], r["count"]] for r in data["rows"]])
    if report.name == "usage-shares":
        return _csv_bytes(["flag", "share"],
                          [[name, data["shares"][name]]
                           for name in UsageFlags.FIELDS])
    if report.name == "terms":
        return _csv_bytes(["term", "count", "share"],
                          [[t["term"], t["count"], t["share"]]
                           for t in data["terms"]])
    if report.name == "sankey":
        return _csv_bytes(["source", "target", "value"],
                          [[f["source"], f["target"], f["value"]]
                           for f in data["flows"]])
    if report.name == "coupled":
        return _csv_bytes(["tool", "count", "percent"],
                          [[r["tool"], r["count"],
                            data["percentages"][r["tool"]]]
                           for r in data["counts"]])
    if report.name == "field-time":
        header = ["field"] + [str(y) for y in data["years"]]
        rows = [[f] + [data["values"][f][str(y)] for y in data["years"]]
                for f in data["fields"]]
        return _csv_bytes(header, rows)
    raise UnknownReportError(report.name)


def render(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return render_json(report)
    if fmt == "table":
        return render_table(report)
    raise UnknownReportError(f"unknown format {fmt!r}; use json or table")


def graph_export_files(report: Report, prefix: str):
    """Write a graph report as {prefix}.nodes.tsv and {prefix}.edges.tsv."""
    if _TABLE_KINDS.get(report.name) != "graph":
        raise UnknownReportError(f"report {report.name} is not a graph")
    nodes, edges = _graph_tables(report.data)
    try:
        with open(f"{prefix}.nodes.tsv", "wb") as fh:
            fh.write(nodes)
        with open(f"{prefix}.edges.tsv", "wb") as fh:
            fh.write(edges)
    except OSError as exc:
        raise IoFailureError(str(exc)) from exc


# -- corpus export ---------------------------------------------------------------

CSV_COLUMNS = [
    "record_id", "short_name", "title", "year", "resource_type", "venue",
    "volume", "issue", "publisher", "language", "doi", "url",
    "curation_status", "authors", "institutions", "countries", "product",
    "usage_context", "flags", "coupled_tools", "fos_field",
    "research_segment", "material_families", "keywords",
]


def _entity_names(store, links) -> str:
    names = []
    for link in links:
        entity = store.entities.get(link.to_id)
        names.append(entity.display_name if entity else link.to_id)
    return "; ".join(names)


def _csv_row(store: CorpusStore, r: DocumentRecord) -> list:
    usage = r.usage
    app = r.application
    return [
        r.record_id, r.short_name, r.title,
        "" if r.year is None else r.year,
        r.resource_type.value, r.venue, r.volume or "", r.issue or "",
        r.publisher or "", r.language, r.doi or "", r.url or "",
        r.curation_status.value,
        _entity_names(store, r.author_links),
        _entity_names(store, r.institution_links),
        _entity_names(store, r.country_links),
        usage.principal_product.value if usage and usage.principal_product else "",
        usage.usage_context.value if usage else "",
        "; ".join(n for n in UsageFlags.FIELDS
                  if usage and getattr(usage.flags, n)),
        "; ".join(usage.coupled_tools) if usage else "",
        app.fos_field.value if app and app.fos_field else "",
        app.research_segment.value if app else "",
        "; ".join(m.value for m in app.material_families) if app else "",
        "; ".join(r.keywords),
    ]


def corpus_csv_bytes(store: CorpusStore) -> bytes:
    rows = [_csv_row(store, r) for r in store.all_records()]
    return _csv_bytes(CSV_COLUMNS, rows)


def export_corpus(store: CorpusStore, path: str, fmt: str = "line-delimited"):
    """Write the corpus to disk. line-delimited is the lossless round-trip
    format; csv is a flattened view with the documented columns."""
    if fmt in ("line-delimited", "jsonl"):
        store.save(path)
    elif fmt == "csv":
        try:
            with open(path, "wb") as fh:
                fh.write(corpus_csv_bytes(store))
        except OSError as exc:
            raise IoFailureError(f"cannot write {path}: {exc}") from exc
    else:
        raise UnknownReportError(f"unknown export format {fmt!r}")
