import json

import pytest

from conftest import build_table1_store
from litmon.errors import UnknownReportError
from litmon.reports import (
    REPORT_NAMES,
    build_report,
    corpus_csv_bytes,
    export_corpus,
    render,
    render_json,
    render_table,
)
from litmon.store import CorpusStore


def test_unknown_report_name(small_store):
    with pytest.raises(UnknownReportError):
        build_report(small_store, "nonsense")


def test_report_json_is_self_describing(small_store):
    report = build_report(small_store, "dist", {"dim": "resource-type"})
    doc = json.loads(render_json(report))
    assert doc["report"] == "dist"
    assert doc["params"]["dim"] == "resource-type"
    assert doc["snapshot"] == small_store.content_hash()
    assert doc["data"]["total"] == 3


def test_every_report_renders_both_formats(small_store):
    for name in REPORT_NAMES:
        report = build_report(small_store, name)
        assert render(report, "json").strip()
        assert render(report, "table").strip()


def test_reports_deterministic_across_rebuilds():
    # two independently built identical snapshots give identical bytes
    first, second = build_table1_store(), build_table1_store()
    for name in REPORT_NAMES:
        for fmt in ("json", "table"):
            a = render(build_report(first, name), fmt)
            b = render(build_report(second, name), fmt)
            assert a == b, (name, fmt)


def test_filter_param_narrows_report(small_store):
    full = build_report(small_store, "dist", {"dim": "product"})
    narrowed = build_report(small_store, "dist",
                            {"dim": "product", "filter": "year=2020"})
    assert full.data["total"] == 3
    assert narrowed.data["total"] == 2
    assert narrowed.params["filter"] == "year=2020"


def test_graph_table_has_nodes_and_edges_sections(small_store):
    report = build_report(small_store, "coauthors", {"min_docs": "1"})
    text = render_table(report).decode()
    nodes_block, edges_block = text.split("\n\n")
    assert nodes_block.splitlines()[0] == \
        "id\tlabel\tdoc_count\tstrength\toverlay\tcluster"
    assert edges_block.splitlines()[0] == "a\tb\tweight"
    assert len(nodes_block.splitlines()) == 3  # two authors
    assert len(edges_block.splitlines()) == 2  # one collaboration


def test_graph_export_files(small_store, tmp_path):
    report = build_report(small_store, "coauthors", {"min_docs": "1"})
    prefix = str(tmp_path / "net")
    from litmon.reports import graph_export_files
    graph_export_files(report, prefix)
    nodes = (tmp_path / "net.nodes.tsv").read_text()
    edges = (tmp_path / "net.edges.tsv").read_text()
    assert nodes.startswith("id\t")
    assert edges.startswith("a\t")


def test_sankey_table_is_source_target_value_csv(small_store):
    report = build_report(small_store, "sankey",
                          {"from": "fos", "to": "product"})
    lines = render_table(report).decode().splitlines()
    assert lines[0] == "source,target,value"
    assert len(lines) >= 2


def test_years_table(small_store):
    report = build_report(small_store, "years")
    lines = render_table(report).decode().splitlines()
    assert lines[0] == "year,count,cumulative"
    assert lines[1] == "2019,1,1"
    assert lines[2] == "2020,2,3"


def test_export_csv_row_count(small_store, tmp_path):
    path = tmp_path / "corpus.csv"
    export_corpus(small_store, str(path), "csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 1 + 3  # header + records


def test_export_line_delimited_roundtrip(small_store, tmp_path):
    path = tmp_path / "corpus.jsonl"
    export_corpus(small_store, str(path), "line-delimited")
    loaded = CorpusStore.load(str(path))
    assert loaded.to_lines() == small_store.to_lines()
    assert loaded.content_hash() == small_store.content_hash()


def test_export_csv_has_documented_columns(small_store, tmp_path):
    from litmon.reports import CSV_COLUMNS
    header = corpus_csv_bytes(small_store).decode().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)


def test_export_unwritable_path(small_store, tmp_path):
    from litmon.errors import IoFailureError
    with pytest.raises(IoFailureError):
        export_corpus(small_store, str(tmp_path / "no" / "dir" / "f.csv"),
                      "csv")
    with pytest.raises(IoFailureError):
        export_corpus(small_store, str(tmp_path / "no" / "dir" / "f.jsonl"),
                      "line-delimited")
