import json

import pytest
from click.testing import CliRunner

from conftest import DATA_DIR, add_doc, make_store
from litmon.cli import main
from litmon.model import CurationStatus
from litmon.store import CorpusStore
from litmon.vocab import Product


@pytest.fixture()
def runner():
    # click >= 8.2 separates stdout/stderr by default
    return CliRunner()


@pytest.fixture()
def corpus_file(tmp_path):
    store = make_store()
    add_doc(store, title="Alpha study of beams", year=2019,
            authors=("Smith, J.",), product=Product.EDUPACK,
            flags={"data_source": True}, short_name="alpha2019")
    add_doc(store, title="Beta study of plates", year=2020,
            authors=("Smith, J.",), product=Product.SELECTOR,
            flags={"charts": True}, short_name="beta2020")
    path = tmp_path / "corpus.jsonl"
    store.save(str(path))
    return str(path)


def test_corpus_stats(runner, corpus_file):
    result = runner.invoke(main, ["corpus", "stats", "--corpus", corpus_file])
    assert result.exit_code == 0
    stats = json.loads(result.stdout)
    assert stats["records"] == 2
    assert stats["by_status"] == {"Validated": 2}


def test_corpus_validate_clean(runner, corpus_file):
    result = runner.invoke(main, ["corpus", "validate", "--corpus",
                                  corpus_file])
    assert result.exit_code == 0
    assert "0 error(s)" in result.stdout


def test_ingest_bib_into_corpus(runner, corpus_file):
    result = runner.invoke(main, ["ingest", "bib",
                                  str(DATA_DIR / "golden.bib"),
                                  "--corpus", corpus_file])
    assert result.exit_code == 0
    store = CorpusStore.load(corpus_file)
    assert len(store.documents) == 2 + 32


def test_ingest_bib_prints_jsonl_without_corpus(runner):
    result = runner.invoke(main, ["ingest", "bib",
                                  str(DATA_DIR / "golden.bib")])
    assert result.exit_code == 0
    lines = [l for l in result.stdout.splitlines() if l.strip()]
    assert len(lines) == 32
    first = json.loads(lines[0])
    assert first["raw_source"] == "BibTeX"


def test_ingest_ris_into_corpus(runner, corpus_file):
    result = runner.invoke(main, ["ingest", "ris",
                                  str(DATA_DIR / "golden.ris"),
                                  "--corpus", corpus_file])
    assert result.exit_code == 0
    store = CorpusStore.load(corpus_file)
    assert len(store.documents) == 2 + 33


def test_ingest_doi_offline(runner, corpus_file, tmp_path):
    from litmon.metadata import FixtureMetadataClient
    fixtures = tmp_path / "fixtures"
    FixtureMetadataClient(fixtures).record("10.0000/example", json.dumps({
        "doi": "10.0000/example", "title": "Resolved title", "year": 2021,
        "type": "journal-article",
        "authors": [{"name": "Resolver, R."}]}).encode())
    result = runner.invoke(main, ["ingest", "doi", "10.0000/example",
                                  "--offline", str(fixtures),
                                  "--corpus", corpus_file])
    assert result.exit_code == 0
    store = CorpusStore.load(corpus_file)
    assert any(r.title == "Resolved title" for r in store.documents.values())


def test_ingest_doi_offline_not_found(runner, tmp_path):
    fixtures = tmp_path / "fixtures"
    fixtures.mkdir()
    result = runner.invoke(main, ["ingest", "doi", "10.0000/absent",
                                  "--offline", str(fixtures)])
    assert result.exit_code == 1


def test_ingest_dedupe(runner, tmp_path):
    store = make_store()
    add_doc(store, title="Same title", year=2020, authors=("A, B.",),
            product=Product.EDUPACK, doi="10.1000/dup", short_name="a1")
    add_doc(store, title="Same title!", year=2020, authors=("A, B.",),
            product=Product.EDUPACK, doi="10.1000/DUP", short_name="a2")
    path = tmp_path / "c.jsonl"
    store.save(str(path))
    result = runner.invoke(main, ["ingest", "dedupe", "--corpus", str(path)])
    assert result.exit_code == 0
    cluster = json.loads(result.stdout.splitlines()[0])
    assert cluster["match_kind"] == "DoiExact"


def test_curate_annotate_and_gate(runner, corpus_file, tmp_path):
    store = CorpusStore.load(corpus_file)
    rid = add_doc(store, title="New ingest", year=2021,
                  authors=("Novak, K.",), short_name="new2021",
                  status=CurationStatus.INGESTED)
    store.save(corpus_file)
    annotation = tmp_path / "ann.json"
    annotation.write_text(json.dumps({
        "usage": {"principal_product": "CES EduPack",
                  "flags": {"materials_selection": True}},
        "curator": "cli-test"}))
    result = runner.invoke(main, ["curate", "annotate", rid,
                                  "--file", str(annotation),
                                  "--corpus", corpus_file])
    assert result.exit_code == 0
    assert "Annotated" in result.stdout
    result = runner.invoke(main, ["curate", "gate", rid,
                                  "--corpus", corpus_file])
    assert result.exit_code == 0
    decision = json.loads(result.stdout)
    assert decision["verdict"] == "Include"
    assert decision["satisfied_criteria"] == ["SelectionWorkflow"]


def test_report_dist_table(runner, corpus_file):
    result = runner.invoke(main, ["report", "dist", "--corpus", corpus_file,
                                  "--dim", "product", "--format", "table"])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[0] == "label,count"


def test_report_years_json(runner, corpus_file):
    result = runner.invoke(main, ["report", "years", "--corpus", corpus_file])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["report"] == "years"
    assert doc["data"]["counts"]["2019"] == 1


def test_report_coauthors_out_files(runner, corpus_file, tmp_path):
    prefix = str(tmp_path / "net")
    result = runner.invoke(main, ["report", "coauthors", "--corpus",
                                  corpus_file, "--min-docs", "1",
                                  "--out", prefix])
    assert result.exit_code == 0
    assert (tmp_path / "net.nodes.tsv").exists()
    assert (tmp_path / "net.edges.tsv").exists()


def test_export_csv(runner, corpus_file, tmp_path):
    out = tmp_path / "corpus.csv"
    result = runner.invoke(main, ["export", "--corpus", corpus_file,
                                  "--to", str(out), "--format", "csv"])
    assert result.exit_code == 0
    assert len(out.read_text().splitlines()) == 3


def test_report_deterministic_bytes(runner, corpus_file):
    args = ["report", "sankey", "--corpus", corpus_file, "--from", "product",
            "--to", "type", "--normalized"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.stdout_bytes == second.stdout_bytes
