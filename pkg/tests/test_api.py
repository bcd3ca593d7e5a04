"""HTTP API tests against a live server on an ephemeral port."""

import json
import threading
import urllib.parse
import urllib.request

import pytest

from conftest import add_doc, make_store
from litmon.api import make_server
from litmon.model import CurationStatus, EntityKind
from litmon.vocab import Product


@pytest.fixture()
def served_store(tmp_path):
    store = make_store()
    add_doc(store, title="Alpha study of beams", year=2019,
            authors=("Smith, J.",), institutions=("Institute A",),
            product=Product.EDUPACK, flags={"data_source": True},
            short_name="alpha2019")
    add_doc(store, title="Beta study of plates", year=2020,
            authors=("Smith, J.", "Novak, K."), product=Product.SELECTOR,
            flags={"charts": True}, short_name="beta2020")
    add_doc(store, title="Fresh ingest", year=2021, authors=("Novak, K.",),
            status=CurationStatus.INGESTED, short_name="fresh2021")
    corpus_path = tmp_path / "corpus.jsonl"
    store.save(str(corpus_path))
    server = make_server(store, "127.0.0.1", 0, corpus_path=str(corpus_path))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_address[1]}"
    yield store, base, corpus_path
    server.shutdown()


def get(base, path):
    with urllib.request.urlopen(base + path) as response:
        return response.status, json.loads(response.read())


def send(base, path, method, body) -> tuple[int, dict]:
    data = json.dumps(body).encode()
    request = urllib.request.Request(base + path, data=data, method=method,
                                     headers={"Content-Type":
                                              "application/json"})
    try:
        with urllib.request.urlopen(request) as response:
            return response.status, json.loads(response.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def test_index_lists_reports(served_store):
    _store, base, _path = served_store
    status, envelope = get(base, "/")
    assert status == 200
    assert envelope["status"] == "Ok"
    assert "coauthors" in envelope["payload"]["reports"]


def test_unknown_record_is_error_envelope(served_store):
    _store, base, _path = served_store
    try:
        urllib.request.urlopen(base + "/records/d9999")
        raise AssertionError("expected 404")
    except urllib.error.HTTPError as err:
        assert err.code == 404
        envelope = json.loads(err.read())
        assert envelope["status"] == "Error"
        assert envelope["code"] == "UnknownRecord"


def test_record_list_with_filter(served_store):
    _store, base, _path = served_store
    status, envelope = get(base, "/records?filter=" +
                           urllib.parse.quote("year=2020"))
    assert status == 200
    assert envelope["payload"]["count"] == 1
    assert envelope["payload"]["records"][0]["short_name"] == "beta2020"


def test_annotation_read_your_writes(served_store):
    store, base, corpus_path = served_store
    rid = store.by_short_name("fresh2021").record_id
    before = get(base, "/")[1]["snapshot"]
    status, envelope = send(base, f"/records/{rid}/annotation", "PUT", {
        "usage": {"principal_product": "CES EduPack",
                  "usage_context": "Education",
                  "flags": {"charts": True}},
        "curator": "tester",
    })
    assert status == 200
    assert envelope["payload"]["curation_status"] == "Annotated"
    assert envelope["payload"]["usage"]["principal_product"] == "EduPack"
    assert envelope["snapshot"] > before  # mutation bumped the snapshot
    status, envelope = get(base, f"/records/{rid}")
    assert envelope["payload"]["usage"]["principal_product"] == "EduPack"
    assert envelope["payload"]["audit_log"][0]["curator"] == "tester"
    # persisted through the bound corpus path
    from litmon.store import CorpusStore
    reloaded = CorpusStore.load(str(corpus_path))
    assert reloaded.get_record(rid).usage is not None


def test_vocabulary_violation_maps_to_400(served_store):
    store, base, _path = served_store
    rid = store.by_short_name("fresh2021").record_id
    status, envelope = send(base, f"/records/{rid}/annotation", "PUT",
                            {"usage": {"principal_product": "WordArt"}})
    assert status == 400
    assert envelope["code"] == "VocabularyViolation"


def test_gate_endpoint_applies_verdict(served_store):
    store, base, _path = served_store
    rid = store.by_short_name("fresh2021").record_id
    send(base, f"/records/{rid}/annotation", "PUT", {
        "usage": {"principal_product": "MI",
                  "flags": {"data_source": False}}})
    status, envelope = send(base, f"/records/{rid}/gate", "POST", {})
    assert status == 200
    assert envelope["payload"]["decision"]["verdict"] == "Exclude"
    assert envelope["payload"]["curation_status"] == "Excluded"


def test_neighborhood_endpoint(served_store):
    store, base, _path = served_store
    author = store.find_entity(EntityKind.AUTHOR, "smith_j")
    status, envelope = get(
        base, f"/entities/{urllib.parse.quote(author.entity_id)}"
              "/neighborhood?depth=1")
    assert status == 200
    kinds = {n["kind"] for n in envelope["payload"]["nodes"]}
    assert kinds == {"Author", "Document"}
    assert len(envelope["payload"]["nodes"]) == 3  # author + 2 documents


def test_depth_zero_rejected(served_store):
    store, base, _path = served_store
    author = store.find_entity(EntityKind.AUTHOR, "smith_j")
    status, envelope = send(
        base, f"/entities/{urllib.parse.quote(author.entity_id)}"
              "/neighborhood?depth=0", "POST", {})
    assert status == 404  # POST not routed here
    try:
        urllib.request.urlopen(
            base + f"/entities/{urllib.parse.quote(author.entity_id)}"
                   "/neighborhood?depth=0")
        raise AssertionError("expected 400")
    except urllib.error.HTTPError as err:
        assert err.code == 400
        assert json.loads(err.read())["code"] == "UnknownDepth"


def test_qc_endpoint_with_severity_filter(served_store):
    _store, base, _path = served_store
    status, envelope = get(base, "/qc?severity=warning")
    assert status == 200
    assert all(i["severity"] == "Warning"
               for i in envelope["payload"]["issues"])


def test_report_endpoint_contains_rendered_content(served_store):
    store, base, _path = served_store
    status, envelope = get(base, "/reports/dist?dim=product")
    assert status == 200
    payload = envelope["payload"]
    content = json.loads(payload["content"])
    assert content["report"] == "dist"
    assert content["snapshot"] == store.content_hash()


def test_report_endpoint_table_format(served_store):
    _store, base, _path = served_store
    _status, envelope = get(base, "/reports/years?format=table")
    assert envelope["payload"]["content"].splitlines()[0] == \
        "year,count,cumulative"


def test_unknown_report_is_404(served_store):
    _store, base, _path = served_store
    try:
        urllib.request.urlopen(base + "/reports/nonsense")
        raise AssertionError("expected 404")
    except urllib.error.HTTPError as err:
        assert err.code == 404
        assert json.loads(err.read())["code"] == "UnknownReport"
