import json

import pytest

from litmon.errors import (
    MalformedResponseError,
    NotFoundError,
    ServiceUnavailableError,
)
from litmon.metadata import (
    FixtureMetadataClient,
    HttpMetadataClient,
    fixture_filename,
    map_response,
    resolve_doi,
    resolve_many,
)
from litmon.model import RawSource, ResourceType

EXAMPLE = {
    "doi": "10.0000/example",
    "title": "An example study",
    "year": 2020,
    "venue": "Journal of Examples",
    "type": "journal-article",
    "authors": [{"name": "Smith, Jane", "affiliation": "Institute A, France"}],
    "keywords": ["examples"],
}


@pytest.fixture()
def fixture_dir(tmp_path):
    client = FixtureMetadataClient(tmp_path)
    client.record("10.0000/example", json.dumps(EXAMPLE).encode())
    return tmp_path


def test_fixture_echo(fixture_dir):
    record, issues = resolve_doi("10.0000/example",
                                 FixtureMetadataClient(fixture_dir))
    assert record.title == "An example study"
    assert record.year == 2020
    assert record.resource_type_hint is ResourceType.REVIEWED_PAPER
    assert record.raw_source is RawSource.DOI_SERVICE
    assert record.authors == ["Smith, Jane"]
    assert record.affiliations == ["Institute A, France"]
    assert issues == []


def test_unknown_doi_offline(fixture_dir):
    with pytest.raises(NotFoundError):
        resolve_doi("10.0000/unknown", FixtureMetadataClient(fixture_dir))


def test_syntactically_invalid_doi(fixture_dir):
    with pytest.raises(NotFoundError):
        resolve_doi("banana", FixtureMetadataClient(fixture_dir))


def test_missing_authors_yields_warning(tmp_path):
    client = FixtureMetadataClient(tmp_path)
    partial = {k: v for k, v in EXAMPLE.items() if k != "authors"}
    client.record("10.0000/partial", json.dumps(partial).encode())
    record, issues = resolve_doi("10.0000/partial", client)
    assert record.authors == []
    assert [i.code for i in issues] == ["MissingAuthors"]
    assert issues[0].severity.value == "Warning"


def test_malformed_response(tmp_path):
    client = FixtureMetadataClient(tmp_path)
    client.record("10.0000/broken", b"this is not json")
    with pytest.raises(MalformedResponseError):
        resolve_doi("10.0000/broken", client)
    client.record("10.0000/badtype", json.dumps(
        dict(EXAMPLE, authors="nope")).encode())
    with pytest.raises(MalformedResponseError):
        resolve_doi("10.0000/badtype", client)


def test_fixture_client_bit_deterministic(fixture_dir):
    client = FixtureMetadataClient(fixture_dir)
    assert client.fetch("10.0000/example") == client.fetch("10.0000/example")
    first, _ = resolve_doi("10.0000/example", client)
    second, _ = resolve_doi("10.0000/example", client)
    assert first == second


def test_fixture_filename_is_quoted():
    assert "/" not in fixture_filename("10.0000/a/b")


def test_case_insensitive_doi_lookup(fixture_dir):
    record, _ = resolve_doi("10.0000/EXAMPLE",
                            FixtureMetadataClient(fixture_dir))
    assert record.doi == "10.0000/example"


def test_resolve_many_order_independent(fixture_dir):
    client = FixtureMetadataClient(fixture_dir)
    outcomes = resolve_many(["10.0000/example", "10.0000/missing"], client,
                            max_workers=4)
    record, _issues = outcomes["10.0000/example"]
    assert record.title == "An example study"
    assert isinstance(outcomes["10.0000/missing"], NotFoundError)


def test_map_response_year_from_string():
    record, _ = map_response("10.0000/x", json.dumps(
        dict(EXAMPLE, year="2019-03")).encode())
    assert record.year == 2019


class _FakeResponse:
    def __init__(self, status_code, content=b""):
        self.status_code = status_code
        self.content = content

    @property
    def ok(self):
        return self.status_code < 400


class _FakeSession:
    """Scripted session: pops one canned response per request."""

    def __init__(self, responses):
        self.responses = list(responses)
        self.calls = []

    def get(self, url, timeout=None):
        self.calls.append(url)
        outcome = self.responses.pop(0)
        if isinstance(outcome, Exception):
            raise outcome
        return outcome


def test_http_client_retries_then_succeeds():
    payload = json.dumps(EXAMPLE).encode()
    session = _FakeSession([_FakeResponse(503), _FakeResponse(200, payload)])
    client = HttpMetadataClient("https://svc.test/works", backoff=0.0,
                                min_interval=0.0, session=session)
    assert client.fetch("10.0000/example") == payload
    assert len(session.calls) == 2


def test_http_client_404_is_not_found():
    session = _FakeSession([_FakeResponse(404)])
    client = HttpMetadataClient("https://svc.test/works", backoff=0.0,
                                min_interval=0.0, session=session)
    with pytest.raises(NotFoundError):
        client.fetch("10.0000/missing")
    assert len(session.calls) == 1  # no retry on 404


def test_http_client_gives_up_after_retries():
    import requests

    session = _FakeSession([requests.ConnectionError("down")] * 3)
    client = HttpMetadataClient("https://svc.test/works", max_retries=3,
                                backoff=0.0, min_interval=0.0,
                                session=session)
    with pytest.raises(ServiceUnavailableError):
        client.fetch("10.0000/example")
    assert len(session.calls) == 3
