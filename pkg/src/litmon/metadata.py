"""DOI metadata resolution against a provider-agnostic service contract.

The client returns raw response bytes for a DOI; mapping into an
IntrinsicRecord is done here against a minimal documented schema rather
than any one provider's full payload::

    {
      "doi": "10.../...",
      "title": "...",
      "year": 2020,
      "venue": "...",
      "type": "journal-article",
      "authors": [{"name": "Family, Given", "affiliation": "..."}],
      "abstract": "...", "keywords": [...], "publisher": "...",
      "volume": "...", "issue": "...", "language": "en", "url": "..."
    }

Two clients implement the contract: an offline one that replays recorded
responses from a fixture directory (byte-exact, fully deterministic), and a
live HTTP one with bounded retries, per-host rate limiting, and a bounded
number of concurrent in-flight requests.
"""

from __future__ import annotations

import json
import threading
import time
import urllib.parse
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Protocol

from .errors import (
    MalformedResponseError,
    NotFoundError,
    ServiceUnavailableError,
)
from .model import (
    IntrinsicRecord,
    ParseIssue,
    RawSource,
    ResourceType,
    Severity,
    ValidationIssue,
)
from .textutil import collapse_ws, normalize_doi

_SERVICE_TYPE_HINTS = {
    "journal-article": ResourceType.REVIEWED_PAPER,
    "article": ResourceType.REVIEWED_PAPER,
    "book": ResourceType.REVIEWED_PAPER,
    "book-chapter": ResourceType.REVIEWED_PAPER,
    "monograph": ResourceType.REVIEWED_PAPER,
    "proceedings-article": ResourceType.CONFERENCE_PROCEEDINGS,
    "proceedings": ResourceType.CONFERENCE_PROCEEDINGS,
    "conference-paper": ResourceType.CONFERENCE_PROCEEDINGS,
    "thesis": ResourceType.THESIS,
    "dissertation": ResourceType.THESIS,
    "report": ResourceType.TECHNICAL_REPORT_WHITE_PAPER,
    "patent": ResourceType.STANDARD_PATENT,
    "standard": ResourceType.STANDARD_PATENT,
}


class MetadataClient(Protocol):
    def fetch(self, doi: str) -> bytes:
        """Raw response bytes for a DOI.

        Raises NotFoundError for unknown DOIs and ServiceUnavailableError
        when the backend cannot be reached.
        """
        ...


def fixture_filename(doi: str) -> str:
    return urllib.parse.quote(doi.lower(), safe="") + ".json"


class FixtureMetadataClient:
    """Replays recorded responses from a directory keyed by DOI."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def fetch(self, doi: str) -> bytes:
        path = self.directory / fixture_filename(doi)
        if not path.exists():
            raise NotFoundError(f"no recorded response for {doi}")
        return path.read_bytes()

    def record(self, doi: str, payload: bytes):
        self.directory.mkdir(parents=True, exist_ok=True)
        (self.directory / fixture_filename(doi)).write_bytes(payload)


class HttpMetadataClient:
    """Live client for a DOI resolution endpoint.

    ``base_url`` is joined with the URL-quoted DOI. Transient failures are
    retried with exponential backoff; requests to the same host are spaced
    by ``min_interval`` seconds and at most ``max_in_flight`` run at once.
    """

    def __init__(self, base_url: str, timeout: float = 10.0,
                 max_retries: int = 3, backoff: float = 0.5,
                 min_interval: float = 0.1, max_in_flight: int = 4,
                 session=None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff = backoff
        self.min_interval = min_interval
        self._slots = threading.BoundedSemaphore(max_in_flight)
        self._pace_lock = threading.Lock()
        self._last_request = 0.0
        if session is None:
            import requests
            session = requests.Session()
        self.session = session

    def _pace(self):
        with self._pace_lock:
            wait = self._last_request + self.min_interval - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_request = time.monotonic()

    def fetch(self, doi: str) -> bytes:
        import requests

        url = f"{self.base_url}/{urllib.parse.quote(doi, safe='')}"
        last_error = "no attempt made"
        with self._slots:
            for attempt in range(self.max_retries):
                self._pace()
                try:
                    response = self.session.get(url, timeout=self.timeout)
                except requests.RequestException as exc:
                    last_error = str(exc)
                else:
                    if response.status_code == 404:
                        raise NotFoundError(f"{doi} not found at {self.base_url}")
                    if response.ok:
                        return response.content
                    last_error = f"HTTP {response.status_code}"
                    if 400 <= response.status_code < 500 and \
                            response.status_code != 429:
                        break
                time.sleep(self.backoff * (2 ** attempt))
        raise ServiceUnavailableError(
            f"{self.base_url} unavailable after {self.max_retries} attempts: "
            f"{last_error}")


def map_response(doi: str, payload: bytes
                 ) -> tuple[IntrinsicRecord, list[ValidationIssue]]:
    """Map a service response onto an IntrinsicRecord.

    Partial metadata is tolerated and surfaced as warnings; structurally
    broken payloads raise MalformedResponse.
    """
    try:
        doc = json.loads(payload.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedResponseError(f"response for {doi} is not valid JSON: "
                                     f"{exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedResponseError(f"response for {doi} is not an object")

    issues: list[ValidationIssue] = []

    def warn(code: str, message: str):
        issues.append(ValidationIssue(record_id=doi, severity=Severity.WARNING,
                                      code=code, message=message))

    raw_authors = doc.get("authors")
    authors: list[str] = []
    affiliations: list[str] = []
    if raw_authors is None:
        warn("MissingAuthors", f"service response for {doi} has no author list")
    elif not isinstance(raw_authors, list):
        raise MalformedResponseError(f"authors for {doi} is not a list")
    else:
        for entry in raw_authors:
            if isinstance(entry, str):
                authors.append(collapse_ws(entry))
            elif isinstance(entry, dict) and entry.get("name"):
                authors.append(collapse_ws(str(entry["name"])))
                if entry.get("affiliation"):
                    affiliations.append(collapse_ws(str(entry["affiliation"])))
            else:
                raise MalformedResponseError(
                    f"author entry for {doi} is neither a name string nor "
                    "an object with a name")

    title = doc.get("title") or ""
    if isinstance(title, list):
        title = title[0] if title else ""
    if not isinstance(title, str):
        raise MalformedResponseError(f"title for {doi} is not text")
    if not title:
        warn("MissingTitle", f"service response for {doi} has no title")

    year = doc.get("year")
    if year is not None and not isinstance(year, int):
        try:
            year = int(str(year)[:4])
        except ValueError:
            raise MalformedResponseError(
                f"year for {doi} is not an integer") from None
    if year is None:
        warn("MissingYear", f"service response for {doi} has no year")

    keywords = doc.get("keywords") or []
    if not isinstance(keywords, list):
        raise MalformedResponseError(f"keywords for {doi} is not a list")

    record = IntrinsicRecord(
        title=collapse_ws(title),
        year=year,
        resource_type_hint=_SERVICE_TYPE_HINTS.get(
            str(doc.get("type", "")).lower()),
        venue=collapse_ws(str(doc.get("venue") or "")),
        volume=str(doc["volume"]) if doc.get("volume") is not None else None,
        issue=str(doc["issue"]) if doc.get("issue") is not None else None,
        publisher=doc.get("publisher"),
        abstract=doc.get("abstract"),
        keywords=[collapse_ws(str(k)) for k in keywords if str(k).strip()],
        language=str(doc.get("language") or "en").lower()[:2] or "en",
        doi=normalize_doi(str(doc.get("doi") or doi)) or normalize_doi(doi),
        url=doc.get("url"),
        authors=authors,
        affiliations=affiliations,
        raw_source=RawSource.DOI_SERVICE,
    )
    return record, issues


def resolve_doi(doi: str, client: MetadataClient
                ) -> tuple[IntrinsicRecord, list[ValidationIssue]]:
    """Resolve one DOI through the given client."""
    normalized = normalize_doi(doi)
    if normalized is None:
        raise NotFoundError(f"{doi!r} is not a syntactically valid DOI")
    payload = client.fetch(normalized)
    return map_response(normalized, payload)


def resolve_many(dois: list[str], client: MetadataClient,
                 max_workers: int = 4) -> dict[str, object]:
    """Resolve several DOIs concurrently.

    Returns {doi: (record, issues)} for successes and {doi: error} for
    failures; result content does not depend on completion order.
    """
    results: dict[str, object] = {}

    def one(doi: str):
        try:
            return resolve_doi(doi, client)
        except (NotFoundError, ServiceUnavailableError,
                MalformedResponseError) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        for doi, outcome in zip(dois, pool.map(one, dois)):
            results[doi] = outcome
    return results
