"""Bridges parsed intrinsic metadata into the corpus store.

Turning an IntrinsicRecord into a stored document creates or reuses the
author, institution, and country entities it mentions and wires the typed
links; the record starts its curation life as Ingested.
"""

from __future__ import annotations

from .model import (
    DocumentRecord,
    EntityKind,
    IntrinsicRecord,
    Link,
    LinkType,
    ParseIssue,
    ResourceType,
)
from .names import normalize_author_name
from .store import CorpusStore
from .vocab import resolve_country


def document_from_intrinsic(store: CorpusStore, intrinsic: IntrinsicRecord
                            ) -> tuple[DocumentRecord, list[ParseIssue]]:
    """Build an unsaved DocumentRecord, creating linked entities as needed."""
    issues: list[ParseIssue] = []

    author_links: list[Link] = []
    seen_authors: set[str] = set()
    for raw_name in intrinsic.authors:
        normalized = normalize_author_name(raw_name)
        if normalized.parse_warning:
            issues.append(ParseIssue(line=None, code="Warning",
                                     message=normalized.parse_warning))
        if not normalized.canonical_key:
            continue
        entity = store.ensure_entity(EntityKind.AUTHOR,
                                     normalized.display_name,
                                     canonical=normalized.canonical_key)
        if entity.entity_id in seen_authors:
            continue
        seen_authors.add(entity.entity_id)
        author_links.append(Link("", entity.entity_id, LinkType.AUTHORED_BY,
                                 ordinal=len(author_links) + 1))

    institution_links: list[Link] = []
    country_links: list[Link] = []
    seen_inst: set[str] = set()
    seen_country: set[str] = set()
    for position, affiliation in enumerate(intrinsic.affiliations, start=1):
        if not affiliation.strip():
            continue
        inst = store.ensure_entity(EntityKind.INSTITUTION, affiliation.strip())
        if inst.entity_id not in seen_inst:
            seen_inst.add(inst.entity_id)
            institution_links.append(
                Link("", inst.entity_id, LinkType.AFFILIATED_WITH,
                     ordinal=position))
        # country from the trailing segments of the affiliation string
        for segment in reversed([s.strip() for s in affiliation.split(",")]):
            country_name = resolve_country(segment)
            if country_name is not None:
                country = store.ensure_entity(EntityKind.COUNTRY, country_name)
                if country.entity_id not in seen_country:
                    seen_country.add(country.entity_id)
                    country_links.append(Link("", country.entity_id,
                                              LinkType.LOCATED_IN))
                break

    resource_type = intrinsic.resource_type_hint
    if resource_type is None:
        resource_type = ResourceType.REVIEWED_PAPER
        issues.append(ParseIssue(
            line=None, code="Warning",
            message=f"no resource type for {intrinsic.title[:40]!r}; "
                    "defaulted to ReviewedPaper"))

    record = DocumentRecord(
        title=intrinsic.title,
        year=intrinsic.year,
        resource_type=resource_type,
        venue=intrinsic.venue,
        volume=intrinsic.volume,
        issue=intrinsic.issue,
        publisher=intrinsic.publisher,
        abstract=intrinsic.abstract,
        keywords=list(intrinsic.keywords),
        language=intrinsic.language,
        doi=intrinsic.doi,
        url=intrinsic.url,
        author_links=author_links,
        institution_links=institution_links,
        country_links=country_links,
    )
    return record, issues


def add_intrinsic(store: CorpusStore, intrinsic: IntrinsicRecord
                  ) -> tuple[str, list[ParseIssue]]:
    """Convert and persist one parsed record; returns its id."""
    record, issues = document_from_intrinsic(store, intrinsic)
    record_id = store.upsert_record(record)
    return record_id, issues
