"""Persistent corpus store with bidirectional link navigation.

The store keeps document records and entity records (authors, institutions,
countries, products, research fields) plus the typed links between them.
Every link is indexed from both endpoints, so the neighborhood of any node
can be walked in either direction.

Persistence is a single UTF-8 file, one JSON object per line, organized in
sections::

    {"format": "litmon-corpus", "version": 1, ...corpus metadata...}
    {"section": "entities", "count": N}
    {...entity...}
    {"section": "entity_links", "count": K}
    {"from": ..., "to": ..., "type": ...}
    {"section": "documents", "count": M}
    {...document, links inline...}

The format is append-safe: re-reading applies lines in order and a later
line for the same id supersedes the earlier one. Saving always rewrites the
canonical sorted form, which is also what the snapshot hash is computed on.

Concurrency: one writer at a time, any number of readers. All mutating
methods take the store lock; read methods copy out consistent snapshots.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import os
import re
import threading
from dataclasses import dataclass, field

from . import filters
from .errors import (
    DuplicateShortNameError,
    InvalidEnumValueError,
    InvalidRecordError,
    IoFailureError,
    ReferentialIntegrityError,
    UnknownDepthError,
    UnknownEntityError,
    UnknownRecordError,
)
from .model import (
    CurationStatus,
    DocumentRecord,
    EntityKind,
    EntityRecord,
    Link,
    ResourceType,
)
from .textutil import canonical_key as default_key
from .textutil import normalize_doi, slugify

FORMAT_NAME = "litmon-corpus"
FORMAT_VERSION = 1

_ENTITY_PREFIX = {
    EntityKind.AUTHOR: "author",
    EntityKind.INSTITUTION: "inst",
    EntityKind.COUNTRY: "country",
    EntityKind.PRODUCT: "product",
    EntityKind.FOS_FIELD: "fos",
}


@dataclass
class NodeView:
    """One node of a subgraph: a document or an entity."""

    node_id: str
    kind: str  # entity kind value, or "Document"
    label: str
    key: str
    doc_count: int | None = None
    year: int | None = None

    def to_dict(self) -> dict:
        return {"node_id": self.node_id, "kind": self.kind, "label": self.label,
                "key": self.key, "doc_count": self.doc_count, "year": self.year}


@dataclass
class Subgraph:
    root: str
    nodes: list[NodeView] = field(default_factory=list)
    links: list[Link] = field(default_factory=list)

    def node_ids(self) -> list[str]:
        return [n.node_id for n in self.nodes]

    def to_dict(self) -> dict:
        return {"root": self.root,
                "nodes": [n.to_dict() for n in self.nodes],
                "links": [l.to_dict() for l in self.links]}


class CorpusStore:
    def __init__(self, year_min: int = 1990, year_max: int | None = None,
                 collection_cutoff: str | None = None):
        self.year_min = year_min
        self.year_max = year_max if year_max is not None else _dt.date.today().year
        # "YYYY-MM" of the last collection pass; a cutoff before December
        # marks that year as partially covered.
        self.collection_cutoff = collection_cutoff
        self.documents: dict[str, DocumentRecord] = {}
        self.entities: dict[str, EntityRecord] = {}
        self.entity_links: list[Link] = []
        self._by_short_name: dict[str, str] = {}
        self._entity_keys: dict[tuple[EntityKind, str], str] = {}
        self._adjacency: dict[str, list[Link]] = {}
        self._doc_seq = 0
        self._version = 0
        self._lock = threading.RLock()

    # -- versioning --------------------------------------------------------

    @property
    def version(self) -> int:
        return self._version

    def _bump(self):
        self._version += 1

    def content_hash(self) -> str:
        """Stable hash of the canonical serialized corpus."""
        with self._lock:
            digest = hashlib.sha256("\n".join(self.to_lines()).encode("utf-8"))
        return digest.hexdigest()[:16]

    def partial_year(self) -> int | None:
        """Year only partially covered by collection, if any."""
        if not self.collection_cutoff:
            return None
        m = re.match(r"^(\d{4})-(\d{2})$", self.collection_cutoff)
        if not m:
            return None
        year, month = int(m.group(1)), int(m.group(2))
        return year if month < 12 else None

    # -- entities ----------------------------------------------------------

    def ensure_entity(self, kind: EntityKind, display_name: str,
                      canonical: str | None = None,
                      attributes: dict[str, str] | None = None) -> EntityRecord:
        """Fetch-or-create by (kind, canonical key); never duplicates."""
        key = canonical if canonical is not None else default_key(display_name)
        if not key:
            raise InvalidRecordError(f"entity {display_name!r} has empty key")
        with self._lock:
            existing_id = self._entity_keys.get((kind, key))
            if existing_id is not None:
                entity = self.entities[existing_id]
                if attributes:
                    for k, v in attributes.items():
                        entity.attributes.setdefault(k, v)
                return entity
            entity = EntityRecord(
                entity_id=f"{_ENTITY_PREFIX[kind]}:{key}",
                kind=kind, display_name=display_name, canonical_key=key,
                attributes=dict(attributes or {}))
            self._add_entity(entity)
            self._bump()
            return entity

    def _add_entity(self, entity: EntityRecord):
        if (entity.kind, entity.canonical_key) in self._entity_keys:
            raise ReferentialIntegrityError(
                f"entity with key ({entity.kind.value}, {entity.canonical_key}) "
                "already exists")
        self.entities[entity.entity_id] = entity
        self._entity_keys[(entity.kind, entity.canonical_key)] = entity.entity_id

    def get_entity(self, entity_id: str) -> EntityRecord:
        entity = self.entities.get(entity_id)
        if entity is None:
            raise UnknownEntityError(f"no entity {entity_id!r}")
        return entity

    def find_entity(self, kind: EntityKind, canonical: str) -> EntityRecord | None:
        entity_id = self._entity_keys.get((kind, canonical))
        return self.entities.get(entity_id) if entity_id else None

    def entity_doc_count(self, entity_id: str) -> int:
        return sum(1 for link in self._adjacency.get(entity_id, ())
                   if link.from_id in self.documents or link.to_id in self.documents)

    def delete_entity(self, entity_id: str):
        with self._lock:
            entity = self.get_entity(entity_id)
            if self._adjacency.get(entity_id):
                raise ReferentialIntegrityError(
                    f"entity {entity_id} still has "
                    f"{len(self._adjacency[entity_id])} link(s)")
            del self.entities[entity_id]
            del self._entity_keys[(entity.kind, entity.canonical_key)]
            self._adjacency.pop(entity_id, None)
            self._bump()

    def merge_entities(self, keep_id: str, absorb_id: str) -> EntityRecord:
        """Redirect every link from ``absorb_id`` onto ``keep_id`` and drop
        the absorbed entity. Both must be of the same kind."""
        with self._lock:
            keep = self.get_entity(keep_id)
            absorb = self.get_entity(absorb_id)
            if keep.kind != absorb.kind:
                raise ReferentialIntegrityError(
                    f"cannot merge {absorb.kind.value} into {keep.kind.value}")
            if keep_id == absorb_id:
                return keep
            for record in self.documents.values():
                for name in ("author_links", "institution_links", "country_links",
                             "product_links", "field_links"):
                    links = getattr(record, name)
                    if any(l.to_id == absorb_id for l in links):
                        rewritten, seen = [], set()
                        for l in links:
                            to = keep_id if l.to_id == absorb_id else l.to_id
                            if to in seen:
                                continue
                            seen.add(to)
                            rewritten.append(Link(l.from_id, to, l.link_type,
                                                  l.ordinal))
                        if name == "author_links" and any(
                                l.ordinal is not None for l in rewritten):
                            # keep ordinals dense 1..n after dropping a duplicate
                            rewritten = [
                                Link(l.from_id, l.to_id, l.link_type, i)
                                for i, l in enumerate(
                                    sorted(rewritten,
                                           key=lambda l: l.ordinal or 0),
                                    start=1)]
                        setattr(record, name, rewritten)
            rewired: list[Link] = []
            for l in self.entity_links:
                link = Link(keep_id if l.from_id == absorb_id else l.from_id,
                            keep_id if l.to_id == absorb_id else l.to_id,
                            l.link_type, l.ordinal)
                if link.from_id != link.to_id and link not in rewired:
                    rewired.append(link)
            self.entity_links = rewired
            for k, v in absorb.attributes.items():
                keep.attributes.setdefault(k, v)
            del self.entities[absorb_id]
            del self._entity_keys[(absorb.kind, absorb.canonical_key)]
            self._adjacency.pop(absorb_id, None)
            self._rebuild_adjacency()
            self._bump()
            return keep

    def add_entity_link(self, from_id: str, to_id: str, link_type) -> Link:
        with self._lock:
            for node in (from_id, to_id):
                if node not in self.entities:
                    raise UnknownEntityError(f"no entity {node!r}")
            link = Link(from_id, to_id, link_type)
            if link not in self.entity_links:
                self.entity_links.append(link)
                self._adjacency.setdefault(from_id, []).append(link)
                self._adjacency.setdefault(to_id, []).append(link)
                self._bump()
            return link

    # -- documents ---------------------------------------------------------

    def get_record(self, record_id: str) -> DocumentRecord:
        record = self.documents.get(record_id)
        if record is None:
            raise UnknownRecordError(f"no record {record_id!r}")
        return record

    def by_short_name(self, short_name: str) -> DocumentRecord | None:
        record_id = self._by_short_name.get(short_name)
        return self.documents.get(record_id) if record_id else None

    def upsert_record(self, record: DocumentRecord) -> str:
        """Insert or update one record; links are reindexed both ways.

        Upserting the identical content twice is a no-op returning the same
        id. A new record whose short name is taken by different content is
        rejected with DuplicateShortName.
        """
        with self._lock:
            self._validate_record(record)
            if record.record_id:
                return self._upsert_with_id(record)

            if not record.short_name:
                record.short_name = self._generate_short_name(record)
            existing = self.by_short_name(record.short_name)
            if existing is not None:
                candidate = self._with_id(record, existing.record_id)
                if candidate.to_dict() == existing.to_dict():
                    return existing.record_id  # idempotent re-upsert
                raise DuplicateShortNameError(
                    f"short name {record.short_name!r} already used by "
                    f"{existing.record_id} with different content")
            record_id = self._next_record_id()
            self._insert(self._with_id(record, record_id))
            self._bump()
            return record_id

    def _upsert_with_id(self, record: DocumentRecord) -> str:
        owner = self._by_short_name.get(record.short_name) if record.short_name else None
        if owner is not None and owner != record.record_id:
            raise DuplicateShortNameError(
                f"short name {record.short_name!r} already used by {owner}")
        previous = self.documents.get(record.record_id)
        if previous is not None and previous.to_dict() == record.to_dict():
            return record.record_id
        if not record.short_name:
            record.short_name = self._generate_short_name(record)
        if previous is not None:
            self._remove_from_adjacency(previous)
            self._by_short_name.pop(previous.short_name, None)
        self._insert(record)
        self._bump()
        return record.record_id

    def _insert(self, record: DocumentRecord):
        for link in record.links():
            if link.to_id not in self.entities:
                raise ReferentialIntegrityError(
                    f"record {record.record_id or record.short_name!r} links "
                    f"to missing entity {link.to_id!r}")
        self.documents[record.record_id] = record
        self._by_short_name[record.short_name] = record.record_id
        self._reindex_record_links(record)
        m = re.match(r"^d(\d+)$", record.record_id)
        if m:
            self._doc_seq = max(self._doc_seq, int(m.group(1)))

    def _with_id(self, record: DocumentRecord, record_id: str) -> DocumentRecord:
        """Copy of ``record`` with record_id set and link from-endpoints
        rewritten to match."""
        d = record.to_dict()
        d["record_id"] = record_id
        return DocumentRecord.from_dict(d)

    def _validate_record(self, record: DocumentRecord):
        if not isinstance(record.resource_type, ResourceType):
            raise InvalidEnumValueError(
                f"resource_type: {record.resource_type!r} is not one of "
                f"{[m.value for m in ResourceType]}")
        if not isinstance(record.curation_status, CurationStatus):
            raise InvalidEnumValueError(
                f"curation_status: {record.curation_status!r}")
        if record.year is not None and not (
                self.year_min <= record.year <= self.year_max):
            raise InvalidRecordError(
                f"year {record.year} outside [{self.year_min}, {self.year_max}]")
        if record.doi is not None:
            normalized = normalize_doi(record.doi)
            if normalized is None:
                raise InvalidRecordError(f"doi {record.doi!r} is not a valid DOI")
            record.doi = normalized
        ordinals = [l.ordinal for l in record.author_links]
        if record.author_links and sorted(ordinals) != list(
                range(1, len(record.author_links) + 1)):
            raise InvalidRecordError(
                f"author link ordinals must be distinct 1..n, got {ordinals}")
        if record.curation_status is CurationStatus.VALIDATED:
            if not record.author_links:
                raise InvalidRecordError(
                    "a Validated record needs at least one author link")
            if record.usage is None:
                raise InvalidRecordError(
                    "a Validated record needs a usage descriptor with a "
                    "principal product")

    def _generate_short_name(self, record: DocumentRecord) -> str:
        stem = ""
        if record.author_links:
            first = min(record.author_links, key=lambda l: l.ordinal or 99)
            entity = self.entities.get(first.to_id)
            if entity is not None:
                stem = entity.canonical_key.split("_")[0]
        if not stem:
            words = slugify(record.title, sep=" ").split()
            stem = words[0] if words else "rec"
        base = f"{stem}{record.year if record.year is not None else 'nd'}"
        name, n = base, 1
        while name in self._by_short_name:
            n += 1
            name = f"{base}_{n}"
        return name

    def _next_record_id(self) -> str:
        self._doc_seq += 1
        return f"d{self._doc_seq:04d}"

    # -- link index ---------------------------------------------------------

    def _reindex_record_links(self, record: DocumentRecord):
        # callers remove the previously indexed version first
        for link in record.links():
            self._adjacency.setdefault(link.from_id, []).append(link)
            self._adjacency.setdefault(link.to_id, []).append(link)

    def _remove_from_adjacency(self, record: DocumentRecord):
        """Drop the indexed links of ``record`` (pass the stored version,
        whose link list matches what was indexed)."""
        record_id = record.record_id
        touched = {record_id} | {l.to_id for l in record.links()}
        for node in touched:
            links = self._adjacency.get(node)
            if links is None:
                continue
            kept = [l for l in links if l.from_id != record_id]
            if kept:
                self._adjacency[node] = kept
            else:
                del self._adjacency[node]

    def _rebuild_adjacency(self):
        self._adjacency = {}
        for record in self.documents.values():
            for link in record.links():
                self._adjacency.setdefault(link.from_id, []).append(link)
                self._adjacency.setdefault(link.to_id, []).append(link)
        for link in self.entity_links:
            self._adjacency.setdefault(link.from_id, []).append(link)
            self._adjacency.setdefault(link.to_id, []).append(link)

    def links_of(self, node_id: str) -> list[Link]:
        """Links incident to a node, regardless of direction."""
        return list(self._adjacency.get(node_id, ()))

    # -- navigation ----------------------------------------------------------

    def _node_view(self, node_id: str) -> NodeView:
        if node_id in self.documents:
            record = self.documents[node_id]
            return NodeView(node_id=node_id, kind="Document",
                            label=record.title or record.short_name,
                            key=record.short_name, year=record.year)
        entity = self.entities[node_id]
        return NodeView(node_id=node_id, kind=entity.kind.value,
                        label=entity.display_name, key=entity.canonical_key,
                        doc_count=self.entity_doc_count(node_id))

    def neighborhood(self, node_id: str, depth: int) -> Subgraph:
        """Subgraph of everything within ``depth`` link hops of a node."""
        if depth < 1:
            raise UnknownDepthError(f"depth must be >= 1, got {depth}")
        with self._lock:
            if node_id not in self.entities and node_id not in self.documents:
                raise UnknownEntityError(f"no entity or record {node_id!r}")
            dist = {node_id: 0}
            frontier = [node_id]
            links: list[Link] = []
            seen_links: set[tuple] = set()
            for hop in range(depth):
                next_frontier = []
                for node in frontier:
                    for link in self._adjacency.get(node, ()):
                        key = (link.from_id, link.to_id, link.link_type.value,
                               link.ordinal)
                        if key not in seen_links:
                            seen_links.add(key)
                            links.append(link)
                        other = link.to_id if link.from_id == node else link.from_id
                        if other not in dist:
                            dist[other] = hop + 1
                            next_frontier.append(other)
                frontier = next_frontier
            nodes = [self._node_view(n) for n in dist]
            nodes.sort(key=lambda n: (n.kind, n.key, n.node_id))
            links.sort(key=lambda l: (l.from_id, l.to_id, l.link_type.value,
                                      l.ordinal if l.ordinal is not None else 0))
            return Subgraph(root=node_id, nodes=nodes, links=links)

    # -- queries --------------------------------------------------------------

    def query(self, filter_expr: str | list[filters.Predicate] | None
              ) -> list[DocumentRecord]:
        """Records matching a conjunctive filter, ordered by (year, short_name)."""
        if isinstance(filter_expr, str):
            predicates = filters.parse_filter(filter_expr)
        else:
            predicates = filter_expr or []
        with self._lock:
            hits = [r for r in self.documents.values()
                    if filters.matches(r, self, predicates)]
        hits.sort(key=lambda r: (r.year is None, r.year or 0, r.short_name))
        return hits

    def all_records(self) -> list[DocumentRecord]:
        with self._lock:
            return sorted(self.documents.values(), key=lambda r: r.record_id)

    def validated_records(self) -> list[DocumentRecord]:
        return [r for r in self.all_records()
                if r.curation_status is CurationStatus.VALIDATED]

    def set_status(self, record_id: str, status: CurationStatus):
        """Advance the curation lifecycle. Forward moves and exclusion are
        allowed; an excluded record may return to Annotated via re-curation."""
        order = {CurationStatus.INGESTED: 0, CurationStatus.ANNOTATED: 1,
                 CurationStatus.VALIDATED: 2}
        with self._lock:
            record = self.get_record(record_id)
            current = record.curation_status
            if status is current:
                return
            allowed = (
                status is CurationStatus.EXCLUDED
                or (current is CurationStatus.EXCLUDED
                    and status is CurationStatus.ANNOTATED)
                or (current in order and status in order
                    and order[status] == order[current] + 1)
            )
            if not allowed:
                raise InvalidRecordError(
                    f"cannot move {record_id} from {current.value} to {status.value}")
            if status is CurationStatus.VALIDATED:
                probe = self._with_id(record, record.record_id)
                probe.curation_status = CurationStatus.VALIDATED
                self._validate_record(probe)
            record.curation_status = status
            self._bump()

    # -- persistence -----------------------------------------------------------

    def to_lines(self) -> list[str]:
        def dump(obj) -> str:
            return json.dumps(obj, ensure_ascii=False, sort_keys=True)

        header = {"format": FORMAT_NAME, "version": FORMAT_VERSION,
                  "year_min": self.year_min, "year_max": self.year_max,
                  "collection_cutoff": self.collection_cutoff}
        entities = sorted(self.entities.values(),
                          key=lambda e: (e.kind.value, e.canonical_key))
        entity_links = sorted(
            self.entity_links,
            key=lambda l: (l.from_id, l.to_id, l.link_type.value))
        documents = sorted(self.documents.values(), key=lambda r: r.record_id)
        lines = [dump(header), dump({"section": "entities",
                                     "count": len(entities)})]
        lines += [dump(e.to_dict()) for e in entities]
        lines.append(dump({"section": "entity_links",
                           "count": len(entity_links)}))
        lines += [dump(l.to_dict()) for l in entity_links]
        lines.append(dump({"section": "documents", "count": len(documents)}))
        lines += [dump(r.to_dict()) for r in documents]
        return lines

    def save(self, path: str):
        tmp = f"{path}.tmp"
        try:
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write("\n".join(self.to_lines()) + "\n")
            os.replace(tmp, path)
        except OSError as exc:
            raise IoFailureError(f"cannot write corpus to {path}: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "CorpusStore":
        store = cls()
        section = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InvalidRecordError(
                    f"corpus line {lineno}: invalid JSON ({exc.msg})") from exc
            if "format" in obj and "version" in obj:
                store.year_min = obj.get("year_min", store.year_min)
                store.year_max = obj.get("year_max", store.year_max)
                store.collection_cutoff = obj.get("collection_cutoff")
                continue
            if "section" in obj:
                section = obj["section"]
                continue
            if section == "entities" or ("entity_id" in obj and "kind" in obj):
                entity = EntityRecord.from_dict(obj)
                if entity.entity_id in store.entities:
                    old = store.entities[entity.entity_id]
                    del store._entity_keys[(old.kind, old.canonical_key)]
                store.entities[entity.entity_id] = entity
                store._entity_keys[(entity.kind, entity.canonical_key)] = \
                    entity.entity_id
            elif section == "entity_links" or ("from" in obj and "to" in obj
                                               and "record_id" not in obj):
                link = Link.from_dict(obj)
                if link not in store.entity_links:
                    store.entity_links.append(link)
            elif section == "documents" or "record_id" in obj:
                record = DocumentRecord.from_dict(obj)
                previous = store.documents.get(record.record_id)
                if previous is not None:
                    store._by_short_name.pop(previous.short_name, None)
                store.documents[record.record_id] = record
                store._by_short_name[record.short_name] = record.record_id
                m = re.match(r"^d(\d+)$", record.record_id)
                if m:
                    store._doc_seq = max(store._doc_seq, int(m.group(1)))
            else:
                raise InvalidRecordError(
                    f"corpus line {lineno}: unrecognized object")
        store._rebuild_adjacency()
        return store

    @classmethod
    def load(cls, path: str) -> "CorpusStore":
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise IoFailureError(f"cannot read corpus from {path}: {exc}") from exc
        return cls.loads(text)

    def equal_content(self, other: "CorpusStore") -> bool:
        return self.to_lines() == other.to_lines()
