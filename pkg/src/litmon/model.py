"""Typed corpus data model: document records, curated usage descriptors,
entity records, and the typed links connecting them.

Every type serializes to a flat JSON-compatible dict (``to_dict``) and back
(``from_dict``); the line-delimited corpus file is built from these dicts.
Document→entity links are stored inline on the document, with the link type
implied by the field name; ``Link`` objects carry the explicit form used by
the store's bidirectional index.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .errors import InvalidEnumValueError
from .vocab import (
    FosField,
    MaterialFamily,
    Product,
    ResearchSegment,
    ScopeDepth,
    UsageContext,
)


class ResourceType(enum.Enum):
    REVIEWED_PAPER = "ReviewedPaper"
    CONFERENCE_PROCEEDINGS = "ConferenceProceedings"
    THESIS = "Thesis"
    TECHNICAL_REPORT_WHITE_PAPER = "TechnicalReportWhitePaper"
    STANDARD_PATENT = "StandardPatent"


class CurationStatus(enum.Enum):
    INGESTED = "Ingested"
    ANNOTATED = "Annotated"
    VALIDATED = "Validated"
    EXCLUDED = "Excluded"


class EntityKind(enum.Enum):
    AUTHOR = "Author"
    INSTITUTION = "Institution"
    COUNTRY = "Country"
    PRODUCT = "Product"
    FOS_FIELD = "FosField"


class LinkType(enum.Enum):
    AUTHORED_BY = "AuthoredBy"
    AFFILIATED_WITH = "AffiliatedWith"
    LOCATED_IN = "LocatedIn"
    USES_PRODUCT = "UsesProduct"
    IN_FIELD = "InField"


class Severity(enum.Enum):
    ERROR = "Error"
    WARNING = "Warning"
    INFO = "Info"


class RawSource(enum.Enum):
    BIBTEX = "BibTeX"
    RIS = "RIS"
    DOI_SERVICE = "DoiService"
    MANUAL = "Manual"


def coerce_enum(cls: type, value: Any, field_name: str):
    """Parse an enum from its serialized value; None passes through."""
    if value is None or isinstance(value, cls):
        return value
    try:
        return cls(value)
    except ValueError:
        raise InvalidEnumValueError(
            f"{field_name}: {value!r} is not one of "
            f"{[m.value for m in cls]}"
        ) from None


@dataclass(frozen=True)
class Link:
    from_id: str
    to_id: str
    link_type: LinkType
    ordinal: int | None = None

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"from": self.from_id, "to": self.to_id,
                             "type": self.link_type.value}
        if self.ordinal is not None:
            d["ordinal"] = self.ordinal
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Link":
        return cls(
            from_id=d["from"],
            to_id=d["to"],
            link_type=coerce_enum(LinkType, d["type"], "link_type"),
            ordinal=d.get("ordinal"),
        )


# Inline link fields on a document and the link type each one implies.
DOCUMENT_LINK_FIELDS = {
    "author_links": LinkType.AUTHORED_BY,
    "institution_links": LinkType.AFFILIATED_WITH,
    "country_links": LinkType.LOCATED_IN,
    "product_links": LinkType.USES_PRODUCT,
    "field_links": LinkType.IN_FIELD,
}


@dataclass
class UsageFlags:
    data_source: bool = False
    materials_selection: bool = False
    process_selection: bool = False
    charts: bool = False
    eco_audit: bool = False
    synthesizer: bool = False

    FIELDS = ("data_source", "materials_selection", "process_selection",
              "charts", "eco_audit", "synthesizer")

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.FIELDS}

    @classmethod
    def from_dict(cls, d: dict) -> "UsageFlags":
        return cls(**{name: bool(d.get(name, False)) for name in cls.FIELDS})


@dataclass
class UsageDescriptor:
    """How the software shows up in the work: principal product, context,
    coupled external tools, and functional usage flags."""

    principal_product: Product
    product_version: str | None = None
    sub_products: list[str] = field(default_factory=list)
    usage_context: UsageContext = UsageContext.ACADEMIC_RESEARCH
    coupled_tools: list[str] = field(default_factory=list)
    # Raw labels that fell outside the tool vocabulary and mapped to Other.
    other_tool_labels: list[str] = field(default_factory=list)
    flags: UsageFlags = field(default_factory=UsageFlags)

    def to_dict(self) -> dict:
        return {
            "principal_product": self.principal_product.value,
            "product_version": self.product_version,
            "sub_products": list(self.sub_products),
            "usage_context": self.usage_context.value,
            "coupled_tools": list(self.coupled_tools),
            "other_tool_labels": list(self.other_tool_labels),
            "flags": self.flags.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UsageDescriptor":
        return cls(
            principal_product=coerce_enum(Product, d["principal_product"],
                                          "principal_product"),
            product_version=d.get("product_version"),
            sub_products=list(d.get("sub_products", [])),
            usage_context=coerce_enum(UsageContext,
                                      d.get("usage_context", "AcademicResearch"),
                                      "usage_context"),
            coupled_tools=list(d.get("coupled_tools", [])),
            other_tool_labels=list(d.get("other_tool_labels", [])),
            flags=UsageFlags.from_dict(d.get("flags", {})),
        )


@dataclass
class ApplicationContext:
    """What the document is technically about: research field, segment,
    material and process families, and curated scope."""

    raw_field_labels: list[str] = field(default_factory=list)
    fos_field: FosField | None = None
    research_segment: ResearchSegment = ResearchSegment.ACADEMIA
    material_families: list[MaterialFamily] = field(default_factory=list)
    process_families: list[str] = field(default_factory=list)
    scope_depth: ScopeDepth = ScopeDepth.MEDIUM
    notes: str | None = None

    def to_dict(self) -> dict:
        return {
            "raw_field_labels": list(self.raw_field_labels),
            "fos_field": self.fos_field.value if self.fos_field else None,
            "research_segment": self.research_segment.value,
            "material_families": [m.value for m in self.material_families],
            "process_families": list(self.process_families),
            "scope_depth": self.scope_depth.value,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ApplicationContext":
        return cls(
            raw_field_labels=list(d.get("raw_field_labels", [])),
            fos_field=coerce_enum(FosField, d.get("fos_field"), "fos_field"),
            research_segment=coerce_enum(ResearchSegment,
                                         d.get("research_segment", "Academia"),
                                         "research_segment"),
            material_families=[coerce_enum(MaterialFamily, m, "material_families")
                               for m in d.get("material_families", [])],
            process_families=list(d.get("process_families", [])),
            scope_depth=coerce_enum(ScopeDepth, d.get("scope_depth", "Medium"),
                                    "scope_depth"),
            notes=d.get("notes"),
        )


@dataclass
class AuditEntry:
    curator: str
    timestamp: str  # ISO 8601, UTC
    action: str

    def to_dict(self) -> dict:
        return {"curator": self.curator, "timestamp": self.timestamp,
                "action": self.action}

    @classmethod
    def from_dict(cls, d: dict) -> "AuditEntry":
        return cls(curator=d["curator"], timestamp=d["timestamp"],
                   action=d.get("action", "annotate"))


@dataclass
class DocumentRecord:
    """One publication with intrinsic bibliographic fields, curated extrinsic
    descriptors, and typed links into the entity tables."""

    title: str
    year: int | None
    resource_type: ResourceType
    record_id: str = ""
    short_name: str = ""
    venue: str = ""
    volume: str | None = None
    issue: str | None = None
    publisher: str | None = None
    abstract: str | None = None
    keywords: list[str] = field(default_factory=list)
    language: str = "en"
    doi: str | None = None
    url: str | None = None
    local_path: str | None = None
    cited_references: list[str] = field(default_factory=list)
    author_links: list[Link] = field(default_factory=list)
    institution_links: list[Link] = field(default_factory=list)
    country_links: list[Link] = field(default_factory=list)
    product_links: list[Link] = field(default_factory=list)
    field_links: list[Link] = field(default_factory=list)
    usage: UsageDescriptor | None = None
    application: ApplicationContext | None = None
    curation_status: CurationStatus = CurationStatus.INGESTED
    audit_log: list[AuditEntry] = field(default_factory=list)

    def links(self) -> list[Link]:
        """All outgoing links, in field order."""
        out: list[Link] = []
        for name in DOCUMENT_LINK_FIELDS:
            out.extend(getattr(self, name))
        return out

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "record_id": self.record_id,
            "short_name": self.short_name,
            "title": self.title,
            "year": self.year,
            "resource_type": self.resource_type.value,
            "venue": self.venue,
            "volume": self.volume,
            "issue": self.issue,
            "publisher": self.publisher,
            "abstract": self.abstract,
            "keywords": list(self.keywords),
            "language": self.language,
            "doi": self.doi,
            "url": self.url,
            "local_path": self.local_path,
            "cited_references": list(self.cited_references),
            "usage": self.usage.to_dict() if self.usage else None,
            "application": self.application.to_dict() if self.application else None,
            "curation_status": self.curation_status.value,
            "audit_log": [a.to_dict() for a in self.audit_log],
        }
        for name in DOCUMENT_LINK_FIELDS:
            compact = []
            for link in getattr(self, name):
                entry: dict[str, Any] = {"to": link.to_id}
                if link.ordinal is not None:
                    entry["ordinal"] = link.ordinal
                compact.append(entry)
            d[name] = compact
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DocumentRecord":
        record_id = d.get("record_id", "")
        rec = cls(
            record_id=record_id,
            short_name=d.get("short_name", ""),
            title=d.get("title", ""),
            year=d.get("year"),
            resource_type=coerce_enum(ResourceType, d["resource_type"],
                                      "resource_type"),
            venue=d.get("venue", ""),
            volume=d.get("volume"),
            issue=d.get("issue"),
            publisher=d.get("publisher"),
            abstract=d.get("abstract"),
            keywords=list(d.get("keywords", [])),
            language=d.get("language", "en"),
            doi=d.get("doi"),
            url=d.get("url"),
            local_path=d.get("local_path"),
            cited_references=list(d.get("cited_references", [])),
            usage=UsageDescriptor.from_dict(d["usage"]) if d.get("usage") else None,
            application=(ApplicationContext.from_dict(d["application"])
                         if d.get("application") else None),
            curation_status=coerce_enum(CurationStatus,
                                        d.get("curation_status", "Ingested"),
                                        "curation_status"),
            audit_log=[AuditEntry.from_dict(a) for a in d.get("audit_log", [])],
        )
        for name, link_type in DOCUMENT_LINK_FIELDS.items():
            links = [Link(from_id=record_id, to_id=e["to"], link_type=link_type,
                          ordinal=e.get("ordinal"))
                     for e in d.get(name, [])]
            setattr(rec, name, links)
        return rec


@dataclass
class EntityRecord:
    entity_id: str
    kind: EntityKind
    display_name: str
    canonical_key: str
    attributes: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "entity_id": self.entity_id,
            "kind": self.kind.value,
            "display_name": self.display_name,
            "canonical_key": self.canonical_key,
            "attributes": dict(self.attributes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EntityRecord":
        return cls(
            entity_id=d["entity_id"],
            kind=coerce_enum(EntityKind, d["kind"], "kind"),
            display_name=d["display_name"],
            canonical_key=d["canonical_key"],
            attributes=dict(d.get("attributes", {})),
        )


# The closed set of consistency-check codes quality_check may emit.
ISSUE_CODES = (
    "MissingYear",
    "MissingTitle",
    "MissingAuthors",
    "MissingUsage",
    "MissingProduct",
    "DanglingLink",
    "DuplicateCanonicalKey",
    "YearOutOfBounds",
    "UnmappedFosLabel",
    "PartialYearCoverage",
)


@dataclass(frozen=True)
class ValidationIssue:
    record_id: str
    severity: Severity
    code: str
    message: str

    def to_dict(self) -> dict:
        return {"record_id": self.record_id, "severity": self.severity.value,
                "code": self.code, "message": self.message}

    def sort_key(self) -> tuple:
        return (self.record_id, self.severity.value, self.code, self.message)


@dataclass
class IntrinsicRecord:
    """Bibliographic metadata as parsed from a citation file or the DOI
    service, before it becomes a stored document. Raw fields are preserved
    as found; normalization happens downstream."""

    title: str = ""
    year: int | None = None
    resource_type_hint: ResourceType | None = None
    venue: str = ""
    volume: str | None = None
    issue: str | None = None
    publisher: str | None = None
    abstract: str | None = None
    keywords: list[str] = field(default_factory=list)
    language: str = "en"
    doi: str | None = None
    url: str | None = None
    authors: list[str] = field(default_factory=list)
    affiliations: list[str] = field(default_factory=list)
    raw_source: RawSource = RawSource.MANUAL

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "year": self.year,
            "resource_type_hint": (self.resource_type_hint.value
                                   if self.resource_type_hint else None),
            "venue": self.venue,
            "volume": self.volume,
            "issue": self.issue,
            "publisher": self.publisher,
            "abstract": self.abstract,
            "keywords": list(self.keywords),
            "language": self.language,
            "doi": self.doi,
            "url": self.url,
            "authors": list(self.authors),
            "affiliations": list(self.affiliations),
            "raw_source": self.raw_source.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IntrinsicRecord":
        return cls(
            title=d.get("title", ""),
            year=d.get("year"),
            resource_type_hint=coerce_enum(ResourceType,
                                           d.get("resource_type_hint"),
                                           "resource_type_hint"),
            venue=d.get("venue", ""),
            volume=d.get("volume"),
            issue=d.get("issue"),
            publisher=d.get("publisher"),
            abstract=d.get("abstract"),
            keywords=list(d.get("keywords", [])),
            language=d.get("language", "en"),
            doi=d.get("doi"),
            url=d.get("url"),
            authors=list(d.get("authors", [])),
            affiliations=list(d.get("affiliations", [])),
            raw_source=coerce_enum(RawSource, d.get("raw_source", "Manual"),
                                   "raw_source"),
        )


@dataclass(frozen=True)
class ParseIssue:
    """Positioned problem found while reading a citation file or service
    response. Parsers report these instead of aborting the whole input."""

    line: int | None
    code: str  # "SyntaxError" | "MissingTerminator" | "Warning"
    message: str

    def to_dict(self) -> dict:
        return {"line": self.line, "code": self.code, "message": self.message}


class MatchKind(enum.Enum):
    DOI_EXACT = "DoiExact"
    TITLE_FUZZY = "TitleFuzzy"


@dataclass
class DuplicateCluster:
    member_ids: list[str]
    match_kind: MatchKind
    score: float

    def to_dict(self) -> dict:
        return {"member_ids": list(self.member_ids),
                "match_kind": self.match_kind.value,
                "score": self.score}
