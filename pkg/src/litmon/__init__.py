"""litmon: software-centric literature monitoring.

A curated corpus store for publications with typed links to authors,
institutions, countries, products, and research fields; citation-file and
DOI ingest; an operational-use curation layer; and the bibliometric
analytics built on top (temporal and categorical distributions, usage
shares, co-authorship and term networks, flow diagrams).
"""

from .analytics import (
    Counting,
    Dimension,
    FlowSet,
    TermStat,
    WeightedGraph,
    coauthorship_graph,
    coupled_tool_distribution,
    distribution,
    field_time_matrix,
    sankey_flows,
    term_cooccurrence,
    term_frequencies,
    usage_shares,
    yearly_histogram,
)
from .bibtex import parse_bibtex
from .curation import (
    InclusionDecision,
    apply_annotation,
    inclusion_gate,
    map_fos,
    quality_check,
    validate_record,
)
from .dedupe import dedupe_corpus
from .ingest import add_intrinsic, document_from_intrinsic
from .metadata import FixtureMetadataClient, HttpMetadataClient, resolve_doi
from .model import (
    ApplicationContext,
    CurationStatus,
    DocumentRecord,
    EntityKind,
    EntityRecord,
    IntrinsicRecord,
    Link,
    LinkType,
    ResourceType,
    UsageDescriptor,
    UsageFlags,
    ValidationIssue,
)
from .names import normalize_author_name
from .ris import parse_ris
from .store import CorpusStore
from .vocab import FosField, MaterialFamily, Product, UsageContext

__version__ = "0.1.0"

__all__ = [
    "ApplicationContext", "Counting", "CorpusStore", "CurationStatus",
    "Dimension", "DocumentRecord", "EntityKind", "EntityRecord",
    "FixtureMetadataClient", "FlowSet", "FosField", "HttpMetadataClient",
    "InclusionDecision", "IntrinsicRecord", "Link", "LinkType",
    "MaterialFamily", "Product", "ResourceType", "TermStat",
    "UsageContext", "UsageDescriptor", "UsageFlags", "ValidationIssue",
    "WeightedGraph", "add_intrinsic", "apply_annotation",
    "coauthorship_graph", "coupled_tool_distribution", "dedupe_corpus",
    "distribution", "document_from_intrinsic", "field_time_matrix",
    "inclusion_gate", "map_fos", "normalize_author_name", "parse_bibtex",
    "parse_ris", "quality_check", "resolve_doi", "sankey_flows",
    "term_cooccurrence", "term_frequencies", "usage_shares",
    "validate_record", "yearly_histogram",
]
