"""Bibliometric indicators, networks, and flow aggregations.

Every operation is a pure function of a corpus snapshot and defaults to the
validated records; pass ``records`` explicitly to analyze a filtered subset.
All outputs use fixed orderings (and a deterministic clustering), so the
same snapshot always produces byte-identical reports.
"""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .clustering import greedy_modularity_clusters
from .errors import EmptyCorpusError, MissingOrdinalError, UnknownFieldError
from .model import DocumentRecord, UsageFlags
from .store import CorpusStore
from .terms import default_stopwords, record_terms


class Dimension(enum.Enum):
    RESOURCE_TYPE = "resource-type"
    COUNTRY = "country"
    INSTITUTION = "institution"
    PRODUCT = "product"
    FOS_FIELD = "fos"


class Counting(enum.Enum):
    ALL_LINKS = "all-links"
    FIRST_AUTHOR_ONLY = "first-author"


@dataclass
class YearHistogram:
    counts: dict[int, int]          # every year in range, zero-filled
    cumulative: dict[int, int]
    partial_year: int | None = None

    def total(self) -> int:
        return sum(self.counts.values())

    def to_dict(self) -> dict:
        return {"counts": {str(y): c for y, c in self.counts.items()},
                "cumulative": {str(y): c for y, c in self.cumulative.items()},
                "partial_year": self.partial_year}


@dataclass
class GraphNode:
    node_id: str
    label: str
    doc_count: int
    total_link_strength: float
    overlay_score: float | None  # mean publication year
    cluster: int | None = None

    def to_dict(self) -> dict:
        return {"id": self.node_id, "label": self.label,
                "doc_count": self.doc_count,
                "total_link_strength": self.total_link_strength,
                "overlay_score": self.overlay_score, "cluster": self.cluster}


@dataclass
class GraphEdge:
    a: str
    b: str
    weight: int

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "weight": self.weight}


@dataclass
class WeightedGraph:
    nodes: list[GraphNode] = field(default_factory=list)
    edges: list[GraphEdge] = field(default_factory=list)
    cluster_count: int = 0

    def node(self, node_id: str) -> GraphNode:
        for n in self.nodes:
            if n.node_id == node_id:
                return n
        raise KeyError(node_id)

    def components(self) -> list[list[str]]:
        """Connected components as sorted id lists, largest first."""
        neighbors: dict[str, set[str]] = {n.node_id: set() for n in self.nodes}
        for e in self.edges:
            neighbors[e.a].add(e.b)
            neighbors[e.b].add(e.a)
        seen: set[str] = set()
        parts: list[list[str]] = []
        for start in sorted(neighbors):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                node = stack.pop()
                comp.append(node)
                for nxt in neighbors[node]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            parts.append(sorted(comp))
        parts.sort(key=lambda c: (-len(c), c[0]))
        return parts

    def to_dict(self) -> dict:
        return {"nodes": [n.to_dict() for n in self.nodes],
                "edges": [e.to_dict() for e in self.edges],
                "cluster_count": self.cluster_count}


@dataclass
class Flow:
    source: str
    target: str
    value: float

    def to_dict(self) -> dict:
        return {"source": self.source, "target": self.target,
                "value": self.value}


@dataclass
class FlowSet:
    flows: list[Flow] = field(default_factory=list)
    normalized: bool = False
    skipped: int = 0

    def source_totals(self) -> dict[str, float]:
        totals: dict[str, float] = defaultdict(float)
        for f in self.flows:
            totals[f.source] += f.value
        return dict(totals)

    def to_dict(self) -> dict:
        return {"flows": [f.to_dict() for f in self.flows],
                "normalized": self.normalized, "skipped": self.skipped}


@dataclass
class TermStat:
    term: str
    count: int
    share: float  # percent of all retained term occurrences

    def to_dict(self) -> dict:
        return {"term": self.term, "count": self.count, "share": self.share}


@dataclass
class CoupledToolStats:
    counts: list[tuple[str, int]]          # descending, ties by label
    percentages: dict[str, float]          # share of all tool occurrences
    total_coupled_records: int
    total_occurrences: int

    def to_dict(self) -> dict:
        return {"counts": [{"tool": t, "count": c} for t, c in self.counts],
                "percentages": self.percentages,
                "total_coupled_records": self.total_coupled_records,
                "total_occurrences": self.total_occurrences}


@dataclass
class FieldTimeMatrix:
    years: list[int]
    fields: list[str]
    values: dict[str, dict[int, float]]    # field -> year -> percent
    yearly_totals: dict[int, int]
    partial_year: int | None = None

    def column_sum(self, year: int) -> float:
        return sum(self.values[f][year] for f in self.fields)

    def to_dict(self) -> dict:
        return {"years": self.years, "fields": self.fields,
                "values": {f: {str(y): v for y, v in by_year.items()}
                           for f, by_year in self.values.items()},
                "yearly_totals": {str(y): c
                                  for y, c in self.yearly_totals.items()},
                "partial_year": self.partial_year}


def _select(store: CorpusStore, records) -> list[DocumentRecord]:
    return store.validated_records() if records is None else list(records)


# -- temporal ----------------------------------------------------------------

def yearly_histogram(store: CorpusStore, records=None,
                     year_range: tuple[int, int] | None = None) -> YearHistogram:
    """Publication counts per year plus the cumulative curve."""
    rows = _select(store, records)
    if not rows:
        raise EmptyCorpusError("no validated records to count")
    dated = [r.year for r in rows if r.year is not None]
    if not dated:
        raise EmptyCorpusError("no record carries a publication year")
    lo, hi = (min(dated), max(dated)) if year_range is None else year_range
    counter = Counter(y for y in dated if lo <= y <= hi)
    counts = {year: counter.get(year, 0) for year in range(lo, hi + 1)}
    cumulative: dict[int, int] = {}
    running = 0
    for year in range(lo, hi + 1):
        running += counts[year]
        cumulative[year] = running
    partial = store.partial_year()
    return YearHistogram(counts=counts, cumulative=cumulative,
                         partial_year=partial if partial in counts else None)


# -- categorical distributions -------------------------------------------------

def _first_author_link(record: DocumentRecord, links) -> str:
    chosen = [l for l in links if l.ordinal == 1]
    if not chosen:
        raise MissingOrdinalError(
            f"record {record.record_id} has affiliations but no ordinal-1 "
            "(first author) link")
    return chosen[0].to_id


def distribution(store: CorpusStore, dimension: Dimension,
                 counting: Counting | None = None,
                 records=None) -> list[tuple[str, int]]:
    """Label -> document count along one dimension, descending with ties
    broken by label.

    Institution statistics use first-author counting only (one institution
    per record); country statistics default to counting all distinct linked
    countries once per record.
    """
    rows = _select(store, records)
    if dimension is Dimension.INSTITUTION:
        if counting is None:
            counting = Counting.FIRST_AUTHOR_ONLY
        if counting is not Counting.FIRST_AUTHOR_ONLY:
            raise ValueError("institution distribution requires "
                             "first-author counting")
    elif counting is None:
        counting = Counting.ALL_LINKS

    counter: Counter[str] = Counter()
    for record in rows:
        if dimension is Dimension.RESOURCE_TYPE:
            counter[record.resource_type.value] += 1
        elif dimension is Dimension.PRODUCT:
            if record.usage is not None and record.usage.principal_product:
                counter[record.usage.principal_product.value] += 1
        elif dimension is Dimension.FOS_FIELD:
            if record.application is not None and record.application.fos_field:
                counter[record.application.fos_field.value] += 1
        elif dimension is Dimension.INSTITUTION:
            if not record.institution_links:
                continue
            entity_id = _first_author_link(record, record.institution_links)
            entity = store.entities.get(entity_id)
            counter[entity.display_name if entity else entity_id] += 1
        elif dimension is Dimension.COUNTRY:
            links = record.country_links
            if not links:
                continue
            if counting is Counting.FIRST_AUTHOR_ONLY:
                targets = [_first_author_link(record, links)]
            else:
                targets = sorted({l.to_id for l in links})
            for entity_id in targets:
                entity = store.entities.get(entity_id)
                counter[entity.display_name if entity else entity_id] += 1
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))


def usage_shares(store: CorpusStore, records=None) -> dict[str, float]:
    """Percentage of records with each usage flag set, to 0.1 resolution."""
    rows = _select(store, records)
    if not rows:
        raise EmptyCorpusError("no validated records")
    total = len(rows)
    shares: dict[str, float] = {}
    for name in UsageFlags.FIELDS:
        hits = sum(1 for r in rows
                   if r.usage is not None and getattr(r.usage.flags, name))
        shares[name] = round(hits / total * 100, 1)
    return shares


# -- co-authorship network -----------------------------------------------------

def coauthorship_graph(store: CorpusStore, min_docs: int = 3,
                       records=None, with_clusters: bool = True
                       ) -> WeightedGraph:
    """Collaboration network of authors with at least ``min_docs`` documents.

    Edge weight is the number of distinct documents a pair co-authored
    (both endpoints must pass the threshold); a node's overlay score is the
    mean publication year of its documents.
    """
    rows = _select(store, records)
    docs_by_author: dict[str, set[str]] = defaultdict(set)
    years_by_author: dict[str, list[int]] = defaultdict(list)
    for record in rows:
        seen: set[str] = set()
        for link in record.author_links:
            if link.to_id in seen:
                continue
            seen.add(link.to_id)
            docs_by_author[link.to_id].add(record.record_id)
            if record.year is not None:
                years_by_author[link.to_id].append(record.year)

    eligible = {a for a, docs in docs_by_author.items()
                if len(docs) >= min_docs}
    weights: Counter[tuple[str, str]] = Counter()
    for record in rows:
        authors = sorted({l.to_id for l in record.author_links} & eligible)
        for a, b in combinations(authors, 2):
            weights[(a, b)] += 1

    strength: dict[str, float] = defaultdict(float)
    for (a, b), w in weights.items():
        strength[a] += w
        strength[b] += w

    nodes = []
    for author in sorted(eligible):
        entity = store.entities.get(author)
        years = years_by_author.get(author, [])
        nodes.append(GraphNode(
            node_id=author,
            label=entity.display_name if entity else author,
            doc_count=len(docs_by_author[author]),
            total_link_strength=strength.get(author, 0.0),
            overlay_score=sum(years) / len(years) if years else None,
        ))
    edges = [GraphEdge(a=a, b=b, weight=w)
             for (a, b), w in sorted(weights.items())]
    graph = WeightedGraph(nodes=nodes, edges=edges)
    if with_clusters and nodes:
        assignment = greedy_modularity_clusters(
            [n.node_id for n in nodes],
            {(e.a, e.b): float(e.weight) for e in edges})
        for node in graph.nodes:
            node.cluster = assignment[node.node_id]
        graph.cluster_count = max(assignment.values())
    return graph


# -- text statistics ------------------------------------------------------------

def term_frequencies(store: CorpusStore, records=None,
                     stopwords: frozenset[str] | None = None
                     ) -> list[TermStat]:
    """Occurrence counts and shares over titles and keywords.

    Keyword phrases count as single terms; titles contribute unigrams and
    adjacent bigrams after stop-word removal.
    """
    rows = _select(store, records)
    stops = stopwords if stopwords is not None else default_stopwords()
    occurrences: Counter[str] = Counter()
    for record in rows:
        occurrences.update(record_terms(record, stops))
    total = sum(occurrences.values())
    if total == 0:
        return []
    return [TermStat(term=t, count=c, share=c / total * 100)
            for t, c in sorted(occurrences.items(),
                               key=lambda kv: (-kv[1], kv[0]))]


def term_cooccurrence(store: CorpusStore, min_occurrence: int = 5,
                      records=None,
                      stopwords: frozenset[str] | None = None
                      ) -> WeightedGraph:
    """Term map over keywords, titles, and abstracts with modularity
    clusters. A term counts once per document; an edge weight is the number
    of documents in which both terms appear."""
    if min_occurrence < 1:
        raise ValueError("min_occurrence must be >= 1")
    rows = _select(store, records)
    stops = stopwords if stopwords is not None else default_stopwords()
    doc_terms: list[tuple[DocumentRecord, set[str]]] = []
    doc_freq: Counter[str] = Counter()
    for record in rows:
        uniq = set(record_terms(record, stops, include_abstract=True))
        doc_terms.append((record, uniq))
        doc_freq.update(uniq)

    kept = {t for t, c in doc_freq.items() if c >= min_occurrence}
    weights: Counter[tuple[str, str]] = Counter()
    years: dict[str, list[int]] = defaultdict(list)
    for record, uniq in doc_terms:
        present = sorted(uniq & kept)
        for term in present:
            if record.year is not None:
                years[term].append(record.year)
        for a, b in combinations(present, 2):
            weights[(a, b)] += 1

    strength: dict[str, float] = defaultdict(float)
    for (a, b), w in weights.items():
        strength[a] += w
        strength[b] += w

    nodes = [GraphNode(node_id=term, label=term, doc_count=doc_freq[term],
                       total_link_strength=strength.get(term, 0.0),
                       overlay_score=(sum(years[term]) / len(years[term])
                                      if years.get(term) else None))
             for term in sorted(kept)]
    edges = [GraphEdge(a=a, b=b, weight=w)
             for (a, b), w in sorted(weights.items())]
    graph = WeightedGraph(nodes=nodes, edges=edges)
    if nodes:
        assignment = greedy_modularity_clusters(
            [n.node_id for n in nodes],
            {(e.a, e.b): float(e.weight) for e in edges})
        for node in graph.nodes:
            node.cluster = assignment[node.node_id]
        graph.cluster_count = max(assignment.values())
    return graph


# -- flows ------------------------------------------------------------------------

_FLOW_DIMENSIONS = ("fos", "product", "material", "type", "segment", "context")


def _flow_values(record: DocumentRecord, dim: str) -> list[str]:
    if dim == "fos":
        if record.application is not None and record.application.fos_field:
            return [record.application.fos_field.value]
        return []
    if dim == "product":
        if record.usage is not None and record.usage.principal_product:
            return [record.usage.principal_product.value]
        return []
    if dim == "material":
        if record.application is not None:
            return [m.value for m in record.application.material_families]
        return []
    if dim == "type":
        return [record.resource_type.value]
    if dim == "segment":
        if record.application is not None:
            return [record.application.research_segment.value]
        return []
    if dim == "context":
        if record.usage is not None:
            return [record.usage.usage_context.value]
        return []
    raise UnknownFieldError(
        f"unknown flow dimension {dim!r}; supported: "
        + ", ".join(_FLOW_DIMENSIONS))


def sankey_flows(store: CorpusStore, source_dim: str, target_dim: str,
                 normalized: bool = False, records=None) -> FlowSet:
    """Source->target document flows.

    Single-valued dimensions contribute one pair per record; multi-valued
    ones (material families) one pair per value. Records missing either
    side are skipped and counted. Normalization rescales each source's
    outgoing flows to percentages summing to 100.
    """
    rows = _select(store, records)
    counts: Counter[tuple[str, str]] = Counter()
    skipped = 0
    for record in rows:
        sources = _flow_values(record, source_dim)
        targets = _flow_values(record, target_dim)
        if not sources or not targets:
            skipped += 1
            continue
        for s in sources:
            for t in targets:
                counts[(s, t)] += 1
    flows = [Flow(source=s, target=t, value=float(c))
             for (s, t), c in sorted(counts.items())]
    if normalized:
        totals: dict[str, float] = defaultdict(float)
        for f in flows:
            totals[f.source] += f.value
        flows = [Flow(source=f.source, target=f.target,
                      value=f.value / totals[f.source] * 100)
                 for f in flows]
    return FlowSet(flows=flows, normalized=normalized, skipped=skipped)


def coupled_tool_distribution(store: CorpusStore, records=None
                              ) -> CoupledToolStats:
    """How often each external CAD/CAE/FEM tool is reported alongside the
    software. A record counts once per distinct tool; percentages are
    shares of all tool occurrences."""
    rows = _select(store, records)
    occurrences: Counter[str] = Counter()
    coupled_records = 0
    for record in rows:
        if record.usage is None or not record.usage.coupled_tools:
            continue
        coupled_records += 1
        for tool in sorted(set(record.usage.coupled_tools)):
            occurrences[tool] += 1
    total = sum(occurrences.values())
    counts = sorted(occurrences.items(), key=lambda kv: (-kv[1], kv[0]))
    percentages = {tool: round(count / total * 100, 1)
                   for tool, count in counts} if total else {}
    return CoupledToolStats(counts=counts, percentages=percentages,
                            total_coupled_records=coupled_records,
                            total_occurrences=total)


def field_time_matrix(store: CorpusStore,
                      year_range: tuple[int, int] = (2015, 2025),
                      records=None) -> FieldTimeMatrix:
    """Relative field mix per year: every non-empty year column sums to 100
    percent over the fields observed in the whole window."""
    rows = _select(store, records)
    lo, hi = year_range
    years = list(range(lo, hi + 1))
    counts: dict[str, Counter[int]] = defaultdict(Counter)
    totals: Counter[int] = Counter()
    for record in rows:
        if record.year is None or not (lo <= record.year <= hi):
            continue
        if record.application is None or record.application.fos_field is None:
            continue
        label = record.application.fos_field.value
        counts[label][record.year] += 1
        totals[record.year] += 1
    fields = sorted(counts)
    values = {
        f: {y: (counts[f][y] / totals[y] * 100 if totals[y] else 0.0)
            for y in years}
        for f in fields
    }
    partial = store.partial_year()
    return FieldTimeMatrix(years=years, fields=fields, values=values,
                           yearly_totals={y: totals.get(y, 0) for y in years},
                           partial_year=partial if partial in years else None)
