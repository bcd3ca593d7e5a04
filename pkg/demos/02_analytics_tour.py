"""Tour of the bibliometric indicators on a synthetic validated corpus.

Builds ~60 records with authors, products, fields, materials, and coupled
tools, then walks through every analytic: yearly histogram, categorical
distributions, usage shares, the co-authorship network, term statistics,
the term co-occurrence map with clusters, Sankey flows (plain and
normalized), the coupled-tool distribution, and the field-vs-time matrix.

Run:  python demos/02_analytics_tour.py
"""

from litmon import (
    CorpusStore,
    Counting,
    Dimension,
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
from litmon.model import (
    ApplicationContext,
    CurationStatus,
    DocumentRecord,
    EntityKind,
    Link,
    LinkType,
    ResourceType,
    UsageDescriptor,
    UsageFlags,
)
from litmon.names import normalize_author_name
from litmon.vocab import FosField, MaterialFamily, Product

# -- build a small but busy corpus ------------------------------------------

store = CorpusStore(year_min=1990, year_max=2026,
                    collection_cutoff="2025-03")

TEAMS = [("Novak, J.", "Silva, M."), ("Novak, J.", "Okafor, C."),
         ("Silva, M.", "Okafor, C."), ("Novak, J.",), ("Larsen, P.",)]
PRODUCTS = [Product.EDUPACK, Product.EDUPACK, Product.SELECTOR, Product.MI]
FIELDS = [FosField.MATERIALS_ENGINEERING, FosField.MECHANICAL_ENGINEERING,
          FosField.OTHER_ENGINEERING_AND_TECHNOLOGIES,
          FosField.MEDICAL_ENGINEERING]
MATERIALS = [(MaterialFamily.METALS_AND_ALLOYS,),
             (MaterialFamily.POLYMERS,),
             (MaterialFamily.COMPOSITES, MaterialFamily.POLYMERS)]
KEYWORDS = [("materials selection", "design"),
            ("sustainability", "life cycle"),
            ("additive manufacturing", "composites")]
TOOLS = [(), ("AnsysMechanical",), (), ("SolidWorks", "Abaqus"), ()]

for i in range(60):
    authors = TEAMS[i % len(TEAMS)]
    author_links = []
    for position, name in enumerate(authors, start=1):
        normalized = normalize_author_name(name)
        entity = store.ensure_entity(EntityKind.AUTHOR,
                                     normalized.display_name,
                                     canonical=normalized.canonical_key)
        author_links.append(Link("", entity.entity_id,
                                 LinkType.AUTHORED_BY, ordinal=position))
    inst = store.ensure_entity(EntityKind.INSTITUTION,
                               f"Institute {i % 4}")
    country = store.ensure_entity(EntityKind.COUNTRY,
                                  ["France", "Germany", "Italy"][i % 3])
    store.upsert_record(DocumentRecord(
        title=f"Case {i:02d}: component selection study",
        short_name=f"case{i:02d}",
        year=2012 + (i % 14),
        resource_type=list(ResourceType)[i % 5],
        keywords=list(KEYWORDS[i % 3]),
        author_links=author_links,
        institution_links=[Link("", inst.entity_id,
                                LinkType.AFFILIATED_WITH, ordinal=1)],
        country_links=[Link("", country.entity_id, LinkType.LOCATED_IN)],
        usage=UsageDescriptor(
            principal_product=PRODUCTS[i % 4],
            coupled_tools=list(TOOLS[i % 5]),
            flags=UsageFlags(data_source=i % 4 != 0,
                             materials_selection=i % 5 < 2,
                             charts=i % 3 == 0,
                             eco_audit=i % 10 == 0)),
        application=ApplicationContext(fos_field=FIELDS[i % 4],
                                       material_families=list(
                                           MATERIALS[i % 3])),
        curation_status=CurationStatus.VALIDATED,
    ))

print(f"corpus: {len(store.documents)} validated records, "
      f"{len(store.entities)} entities\n")

# -- temporal -----------------------------------------------------------------

hist = yearly_histogram(store)
peak = max(hist.counts, key=hist.counts.get)
print(f"yearly histogram {min(hist.counts)}..{max(hist.counts)}, "
      f"peak {peak} with {hist.counts[peak]} records, "
      f"cumulative end {hist.cumulative[max(hist.counts)]}")

# -- distributions ---------------------------------------------------------------

for dim in (Dimension.RESOURCE_TYPE, Dimension.PRODUCT, Dimension.COUNTRY):
    rows = distribution(store, dim)
    print(f"distribution by {dim.value}: {rows}")
rows = distribution(store, Dimension.INSTITUTION,
                    Counting.FIRST_AUTHOR_ONLY)
print(f"institutions (first-author counting): {rows}")

# -- usage shares -------------------------------------------------------------------

print(f"\nusage shares (% of validated records): {usage_shares(store)}")

# -- co-authorship network -------------------------------------------------------------

graph = coauthorship_graph(store, min_docs=3)
print(f"\nco-authorship network (min 3 docs): {len(graph.nodes)} authors, "
      f"{len(graph.edges)} edges, {len(graph.components())} component(s)")
for node in graph.nodes:
    print(f"  {node.label:14} docs={node.doc_count:2} "
          f"strength={node.total_link_strength:4.0f} "
          f"mean_year={node.overlay_score:.1f} cluster={node.cluster}")

# -- terms ---------------------------------------------------------------------------

stats = term_frequencies(store)[:5]
print("\ntop terms (share of retained occurrences):")
for stat in stats:
    print(f"  {stat.term:24} count={stat.count:3} share={stat.share:.2f}%")

term_map = term_cooccurrence(store, min_occurrence=5)
print(f"term co-occurrence map: {len(term_map.nodes)} terms in "
      f"{term_map.cluster_count} clusters")

# -- flows ----------------------------------------------------------------------------

flows = sankey_flows(store, "fos", "product")
print(f"\nfield->product flows (document counts): "
      f"{[(f.source, f.target, f.value) for f in flows.flows[:4]]} ...")
normalized = sankey_flows(store, "material", "product", normalized=True)
print("material->product flows, normalized per source "
      "(each source sums to 100):")
for flow in normalized.flows:
    print(f"  {flow.source:16} -> {flow.target:8} {flow.value:6.2f}%")

# -- coupled tools ------------------------------------------------------------------------

coupled = coupled_tool_distribution(store)
print(f"\ncoupled tools: {coupled.total_coupled_records} records report "
      f"coupling; occurrence shares: {coupled.percentages}")

# -- field vs time ----------------------------------------------------------------------------

matrix = field_time_matrix(store, year_range=(2015, 2025))
print(f"\nfield-vs-time matrix {matrix.years[0]}..{matrix.years[-1]}, "
      f"fields={matrix.fields}")
print(f"2020 column: "
      f"{ {f: round(matrix.values[f][2020], 1) for f in matrix.fields} } "
      f"(sums to {matrix.column_sum(2020):.0f})")
if matrix.partial_year:
    print(f"note: {matrix.partial_year} is a partial collection year")
