"""Shared fixtures: corpus builders for unit tests and the acceptance suite.

All builders are deterministic (no clock, no RNG unless seeded by the test)
so that snapshot hashes and report bytes are reproducible.
"""

from __future__ import annotations

from pathlib import Path

import pytest

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
from litmon.store import CorpusStore
from litmon.vocab import FosField, MaterialFamily, Product, UsageContext

DATA_DIR = Path(__file__).parent / "data"


def make_store(cutoff: str | None = None) -> CorpusStore:
    return CorpusStore(year_min=1990, year_max=2026, collection_cutoff=cutoff)


def add_doc(store: CorpusStore, *, title: str, year: int | None,
            rtype: ResourceType = ResourceType.REVIEWED_PAPER,
            authors: tuple[str, ...] = (),
            institutions: tuple[str, ...] = (),
            countries: tuple[str, ...] = (),
            product: Product | None = None,
            context: UsageContext = UsageContext.ACADEMIC_RESEARCH,
            flags: dict | None = None,
            tools: tuple[str, ...] = (),
            fos: FosField | None = None,
            materials: tuple[MaterialFamily, ...] = (),
            keywords: tuple[str, ...] = (),
            abstract: str | None = None,
            doi: str | None = None,
            status: CurationStatus = CurationStatus.VALIDATED,
            short_name: str | None = None) -> str:
    """Insert one fully-wired document and return its record id."""
    author_links = []
    for position, name in enumerate(authors, start=1):
        normalized = normalize_author_name(name)
        entity = store.ensure_entity(EntityKind.AUTHOR,
                                     normalized.display_name,
                                     canonical=normalized.canonical_key)
        author_links.append(Link("", entity.entity_id, LinkType.AUTHORED_BY,
                                 ordinal=position))
    institution_links = []
    for position, name in enumerate(institutions, start=1):
        entity = store.ensure_entity(EntityKind.INSTITUTION, name)
        institution_links.append(
            Link("", entity.entity_id, LinkType.AFFILIATED_WITH,
                 ordinal=position))
    country_links = []
    for name in countries:
        entity = store.ensure_entity(EntityKind.COUNTRY, name)
        country_links.append(Link("", entity.entity_id, LinkType.LOCATED_IN))

    usage = None
    product_links = []
    if product is not None:
        usage = UsageDescriptor(
            principal_product=product,
            usage_context=context,
            coupled_tools=list(tools),
            flags=UsageFlags.from_dict(flags or {}),
        )
        entity = store.ensure_entity(EntityKind.PRODUCT, product.value)
        product_links.append(Link("", entity.entity_id,
                                  LinkType.USES_PRODUCT))
    application = None
    field_links = []
    if fos is not None or materials:
        application = ApplicationContext(fos_field=fos,
                                         material_families=list(materials))
        if fos is not None:
            entity = store.ensure_entity(EntityKind.FOS_FIELD, fos.value)
            field_links.append(Link("", entity.entity_id, LinkType.IN_FIELD))

    record = DocumentRecord(
        title=title, year=year, resource_type=rtype,
        short_name=short_name or "",
        keywords=list(keywords), abstract=abstract, doi=doi,
        author_links=author_links, institution_links=institution_links,
        country_links=country_links, product_links=product_links,
        field_links=field_links, usage=usage, application=application,
        curation_status=status,
    )
    return store.upsert_record(record)


# -- the Table 1 synthetic corpus ---------------------------------------------

TABLE1_COUNTS = {
    ResourceType.REVIEWED_PAPER: 596,
    ResourceType.CONFERENCE_PROCEEDINGS: 219,
    ResourceType.THESIS: 163,
    ResourceType.TECHNICAL_REPORT_WHITE_PAPER: 88,
    ResourceType.STANDARD_PATENT: 47,
}

_AUTHOR_POOL = [f"Author{i:02d}, A. B." for i in range(40)]
_INSTITUTION_POOL = [f"Institute {chr(ord('A') + i)}" for i in range(12)]
_COUNTRY_POOL = ["United Kingdom", "United States", "Germany", "Italy",
                 "Sweden", "Netherlands", "Spain", "France"]
_PRODUCT_CYCLE = [Product.EDUPACK, Product.EDUPACK, Product.SELECTOR,
                  Product.MI]
_FOS_CYCLE = [FosField.MATERIALS_ENGINEERING,
              FosField.MATERIALS_ENGINEERING,
              FosField.OTHER_ENGINEERING_AND_TECHNOLOGIES,
              FosField.MECHANICAL_ENGINEERING,
              FosField.EARTH_AND_RELATED_ENVIRONMENTAL_SCIENCES,
              FosField.MEDICAL_ENGINEERING,
              FosField.COMPUTER_AND_INFORMATION_SCIENCES]
_MATERIAL_CYCLE = [(MaterialFamily.METALS_AND_ALLOYS,),
                   (MaterialFamily.POLYMERS,),
                   (MaterialFamily.CERAMICS_AND_GLASSES,),
                   (MaterialFamily.COMPOSITES, MaterialFamily.POLYMERS),
                   (MaterialFamily.GENERIC,)]
_TOOL_CYCLE = ["AnsysMechanical", "SolidWorks", "Abaqus", "Comsol",
               "AnsysWorkbench"]
_KEYWORD_CYCLE = [("materials selection", "design"),
                  ("sustainability", "life cycle"),
                  ("additive manufacturing", "composites"),
                  ("education", "materials data"),
                  ("process selection", "manufacturing")]


def build_table1_store() -> CorpusStore:
    """1113 validated records with exactly the five headline type counts."""
    store = make_store(cutoff="2025-03")
    i = 0
    for rtype, count in TABLE1_COUNTS.items():
        for _ in range(count):
            year = 1990 + (i % 36)  # 1990..2025
            add_doc(
                store,
                title=f"Synthetic study {i:04d} of engineered components",
                short_name=f"syn{i:04d}",
                year=year,
                rtype=rtype,
                authors=(_AUTHOR_POOL[i % 40],
                         _AUTHOR_POOL[(i * 7 + 1) % 40]),
                institutions=(_INSTITUTION_POOL[i % 12],),
                countries=(_COUNTRY_POOL[i % 8],),
                product=_PRODUCT_CYCLE[i % 4],
                flags={"data_source": i % 4 != 3,
                       "materials_selection": i % 5 < 2,
                       "process_selection": i % 17 == 0,
                       "charts": i % 3 == 0,
                       "eco_audit": i % 10 == 0,
                       "synthesizer": i % 25 == 0},
                tools=((_TOOL_CYCLE[i % 5],) if i % 5 == 0 else ()),
                fos=_FOS_CYCLE[i % 7],
                materials=_MATERIAL_CYCLE[i % 5],
                keywords=_KEYWORD_CYCLE[i % 5],
            )
            i += 1
    return store


@pytest.fixture(scope="session")
def table1_store() -> CorpusStore:
    return build_table1_store()


def random_author_corpus(seed: int, max_docs: int = 20) -> CorpusStore:
    """Small random corpus for oracle-equivalence runs (seeded, repeatable)."""
    import random

    rng = random.Random(seed)
    store = make_store()
    pool = [f"Writer{i:02d}, W." for i in range(rng.randint(3, 8))]
    n_docs = rng.randint(1, max_docs)
    for i in range(n_docs):
        team = rng.sample(pool, rng.randint(1, min(4, len(pool))))
        add_doc(store,
                title=f"Random study {seed}-{i}",
                short_name=f"r{seed}x{i}",
                year=rng.randint(1995, 2025),
                authors=tuple(team),
                product=Product.EDUPACK)
    return store


@pytest.fixture()
def small_store() -> CorpusStore:
    """Three records over two years, enough for filter and report tests."""
    store = make_store()
    add_doc(store, title="Alpha study of beams", year=2019,
            authors=("Smith, J.",), institutions=("Institute A",),
            countries=("France",), product=Product.EDUPACK,
            flags={"data_source": True, "charts": True},
            fos=FosField.MATERIALS_ENGINEERING,
            materials=(MaterialFamily.METALS_AND_ALLOYS,),
            keywords=("materials selection",), short_name="alpha2019")
    add_doc(store, title="Beta study of plates", year=2020,
            rtype=ResourceType.THESIS,
            authors=("Smith, J.", "Novak, K."),
            institutions=("Institute B",), countries=("Germany",),
            product=Product.SELECTOR,
            flags={"materials_selection": True},
            tools=("SolidWorks",),
            fos=FosField.MECHANICAL_ENGINEERING,
            materials=(MaterialFamily.POLYMERS,),
            keywords=("design",), short_name="beta2020")
    add_doc(store, title="Gamma study of shells", year=2020,
            authors=("Novak, K.",), institutions=("Institute A",),
            countries=("France", "Germany"), product=Product.EDUPACK,
            flags={"eco_audit": True},
            fos=FosField.MATERIALS_ENGINEERING,
            materials=(MaterialFamily.COMPOSITES,),
            keywords=("sustainability",), short_name="gamma2020")
    return store
