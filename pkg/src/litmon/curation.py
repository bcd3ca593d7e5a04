"""Curation layer: the operational-use inclusion gate, controlled-vocabulary
annotation, research-field mapping, and automated consistency checks.

The gate works purely from curator-entered usage flags, never from text
mining; a record is retained only when at least one operational-use
criterion is satisfied, and excluded records stay in the store under the
Excluded status so the decision is auditable.
"""

from __future__ import annotations

import datetime as _dt
import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

from .errors import InvalidEnumValueError, VocabularyViolationError
from .model import (
    ApplicationContext,
    AuditEntry,
    CurationStatus,
    DocumentRecord,
    EntityKind,
    Link,
    LinkType,
    Severity,
    UsageDescriptor,
    UsageFlags,
    ValidationIssue,
    coerce_enum,
)
from .store import CorpusStore
from .textutil import collapse_ws, slugify
from .vocab import (
    FosField,
    MaterialFamily,
    ResearchSegment,
    ScopeDepth,
    UsageContext,
    resolve_coupled_tool,
    resolve_product,
)


class Verdict(enum.Enum):
    INCLUDE = "Include"
    EXCLUDE = "Exclude"


# The four operational-use criteria a publication can satisfy.
CRITERIA = ("DataAccess", "SelectionWorkflow", "ChartsTradeoffs",
            "WorkflowIntegration")


@dataclass
class InclusionDecision:
    record_id: str
    verdict: Verdict
    satisfied_criteria: list[str] = field(default_factory=list)
    reason: str = ""

    def to_dict(self) -> dict:
        return {"record_id": self.record_id, "verdict": self.verdict.value,
                "satisfied_criteria": list(self.satisfied_criteria),
                "reason": self.reason}


def criteria_for(usage: UsageDescriptor | None) -> list[str]:
    """Map usage flags onto the operational-use criteria."""
    if usage is None:
        return []
    flags = usage.flags
    satisfied = []
    if flags.data_source:
        satisfied.append("DataAccess")
    if flags.materials_selection or flags.process_selection:
        satisfied.append("SelectionWorkflow")
    # Eco Audit and Synthesizer runs are comparative/trade-off analyses.
    if flags.charts or flags.eco_audit or flags.synthesizer:
        satisfied.append("ChartsTradeoffs")
    if usage.coupled_tools:
        satisfied.append("WorkflowIntegration")
    return satisfied


def inclusion_gate(store: CorpusStore, record_id: str,
                   usage: UsageDescriptor | None = None,
                   apply: bool = True) -> InclusionDecision:
    """Decide inclusion for one record and (by default) apply the verdict.

    Uses the supplied annotation, falling back to the one stored on the
    record. Excluded records keep their data and stay queryable.
    """
    record = store.get_record(record_id)
    annotation = usage if usage is not None else record.usage
    satisfied = criteria_for(annotation)
    if satisfied:
        decision = InclusionDecision(record_id=record_id,
                                     verdict=Verdict.INCLUDE,
                                     satisfied_criteria=satisfied,
                                     reason="operational use: "
                                            + ", ".join(satisfied))
    else:
        decision = InclusionDecision(record_id=record_id,
                                     verdict=Verdict.EXCLUDE,
                                     reason="MentionOnly")
    if apply:
        if decision.verdict is Verdict.EXCLUDE:
            if record.curation_status is not CurationStatus.EXCLUDED:
                store.set_status(record_id, CurationStatus.EXCLUDED)
        elif record.curation_status is CurationStatus.EXCLUDED:
            store.set_status(record_id, CurationStatus.ANNOTATED)
    return decision


# -- FOS mapping -------------------------------------------------------------

@dataclass
class FosMapping:
    raw_label: str
    fos_field: FosField | None
    provenance: str | None  # "TableLookup" | "ManualOverride" | None


def _norm_label(label: str) -> str:
    return collapse_ws(label).lower()


def load_fos_table(path: str | Path | None = None) -> dict[str, FosField]:
    """Load the raw-label -> FOS category table (tab-separated, '#' comments).

    The bundled default covers the labels observed in this corpus class and
    is meant to be copied and extended per deployment.
    """
    if path is None:
        text = (resources.files("litmon.data") / "fos_mapping.tsv"
                ).read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    table: dict[str, FosField] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            raw, code = line.split("\t")
            table[_norm_label(raw)] = FosField(code.strip())
        except ValueError:
            raise VocabularyViolationError(
                f"fos mapping line {lineno}: expected 'label<TAB>FosCode', "
                f"got {line!r}") from None
    return table


_DEFAULT_FOS_TABLE: dict[str, FosField] | None = None


def default_fos_table() -> dict[str, FosField]:
    global _DEFAULT_FOS_TABLE
    if _DEFAULT_FOS_TABLE is None:
        _DEFAULT_FOS_TABLE = load_fos_table()
    return _DEFAULT_FOS_TABLE


def map_fos(raw_label: str, table: dict[str, FosField] | None = None
            ) -> FosMapping:
    """Exact (case/whitespace-insensitive) lookup; unmapped labels are
    reported with no provenance, never guessed."""
    table = table if table is not None else default_fos_table()
    fos = table.get(_norm_label(raw_label))
    if fos is None:
        return FosMapping(raw_label=raw_label, fos_field=None, provenance=None)
    return FosMapping(raw_label=raw_label, fos_field=fos,
                      provenance="TableLookup")


# -- annotation parsing -------------------------------------------------------

def parse_usage(raw: dict) -> UsageDescriptor:
    """Build a usage descriptor from curator input, resolving legacy product
    aliases and folding out-of-vocabulary coupled tools into Other."""
    product_label = raw.get("principal_product")
    if not product_label:
        raise VocabularyViolationError("annotation needs a principal_product")
    product = resolve_product(str(product_label))
    if product is None:
        raise VocabularyViolationError(
            f"unknown product {product_label!r}; known names include "
            "EduPack, Selector, MI and their CES-era aliases")
    tools: list[str] = []
    other_labels: list[str] = []
    for label in raw.get("coupled_tools", []):
        canonical, leftover = resolve_coupled_tool(str(label))
        if canonical not in tools:
            tools.append(canonical)
        if leftover is not None:
            other_labels.append(leftover)
    try:
        context = coerce_enum(UsageContext,
                              raw.get("usage_context", "AcademicResearch"),
                              "usage_context")
    except InvalidEnumValueError as exc:
        raise VocabularyViolationError(str(exc)) from None
    return UsageDescriptor(
        principal_product=product,
        product_version=raw.get("product_version"),
        sub_products=[str(s) for s in raw.get("sub_products", [])],
        usage_context=context,
        coupled_tools=tools,
        other_tool_labels=other_labels,
        flags=UsageFlags.from_dict(raw.get("flags", {})),
    )


_MATERIAL_ALIASES = {slugify(m.value): m for m in MaterialFamily}
_MATERIAL_ALIASES.update({
    "metals": MaterialFamily.METALS_AND_ALLOYS,
    "metals_and_alloys": MaterialFamily.METALS_AND_ALLOYS,
    "alloys": MaterialFamily.METALS_AND_ALLOYS,
    "polymer": MaterialFamily.POLYMERS,
    "plastics": MaterialFamily.POLYMERS,
    "ceramics": MaterialFamily.CERAMICS_AND_GLASSES,
    "ceramics_and_glasses": MaterialFamily.CERAMICS_AND_GLASSES,
    "glasses": MaterialFamily.CERAMICS_AND_GLASSES,
    "composite": MaterialFamily.COMPOSITES,
    "hybrids": MaterialFamily.COMPOSITES,
    "natural_materials": MaterialFamily.NATURAL_MATERIALS,
    "foam": MaterialFamily.FOAMS,
})


def parse_application(raw: dict, fos_table: dict[str, FosField] | None = None
                      ) -> ApplicationContext:
    """Build an application context from curator input. An explicit
    fos_field is a manual override; otherwise the first raw label that maps
    through the table is used."""
    fos: FosField | None = None
    if raw.get("fos_field"):
        try:
            fos = coerce_enum(FosField, raw["fos_field"], "fos_field")
        except InvalidEnumValueError as exc:
            raise VocabularyViolationError(str(exc)) from None
    labels = [str(l) for l in raw.get("raw_field_labels", [])]
    if fos is None:
        for label in labels:
            mapping = map_fos(label, fos_table)
            if mapping.fos_field is not None:
                fos = mapping.fos_field
                break
    families: list[MaterialFamily] = []
    for label in raw.get("material_families", []):
        family = _MATERIAL_ALIASES.get(slugify(str(label)))
        if family is None:
            raise VocabularyViolationError(
                f"unknown material family {label!r}; known: "
                + ", ".join(m.value for m in MaterialFamily))
        if family not in families:
            families.append(family)
    try:
        segment = coerce_enum(ResearchSegment,
                              raw.get("research_segment", "Academia"),
                              "research_segment")
        depth = coerce_enum(ScopeDepth, raw.get("scope_depth", "Medium"),
                            "scope_depth")
    except InvalidEnumValueError as exc:
        raise VocabularyViolationError(str(exc)) from None
    return ApplicationContext(
        raw_field_labels=labels,
        fos_field=fos,
        research_segment=segment,
        material_families=families,
        process_families=[str(p) for p in raw.get("process_families", [])],
        scope_depth=depth,
        notes=raw.get("notes"),
    )


def _utc_now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def apply_annotation(store: CorpusStore, record_id: str,
                     usage: UsageDescriptor,
                     application: ApplicationContext | None = None,
                     curator: str = "anonymous",
                     now: Callable[[], str] = _utc_now) -> DocumentRecord:
    """Attach curated descriptors to a record and advance it to Annotated.

    Re-annotation is allowed; every pass appends an audit entry and the
    latest annotation wins for analytics. Product and field links are
    rebuilt from the descriptors so the link graph stays consistent.
    """
    record = store.get_record(record_id)
    updated = DocumentRecord.from_dict(record.to_dict())
    updated.usage = usage
    updated.application = application if application is not None \
        else record.application

    product_entity = store.ensure_entity(
        EntityKind.PRODUCT, usage.principal_product.value)
    updated.product_links = [Link(record_id, product_entity.entity_id,
                                  LinkType.USES_PRODUCT)]
    if updated.application and updated.application.fos_field:
        fos_entity = store.ensure_entity(
            EntityKind.FOS_FIELD, updated.application.fos_field.value)
        updated.field_links = [Link(record_id, fos_entity.entity_id,
                                    LinkType.IN_FIELD)]

    if updated.curation_status in (CurationStatus.INGESTED,
                                   CurationStatus.EXCLUDED):
        updated.curation_status = CurationStatus.ANNOTATED
    updated.audit_log.append(AuditEntry(curator=curator, timestamp=now(),
                                        action="annotate"))
    store.upsert_record(updated)
    return store.get_record(record_id)


def validate_record(store: CorpusStore, record_id: str) -> DocumentRecord:
    """Promote an annotated record to Validated (checks run in the store)."""
    store.set_status(record_id, CurationStatus.VALIDATED)
    return store.get_record(record_id)


# -- automated consistency checks ---------------------------------------------

def quality_check(store: CorpusStore,
                  fos_table: dict[str, FosField] | None = None
                  ) -> list[ValidationIssue]:
    """Scan the corpus for missing, incomplete, or inconsistent values.

    Pure read-only snapshot check; running it twice on an unchanged corpus
    yields the identical issue list.
    """
    issues: list[ValidationIssue] = []
    partial = store.partial_year()

    def add(record_id: str, severity: Severity, code: str, message: str):
        issues.append(ValidationIssue(record_id=record_id, severity=severity,
                                      code=code, message=message))

    for record in store.all_records():
        rid = record.record_id
        validated = record.curation_status is CurationStatus.VALIDATED
        if record.year is None:
            add(rid, Severity.ERROR, "MissingYear",
                "record has no publication year")
        elif not (store.year_min <= record.year <= store.year_max):
            add(rid, Severity.WARNING, "YearOutOfBounds",
                f"year {record.year} outside "
                f"[{store.year_min}, {store.year_max}]")
        if not record.title.strip():
            add(rid, Severity.ERROR, "MissingTitle", "record has no title")
        if not record.author_links:
            add(rid, Severity.ERROR if validated else Severity.WARNING,
                "MissingAuthors", "record has no author links")
        if validated and record.usage is None:
            add(rid, Severity.ERROR, "MissingUsage",
                "validated record has no usage descriptor")
        if validated and record.usage is not None \
                and record.usage.principal_product is None:
            add(rid, Severity.ERROR, "MissingProduct",
                "validated record has no principal product")
        for link in record.links():
            if link.to_id not in store.entities:
                add(rid, Severity.ERROR, "DanglingLink",
                    f"link to missing entity {link.to_id}")
        if record.application is not None \
                and record.application.fos_field is None \
                and record.application.raw_field_labels:
            unmapped = [l for l in record.application.raw_field_labels
                        if map_fos(l, fos_table).fos_field is None]
            if unmapped:
                add(rid, Severity.WARNING, "UnmappedFosLabel",
                    "field labels not in the mapping table: "
                    + ", ".join(sorted(unmapped)))
        if partial is not None and record.year == partial:
            add(rid, Severity.INFO, "PartialYearCoverage",
                f"{partial} is only covered up to {store.collection_cutoff}; "
                "counts for it do not reflect a full publication year")

    seen_keys: dict[tuple, str] = {}
    for entity in sorted(store.entities.values(), key=lambda e: e.entity_id):
        key = (entity.kind, entity.canonical_key)
        if key in seen_keys:
            add(entity.entity_id, Severity.WARNING, "DuplicateCanonicalKey",
                f"same canonical key as {seen_keys[key]}")
        else:
            seen_keys[key] = entity.entity_id

    issues.sort(key=lambda i: i.sort_key())
    return issues
