"""Walkthrough: from citation files to a curated corpus.

Parses a small BibTeX snippet, loads the records into a fresh corpus store,
annotates them with usage descriptors, runs the operational-use inclusion
gate, validates the keepers, and finishes with the automated quality checks.

Run:  python demos/01_ingest_and_curate.py
"""

import tempfile
from pathlib import Path

from litmon import (
    CorpusStore,
    add_intrinsic,
    apply_annotation,
    inclusion_gate,
    parse_bibtex,
    quality_check,
    validate_record,
)
from litmon.curation import parse_application, parse_usage

BIB = r"""
@article{demo1,
  title   = {Selecting sandwich cores with property charts},
  author  = {Garc{\'\i}a, Mar{\'\i}a and M{\"u}ller, Hans},
  journal = {Journal of Demonstrations},
  year    = {2021},
  doi     = {10.9999/demo.2021.001},
  keywords = {materials selection; charts}
}
@article{demo2,
  title   = {A passing mention of selection software in a survey},
  author  = {Bystander, Bob},
  journal = {Survey Letters},
  year    = {2022}
}
"""

# -- 1. parse ---------------------------------------------------------------
records, issues = parse_bibtex(BIB)
print(f"parsed {len(records)} records, {len(issues)} issues")
for record in records:
    print(f"  {record.year}  {record.title}  by {', '.join(record.authors)}")

# -- 2. ingest into a store ---------------------------------------------------
store = CorpusStore(year_min=1990, year_max=2026)
ids = []
for intrinsic in records:
    record_id, conversion_issues = add_intrinsic(store, intrinsic)
    ids.append(record_id)
print(f"\ningested as {ids}; store now has {len(store.entities)} entities")

# -- 3. curate: the first paper really uses the software ----------------------
usage = parse_usage({
    "principal_product": "CES EduPack",          # legacy alias resolves
    "usage_context": "AcademicResearch",
    "coupled_tools": ["ANSYS Mechanical"],
    "flags": {"materials_selection": True, "charts": True},
})
application = parse_application({
    "raw_field_labels": ["Materials Engineering"],  # maps to the FOS table
    "material_families": ["Composites"],
    "research_segment": "Academia",
})
apply_annotation(store, ids[0], usage, application, curator="demo")
print(f"\nannotated {ids[0]}: product resolves to "
      f"{store.get_record(ids[0]).usage.principal_product.value}")

# the second paper only mentions the software: annotate with no usage flags
apply_annotation(store, ids[1],
                 parse_usage({"principal_product": "EduPack"}),
                 curator="demo")

# -- 4. gate ---------------------------------------------------------------------
for record_id in ids:
    decision = inclusion_gate(store, record_id)
    print(f"gate {record_id}: {decision.verdict.value:8} "
          f"criteria={decision.satisfied_criteria} reason={decision.reason}")

validate_record(store, ids[0])
print(f"{ids[0]} is now {store.get_record(ids[0]).curation_status.value}; "
      f"{ids[1]} is {store.get_record(ids[1]).curation_status.value}")

# -- 5. automated consistency checks ----------------------------------------------
issues = quality_check(store)
print(f"\nquality check: {len(issues)} issue(s)"
      + ("" if issues else " (corpus is clean)"))
for issue in issues:
    print(f"  {issue.severity.value:7} {issue.code:20} {issue.record_id}")

# -- 6. persist and read back -------------------------------------------------------
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo-corpus.jsonl"
    store.save(str(path))
    reloaded = CorpusStore.load(str(path))
    assert reloaded.to_lines() == store.to_lines()
    print(f"\nsaved and re-read {path.name}: "
          f"{len(reloaded.documents)} records, lossless round-trip OK")
