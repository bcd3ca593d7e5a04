import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA_DIR
from litmon.errors import EmptyInputError
from litmon.model import IntrinsicRecord, ResourceType
from litmon.ris import parse_ris

GOLDEN = (DATA_DIR / "golden.ris").read_text("utf-8")


def test_single_journal_record():
    records, issues = parse_ris(
        "TY  - JOUR\nTI  - A title\nAU  - Smith, J.\nPY  - 2020\n"
        "DO  - 10.2000/x1\nER  -\n")
    assert issues == []
    assert len(records) == 1
    rec = records[0]
    assert rec.title == "A title"
    assert rec.resource_type_hint is ResourceType.REVIEWED_PAPER
    assert rec.year == 2020
    assert rec.doi == "10.2000/x1"


def test_keyword_order_preserved():
    records, _ = parse_ris(
        "TY  - JOUR\nTI  - T\nKW  - one\nKW  - two\nKW  - three\nER  -\n")
    assert records[0].keywords == ["one", "two", "three"]


def test_authors_ordered():
    records, _ = parse_ris(
        "TY  - JOUR\nTI  - T\nAU  - First, A.\nAU  - Second, B.\nER  -\n")
    assert records[0].authors == ["First, A.", "Second, B."]


def test_missing_terminator_drops_record_keeps_first():
    # manual segmentation: record 1 is complete, record 2 never closes
    records, issues = parse_ris(
        "TY  - JOUR\nTI  - Complete\nER  -\n"
        "TY  - JOUR\nTI  - Truncated\n")
    assert [r.title for r in records] == ["Complete"]
    assert [i.code for i in issues] == ["MissingTerminator"]
    assert issues[0].line == 4


def test_py_wins_over_da():
    records, _ = parse_ris(
        "TY  - JOUR\nTI  - T\nDA  - 1999/05/01\nPY  - 2001\nER  -\n")
    assert records[0].year == 2001


def test_continuation_lines_join():
    records, _ = parse_ris(
        "TY  - JOUR\nTI  - A very long\n      wrapped title\nER  -\n")
    assert records[0].title == "A very long wrapped title"


@pytest.mark.parametrize("ty,expected", [
    ("JOUR", ResourceType.REVIEWED_PAPER),
    ("CONF", ResourceType.CONFERENCE_PROCEEDINGS),
    ("CPAPER", ResourceType.CONFERENCE_PROCEEDINGS),
    ("THES", ResourceType.THESIS),
    ("RPRT", ResourceType.TECHNICAL_REPORT_WHITE_PAPER),
    ("PAT", ResourceType.STANDARD_PATENT),
    ("STAND", ResourceType.STANDARD_PATENT),
])
def test_type_mapping(ty, expected):
    records, _ = parse_ris(f"TY  - {ty}\nTI  - T\nER  -\n")
    assert records[0].resource_type_hint is expected


def test_empty_input_raises():
    with pytest.raises(EmptyInputError):
        parse_ris("\n\n")


def test_golden_corpus_counts():
    records, issues = parse_ris(GOLDEN)
    assert len(records) == 33
    hints = [r.resource_type_hint for r in records]
    assert hints.count(ResourceType.REVIEWED_PAPER) == 13
    assert hints.count(ResourceType.CONFERENCE_PROCEEDINGS) == 6
    assert hints.count(ResourceType.THESIS) == 6
    assert hints.count(ResourceType.TECHNICAL_REPORT_WHITE_PAPER) == 4
    assert hints.count(ResourceType.STANDARD_PATENT) == 4
    assert [i.code for i in issues] == ["MissingTerminator"]
    # the unterminated record opens on this line of the golden file
    expected_line = next(
        lineno for lineno, line in enumerate(GOLDEN.splitlines(), start=1)
        if "deliberately lacks its terminator" in line) - 1
    assert issues[0].line == expected_line


def test_golden_multi_keyword_record():
    records, _ = parse_ris(GOLDEN)
    by_title = {r.title: r for r in records}
    rec = by_title["Recycled polymer grades in consumer product housings"]
    assert rec.keywords == ["recycling", "polymers", "consumer products",
                            "eco properties"]


def test_golden_roundtrip_lossless():
    records, _ = parse_ris(GOLDEN)
    for record in records:
        line = json.dumps(record.to_dict(), ensure_ascii=False,
                          sort_keys=True)
        assert IntrinsicRecord.from_dict(json.loads(line)) == record


@settings(deadline=None, max_examples=150)
@given(st.text(alphabet=st.sampled_from("TY-ERAUKWJO \n- 2018"),
               min_size=1, max_size=300))
def test_parser_totality(text):
    try:
        records, _issues = parse_ris(text)
    except EmptyInputError:
        return
    # a record needs a TY start, so there can never be more records
    # than TY tag lines
    assert len(records) <= sum(1 for line in text.splitlines()
                               if line.lstrip("﻿").startswith("TY  -"))
