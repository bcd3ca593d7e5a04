import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA_DIR
from litmon.bibtex import decode_latex, parse_bibtex, split_authors
from litmon.errors import EmptyInputError
from litmon.model import IntrinsicRecord, ResourceType

GOLDEN = (DATA_DIR / "golden.bib").read_text("utf-8")


def golden_line(marker: str) -> int:
    for lineno, line in enumerate(GOLDEN.splitlines(), start=1):
        if marker in line:
            return lineno
    raise AssertionError(f"marker {marker} not in golden file")


def test_single_article():
    records, issues = parse_bibtex(
        "@article{k, title={T}, author={Smith, J.}, year={2020}, "
        "doi={10.1000/t1}}")
    assert issues == []
    assert len(records) == 1
    rec = records[0]
    assert rec.title == "T"
    assert rec.year == 2020
    assert rec.resource_type_hint is ResourceType.REVIEWED_PAPER
    assert rec.doi == "10.1000/t1"


def test_author_order_preserved():
    records, _ = parse_bibtex(
        "@article{k, title={T}, author={Cebon, D. and Ashby, M. F.}, "
        "year={1994}}")
    assert records[0].authors == ["Cebon, D.", "Ashby, M. F."]


def test_unbalanced_braces_keeps_siblings():
    text = """
@article{ok1, title={First}, year={2000}}
@article{bad, title={Unbalanced {brace, year={2001}
@article{ok2, title={Second}, year={2002}}
"""
    records, issues = parse_bibtex(text)
    # hand count: two well-formed entries survive, one positioned error
    assert [r.title for r in records] == ["First", "Second"]
    assert len(issues) == 1
    assert issues[0].code == "SyntaxError"
    assert issues[0].line == 3


def test_empty_input_raises():
    with pytest.raises(EmptyInputError):
        parse_bibtex("   \n  ")


def test_latex_decoding():
    assert decode_latex(r"Br\'echet") == "Bréchet"
    assert decode_latex(r"M{\"u}ller") == "Müller"
    assert decode_latex(r"{T}weet{NLP}") == "TweetNLP"
    assert decode_latex(r"M.~F.~Ashby") == "M. F. Ashby"
    assert decode_latex(r"Wei{\ss}") == "Weiß"
    assert decode_latex(r"\v{S}koda") == "Škoda"
    assert decode_latex(r"Fran{\c c}ois") == "François"


def test_split_authors_respects_braces():
    parts = split_authors("{Standards Working Group 12} and Smith, J.")
    assert parts == ["Standards Working Group 12", "Smith, J."]


def test_string_constants_resolved():
    records, _ = parse_bibtex(
        '@string{js = "Journal of Stuff"}\n'
        "@article{k, title={T}, journal = js, year={2020}}")
    assert records[0].venue == "Journal of Stuff"


def test_quoted_values_and_concatenation():
    records, _ = parse_bibtex(
        '@string{pre = "Journal of "}\n'
        '@article{k, title="A Title", journal = pre # "Things", '
        "year={2021}}")
    assert records[0].title == "A Title"
    assert records[0].venue == "Journal of Things"


@pytest.mark.parametrize("entry_type,expected", [
    ("article", ResourceType.REVIEWED_PAPER),
    ("inproceedings", ResourceType.CONFERENCE_PROCEEDINGS),
    ("proceedings", ResourceType.CONFERENCE_PROCEEDINGS),
    ("phdthesis", ResourceType.THESIS),
    ("mastersthesis", ResourceType.THESIS),
    ("techreport", ResourceType.TECHNICAL_REPORT_WHITE_PAPER),
])
def test_type_hints(entry_type, expected):
    records, _ = parse_bibtex(
        f"@{entry_type}{{k, title={{T}}, year={{2020}}}}")
    assert records[0].resource_type_hint is expected


def test_misc_with_patent_note():
    records, _ = parse_bibtex(
        "@misc{k, title={T}, year={2020}, note={US patent 123}}")
    assert records[0].resource_type_hint is ResourceType.STANDARD_PATENT


def test_golden_corpus_counts():
    records, issues = parse_bibtex(GOLDEN)
    assert len(records) == 32
    hints = [r.resource_type_hint for r in records]
    assert hints.count(ResourceType.REVIEWED_PAPER) == 13
    assert hints.count(ResourceType.CONFERENCE_PROCEEDINGS) == 6
    assert hints.count(ResourceType.THESIS) == 5
    assert hints.count(ResourceType.TECHNICAL_REPORT_WHITE_PAPER) == 4
    assert hints.count(ResourceType.STANDARD_PATENT) == 4
    assert [i.code for i in issues] == ["SyntaxError", "SyntaxError"]
    assert issues[0].line == golden_line("@article{bad1unbalanced")
    assert issues[1].line == golden_line("@article{bad2missingequals")


def test_golden_accents_decoded():
    records, _ = parse_bibtex(GOLDEN)
    by_title = {r.title: r for r in records}
    eco = by_title["Eco-audit driven comparison of beverage container "
                   "materials"]
    assert eco.authors == ["García, María", "Müller, Hans-Peter"]
    foam = by_title["Energy absorption of polymer foams for protective "
                    "packaging"]
    assert foam.authors == ["Novák, Jiří", "Svensson, Åke"]


def test_golden_keywords_and_strings():
    records, _ = parse_bibtex(GOLDEN)
    by_title = {r.title: r for r in records}
    panel = by_title["Sandwich panel core selection under combined "
                     "stiffness and mass constraints"]
    assert panel.keywords == ["materials selection", "sandwich panels",
                              "stiffness"]
    assert panel.venue == "Journal of Materials in Design"
    assert panel.doi == "10.1000/jmd.2018.0142"


def test_golden_roundtrip_lossless():
    records, _ = parse_bibtex(GOLDEN)
    for record in records:
        line = json.dumps(record.to_dict(), ensure_ascii=False,
                          sort_keys=True)
        assert IntrinsicRecord.from_dict(json.loads(line)) == record


@settings(deadline=None, max_examples=150)
@given(st.text(alphabet=st.sampled_from('@{}="#, \nartichokeyear1950'),
               min_size=1, max_size=300))
def test_parser_totality(text):
    # never raises (except on blank input), never returns more records
    # than there are '@' entry starts
    try:
        records, issues = parse_bibtex(text)
    except EmptyInputError:
        return
    assert len(records) <= text.count("@")
    for issue in issues:
        assert issue.line is not None
