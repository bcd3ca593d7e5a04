import pytest

from litmon.terms import (
    default_stopwords,
    fold_plural,
    keyword_term,
    text_terms,
    tokenize,
)

STOPS = default_stopwords()


@pytest.mark.parametrize("token,expected", [
    ("materials", "material"),
    ("instruments", "instrument"),
    ("charts", "chart"),
    ("analysis", "analysis"),   # -is protected
    ("process", "process"),     # -ss protected
    ("corpus", "corpus"),       # -us protected
    ("gas", "gas"),             # too short to fold
    ("design", "design"),
])
def test_fold_plural(token, expected):
    assert fold_plural(token) == expected


def test_tokenize_lowercases_and_splits():
    assert tokenize("Eco-Audit of Beverage Containers!") == \
        ["eco-audit", "of", "beverage", "containers"]


def test_title_terms_removes_stopwords():
    terms = text_terms("Materials selection for design", STOPS)
    assert "material" in terms
    assert "selection" in terms
    assert "design" in terms
    assert all("for" not in t.split() for t in terms)


def test_title_bigrams_do_not_span_removed_words():
    terms = text_terms("Materials selection for design", STOPS)
    assert "material selection" in terms   # adjacent pair survives
    assert "selection design" not in terms  # "for" separated them


def test_keyword_phrase_kept_intact():
    assert keyword_term("Materials Selection", STOPS) == "material selection"
    assert keyword_term("life cycle", STOPS) == "life cycle"
    assert keyword_term("additive manufacturing", STOPS) == \
        "additive manufacturing"


def test_keyword_of_only_stopwords_dropped():
    assert keyword_term("of the", STOPS) is None
    assert keyword_term("", STOPS) is None


def test_numeric_tokens_dropped():
    terms = text_terms("Selection in 2020 of 45 alloys", STOPS)
    assert "2020" not in terms
    assert "45" not in terms
    assert "alloy" in terms


def test_stopword_list_loads():
    assert "for" in STOPS
    assert "the" in STOPS
    assert len(STOPS) > 100
