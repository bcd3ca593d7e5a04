"""Term extraction for text statistics and co-occurrence mapping.

Preprocessing is deliberately basic: lowercasing, stop-word removal, and
singular/plural folding by trailing-'s' stripping only. Keyword phrases are
kept intact as terms; titles (and abstracts, for the co-occurrence map)
contribute unigrams plus bigrams of originally-adjacent tokens.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

_TOKEN_RE = re.compile(r"[a-z0-9][a-z0-9\-]*")

_DEFAULT_STOPWORDS: frozenset[str] | None = None


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    if path is None:
        text = (resources.files("litmon.data") / "stopwords_en.txt"
                ).read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = {line.strip().lower() for line in text.splitlines()
             if line.strip() and not line.startswith("#")}
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        _DEFAULT_STOPWORDS = load_stopwords()
    return _DEFAULT_STOPWORDS


def fold_plural(token: str) -> str:
    """Strip one trailing 's' ("materials" -> "material"); words ending in
    -ss/-is/-us ("process", "analysis", "corpus") are left alone."""
    if len(token) > 3 and token.endswith("s") \
            and not token.endswith(("ss", "is", "us")):
        return token[:-1]
    return token


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def _informative(token: str, stopwords: frozenset[str]) -> bool:
    return len(token) >= 2 and token not in stopwords \
        and not token.replace("-", "").isdigit()


def text_terms(text: str, stopwords: frozenset[str]) -> list[str]:
    """Unigram and bigram occurrences from running text.

    Bigrams join tokens adjacent in the original text when both survive the
    stop-word filter — they never span a removed word.
    """
    raw = tokenize(text)
    folded = [fold_plural(t) for t in raw]
    keep = [_informative(t, stopwords) and _informative(f, stopwords)
            for t, f in zip(raw, folded)]
    terms = [f for f, k in zip(folded, keep) if k]
    for i in range(len(folded) - 1):
        if keep[i] and keep[i + 1]:
            terms.append(f"{folded[i]} {folded[i + 1]}")
    return terms


def keyword_term(phrase: str, stopwords: frozenset[str]) -> str | None:
    """A keyword phrase folded token-by-token and kept intact as one term.

    Phrases reducing to nothing but stop words are dropped.
    """
    folded = [fold_plural(t) for t in tokenize(phrase)]
    if not folded:
        return None
    if all(t in stopwords or t.replace("-", "").isdigit() for t in folded):
        return None
    return " ".join(folded)


def record_terms(record, stopwords: frozenset[str],
                 include_abstract: bool = False) -> list[str]:
    """All term occurrences of one document (keywords + title [+ abstract])."""
    terms: list[str] = []
    for phrase in record.keywords:
        term = keyword_term(phrase, stopwords)
        if term is not None:
            terms.append(term)
    terms.extend(text_terms(record.title, stopwords))
    if include_abstract and record.abstract:
        terms.extend(text_terms(record.abstract, stopwords))
    return terms
