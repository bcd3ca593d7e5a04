"""Small text normalization helpers used across ingest and the store."""

from __future__ import annotations

import re
import unicodedata

# Characters NFKD cannot decompose to ASCII.
_ASCII_FALLBACK = {
    "ß": "ss", "ẞ": "SS",
    "ø": "o", "Ø": "O",
    "ł": "l", "Ł": "L",
    "æ": "ae", "Æ": "AE",
    "œ": "oe", "Œ": "OE",
    "đ": "d", "Đ": "D",
    "ð": "d", "Ð": "D",
    "þ": "th", "Þ": "Th",
    "ı": "i",
}

_DOI_RE = re.compile(r"^10\.\d{4,9}/\S+$")
_DOI_PREFIXES = (
    "https://doi.org/", "http://doi.org/",
    "https://dx.doi.org/", "http://dx.doi.org/",
    "doi.org/", "doi:",
)


def fold_diacritics(text: str) -> str:
    """Strip accents and map non-decomposable letters to ASCII equivalents."""
    text = "".join(_ASCII_FALLBACK.get(ch, ch) for ch in text)
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_doi(raw: str | None) -> str | None:
    """Return the canonical lowercase ``10.``-prefixed DOI, or None if the
    input does not look like a DOI at all."""
    if not raw:
        return None
    doi = raw.strip()
    lowered = doi.lower()
    for prefix in _DOI_PREFIXES:
        if lowered.startswith(prefix):
            doi = doi[len(prefix):]
            lowered = doi.lower()
    doi = doi.strip().strip("}").strip()
    if not doi:
        return None
    doi = doi.lower()
    if not _DOI_RE.match(doi):
        return None
    return doi


def slugify(text: str, sep: str = "_") -> str:
    """Lowercase ASCII identifier: diacritics folded, runs of non-alphanumerics
    collapsed to ``sep``."""
    folded = fold_diacritics(text).lower()
    slug = re.sub(r"[^a-z0-9]+", sep, folded).strip(sep)
    return slug


def canonical_key(text: str) -> str:
    """Default canonical key for non-author entities."""
    return slugify(text)


def collapse_ws(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()
