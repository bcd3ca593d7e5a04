"""Author name normalization.

Raw names arrive either as "Family, Given" / "Family, I. J." or as
"Given Family". Both normalize to a display form "Family, I. J." and a
canonical key "family_ij" (family name lowercased with diacritics folded,
followed by the given-name initials).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .textutil import collapse_ws, fold_diacritics

# Particles that belong to the family name when they precede it
# ("Ludwig van Beethoven" -> family "van Beethoven").
_PARTICLES = {"van", "von", "de", "del", "della", "der", "den", "da", "di",
              "la", "le", "du", "dos", "das", "ter", "ten"}


@dataclass
class NormalizedName:
    display_name: str
    canonical_key: str
    parse_warning: str | None = None


def _initials(given: str) -> list[str]:
    parts = re.split(r"[\s.\-]+", given)
    return [p[0].upper() for p in parts if p and p.lower() not in _PARTICLES]


def _key(family: str, initials: list[str]) -> str:
    folded = re.sub(r"[^a-z0-9]+", "", fold_diacritics(family).lower())
    suffix = "".join(initials).lower()
    return f"{folded}_{suffix}" if suffix else folded


def normalize_author_name(raw: str) -> NormalizedName:
    """Normalize one raw author string.

    Unparseable inputs (a single bare token) are kept as-is with a warning,
    so no author is ever silently dropped.
    """
    name = collapse_ws(raw)
    if not name:
        return NormalizedName("", "", parse_warning="empty author name")

    if "," in name:
        family, _, given = name.partition(",")
        family = family.strip()
        given = given.strip()
    else:
        tokens = name.split(" ")
        if len(tokens) == 1:
            folded = re.sub(r"[^a-z0-9]+", "", fold_diacritics(name).lower())
            return NormalizedName(
                display_name=name,
                canonical_key=folded or name.lower(),
                parse_warning=f"single-token author name kept as-is: {raw!r}",
            )
        # Last token is the family name; fold leading particles into it.
        split_at = len(tokens) - 1
        while split_at > 1 and tokens[split_at - 1].lower() in _PARTICLES:
            split_at -= 1
        family = " ".join(tokens[split_at:])
        given = " ".join(tokens[:split_at])

    initials = _initials(given)
    if not family:
        return NormalizedName(name, _key(given, []),
                              parse_warning=f"no family name in {raw!r}")
    if initials:
        display = f"{family}, " + " ".join(f"{i}." for i in initials)
    else:
        display = family
    return NormalizedName(display_name=display,
                          canonical_key=_key(family, initials))
