"""RIS citation file reader.

Records are sequences of ``XX  - value`` tag lines terminated by ``ER  -``.
Lines that do not look like a tag continue the previous value. A record cut
off by a new ``TY`` or by end of input is reported as MissingTerminator and
dropped; everything else in the file still parses.
"""

from __future__ import annotations

import re

from .errors import EmptyInputError
from .model import IntrinsicRecord, ParseIssue, RawSource, ResourceType
from .textutil import collapse_ws, normalize_doi

_TAG_RE = re.compile(r"^([A-Z][A-Z0-9])\s\s-\s?(.*)$")

_TYPE_HINTS = {
    "JOUR": ResourceType.REVIEWED_PAPER,
    "JFULL": ResourceType.REVIEWED_PAPER,
    "BOOK": ResourceType.REVIEWED_PAPER,
    "CHAP": ResourceType.REVIEWED_PAPER,
    "CONF": ResourceType.CONFERENCE_PROCEEDINGS,
    "CPAPER": ResourceType.CONFERENCE_PROCEEDINGS,
    "THES": ResourceType.THESIS,
    "RPRT": ResourceType.TECHNICAL_REPORT_WHITE_PAPER,
    "PAT": ResourceType.STANDARD_PATENT,
    "STAND": ResourceType.STANDARD_PATENT,
}


def _year_from(values: dict[str, list[str]]) -> int | None:
    # PY wins over DA/Y1 when both are present
    for tag in ("PY", "Y1", "DA"):
        for value in values.get(tag, ()):
            m = re.search(r"\d{4}", value)
            if m:
                return int(m.group(0))
    return None


def _first(values: dict[str, list[str]], *tags: str) -> str | None:
    for tag in tags:
        if values.get(tag):
            return values[tag][0]
    return None


def _build(values: dict[str, list[str]]) -> IntrinsicRecord:
    ty = (_first(values, "TY") or "").strip().upper()
    language = (_first(values, "LA") or "en").strip().lower()[:2] or "en"
    return IntrinsicRecord(
        title=collapse_ws(_first(values, "TI", "T1") or ""),
        year=_year_from(values),
        resource_type_hint=_TYPE_HINTS.get(ty),
        venue=collapse_ws(_first(values, "JO", "JF", "T2") or ""),
        volume=_first(values, "VL"),
        issue=_first(values, "IS"),
        publisher=_first(values, "PB"),
        abstract=_first(values, "AB", "N2"),
        keywords=[collapse_ws(k) for k in values.get("KW", []) if k.strip()],
        language=language,
        doi=normalize_doi(_first(values, "DO")),
        url=_first(values, "UR"),
        authors=[collapse_ws(a) for a in
                 values.get("AU", []) or values.get("A1", []) if a.strip()],
        affiliations=[collapse_ws(a) for a in values.get("AD", [])
                      if a.strip()],
        raw_source=RawSource.RIS,
    )


def parse_ris(text: str) -> tuple[list[IntrinsicRecord], list[ParseIssue]]:
    if not text or not text.strip():
        raise EmptyInputError("no RIS records in input")
    records: list[IntrinsicRecord] = []
    issues: list[ParseIssue] = []
    current: dict[str, list[str]] | None = None
    open_line = 0
    last_tag: str | None = None

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.rstrip("﻿\r\n ")
        if not line.strip():
            continue
        m = _TAG_RE.match(line.lstrip("﻿"))
        if not m:
            if current is not None and last_tag:
                current[last_tag][-1] += " " + line.strip()
            elif line.strip():
                issues.append(ParseIssue(line=lineno, code="SyntaxError",
                                         message=f"not a tag line: {line.strip()[:40]!r}"))
            continue
        tag, value = m.group(1), m.group(2).strip()
        if tag == "TY":
            if current is not None:
                issues.append(ParseIssue(
                    line=open_line, code="MissingTerminator",
                    message="record is missing its ER terminator"))
            current = {"TY": [value]}
            open_line = lineno
            last_tag = "TY"
            continue
        if tag == "ER":
            if current is None:
                issues.append(ParseIssue(line=lineno, code="SyntaxError",
                                         message="ER without an open record"))
            else:
                records.append(_build(current))
                current = None
                last_tag = None
            continue
        if current is None:
            issues.append(ParseIssue(line=lineno, code="SyntaxError",
                                     message=f"tag {tag} outside a record"))
            continue
        current.setdefault(tag, []).append(value)
        last_tag = tag

    if current is not None:
        issues.append(ParseIssue(line=open_line, code="MissingTerminator",
                                 message="record is missing its ER terminator"))
    return records, issues
