"""Record filter mini-language.

A filter is a conjunction of predicates, written as whitespace-separated
tokens (shell quoting applies for values containing spaces):

    year=2015..2020 product=EduPack type=Thesis title~selection

Operators: ``=`` equality (case-insensitive; list fields match any element),
``~`` substring containment, and ``lo..hi`` ranges on the year field.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

from .errors import MalformedRangeError, UnknownFieldError

if TYPE_CHECKING:
    from .model import DocumentRecord
    from .store import CorpusStore


@dataclass(frozen=True)
class Predicate:
    field: str
    op: str  # "eq" | "contains" | "range"
    value: object


def _entity_values(record, store, attr):
    values = []
    for link in getattr(record, attr):
        entity = store.entities.get(link.to_id)
        if entity is not None:
            values.append(entity.display_name)
            values.append(entity.canonical_key)
    return values


def _usage_value(getter):
    def extract(record, store):
        if record.usage is None:
            return []
        value = getter(record.usage)
        return value if isinstance(value, list) else [value]
    return extract


def _application_value(getter):
    def extract(record, store):
        if record.application is None:
            return []
        value = getter(record.application)
        if value is None:
            return []
        return value if isinstance(value, list) else [value]
    return extract


# field name -> extractor(record, store) -> list of comparable strings,
# except "year" which is handled numerically.
_FIELDS: dict[str, Callable] = {
    "title": lambda r, s: [r.title],
    "short_name": lambda r, s: [r.short_name],
    "venue": lambda r, s: [r.venue],
    "publisher": lambda r, s: [r.publisher or ""],
    "language": lambda r, s: [r.language],
    "doi": lambda r, s: [r.doi or ""],
    "type": lambda r, s: [r.resource_type.value],
    "status": lambda r, s: [r.curation_status.value],
    "keyword": lambda r, s: list(r.keywords),
    "author": lambda r, s: _entity_values(r, s, "author_links"),
    "institution": lambda r, s: _entity_values(r, s, "institution_links"),
    "country": lambda r, s: _entity_values(r, s, "country_links"),
    "product": _usage_value(lambda u: u.principal_product.value),
    "context": _usage_value(lambda u: u.usage_context.value),
    "tool": _usage_value(lambda u: u.coupled_tools),
    "flag": _usage_value(lambda u: [n for n in u.flags.FIELDS
                                    if getattr(u.flags, n)]),
    "segment": _application_value(lambda a: a.research_segment.value),
    "fos": _application_value(lambda a: a.fos_field.value if a.fos_field else None),
    "material": _application_value(lambda a: [m.value for m in a.material_families]),
}

FILTER_FIELDS = tuple(sorted(_FIELDS) + ["year"])


def parse_filter(text: str) -> list[Predicate]:
    predicates: list[Predicate] = []
    for token in shlex.split(text):
        if "~" in token and ("=" not in token or token.index("~") < token.index("=")):
            name, _, value = token.partition("~")
            op = "contains"
        elif "=" in token:
            name, _, value = token.partition("=")
            op = "eq"
        else:
            raise UnknownFieldError(f"predicate {token!r} has no operator")
        name = name.strip().lower().replace("-", "_")
        if name == "resource_type":
            name = "type"
        if name != "year" and name not in _FIELDS:
            raise UnknownFieldError(
                f"unknown filter field {name!r}; known fields: "
                + ", ".join(FILTER_FIELDS))
        if name == "year":
            predicates.append(_year_predicate(value, op))
        else:
            if op == "eq" and ".." in value:
                raise MalformedRangeError(
                    f"range syntax is only supported on 'year', not {name!r}")
            predicates.append(Predicate(name, op, value))
    return predicates


def _year_predicate(value: str, op: str) -> Predicate:
    if op == "contains":
        raise MalformedRangeError("year does not support '~'")
    try:
        if ".." in value:
            lo_s, _, hi_s = value.partition("..")
            lo, hi = int(lo_s), int(hi_s)
            if lo > hi:
                raise ValueError
            return Predicate("year", "range", (lo, hi))
        year = int(value)
        return Predicate("year", "range", (year, year))
    except ValueError:
        raise MalformedRangeError(f"malformed year value {value!r}") from None


def matches(record: "DocumentRecord", store: "CorpusStore",
            predicates: list[Predicate]) -> bool:
    for pred in predicates:
        if pred.field == "year":
            lo, hi = pred.value
            if record.year is None or not (lo <= record.year <= hi):
                return False
            continue
        values = [v.lower() for v in _FIELDS[pred.field](record, store) if v]
        needle = str(pred.value).lower()
        if pred.op == "eq":
            if needle not in values:
                return False
        else:
            if not any(needle in v for v in values):
                return False
    return True
