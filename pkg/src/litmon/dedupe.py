"""Duplicate detection over bibliographic records.

Records with the same normalized DOI form exact clusters. Among the rest,
records are fuzzy-clustered when their normalized titles are similar enough
AND they share a publication year; similarity is 1 - edit_distance/max_len
on lowercased, punctuation-stripped titles. Clusters are transitive
closures, and the output is invariant under permutation of the input.
"""

from __future__ import annotations

import re
from collections import defaultdict

from .model import DuplicateCluster, MatchKind
from .textutil import fold_diacritics, normalize_doi

DEFAULT_FUZZY_THRESHOLD = 0.90


def normalize_title(title: str) -> str:
    text = fold_diacritics(title).lower()
    text = re.sub(r"[^a-z0-9]+", " ", text)
    return " ".join(text.split())


def edit_distance(a: str, b: str) -> int:
    """Plain Levenshtein distance, two-row dynamic programming."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,        # deletion
                current[j - 1] + 1,     # insertion
                previous[j - 1] + (ca != cb),  # substitution
            ))
        previous = current
    return previous[-1]


def title_similarity(a: str, b: str) -> float:
    na, nb = normalize_title(a), normalize_title(b)
    longest = max(len(na), len(nb))
    if longest == 0:
        return 0.0
    return 1.0 - edit_distance(na, nb) / longest


class _UnionFind:
    def __init__(self, items):
        self.parent = {item: item for item in items}

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic root: keep the smaller id
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _record_fields(record, index: int) -> tuple[str, str, int | None, str | None]:
    rid = getattr(record, "record_id", "") or f"#{index}"
    title = getattr(record, "title", "") or ""
    year = getattr(record, "year", None)
    doi = normalize_doi(getattr(record, "doi", None))
    return rid, title, year, doi


def dedupe_corpus(records, fuzzy_threshold: float = DEFAULT_FUZZY_THRESHOLD
                  ) -> list[DuplicateCluster]:
    """Cluster likely duplicates. Works on anything exposing record_id,
    title, year, and doi (stored documents or freshly parsed records)."""
    if not 0 < fuzzy_threshold <= 1:
        raise ValueError(f"fuzzy threshold must be in (0, 1], got "
                         f"{fuzzy_threshold}")
    rows = [_record_fields(r, i) for i, r in enumerate(records)]
    rows.sort(key=lambda row: row[0])

    clusters: list[DuplicateCluster] = []
    doi_groups: dict[str, list[str]] = defaultdict(list)
    for rid, _title, _year, doi in rows:
        if doi:
            doi_groups[doi].append(rid)
    doi_clustered: set[str] = set()
    for doi in sorted(doi_groups):
        members = doi_groups[doi]
        if len(members) > 1:
            clusters.append(DuplicateCluster(member_ids=sorted(members),
                                             match_kind=MatchKind.DOI_EXACT,
                                             score=1.0))
            doi_clustered.update(members)

    # fuzzy stage on the remainder, bucketed by year
    remainder = [(rid, normalize_title(title), year)
                 for rid, title, year, _doi in rows
                 if rid not in doi_clustered and year is not None]
    by_year: dict[int, list[tuple[str, str]]] = defaultdict(list)
    for rid, title, year in remainder:
        by_year[year].append((rid, title))

    uf = _UnionFind([rid for rid, _t, _y in remainder])
    similarity: dict[tuple[str, str], float] = {}
    for year in sorted(by_year):
        bucket = by_year[year]
        for i in range(len(bucket)):
            for j in range(i + 1, len(bucket)):
                (rid_a, title_a), (rid_b, title_b) = bucket[i], bucket[j]
                longest = max(len(title_a), len(title_b))
                if longest == 0:
                    continue
                # cheap length screen before the O(n*m) distance
                if abs(len(title_a) - len(title_b)) / longest > 1 - fuzzy_threshold:
                    continue
                sim = 1.0 - edit_distance(title_a, title_b) / longest
                if sim >= fuzzy_threshold:
                    uf.union(rid_a, rid_b)
                    similarity[(min(rid_a, rid_b), max(rid_a, rid_b))] = sim

    groups: dict[str, list[str]] = defaultdict(list)
    for rid, _t, _y in remainder:
        groups[uf.find(rid)].append(rid)
    for root in sorted(groups):
        members = sorted(groups[root])
        if len(members) < 2:
            continue
        linked = [sim for (a, b), sim in similarity.items()
                  if a in members and b in members]
        clusters.append(DuplicateCluster(member_ids=members,
                                         match_kind=MatchKind.TITLE_FUZZY,
                                         score=min(linked) if linked else fuzzy_threshold))
    clusters.sort(key=lambda c: (c.match_kind.value, c.member_ids))
    return clusters
