"""Command-line interface.

Subcommand groups mirror the workflow: ``ingest`` acquires bibliographic
metadata, ``curate`` applies usage annotations and quality checks,
``corpus`` validates and summarizes the store, ``report`` emits the
analytics, ``export`` and ``serve`` make the corpus available to other
tools and to the companion UI.

Environment overrides: LITMON_PORT (default service port) and
LITMON_FIXTURES (offline fixture directory, switches ``ingest doi`` to
offline mode).
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import api as api_mod
from . import curation, ingest, metadata, reports
from .bibtex import parse_bibtex
from .dedupe import dedupe_corpus
from .errors import LitmonError
from .model import Severity
from .ris import parse_ris
from .store import CorpusStore


def _load(corpus: str) -> CorpusStore:
    return CorpusStore.load(corpus)


def _echo_issues(issues):
    for issue in issues:
        line = f":{issue.line}" if getattr(issue, "line", None) else ""
        click.echo(f"  [{issue.code}{line}] {issue.message}", err=True)


@click.group()
def main():
    """Software-usage literature monitoring toolkit."""


# -- corpus ------------------------------------------------------------------

@main.group()
def corpus():
    """Inspect and validate a corpus file."""


@corpus.command("validate")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--severity", type=click.Choice(["error", "warning", "info"]),
              default=None, help="Only show issues of this severity.")
def corpus_validate(corpus_path, severity):
    """Run consistency checks; exits non-zero if errors are present."""
    store = _load(corpus_path)
    issues = curation.quality_check(store)
    if severity:
        issues = [i for i in issues if i.severity.value.lower() == severity]
    for issue in issues:
        click.echo(f"{issue.severity.value:7} {issue.code:22} "
                   f"{issue.record_id:8} {issue.message}")
    errors = sum(1 for i in issues if i.severity is Severity.ERROR)
    click.echo(f"{len(issues)} issue(s), {errors} error(s)")
    if errors:
        sys.exit(1)


@corpus.command("stats")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
def corpus_stats(corpus_path):
    """Corpus size and composition summary."""
    store = _load(corpus_path)
    by_status: dict[str, int] = {}
    for record in store.documents.values():
        by_status[record.curation_status.value] = \
            by_status.get(record.curation_status.value, 0) + 1
    by_kind: dict[str, int] = {}
    for entity in store.entities.values():
        by_kind[entity.kind.value] = by_kind.get(entity.kind.value, 0) + 1
    click.echo(json.dumps({
        "records": len(store.documents),
        "by_status": dict(sorted(by_status.items())),
        "entities": len(store.entities),
        "by_kind": dict(sorted(by_kind.items())),
        "snapshot": store.content_hash(),
    }, indent=2, sort_keys=True))


# -- ingest ------------------------------------------------------------------

@main.group("ingest")
def ingest_group():
    """Parse citation files and resolve DOIs."""


def _ingest_parsed(records, issues, corpus_path, source_name):
    _echo_issues(issues)
    if corpus_path:
        store = _load(corpus_path)
        added = []
        for intrinsic in records:
            record_id, conv_issues = ingest.add_intrinsic(store, intrinsic)
            _echo_issues(conv_issues)
            added.append(record_id)
        store.save(corpus_path)
        click.echo(f"{source_name}: {len(added)} record(s) added, "
                   f"{len(issues)} issue(s)")
    else:
        for record in records:
            click.echo(json.dumps(record.to_dict(), ensure_ascii=False,
                                  sort_keys=True))


@ingest_group.command("bib")
@click.argument("file", type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", type=click.Path(), default=None,
              help="Add parsed records to this corpus file.")
def ingest_bib(file, corpus_path):
    """Parse a BibTeX file (prints JSONL unless --corpus is given)."""
    text = open(file, encoding="utf-8", errors="replace").read()
    records, issues = parse_bibtex(text)
    _ingest_parsed(records, issues, corpus_path, file)


@ingest_group.command("ris")
@click.argument("file", type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", type=click.Path(), default=None)
def ingest_ris(file, corpus_path):
    """Parse a RIS file (prints JSONL unless --corpus is given)."""
    text = open(file, encoding="utf-8", errors="replace").read()
    records, issues = parse_ris(text)
    _ingest_parsed(records, issues, corpus_path, file)


@ingest_group.command("doi")
@click.argument("dois", nargs=-1, required=True)
@click.option("--offline", "offline_dir", type=click.Path(exists=True),
              default=None, envvar="LITMON_FIXTURES",
              help="Resolve from recorded responses instead of the network.")
@click.option("--base-url", default="https://api.crossref.org/works",
              show_default=True, help="Live metadata service endpoint.")
@click.option("--corpus", "corpus_path", type=click.Path(), default=None)
def ingest_doi(dois, offline_dir, base_url, corpus_path):
    """Resolve DOIs through the metadata service (or offline fixtures)."""
    if offline_dir:
        client = metadata.FixtureMetadataClient(offline_dir)
    else:
        client = metadata.HttpMetadataClient(base_url)
    outcomes = metadata.resolve_many(list(dois), client)
    records, issues = [], []
    failures = 0
    for doi in dois:
        outcome = outcomes[doi]
        if isinstance(outcome, Exception):
            failures += 1
            click.echo(f"  {doi}: {outcome}", err=True)
        else:
            record, record_issues = outcome
            records.append(record)
            issues.extend(record_issues)
            for i in record_issues:
                click.echo(f"  [{i.code}] {i.message}", err=True)
    _ingest_parsed(records, [], corpus_path, f"{len(records)} DOI(s)")
    if failures:
        sys.exit(1)


@ingest_group.command("dedupe")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--threshold", type=float, default=0.90, show_default=True)
def ingest_dedupe(corpus_path, threshold):
    """Report likely duplicate clusters (DOI-exact and fuzzy-title)."""
    store = _load(corpus_path)
    clusters = dedupe_corpus(store.all_records(), fuzzy_threshold=threshold)
    for cluster in clusters:
        click.echo(json.dumps(cluster.to_dict(), sort_keys=True))
    click.echo(f"{len(clusters)} duplicate cluster(s)", err=True)


# -- curate -------------------------------------------------------------------

@main.group()
def curate():
    """Annotate records and run the inclusion gate."""


@curate.command("annotate")
@click.argument("record_id")
@click.option("--file", "ann_file", required=True,
              type=click.Path(exists=True),
              help="JSON file with usage/application/curator keys.")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--curator", default=None)
def curate_annotate(record_id, ann_file, corpus_path, curator):
    """Attach curated usage and application descriptors to a record."""
    store = _load(corpus_path)
    body = json.loads(open(ann_file, encoding="utf-8").read())
    usage = curation.parse_usage(body.get("usage") or body)
    application = None
    if body.get("application") is not None:
        application = curation.parse_application(body["application"])
    record = curation.apply_annotation(
        store, record_id, usage, application=application,
        curator=curator or body.get("curator", "cli"))
    store.save(corpus_path)
    click.echo(f"{record_id}: {record.curation_status.value}")


@curate.command("gate")
@click.argument("record_id")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--dry-run", is_flag=True, help="Decide without applying.")
def curate_gate(record_id, corpus_path, dry_run):
    """Run the operational-use inclusion gate on a record."""
    store = _load(corpus_path)
    decision = curation.inclusion_gate(store, record_id, apply=not dry_run)
    if not dry_run:
        store.save(corpus_path)
    click.echo(json.dumps(decision.to_dict(), sort_keys=True))


@curate.command("validate")
@click.argument("record_id")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
def curate_validate(record_id, corpus_path):
    """Promote an annotated record to Validated."""
    store = _load(corpus_path)
    record = curation.validate_record(store, record_id)
    store.save(corpus_path)
    click.echo(f"{record_id}: {record.curation_status.value}")


@curate.command("qc")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--severity", type=click.Choice(["error", "warning", "info"]),
              default=None)
@click.pass_context
def curate_qc(ctx, corpus_path, severity):
    """Automated consistency checks (alias of `corpus validate`)."""
    ctx.invoke(corpus_validate, corpus_path=corpus_path, severity=severity)


# -- report ---------------------------------------------------------------------

@main.group()
def report():
    """Analytics over the validated corpus."""


def _run_report(corpus_path, name, params, fmt, out_prefix=None):
    store = _load(corpus_path)
    rep = reports.build_report(store, name, params)
    if out_prefix:
        reports.graph_export_files(rep, out_prefix)
        click.echo(f"wrote {out_prefix}.nodes.tsv and {out_prefix}.edges.tsv",
                   err=True)
        return
    sys.stdout.buffer.write(reports.render(rep, fmt))
    sys.stdout.buffer.flush()


def _report_command(name, help_text, extra_options=()):
    def decorator(fn):
        fn = click.option("--filter", "filter_expr", default=None,
                          help="Restrict to records matching this filter.")(fn)
        for opt in reversed(extra_options):
            fn = opt(fn)
        fn = click.option("--format", "fmt",
                          type=click.Choice(["json", "table"]),
                          default="json", show_default=True)(fn)
        fn = click.option("--corpus", "corpus_path", required=True,
                          type=click.Path(exists=True))(fn)
        return report.command(name, help=help_text)(fn)
    return decorator


@_report_command("years", "Yearly publication counts and cumulative curve.",
                 (click.option("--from", "from_year", default=None),
                  click.option("--to", "to_year", default=None)))
def report_years(corpus_path, fmt, filter_expr, from_year, to_year):
    _run_report(corpus_path, "years",
                {"from": from_year, "to": to_year, "filter": filter_expr}, fmt)


@_report_command("dist", "Distribution along one dimension.",
                 (click.option("--dim", default="resource-type",
                               show_default=True),
                  click.option("--counting", default=None,
                               type=click.Choice(["all-links",
                                                  "first-author"]))))
def report_dist(corpus_path, fmt, filter_expr, dim, counting):
    _run_report(corpus_path, "dist",
                {"dim": dim, "counting": counting, "filter": filter_expr}, fmt)


@_report_command("usage-shares", "Share of records per usage flag.")
def report_usage(corpus_path, fmt, filter_expr):
    _run_report(corpus_path, "usage-shares", {"filter": filter_expr}, fmt)


@_report_command("coauthors", "Co-authorship network.",
                 (click.option("--min-docs", "min_docs", default=3,
                               show_default=True),
                  click.option("--out", "out_prefix", default=None,
                               help="Write nodes/edges TSV files instead.")))
def report_coauthors(corpus_path, fmt, filter_expr, min_docs, out_prefix):
    _run_report(corpus_path, "coauthors",
                {"min_docs": str(min_docs), "filter": filter_expr}, fmt,
                out_prefix)


@_report_command("terms", "Most frequent terms with shares.",
                 (click.option("--top", default=50, show_default=True),))
def report_terms(corpus_path, fmt, filter_expr, top):
    _run_report(corpus_path, "terms",
                {"top": str(top), "filter": filter_expr}, fmt)


@_report_command("cooccur", "Term co-occurrence map with clusters.",
                 (click.option("--min-occ", "min_occ", default=5,
                               show_default=True),
                  click.option("--out", "out_prefix", default=None)))
def report_cooccur(corpus_path, fmt, filter_expr, min_occ, out_prefix):
    _run_report(corpus_path, "cooccur",
                {"min_occ": str(min_occ), "filter": filter_expr}, fmt,
                out_prefix)


@_report_command("sankey", "Source->target document flows.",
                 (click.option("--from", "source_dim", default="fos",
                               show_default=True),
                  click.option("--to", "target_dim", default="product",
                               show_default=True),
                  click.option("--normalized", is_flag=True)))
def report_sankey(corpus_path, fmt, filter_expr, source_dim, target_dim,
                  normalized):
    _run_report(corpus_path, "sankey",
                {"from": source_dim, "to": target_dim,
                 "normalized": "true" if normalized else "",
                 "filter": filter_expr}, fmt)


@_report_command("coupled", "Coupled CAD/CAE/FEM tool distribution.")
def report_coupled(corpus_path, fmt, filter_expr):
    _run_report(corpus_path, "coupled", {"filter": filter_expr}, fmt)


@_report_command("field-time", "Relative field mix per year.",
                 (click.option("--from", "from_year", default=2015,
                               show_default=True),
                  click.option("--to", "to_year", default=2025,
                               show_default=True)))
def report_field_time(corpus_path, fmt, filter_expr, from_year, to_year):
    _run_report(corpus_path, "field-time",
                {"from": str(from_year), "to": str(to_year),
                 "filter": filter_expr}, fmt)


# -- export / serve -----------------------------------------------------------------

@main.command("export")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--to", "out_path", required=True, type=click.Path())
@click.option("--format", "fmt",
              type=click.Choice(["line-delimited", "csv"]),
              default="line-delimited", show_default=True)
def export_cmd(corpus_path, out_path, fmt):
    """Write the corpus as a lossless line-delimited file or a flat CSV."""
    store = _load(corpus_path)
    reports.export_corpus(store, out_path, fmt)
    click.echo(f"wrote {out_path}", err=True)


@main.command("serve")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--bind", default=None,
              help="host:port [default: 127.0.0.1:8044 or $LITMON_PORT]")
def serve_cmd(corpus_path, bind):
    """Run the HTTP API for the curation UI."""
    if bind is None:
        bind = f"127.0.0.1:{os.environ.get('LITMON_PORT', '8044')}"
    server = api_mod.serve(bind, corpus_path)
    host, port = server.server_address[:2]
    click.echo(f"serving corpus {corpus_path} on http://{host}:{port}",
               err=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()


def run():
    try:
        main(standalone_mode=True)
    except LitmonError as exc:
        click.echo(f"error [{exc.code}]: {exc.message}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    run()
