"""Command-line interface.

One binary covers validation, the three report paths (geo, network, themes),
raw graph export, synthetic corpus generation, and the HTTP service.  Report
commands write delimited tables plus rendered figures into an output
directory; export files are byte-deterministic for a fixed corpus and seed.
"""
from __future__ import annotations

import csv
import json
import os
import sys

import click

from .corpus import (
    PeriodFilter,
    drop_invalid,
    load_corpus,
    save_corpus,
    validate_corpus,
)
from .fixtures import generate_planted_corpus, load_spec
from .geo import (
    ROLE_STUDIED,
    ROLES,
    build_contingency,
    classify_countries,
    country_activity,
    representation_residuals,
    residual_label,
    trim_contingency,
)
from .network import (
    FORMATS,
    SCOPE_SEED,
    SCOPES,
    build_cooccurrence,
    cut_level,
    detect_communities,
    export_graph,
    layout,
)
from .report import (
    save_activity_figure,
    save_clouds_figure,
    save_dendrogram_figure,
    save_network_figure,
    save_residual_figure,
)
from .service import ServiceConfig, serve, themes_payload
from .text import bundled_gazetteer, bundled_lexicons, load_gazetteer, load_lexicons
from .themes import extract_themes


@click.group()
@click.option("--corpus", "corpus_path", type=click.Path(dir_okay=False), default=None,
              help="Corpus file (JSON lines).")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed driving every randomized analysis.")
@click.option("--lexicons", "lexicons_path", type=click.Path(dir_okay=False), default=None,
              help="Lexicon file; bundled lexicons when omitted.")
@click.option("--gazetteer", "gazetteer_path", type=click.Path(dir_okay=False), default=None,
              help="Gazetteer file; bundled gazetteer when omitted.")
@click.option("--drop-invalid", is_flag=True,
              help="Drop records failing validation instead of refusing to run.")
@click.option("--format", "export_format", type=click.Choice(FORMATS), default="json",
              show_default=True, help="Graph export format.")
@click.pass_context
def main(ctx, corpus_path, seed, lexicons_path, gazetteer_path, drop_invalid, export_format):
    """Corpus analysis: country activity and classes, keyword networks, themes."""
    ctx.obj = {
        "corpus_path": corpus_path,
        "seed": seed,
        "lexicons_path": lexicons_path,
        "gazetteer_path": gazetteer_path,
        "drop_invalid": drop_invalid,
        "format": export_format,
    }


def _corpus_path(ctx) -> str:
    path = ctx.obj["corpus_path"]
    if path is None:
        raise click.UsageError("--corpus is required for this command")
    return path


def _load(ctx):
    try:
        corpus = load_corpus(_corpus_path(ctx))
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))
    report = validate_corpus(corpus)
    if report:
        if ctx.obj["drop_invalid"]:
            corpus = drop_invalid(corpus, report)
        else:
            first = report[0]
            raise click.ClickException(
                f"corpus has {len(report)} validation violation(s) "
                f"(first: {first.record_id}/{first.rule}); rerun with "
                "--drop-invalid or fix the file (see the validate command)"
            )
    return corpus


def _lexicons(ctx):
    path = ctx.obj["lexicons_path"]
    try:
        return load_lexicons(path) if path else bundled_lexicons()
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))


def _gazetteer(ctx):
    path = ctx.obj["gazetteer_path"]
    try:
        return load_gazetteer(path) if path else bundled_gazetteer()
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


@main.command()
@click.pass_context
def validate(ctx):
    """Report record rule violations, one tab-separated line each.

    Exits non-zero when violations exist, unless --drop-invalid declares
    them tolerable.
    """
    try:
        corpus = load_corpus(_corpus_path(ctx))
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))
    report = validate_corpus(corpus)
    for violation in report:
        click.echo(f"{violation.record_id}\t{violation.rule}\t{violation.detail}")
    click.echo(f"{len(corpus)} record(s), {len(report)} violation(s)")
    if report and not ctx.obj["drop_invalid"]:
        sys.exit(1)


@main.command()
@click.option("--from", "from_year", type=int, default=None,
              help="Period start; corpus minimum when omitted.")
@click.option("--to", "to_year", type=int, default=None,
              help="Period end; corpus maximum when omitted.")
@click.option("--k", type=int, default=2, show_default=True,
              help="Number of country classes.")
@click.option("--role", type=click.Choice(ROLES), default=ROLE_STUDIED, show_default=True,
              help="Which country attachment feeds the contingency table.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True,
              help="Report directory (created if missing).")
@click.pass_context
def geo(ctx, from_year, to_year, k, role, out_dir):
    """Country activity, representation residuals, and classification."""
    corpus = _load(ctx)
    gazetteer = _gazetteer(ctx)
    lexicons = _lexicons(ctx)
    years = corpus.year_range()
    if years is None:
        raise click.ClickException("corpus is empty")
    os.makedirs(out_dir, exist_ok=True)
    try:
        period = PeriodFilter(
            from_year=from_year if from_year is not None else years[0],
            to_year=to_year if to_year is not None else years[1],
        )
        activity = country_activity(corpus, period, gazetteer)
        table = build_contingency(corpus, lexicons, role, gazetteer)
        trimmed, dropped_rows, dropped_cols = trim_contingency(table)
        if not trimmed.rows or not trimmed.cols:
            raise click.ClickException("contingency table has no non-zero rows or columns")
        classification = classify_countries(trimmed, k)
        residuals = representation_residuals(trimmed)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    written = []
    path = os.path.join(out_dir, "activity.csv")
    _write_csv(path, ["country", "authored", "studied"], [
        [code, activity.authored.get(code, 0), activity.studied.get(code, 0)]
        for code in activity.countries()
    ])
    written.append(path)
    path = os.path.join(out_dir, "classes.csv")
    _write_csv(path, ["country", "class"], [
        [code, classification.assignment[code]] for code in trimmed.rows
    ])
    written.append(path)
    path = os.path.join(out_dir, "residuals.csv")
    _write_csv(path, ["country", *trimmed.cols], [
        [trimmed.rows[i], *(repr(float(v)) for v in residuals[i])]
        for i in range(len(trimmed.rows))
    ])
    written.append(path)
    path = os.path.join(out_dir, "labels.csv")
    _write_csv(path, ["country", *trimmed.cols], [
        [trimmed.rows[i], *(residual_label(float(v)) for v in residuals[i])]
        for i in range(len(trimmed.rows))
    ])
    written.append(path)
    written.append(save_activity_figure(activity, os.path.join(out_dir, "activity.png")))
    written.append(save_residual_figure(trimmed, residuals, os.path.join(out_dir, "residuals.png")))
    written.append(save_dendrogram_figure(classification, os.path.join(out_dir, "dendrogram.png")))
    if dropped_rows:
        click.echo(f"excluded countries without counts: {', '.join(dropped_rows)}")
    if dropped_cols:
        click.echo(f"excluded columns without counts: {', '.join(dropped_cols)}")
    for item in written:
        click.echo(item)


def _build_network(ctx, scope, min_weight, level, include_isolated=False):
    corpus = _load(ctx)
    seed = ctx.obj["seed"]
    try:
        graph = build_cooccurrence(
            corpus, scope=scope, min_weight=min_weight, include_isolated=include_isolated
        )
        if not graph.nodes:
            raise click.ClickException(
                "co-occurrence graph is empty; lower --min-weight or check keywords"
            )
        hierarchy = detect_communities(graph, seed)
        chosen = hierarchy.max_level if level is None else min(level, hierarchy.max_level)
        partition = cut_level(hierarchy, chosen)
        positions = layout(graph, seed)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    return graph, hierarchy, chosen, partition, positions


_NETWORK_OPTIONS = [
    click.option("--scope", type=click.Choice(SCOPES), default=SCOPE_SEED,
                 show_default=True, help="Which origin classes contribute documents."),
    click.option("--min-weight", type=int, default=1, show_default=True,
                 help="Drop edges lighter than this."),
    click.option("--level", type=int, default=None,
                 help="Hierarchy level (0 = finest); coarsest when omitted."),
]


def _with_network_options(command):
    for option in reversed(_NETWORK_OPTIONS):
        command = option(command)
    return command


@main.command()
@_with_network_options
@click.option("--include-isolated", is_flag=True,
              help="Keep keywords that end up without any edge.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True,
              help="Report directory (created if missing).")
@click.pass_context
def network(ctx, scope, min_weight, level, include_isolated, out_dir):
    """Keyword co-occurrence report: export file, node table, figure."""
    graph, hierarchy, chosen, partition, positions = _build_network(
        ctx, scope, min_weight, level, include_isolated
    )
    os.makedirs(out_dir, exist_ok=True)
    fmt = ctx.obj["format"]
    written = []
    path = os.path.join(out_dir, f"graph.{fmt}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(export_graph(graph, partition, positions, format=fmt))
    written.append(path)
    path = os.path.join(out_dir, "nodes.csv")
    _write_csv(path, ["keyword", "frequency", "community", "x", "y"], [
        [u, graph.nodes[u], partition[u], repr(positions[u][0]), repr(positions[u][1])]
        for u in sorted(graph.nodes)
    ])
    written.append(path)
    written.append(save_network_figure(graph, partition, positions,
                                       os.path.join(out_dir, "network.png")))
    click.echo(
        f"{graph.n_nodes} nodes, {graph.n_edges} edges; "
        f"level {chosen}/{hierarchy.max_level}, "
        f"{len(set(partition.values()))} communities, "
        f"Q={hierarchy.modularity[chosen]:.4f}"
    )
    for item in written:
        click.echo(item)


@main.command()
@_with_network_options
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Export file; stdout when omitted.")
@click.pass_context
def export(ctx, scope, min_weight, level, out_path):
    """Write the network export document and nothing else."""
    graph, _hierarchy, _chosen, partition, positions = _build_network(
        ctx, scope, min_weight, level
    )
    document = export_graph(graph, partition, positions, format=ctx.obj["format"])
    if out_path is None:
        click.echo(document, nl=False)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(document)
        click.echo(out_path)


@main.command()
@click.option("--k", type=int, default=10, show_default=True, help="Number of themes.")
@click.option("--top", "top_n", type=int, default=50, show_default=True,
              help="Terms kept per theme.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True,
              help="Report directory (created if missing).")
@click.pass_context
def themes(ctx, k, top_n, out_dir):
    """Theme extraction report: JSON export, term table, cloud grid."""
    corpus = _load(ctx)
    try:
        model = extract_themes(corpus, k, seed=ctx.obj["seed"])
    except ValueError as exc:
        raise click.ClickException(str(exc))
    os.makedirs(out_dir, exist_ok=True)
    written = []
    path = os.path.join(out_dir, "themes.json")
    payload = themes_payload(model, top_n)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n")
    written.append(path)
    path = os.path.join(out_dir, "themes.csv")
    _write_csv(path, ["theme", "doc_count", "color_rank", "term", "frequency", "size"], [
        [entry["id"], entry["doc_count"], entry["color_rank"],
         term["term"], term["frequency"], repr(term["size"])]
        for entry in payload["themes"]
        for term in entry["top_terms"]
    ])
    written.append(path)
    written.append(save_clouds_figure(model, os.path.join(out_dir, "clouds.png")))
    for item in written:
        click.echo(item)


@main.command("serve")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--cache-max", "cache_max", type=int, default=None,
              help="Response cache entry cap; unbounded when omitted.")
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False), default=None,
              help="Static bundle to mount at /ui.")
@click.pass_context
def serve_command(ctx, port, host, cache_max, ui_dir):
    """Run the HTTP analysis service (BIBLIONET_PORT overrides --port)."""
    config = ServiceConfig(
        corpus_path=_corpus_path(ctx),
        port=port,
        seed=ctx.obj["seed"],
        lexicons_path=ctx.obj["lexicons_path"],
        gazetteer_path=ctx.obj["gazetteer_path"],
        drop_invalid=ctx.obj["drop_invalid"],
        cache_max_entries=cache_max,
        host=host,
        ui_dir=ui_dir,
    )
    try:
        serve(config)
    except ValueError as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.option("--spec", "spec_path", type=click.Path(dir_okay=False), required=True,
              help="JSON generation spec.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True,
              help="Corpus file to write.")
def fixtures(spec_path, out_path):
    """Generate a synthetic corpus with planted structure."""
    try:
        spec = load_spec(spec_path)
        planted = generate_planted_corpus(spec)
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))
    save_corpus(planted.corpus, out_path)
    click.echo(f"{len(planted.corpus)} record(s) -> {out_path}")


if __name__ == "__main__":
    main()
