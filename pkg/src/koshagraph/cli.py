"""Command-line front door; every subcommand wraps one workspace operation.

Machine-readable JSON goes to stdout (identical bytes to the HTTP payloads);
--pretty renders small human tables instead.  Errors exit nonzero with a
structured JSON object on stderr.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from .errors import KoshagraphError
from .service import ServiceConfig, default_users_path, serve
from .workspace import Workspace, dumps


def _workspace(ctx: click.Context) -> Workspace:
    return Workspace(ctx.obj["data_dir"], ctx.obj["ontology"], ctx.obj["templates"])


def _emit(payload: dict, pretty: bool, table=None) -> None:
    if pretty and table is not None:
        click.echo(table(payload))
    else:
        click.echo(dumps(payload))


def _fail(exc: KoshagraphError) -> None:
    click.echo(dumps({"error": exc.payload()}), err=True)
    sys.exit(1)


@click.group()
@click.option("--data-dir", envvar="DATA_DIR", default="./data", show_default=True,
              help="Directory holding corpus/annotations/graph state.")
@click.option("--ontology", type=click.Path(), default=None, help="Ontology file override.")
@click.option("--templates", type=click.Path(), default=None, help="Template file override.")
@click.pass_context
def main(ctx, data_dir, ontology, templates):
    ctx.obj = {"data_dir": Path(data_dir), "ontology": ontology, "templates": templates}


@main.command("import-corpus")
@click.argument("path", type=click.Path(exists=True))
@click.option("--pretty", is_flag=True)
@click.pass_context
def import_corpus(ctx, path, pretty):
    try:
        payload = _workspace(ctx).import_corpus(path)
    except KoshagraphError as exc:
        _fail(exc)
    _emit(payload, pretty,
          lambda p: f"imported {p['lines']} lines / {p['verses']} verses / {p['chapters']} chapter(s)")


@main.command("import-annotations")
@click.argument("path", type=click.Path(exists=True))
@click.option("--pretty", is_flag=True)
@click.pass_context
def import_annotations(ctx, path, pretty):
    try:
        payload = _workspace(ctx).import_annotations(path)
    except KoshagraphError as exc:
        _fail(exc)
    _emit(payload, pretty, lambda p: f"replayed {p['annotations']} annotations")


@main.command("export-graph")
@click.option("--out", type=click.Path(), default=None, help="Write to a file instead of stdout.")
@click.pass_context
def export_graph(ctx, out):
    try:
        payload = _workspace(ctx).export_payload()
    except KoshagraphError as exc:
        _fail(exc)
    text = dumps(payload)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        click.echo(dumps({"written": out}))
    else:
        click.echo(text)


@main.command("curate")
@click.option("--pass", "pass_name", type=click.Choice(["conflicts", "infer", "canonicalize"]),
              required=True)
@click.option("--dry-run", is_flag=True)
@click.option("--pretty", is_flag=True)
@click.pass_context
def curate(ctx, pass_name, dry_run, pretty):
    try:
        payload = _workspace(ctx).curate(pass_name, dry_run)
    except KoshagraphError as exc:
        _fail(exc)

    def table(p):
        lines = [f"pass: {p['pass']}{' (dry run)' if p['dry_run'] else ''}"]
        for c in p.get("components", []):
            lines.append(f"  component[{len(c['members'])}] canonical={c['canonical_lemma']}")
        for key in ("edges_rewired", "edges_merged", "self_loops_dropped", "unresolved_dangling"):
            if key in p:
                lines.append(f"  {key}: {p[key]}")
        for c in p.get("conflicts", []):
            types = ", ".join(t["entity_type"] for t in c["claimed_types"])
            lines.append(f"  conflict: {c['lemma']} ({types})")
        for i in p.get("inferred_entities", []):
            lines.append(f"  inferred: {i['lemma']} as {i['entity_type']}")
        return "\n".join(lines)

    _emit(payload, pretty, table)


@main.command("canonicalize")
@click.option("--dry-run", is_flag=True)
@click.option("--pretty", is_flag=True)
@click.pass_context
def canonicalize(ctx, dry_run, pretty):
    ctx.invoke(curate, pass_name="canonicalize", dry_run=dry_run, pretty=pretty)


@main.command("query")
@click.argument("template_id", required=False)
@click.argument("args", nargs=-1)
@click.option("--raw", default=None, help="Raw graph-query text instead of a template.")
@click.option("--pretty", is_flag=True)
@click.pass_context
def query(ctx, template_id, args, raw, pretty):
    try:
        payload = _workspace(ctx).query_payload(template_id, list(args), raw)
    except KoshagraphError as exc:
        _fail(exc)

    def table(p):
        header = p["metadata"].get("question_english") or p["metadata"].get("gql", "")
        lines = [header, "-" * max(len(header), 1)]
        for row in p["rows"]:
            cells = []
            for col in p["columns"]:
                b = row[col]
                if b["kind"] == "node":
                    cells.append(f"{b['lemma']} [{b['entity_type']}]")
                else:
                    detail = f" ({b['detail']})" if b.get("detail") else ""
                    cells.append(f"{b['relation_type']}{detail}")
            lines.append(" | ".join(cells))
        lines.append(f"({p['row_count']} row(s){', truncated' if p['truncated'] else ''})")
        return "\n".join(lines)

    _emit(payload, pretty, table)


@main.command("suggest")
@click.argument("prefix")
@click.option("--pretty", is_flag=True)
@click.pass_context
def suggest(ctx, prefix, pretty):
    try:
        payload = _workspace(ctx).suggest_payload(prefix)
    except KoshagraphError as exc:
        _fail(exc)
    _emit(payload, pretty, lambda p: "\n".join(p["suggestions"]) or "(no suggestions)")


@main.command("stats")
@click.option("--pretty", is_flag=True)
@click.pass_context
def stats(ctx, pretty):
    try:
        payload = _workspace(ctx).stats_payload()
    except KoshagraphError as exc:
        _fail(exc)

    def table(p):
        lines = [f"nodes: {p['nodes']}  edges: {p['edges']}",
                 f"corpus: {p['corpus']['lines']} lines / {p['corpus']['verses']} verses"]
        for name, count in p["by_entity_type"].items():
            lines.append(f"  {name}: {count}")
        for name, count in p["by_relation_type"].items():
            lines.append(f"  {name}: {count}")
        return "\n".join(lines)

    _emit(payload, pretty, table)


@main.command("load-fixtures")
@click.pass_context
def load_fixtures(ctx):
    """Seed the data dir with the shipped corpus and demo annotations."""
    try:
        ws = _workspace(ctx)
        if len(ws.corpus):
            raise KoshagraphError("data dir already holds a corpus")
        ws.load_fixtures()
        payload = ws.stats_payload()
    except KoshagraphError as exc:
        _fail(exc)
    click.echo(dumps(payload))


@main.command("serve")
@click.option("--port", envvar="PORT", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--users-file", envvar="USERS_FILE", type=click.Path(), default=None)
@click.option("--no-fixtures", is_flag=True, help="Do not seed an empty data dir.")
@click.pass_context
def serve_cmd(ctx, port, host, users_file, no_fixtures):
    config = ServiceConfig(
        data_dir=ctx.obj["data_dir"],
        users_file=Path(users_file) if users_file else default_users_path(),
        ontology_path=ctx.obj["ontology"],
        templates_path=ctx.obj["templates"],
        port=port,
        host=host,
        load_fixtures=not no_fixtures,
    )
    try:
        serve(config)
    except KoshagraphError as exc:
        _fail(exc)


if __name__ == "__main__":
    main(auto_envvar_prefix="KOSHAGRAPH")
