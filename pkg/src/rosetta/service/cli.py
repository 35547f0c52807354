"""Command-line client.  Every command is a thin wrapper over the HTTP API.

The server address comes from ``--server`` or the ``ROSETTA_SERVER``
environment variable; ``rosetta serve`` starts a local server.

Value syntax for ``--set LABEL=VALUE``:

* ``http(s)://...``      -- a resource IRI
* ``http(s)://...|text`` -- a resource IRI with a display label
* anything else          -- a literal (datatype comes from the pattern)
"""

from __future__ import annotations

import json
import sys

import click
import httpx

EXIT_CODES = {
    "ValidationError": 3,
    "NotFound": 4,
    "ConstraintViolation": 5,
    "Forbidden": 6,
    "Gone": 7,
    "Conflict": 8,
    "SpecError": 9,
    "UnmappedEntityError": 10,
}


class ApiFailure(click.ClickException):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.exit_code = EXIT_CODES.get(code, 1)


def _request(ctx: click.Context, method: str, path: str, **kwargs) -> httpx.Response:
    server = ctx.obj["server"].rstrip("/")
    try:
        response = httpx.request(method, server + path, timeout=30.0, **kwargs)
    except httpx.HTTPError as err:
        raise click.ClickException(f"cannot reach {server}: {err}")
    if response.status_code >= 400:
        try:
            error = response.json()["error"]
        except (ValueError, KeyError):
            raise click.ClickException(
                f"server returned {response.status_code}: {response.text[:200]}"
            )
        raise ApiFailure(error.get("code", "Error"), error.get("message", ""))
    return response


def _parse_value(raw: str) -> dict:
    if raw.startswith(("http://", "https://", "urn:")):
        iri, sep, label = raw.partition("|")
        doc = {"iri": iri}
        if sep and label:
            doc["label"] = label
        return doc
    return {"lexical": raw}


def _parse_sets(pairs: tuple[str, ...]) -> dict[str, list[dict]]:
    values: dict[str, list[dict]] = {}
    for pair in pairs:
        label, sep, raw = pair.partition("=")
        if not sep:
            raise click.BadParameter(f"{pair!r} is not LABEL=VALUE")
        values.setdefault(label, []).append(_parse_value(raw))
    return values


def _echo_json(doc) -> None:
    click.echo(json.dumps(doc, indent=2, ensure_ascii=False))


@click.group()
@click.option(
    "--server",
    envvar="ROSETTA_SERVER",
    default="http://127.0.0.1:8000",
    show_default=True,
    help="Base URL of the statement server.",
)
@click.pass_context
def main(ctx: click.Context, server: str) -> None:
    """Work with machine-interpretable statements over HTTP."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


# -- statement types ----------------------------------------------------------


@main.group("type")
def type_group() -> None:
    """Manage statement types."""


@type_group.command("create")
@click.option("--file", "-f", "path", type=click.File(), required=True,
              help="YAML or JSON draft document.")
@click.pass_context
def type_create(ctx: click.Context, path) -> None:
    import yaml

    draft = yaml.safe_load(path.read())
    doc = _request(ctx, "POST", "/types", json=draft).json()
    click.echo(doc["id"])


@type_group.command("list")
@click.pass_context
def type_list(ctx: click.Context) -> None:
    for item in _request(ctx, "GET", "/types").json()["types"]:
        click.echo(f"{item['label']}\t{item['id']}")


@type_group.command("show")
@click.argument("type_id")
@click.pass_context
def type_show(ctx: click.Context, type_id: str) -> None:
    _echo_json(_request(ctx, "GET", f"/types/{type_id}").json())


@type_group.command("preview")
@click.argument("type_id")
@click.option("--fill", multiple=True, help="LABEL=text, repeatable.")
@click.pass_context
def type_preview(ctx: click.Context, type_id: str, fill: tuple[str, ...]) -> None:
    params = [("fill", item) for item in fill]
    click.echo(_request(ctx, "GET", f"/types/{type_id}/preview", params=params).json()["text"])


@type_group.command("reorder")
@click.argument("type_id")
@click.argument("order", nargs=-1, type=int, required=True)
@click.pass_context
def type_reorder(ctx: click.Context, type_id: str, order: tuple[int, ...]) -> None:
    doc = _request(ctx, "POST", f"/types/{type_id}/reorder", json={"order": list(order)}).json()
    click.echo(f"{doc['id']} v{doc['version']}")


# -- statements ---------------------------------------------------------------


@main.group("stmt")
def stmt_group() -> None:
    """Create, edit and inspect statements."""


@stmt_group.command("add")
@click.option("--type", "-t", "type_key", required=True, help="Statement type (label or IRI).")
@click.option("--subject", default=None,
              help="Value for the subject position (same syntax as --set values).")
@click.option("--creator", envvar="ROSETTA_USER", default="urn:rosetta:cli",
              help="IRI of the creating agent.")
@click.option("--set", "-s", "sets", multiple=True, help="LABEL=VALUE, repeatable.")
@click.option("--negate", is_flag=True, default=False)
@click.option("--confidence", default=None, help="Confidence level.")
@click.option("--context", "contexts", multiple=True, help="Context statement IRI.")
@click.option("--author", default=None)
@click.option("--curator", default=None)
@click.option("--extraction-method", default=None)
@click.option("--imported-from", default=None)
@click.option("--license", "license_", default=None)
@click.option("--immutable", is_flag=True, default=False)
@click.pass_context
def stmt_add(ctx, type_key, subject, creator, sets, negate, confidence, contexts,
             author, curator, extraction_method, imported_from, license_, immutable):
    values = _parse_sets(sets)
    if subject is not None:
        pattern = _request(ctx, "GET", f"/types/{type_key}").json()
        label = pattern["subject"]["thematic_label"]
        values.setdefault(label, []).append(_parse_value(subject))
    if not values:
        raise click.UsageError("provide position values via --subject/--set")
    body = {
        "type": type_key,
        "creator": creator,
        "values": values,
        "negated": negate,
        "modifiable": not immutable,
        "context_refs": list(contexts),
    }
    if confidence is not None:
        body["confidence_level"] = confidence
    for key, value in (("author", author), ("curator", curator),
                       ("extraction_method", extraction_method),
                       ("imported_from", imported_from), ("license", license_)):
        if value is not None:
            body[key] = value
    doc = _request(ctx, "POST", "/statements", json=body).json()
    click.echo(doc["id"])
    click.echo(doc["render"]["text"])


@stmt_group.command("update")
@click.argument("statement_id")
@click.option("--editor", envvar="ROSETTA_USER", default="urn:rosetta:cli",
              help="IRI of the editing agent.")
@click.option("--set", "-s", "sets", multiple=True, required=True)
@click.pass_context
def stmt_update(ctx, statement_id, editor, sets):
    body = {"editor": editor, "values": _parse_sets(sets)}
    doc = _request(ctx, "PUT", f"/statements/{statement_id}", json=body).json()
    click.echo(f"v{doc['version']['number']}")
    click.echo(doc["render"]["text"])


@stmt_group.command("show")
@click.argument("statement_id")
@click.option("--version", type=int, default=None)
@click.option("--include-deleted", is_flag=True, default=False)
@click.pass_context
def stmt_show(ctx, statement_id, version, include_deleted):
    params: dict = {}
    if version is not None:
        params["version"] = version
    if include_deleted:
        params["include_deleted"] = "true"
    _echo_json(_request(ctx, "GET", f"/statements/{statement_id}", params=params).json())


@stmt_group.command("render")
@click.argument("statement_id")
@click.option("--version", type=int, default=None)
@click.pass_context
def stmt_render(ctx, statement_id, version):
    params = {"version": version} if version is not None else {}
    click.echo(_request(ctx, "GET", f"/statements/{statement_id}/render",
                        params=params).json()["text"])


@stmt_group.command("history")
@click.argument("statement_id")
@click.pass_context
def stmt_history(ctx, statement_id):
    events = _request(ctx, "GET", f"/statements/{statement_id}/history").json()["history"]
    for event in events:
        line = f"v{event['version']}  {event['kind']:8s}  {event['at']}  {event['by']}"
        click.echo(line)
        for change in event["changes"]:
            click.echo(f"    {change['thematic_label']}: {change['change']}")


@stmt_group.command("delete")
@click.argument("statement_id")
@click.option("--by", envvar="ROSETTA_USER", default="urn:rosetta:cli",
              help="IRI of the deleting agent.")
@click.pass_context
def stmt_delete(ctx, statement_id, by):
    doc = _request(ctx, "DELETE", f"/statements/{statement_id}", params={"by": by}).json()
    click.echo(f"deleted at {doc['deleted_at']}")


@stmt_group.command("list")
@click.option("--type", "-t", "type_key", default=None)
@click.option("--include-deleted", is_flag=True, default=False)
@click.pass_context
def stmt_list(ctx, type_key, include_deleted):
    params: dict = {}
    if type_key:
        params["type"] = type_key
    if include_deleted:
        params["include_deleted"] = "true"
    for doc in _request(ctx, "GET", "/statements", params=params).json()["statements"]:
        text = doc["render"]["text"] if "render" in doc else "(deleted)"
        click.echo(f"{doc['id']}\t{text}")


@stmt_group.command("mindmap")
@click.argument("statement_id")
@click.option("--dot", is_flag=True, default=False, help="Emit Graphviz DOT.")
@click.pass_context
def stmt_mindmap(ctx, statement_id, dot):
    fmt = "dot" if dot else "json"
    response = _request(ctx, "GET", f"/statements/{statement_id}/mindmap",
                        params={"format": fmt})
    click.echo(response.text if dot else json.dumps(response.json(), indent=2))


# -- exports ------------------------------------------------------------------


@main.command("export")
@click.option("--format", "fmt", type=click.Choice(["trig", "nquads"]), default="trig",
              show_default=True)
@click.option("--form", type=click.Choice(["full", "light"]), default="full",
              show_default=True)
@click.option("--output", "-o", type=click.File("w"), default="-")
@click.pass_context
def export(ctx, fmt, form, output):
    response = _request(ctx, "GET", "/export", params={"format": fmt, "form": form})
    output.write(response.text)


@main.command("nanopub")
@click.argument("statement_id")
@click.option("--version", type=int, default=None)
@click.option("--hashed", is_flag=True, default=False)
@click.option("--output", "-o", type=click.File("w"), default="-")
@click.pass_context
def nanopub(ctx, statement_id, version, hashed, output):
    params: dict = {"hashed": "true"} if hashed else {}
    if version is not None:
        params["version"] = version
    doc = _request(ctx, "GET", f"/statements/{statement_id}/nanopub", params=params).json()
    output.write(doc["content"])


# -- search -------------------------------------------------------------------


@main.command("search")
@click.argument("term")
@click.pass_context
def search(ctx, term):
    groups = _request(ctx, "GET", "/search", params={"term": term}).json()["groups"]
    if not groups:
        click.echo("no matches")
        return
    for group in groups:
        click.echo(group["statement_type"])
        for doc in group["statements"]:
            click.echo(f"  {doc['id']}\t{doc['render']['text']}")


@main.command("facet")
@click.option("--type", "-t", "type_key", required=True,
              help="Statement type (label or IRI).")
@click.option("--filter", "-f", "wheres", multiple=True,
              help="LABEL=IRI (one-of filter), repeatable.")
@click.option("--range", "ranges", multiple=True, help="LABEL=MIN:MAX (numeric range).")
@click.option("--text", "texts", multiple=True, help="LABEL=substring.")
@click.pass_context
def facet(ctx, type_key, wheres, ranges, texts):
    filters: dict[str, dict] = {}
    for pair in wheres:
        label, sep, value = pair.partition("=")
        if not sep:
            raise click.BadParameter(f"{pair!r} is not LABEL=IRI")
        spec = filters.setdefault(label, {"one_of": []})
        spec.setdefault("one_of", []).append(value)
    for pair in ranges:
        label, sep, value = pair.partition("=")
        low, sep2, high = value.partition(":")
        if not sep or not sep2:
            raise click.BadParameter(f"{pair!r} is not LABEL=MIN:MAX")
        filters[label] = {"min": low or None, "max": high or None}
    for pair in texts:
        label, sep, value = pair.partition("=")
        if not sep:
            raise click.BadParameter(f"{pair!r} is not LABEL=substring")
        filters[label] = {"text": value}
    body = {"statement_type": type_key, "filters": filters}
    result = _request(ctx, "POST", "/search/faceted", json=body).json()
    for doc in result["statements"]:
        click.echo(f"{doc['id']}\t{doc['render']['text']}")
    for label, values in sorted(result["facets"].items()):
        if not values:
            continue
        rendered = ", ".join(f"{v['label']} ({v['count']})" for v in values)
        click.echo(f"# {label}: {rendered}")


# -- crosswalks ---------------------------------------------------------------


@main.group("crosswalk")
def crosswalk_group() -> None:
    """Translate statements into other graph models."""


@crosswalk_group.command("list")
@click.pass_context
def crosswalk_list(ctx):
    for item in _request(ctx, "GET", "/crosswalks").json()["crosswalks"]:
        click.echo(f"{item['id']}\t{item['target']}\t{item['source_pattern']}")


@crosswalk_group.command("apply")
@click.argument("args", nargs=-1, required=True)
@click.option("--version", type=int, default=None)
@click.option("--spec", "spec_path", type=click.File(), default=None,
              help="Crosswalk spec file to apply instead of a shipped one.")
@click.pass_context
def crosswalk_apply(ctx, args, version, spec_path):
    """Apply a crosswalk: NAME STATEMENT_ID, or --spec FILE STATEMENT_ID."""
    if spec_path is not None:
        if len(args) != 1:
            raise click.UsageError("with --spec, pass exactly one STATEMENT_ID")
        name, statement_id = "custom", args[0]
    else:
        if len(args) != 2:
            raise click.UsageError("pass NAME STATEMENT_ID, or --spec FILE STATEMENT_ID")
        name, statement_id = args
    body: dict = {"statement": statement_id}
    if version is not None:
        body["version"] = version
    if spec_path is not None:
        body["spec_text"] = spec_path.read()
    response = _request(ctx, "POST", f"/crosswalks/{name}/apply", json=body)
    content_type = response.headers.get("content-type", "")
    click.echo(response.text if "csv" in content_type else response.json()["content"], nl=False)
    click.echo()


# -- labels / server ----------------------------------------------------------


@main.command("label")
@click.argument("iri")
@click.argument("text")
@click.pass_context
def label(ctx, iri, text):
    _request(ctx, "POST", "/labels", json={"labels": {iri: text}})
    click.echo("ok")


@main.command("serve")
@click.option("--addr", envvar="ROSETTA_ADDR", default="127.0.0.1:8000", show_default=True)
@click.option("--data", envvar="ROSETTA_DATA", default=None,
              help="Directory for the append-only statement log.")
@click.option("--base-iri", envvar="ROSETTA_BASE_IRI", default=None)
@click.option("--config", "config_path", type=click.File(), default=None,
              help="YAML config with addr, data, base_iri and prefixes; "
                   "flags override file values.")
def serve(addr, data, base_iri, config_path):
    """Run the HTTP server."""
    import uvicorn
    import yaml

    from .app import create_app

    prefixes = None
    if config_path is not None:
        config = yaml.safe_load(config_path.read()) or {}
        unknown = set(config) - {"addr", "data", "base_iri", "prefixes"}
        if unknown:
            raise click.UsageError(f"unknown config keys: {sorted(unknown)}")
        if addr == "127.0.0.1:8000" and "addr" in config:
            addr = str(config["addr"])
        data = data if data is not None else config.get("data")
        base_iri = base_iri or config.get("base_iri")
        prefixes = config.get("prefixes")

    host, _, port = addr.rpartition(":")
    app = create_app(data_dir=data, base_iri=base_iri, extra_prefixes=prefixes)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")


if __name__ == "__main__":
    main()
