"""HTTP API contract tests plus an end-to-end CLI run against a live server."""

import socket
import subprocess
import sys
import time

import pytest
from fastapi.testclient import TestClient

from rosetta.rdfmodel import parse
from rosetta.service import create_app
from rosetta.store import Store

from conftest import iri_for

ORCID = "https://orcid.org/0000-0001-0000-0001"


@pytest.fixture()
def client():
    return TestClient(create_app(store=Store()))


def measurement_body(**overrides):
    body = {
        "type": "measurement",
        "creator": ORCID,
        "values": {
            "OBJECT": [{"iri": "https://example.org/entity/orange1", "label": "orange"}],
            "QUALITY": [{"iri": iri_for("Weight"), "label": "Weight"}],
            "MAIN_VALUE": [{"lexical": "153.6"}],
            "UNIT": [{"iri": iri_for("gram"), "label": "gram"}],
        },
    }
    body.update(overrides)
    return body


def test_builtin_types_are_listed(client):
    labels = [t["label"] for t in client.get("/types").json()["types"]]
    assert "measurement" in labels
    assert "travel" in labels


def test_create_statement_returns_rendered_sentence(client):
    response = client.post("/statements", json=measurement_body())
    assert response.status_code == 201
    doc = response.json()
    assert doc["render"]["text"] == "orange has a Weight of 153.6 gram"
    assert doc["latest_version"] == 1
    assert doc["metadata"]["creator"] == ORCID
    spans = {s["thematic_label"]: (s["start"], s["end"]) for s in doc["render"]["slot_spans"]}
    assert doc["render"]["text"][slice(*spans["OBJECT"])] == "orange"


def test_get_statement_by_tail_segment(client):
    created = client.post("/statements", json=measurement_body()).json()
    tail = created["id"].rsplit("/", 1)[-1]
    fetched = client.get(f"/statements/{tail}")
    assert fetched.status_code == 200
    assert fetched.json()["id"] == created["id"]


def test_update_appends_version_and_preserves_history(client):
    created = client.post("/statements", json=measurement_body()).json()
    tail = created["id"].rsplit("/", 1)[-1]
    body = measurement_body()
    body["values"]["MAIN_VALUE"] = [{"lexical": "160.2"}]
    updated = client.put(
        f"/statements/{tail}",
        json={"editor": "https://orcid.org/9", "values": body["values"]},
    )
    assert updated.status_code == 200
    assert updated.json()["version"]["number"] == 2
    assert "160.2" in updated.json()["render"]["text"]

    history = client.get(f"/statements/{tail}/history").json()["history"]
    assert [e["kind"] for e in history] == ["created", "updated"]
    assert history[1]["changes"] == [
        {"thematic_label": "MAIN_VALUE", "change": "modified"}
    ]

    v1 = client.get(f"/statements/{tail}", params={"version": 1}).json()
    assert v1["version"]["values"]["MAIN_VALUE"][0]["lexical"] == "153.6"


def test_delete_then_get_is_410_with_provenance(client):
    created = client.post("/statements", json=measurement_body()).json()
    tail = created["id"].rsplit("/", 1)[-1]
    deleted = client.delete(f"/statements/{tail}", params={"by": "https://orcid.org/9"})
    assert deleted.status_code == 200

    response = client.get(f"/statements/{tail}")
    assert response.status_code == 410
    error = response.json()["error"]
    assert error["code"] == "Gone"
    assert error["details"]["deleted_by"] == "https://orcid.org/9"
    assert error["details"]["metadata"]["creator"] == ORCID

    # still reachable for audit with the flag
    audit = client.get(f"/statements/{tail}", params={"include_deleted": "true"})
    assert audit.status_code == 200
    assert audit.json()["deleted"]["deleted_by"] == "https://orcid.org/9"


def test_missing_required_position_is_409(client):
    body = measurement_body()
    del body["values"]["UNIT"]
    response = client.post("/statements", json=body)
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "ConstraintViolation"


def test_unknown_statement_is_404_and_bad_body_is_400(client):
    assert client.get("/statements/nope").status_code == 404
    response = client.post("/statements", json={"type": "measurement"})
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "ValidationError"


def test_type_preview_substitutes_filled_positions(client):
    response = client.get(
        "/types/measurement/preview",
        params=[("fill", "OBJECT=the sample"), ("fill", "QUALITY=mass")],
    )
    assert response.status_code == 200
    text = response.json()["text"]
    assert text.startswith("the sample has a mass of MAIN_VALUE")
    assert "CONFIDENCE_LEVEL" in text  # unfilled slots keep their placeholders


def test_draft_preview_without_registration(client):
    draft = {
        "label": "containment",
        "verb": "contains",
        "subject": {"thematic_label": "CONTAINER"},
        "objects": [{"thematic_label": "CONTENT", "required": True}],
    }
    response = client.post(
        "/types/preview", json={"draft": draft, "fill": {"CONTAINER": ["the box"]}}
    )
    assert response.status_code == 200
    assert response.json()["text"] == "the box contains CONTENT"
    # the draft was not registered
    labels = [t["label"] for t in client.get("/types").json()["types"]]
    assert "containment" not in labels


def test_draft_preview_requires_exactly_one_source(client):
    response = client.post("/types/preview", json={"fill": {}})
    assert response.status_code == 400


def test_define_type_roundtrip(client):
    draft = {
        "label": "authorship",
        "verb": "wrote",
        "subject": {"thematic_label": "AUTHOR"},
        "objects": [{"thematic_label": "WORK", "required": True, "max": 3}],
    }
    created = client.post("/types", json=draft)
    assert created.status_code == 201
    doc = created.json()
    assert doc["formalized"] == "AUTHOR wrote WORK"

    fetched = client.get(f"/types/{doc['id']}")
    assert fetched.status_code == 200
    assert fetched.json()["objects"][0]["max"] == 3


def test_reorder_bumps_type_version(client):
    draft = {
        "label": "tasting",
        "verb": "tasted",
        "subject": {"thematic_label": "TASTER"},
        "objects": [
            {"thematic_label": "DISH", "required": True},
            {"thematic_label": "PLACE", "required": False, "preposition": "at"},
        ],
    }
    type_id = client.post("/types", json=draft).json()["id"]
    response = client.post(f"/types/{type_id}/reorder", json={"order": [2, 1]})
    assert response.status_code == 200
    assert response.json()["version"] == 2
    assert [o["thematic_label"] for o in response.json()["objects"]] == ["PLACE", "DISH"]


def test_export_forms_and_media_types(client):
    client.post("/statements", json=measurement_body())
    full = client.get("/export", params={"format": "trig", "form": "full"})
    assert full.status_code == 200
    assert full.headers["content-type"].startswith("application/trig")

    light = client.get("/export", params={"format": "nquads", "form": "light"})
    assert light.status_code == 200
    assert light.headers["content-type"].startswith("application/n-quads")
    assert len(parse(light.text, "nquads")) > 0

    assert client.get("/export", params={"format": "xml"}).status_code == 400


def test_statement_graph_endpoint(client):
    created = client.post("/statements", json=measurement_body()).json()
    tail = created["id"].rsplit("/", 1)[-1]
    response = client.get(f"/statements/{tail}/graph", params={"form": "light"})
    assert response.status_code == 200
    graph = parse(response.text, "trig")
    # subject link + three object positions + type = 5 triples
    assert len(graph) == 5


def test_type_shape_endpoint_is_turtle(client):
    response = client.get("/types/measurement/shape")
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/turtle")
    assert "PropertyShape" in response.text or "property" in response.text


def test_nanopub_endpoint_returns_trig_package(client):
    created = client.post("/statements", json=measurement_body()).json()
    tail = created["id"].rsplit("/", 1)[-1]
    doc = client.get(f"/statements/{tail}/nanopub").json()
    assert doc["id"].endswith("/v1/np")
    graph = parse(doc["content"], "trig")
    assert len({q.g for q in graph}) == 4


def test_search_endpoint_groups_by_type(client):
    client.post("/statements", json=measurement_body())
    response = client.get("/search", params={"term": "orange"})
    groups = response.json()["groups"]
    assert len(groups) == 1
    assert groups[0]["statements"][0]["render"]["text"].startswith("orange has a Weight")

    assert client.get("/search", params={"term": "zebra"}).json()["groups"] == []


def test_faceted_search_with_range_filter(client):
    for value in ("212.45", "241.68", "90.0"):
        body = measurement_body()
        body["values"]["MAIN_VALUE"] = [{"lexical": value}]
        client.post("/statements", json=body)
    response = client.post(
        "/search/faceted",
        json={
            "statement_type": "measurement",
            "filters": {"MAIN_VALUE": {"min": "200", "max": "250"}},
        },
    )
    assert response.status_code == 200
    doc = response.json()
    found = {
        s["version"]["values"]["MAIN_VALUE"][0]["lexical"] for s in doc["statements"]
    }
    assert found == {"212.45", "241.68"}
    unit_facet = {v["label"]: v["count"] for v in doc["facets"]["UNIT"]}
    assert unit_facet == {"gram": 2}


def test_crosswalk_endpoint_applies_builtin_spec(client):
    created = client.post("/statements", json=measurement_body()).json()
    tail = created["id"].rsplit("/", 1)[-1]
    response = client.post("/crosswalks/obi/apply", json={"statement": tail})
    assert response.status_code == 200
    graph = parse(response.json()["content"], "trig")
    linking = [q for q in graph if not q.p.endswith("#type")]
    assert len(linking) == 5

    missing = client.post("/crosswalks/never/apply", json={"statement": tail})
    assert missing.status_code == 404


def test_labels_endpoint_changes_rendering(client):
    body = measurement_body()
    del body["values"]["OBJECT"][0]["label"]
    created = client.post("/statements", json=body).json()
    tail = created["id"].rsplit("/", 1)[-1]
    assert "orange1" in created["render"]["text"]

    client.post("/labels", json={"labels": {"https://example.org/entity/orange1": "orange"}})
    rendered = client.get(f"/statements/{tail}/render").json()["text"]
    assert rendered == "orange has a Weight of 153.6 gram"


def test_mindmap_formats(client):
    created = client.post("/statements", json=measurement_body()).json()
    tail = created["id"].rsplit("/", 1)[-1]
    doc = client.get(f"/statements/{tail}/mindmap").json()
    assert any(n["label"] == "orange" for n in doc["nodes"])

    dot = client.get(f"/statements/{tail}/mindmap", params={"format": "dot"})
    assert dot.text.startswith("digraph")


def test_statement_listing_filters_by_type(client):
    client.post("/statements", json=measurement_body())
    client.post(
        "/statements",
        json={
            "type": "travel",
            "creator": ORCID,
            "values": {
                "PERSON": [{"iri": "https://example.org/entity/ada", "label": "Ada"}],
                "DESTINATION_LOCATION": [
                    {"iri": "https://example.org/entity/york", "label": "York"}
                ],
            },
        },
    )
    all_docs = client.get("/statements").json()["statements"]
    assert len(all_docs) == 2
    travel_only = client.get("/statements", params={"type": "travel"}).json()["statements"]
    assert len(travel_only) == 1
    assert travel_only[0]["type"].endswith("/type/travel")


def test_metadata_patch(client):
    created = client.post("/statements", json=measurement_body()).json()
    tail = created["id"].rsplit("/", 1)[-1]
    response = client.patch(
        f"/statements/{tail}/metadata", json={"curator": "https://orcid.org/5"}
    )
    assert response.status_code == 200
    assert response.json()["metadata"]["curator"] == "https://orcid.org/5"


def test_data_dir_survives_restart(tmp_path):
    first = TestClient(create_app(data_dir=str(tmp_path)))
    created = first.post("/statements", json=measurement_body()).json()

    second = TestClient(create_app(data_dir=str(tmp_path)))
    fetched = second.get(f"/statements/{created['id'].rsplit('/', 1)[-1]}")
    assert fetched.status_code == 200
    assert fetched.json()["render"]["text"] == "orange has a Weight of 153.6 gram"
    # builtin patterns were not duplicated by the second boot
    labels = [t["label"] for t in second.get("/types").json()["types"]]
    assert labels.count("measurement") == 1


# -- CLI against a live server ---------------------------------------------------


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="module")
def live_server(tmp_path_factory):
    port = _free_port()
    data_dir = tmp_path_factory.mktemp("served")
    process = subprocess.Popen(
        [sys.executable, "-m", "rosetta.service.cli", "serve",
         "--addr", f"127.0.0.1:{port}", "--data", str(data_dir)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    try:
        import httpx

        for _ in range(100):
            try:
                httpx.get(base + "/types", timeout=1.0)
                break
            except httpx.HTTPError:
                time.sleep(0.1)
        else:
            raise RuntimeError("server did not come up")
        yield base
    finally:
        process.terminate()
        process.wait(timeout=10)


def _cli(server: str, *args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "rosetta.service.cli", "--server", server, *args],
        capture_output=True,
        text=True,
        timeout=60,
    )


def test_cli_end_to_end(live_server):
    added = _cli(
        live_server, "stmt", "add", "--type", "measurement", "--creator", ORCID,
        "--set", "OBJECT=https://example.org/entity/orange1|orange",
        "--set", f"QUALITY={iri_for('Weight')}|Weight",
        "--set", "MAIN_VALUE=153.6",
        "--set", f"UNIT={iri_for('gram')}|gram",
    )
    assert added.returncode == 0, added.stderr
    statement_id, sentence = added.stdout.strip().splitlines()
    assert sentence == "orange has a Weight of 153.6 gram"
    tail = statement_id.rsplit("/", 1)[-1]

    rendered = _cli(live_server, "stmt", "render", tail)
    assert rendered.stdout.strip() == "orange has a Weight of 153.6 gram"

    updated = _cli(
        live_server, "stmt", "update", tail, "--editor", ORCID,
        "--set", "OBJECT=https://example.org/entity/orange1",
        "--set", f"QUALITY={iri_for('Weight')}",
        "--set", "MAIN_VALUE=160.2",
        "--set", f"UNIT={iri_for('gram')}",
    )
    assert updated.returncode == 0, updated.stderr
    assert updated.stdout.startswith("v2")

    history = _cli(live_server, "stmt", "history", tail)
    assert "created" in history.stdout and "updated" in history.stdout

    exported = _cli(live_server, "export", "--format", "nquads", "--form", "light")
    assert exported.returncode == 0
    assert len(parse(exported.stdout, "nquads")) > 0

    searched = _cli(live_server, "search", "orange")
    assert tail in searched.stdout

    nanopub = _cli(live_server, "nanopub", tail)
    assert "/v2/np" in nanopub.stdout

    crosswalked = _cli(live_server, "crosswalk", "apply", "obi", tail)
    assert crosswalked.returncode == 0
    assert "OBI_0001931" in crosswalked.stdout


def test_cli_exit_codes_map_error_kinds(live_server):
    missing = _cli(live_server, "stmt", "render", "does-not-exist")
    assert missing.returncode == 4
    assert "NotFound" in missing.stderr

    starved = _cli(
        live_server, "stmt", "add", "--type", "measurement", "--creator", ORCID,
        "--set", "OBJECT=https://example.org/entity/x",
    )
    assert starved.returncode == 5
    assert "ConstraintViolation" in starved.stderr


def test_cli_subject_flag_and_faceting(live_server, tmp_path):
    added = _cli(
        live_server, "stmt", "add", "--type", "measurement",
        "--subject", "https://example.org/entity/melon|melon",
        "--set", f"QUALITY={iri_for('Weight')}|Weight",
        "--set", "MAIN_VALUE=212.45",
        "--set", f"UNIT={iri_for('gram')}|gram",
    )
    assert added.returncode == 0, added.stderr
    assert added.stdout.strip().splitlines()[1] == "melon has a Weight of 212.45 gram"
    tail = added.stdout.strip().splitlines()[0].rsplit("/", 1)[-1]

    narrowed = _cli(
        live_server, "facet", "--type", "measurement",
        "--range", "MAIN_VALUE=200:250",
    )
    assert narrowed.returncode == 0, narrowed.stderr
    assert tail in narrowed.stdout

    from rosetta.fixtures import fixture_text

    spec_file = tmp_path / "spec.yaml"
    spec_file.write_text(fixture_text("obi.yaml"))
    applied = _cli(live_server, "crosswalk", "apply", "--spec", str(spec_file), tail)
    assert applied.returncode == 0, applied.stderr
    assert "OBI_0001931" in applied.stdout


def test_cli_delete_then_render_exits_gone(live_server):
    added = _cli(
        live_server, "stmt", "add", "--type", "travel", "--creator", ORCID,
        "--set", "PERSON=https://example.org/entity/ada|Ada",
        "--set", "DESTINATION_LOCATION=https://example.org/entity/york|York",
    )
    tail = added.stdout.strip().splitlines()[0].rsplit("/", 1)[-1]
    deleted = _cli(live_server, "stmt", "delete", tail, "--by", ORCID)
    assert deleted.returncode == 0

    gone = _cli(live_server, "stmt", "render", tail)
    assert gone.returncode == 7
    assert "Gone" in gone.stderr
