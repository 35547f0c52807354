"""Freeze service responses into JSON fixtures for the UI test suite.

Runs the service in-process and records, for a set of scripted statement-type
drafts, the exact preview text the service produces — plus the pattern
documents and statement-creation responses the form tests replay.  Regenerate
with:  python3 scripts/freeze_fixtures.py
"""

import json
import random
import sys
from pathlib import Path

from fastapi.testclient import TestClient

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))

from rosetta.service.app import create_app  # noqa: E402

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

VERBS = [
    "has",
    "met",
    "travelled",
    "contains",
    "is located in",
    "weighs",
    "was measured by",
    "produces",
]
NEGATED_VERBS = {
    "has": "does not have",
    "met": "did not meet",
    "contains": "does not contain",
    "weighs": "does not weigh",
}
THEMATIC = [
    "OBJECT", "PERSON", "SAMPLE", "QUALITY", "MAIN_VALUE", "UNIT", "LOCATION",
    "DATE", "INSTRUMENT", "CONFIDENCE", "TARGET", "SOURCE", "AMOUNT",
]
PREPOSITIONS = [None, "", "of ", "in ", "to ", " (", ": ", " - ", "at ", "from "]
POSTPOSITIONS = [None, "", ")", " grams", "!", " sharp"]
PLACEHOLDERS = [None, None, "the sample", "a value", "", "somebody"]
DATATYPES = ["text", "integer", "decimal", "URL", "boolean", "date"]
FILL_TEXTS = [
    "orange", "Apple", "153.6", "gram", "Bob", "New York City", "2021-07-04",
    "the balance", "95", "212.45", "Sarah", "Anna", "Christopher",
]


def random_position(rng: random.Random, index: int, used: set[str]) -> dict:
    label = rng.choice([t for t in THEMATIC if t not in used] or ["EXTRA"])
    if label in used:
        label = f"{label}_{index}"
    used.add(label)
    doc: dict = {"thematic_label": label}
    if index > 0:
        required = rng.random() < 0.6
        doc["required"] = required
        if rng.random() < 0.4:
            doc["kind"] = "literal"
            doc["datatype"] = rng.choice(DATATYPES)
        else:
            doc["kind"] = "resource"
        if not required:
            doc["min"] = 0
        if rng.random() < 0.25:
            doc["max"] = rng.choice([2, 3, "unbounded"])
    placeholder = rng.choice(PLACEHOLDERS)
    if placeholder is not None:
        doc["placeholder"] = placeholder
    if index > 0:
        preposition = rng.choice(PREPOSITIONS)
        if preposition is not None:
            doc["preposition"] = preposition
        postposition = rng.choice(POSTPOSITIONS)
        if postposition is not None:
            doc["postposition"] = postposition
    return doc


def random_draft(rng: random.Random, i: int) -> dict:
    used: set[str] = set()
    draft: dict = {
        "label": f"Draft {i}",
        "verb": rng.choice(VERBS),
        "subject": random_position(rng, 0, used),
        "objects": [
            random_position(rng, n + 1, used)
            for n in range(rng.randint(0, 5))
        ],
    }
    if rng.random() < 0.3:
        draft["description"] = "scripted editor draft"
    if rng.random() < 0.25:
        draft["negatable"] = False
    elif draft["verb"] in NEGATED_VERBS and rng.random() < 0.5:
        draft["negated_verb"] = NEGATED_VERBS[draft["verb"]]
    return draft


def random_fill(rng: random.Random, draft: dict) -> dict:
    fill: dict = {}
    positions = [draft["subject"], *draft["objects"]]
    for pos in positions:
        roll = rng.random()
        if roll < 0.45:
            count = rng.randint(1, 3)
            fill[pos["thematic_label"]] = [rng.choice(FILL_TEXTS) for _ in range(count)]
        elif roll < 0.55:
            fill[pos["thematic_label"]] = []
    return fill


def freeze_previews(client: TestClient, rng: random.Random) -> None:
    records = []
    for i in range(50):
        draft = random_draft(rng, i)
        fill = random_fill(rng, draft)
        negated = draft.get("negatable") is not False and rng.random() < 0.3
        body = {"draft": draft, "fill": fill, "negated": negated}
        response = client.post("/types/preview", json=body)
        response.raise_for_status()
        payload = response.json()
        records.append(
            {
                "draft": draft,
                "fill": fill,
                "negated": negated,
                "expected": payload["text"],
                "formalized": payload["formalized"],
            }
        )
    (FIXTURES / "previews.json").write_text(json.dumps(records, indent=2))
    print(f"froze {len(records)} preview records")


def freeze_patterns(client: TestClient) -> None:
    for key in ("measurement", "travel"):
        response = client.get(f"/types/{key}")
        response.raise_for_status()
        (FIXTURES / f"{key}-pattern.json").write_text(json.dumps(response.json(), indent=2))
        print(f"froze {key} pattern document")


def freeze_creations(client: TestClient) -> None:
    # the fully filled measurement entry form, confidence interval included
    full_request = {
        "type": "https://example.org/rosetta/type/measurement",
        "values": {
            "OBJECT": [{"iri": "https://example.org/entity/apple1", "label": "Apple"}],
            "QUALITY": [{"iri": "http://purl.obolibrary.org/obo/PATO_0000128", "label": "Weight"}],
            "MAIN_VALUE": [{"lexical": "212.45"}],
            "UNIT": [{"iri": "http://www.wikidata.org/entity/Q41803", "label": "gram"}],
            "CONFIDENCE_LEVEL": [{"lexical": "95"}],
            "LOWER_VALUE": [{"lexical": "212.44"}],
            "UPPER_VALUE": [{"lexical": "212.47"}],
            "CONF_UNIT": [{"iri": "http://www.wikidata.org/entity/Q41803", "label": "gram"}],
        },
        "creator": "urn:rosetta:webui",
    }
    # the same form with every optional field left blank
    minimal_request = {
        "type": "https://example.org/rosetta/type/measurement",
        "values": {
            "OBJECT": [{"iri": "https://example.org/entity/orange1", "label": "orange"}],
            "QUALITY": [{"iri": "http://purl.obolibrary.org/obo/PATO_0000128", "label": "Weight"}],
            "MAIN_VALUE": [{"lexical": "153.6"}],
            "UNIT": [{"iri": "http://www.wikidata.org/entity/Q41803", "label": "gram"}],
        },
        "creator": "urn:rosetta:webui",
    }
    negated_request = dict(minimal_request, negated=True)
    for name, request in (
        ("created-full", full_request),
        ("created-minimal", minimal_request),
        ("created-negated", negated_request),
    ):
        response = client.post("/statements", json=request)
        response.raise_for_status()
        record = {"request": request, "response": response.json()}
        (FIXTURES / f"{name}.json").write_text(json.dumps(record, indent=2))
        print(f"froze {name}: {response.json()['render']['text']!r}")


def freeze_history(client: TestClient) -> None:
    """A twice-edited statement's anchor + history, for the timeline view."""
    created = client.post(
        "/statements",
        json={
            "type": "https://example.org/rosetta/type/measurement",
            "values": {
                "OBJECT": [{"iri": "https://example.org/entity/orange2", "label": "orange"}],
                "QUALITY": [{"iri": "http://purl.obolibrary.org/obo/PATO_0000128", "label": "Weight"}],
                "MAIN_VALUE": [{"lexical": "150.0"}],
                "UNIT": [{"iri": "http://www.wikidata.org/entity/Q41803", "label": "gram"}],
            },
            "creator": "urn:rosetta:webui",
        },
    )
    created.raise_for_status()
    anchor_id = created.json()["id"]
    base_values = {
        "OBJECT": [{"iri": "https://example.org/entity/orange2", "label": "orange"}],
        "QUALITY": [{"iri": "http://purl.obolibrary.org/obo/PATO_0000128", "label": "Weight"}],
        "UNIT": [{"iri": "http://www.wikidata.org/entity/Q41803", "label": "gram"}],
    }
    for lexical in ("151.2", "151.9"):
        updated = client.put(
            f"/statements/{anchor_id}",
            json={
                "values": {**base_values, "MAIN_VALUE": [{"lexical": lexical}]},
                "editor": "urn:rosetta:webui",
            },
        )
        updated.raise_for_status()
    anchor = client.get(f"/statements/{anchor_id}")
    anchor.raise_for_status()
    history = client.get(f"/statements/{anchor_id}/history")
    history.raise_for_status()
    record = {"anchor": anchor.json(), "history": history.json()["history"]}
    (FIXTURES / "edited-statement.json").write_text(json.dumps(record, indent=2))
    print(f"froze twice-edited statement with {len(record['history'])} history events")


def freeze_faceted(client: TestClient) -> None:
    """Measurement store with three weights; UNIT=gram narrowing scenario."""
    weights = [
        ("https://example.org/entity/orange1", "orange", "153.6", "gram",
         "http://www.wikidata.org/entity/Q41803"),
        ("https://example.org/entity/apple1", "Apple", "212.45", "gram",
         "http://www.wikidata.org/entity/Q41803"),
        ("https://example.org/entity/crate1", "crate", "12.5", "kilogram",
         "http://www.wikidata.org/entity/Q11570"),
    ]
    for iri, label, value, unit_label, unit_iri in weights:
        response = client.post(
            "/statements",
            json={
                "type": "https://example.org/rosetta/type/measurement",
                "values": {
                    "OBJECT": [{"iri": iri, "label": label}],
                    "QUALITY": [
                        {"iri": "http://purl.obolibrary.org/obo/PATO_0000128", "label": "Weight"}
                    ],
                    "MAIN_VALUE": [{"lexical": value}],
                    "UNIT": [{"iri": unit_iri, "label": unit_label}],
                },
                "creator": "urn:rosetta:webui",
            },
        )
        response.raise_for_status()
    unfiltered = client.post(
        "/search/faceted",
        json={"statement_type": "https://example.org/rosetta/type/measurement"},
    )
    unfiltered.raise_for_status()
    narrowed = client.post(
        "/search/faceted",
        json={
            "statement_type": "https://example.org/rosetta/type/measurement",
            "filters": {"UNIT": {"one_of": ["http://www.wikidata.org/entity/Q41803"]}},
        },
    )
    narrowed.raise_for_status()
    term = client.get("/search", params={"term": "orange"})
    term.raise_for_status()
    record = {
        "unfiltered": unfiltered.json(),
        "narrowed": narrowed.json(),
        "term_orange": term.json(),
    }
    (FIXTURES / "faceted.json").write_text(json.dumps(record, indent=2))
    print(
        "froze faceted fixtures: "
        f"{len(unfiltered.json()['statements'])} -> {len(narrowed.json()['statements'])} statements"
    )


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20260815)
    preview_client = TestClient(create_app())
    freeze_previews(preview_client, rng)
    freeze_patterns(preview_client)
    # separate stores so creation fixtures stay deterministic
    freeze_creations(TestClient(create_app()))
    freeze_history(TestClient(create_app()))
    freeze_faceted(TestClient(create_app()))


if __name__ == "__main__":
    main()
