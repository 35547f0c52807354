"""Shared fixtures: stores pre-loaded with the worked-example statements."""

from __future__ import annotations

import pytest

from rosetta.fixtures import load_builtin_patterns
from rosetta.store import Store, Value

BASE = "https://example.org/rosetta"

ENTITIES = {
    "https://things.example.org/orange": "orange",
    "https://things.example.org/apple-cap": "Apple",
    "https://things.example.org/apple": "apple",
    "https://qualities.example.org/weight-cap": "Weight",
    "https://qualities.example.org/weight": "weight",
    "https://units.example.org/gram": "gram",
    "https://units.example.org/grams": "grams",
    "https://people.example.org/sarah": "Sarah",
    "https://people.example.org/anna": "Anna",
    "https://people.example.org/bob": "Bob",
    "https://people.example.org/christopher": "Christopher",
    "https://places.example.org/nyc": "New York City",
    "https://places.example.org/berlin": "Berlin",
    "https://places.example.org/paris": "Paris",
    "https://transport.example.org/train": "train",
}


def iri_for(label: str) -> str:
    for iri, known in ENTITIES.items():
        if known == label:
            return iri
    raise KeyError(label)


def res(label: str) -> Value:
    return Value(iri=iri_for(label))


def lit(lexical: str) -> Value:
    return Value(lexical=lexical)


def fresh_store(tmp_dir=None, **kwargs) -> Store:
    counter = iter(range(100_000))
    store = Store(
        tmp_dir,
        base_iri=BASE,
        id_factory=kwargs.pop("id_factory", lambda: f"s{next(counter):05d}"),
        **kwargs,
    )
    load_builtin_patterns(store.registry)
    store.register_labels(ENTITIES)
    return store


def add_orange_weight(store: Store):
    """Minimal weight measurement: confidence positions left empty."""
    return store.create_statement(
        "measurement",
        {
            "OBJECT": [res("orange")],
            "QUALITY": [res("Weight")],
            "MAIN_VALUE": [lit("153.6")],
            "UNIT": [res("gram")],
        },
        creator="https://people.example.org/curator",
    )


def add_apple_measurement(store: Store):
    """Weight measurement with every confidence position filled."""
    return store.create_statement(
        "measurement",
        {
            "OBJECT": [res("Apple")],
            "QUALITY": [res("Weight")],
            "MAIN_VALUE": [lit("212.45")],
            "UNIT": [res("gram")],
            "CONFIDENCE_LEVEL": [lit("95")],
            "LOWER_VALUE": [lit("212.44")],
            "UPPER_VALUE": [lit("212.47")],
            "CONF_UNIT": [res("gram")],
        },
        creator="https://people.example.org/curator",
    )


def add_interval_apple(store: Store):
    """Display-template style with the compact interval."""
    return store.create_statement(
        "measurement with confidence interval",
        {
            "OBJECT": [res("apple")],
            "QUALITY": [res("weight")],
            "MAIN_VALUE": [lit("241.68")],
            "UNIT": [res("grams")],
            "INTERVAL_VALUE": [lit("95")],
            "LOWER_VALUE": [lit("241.31")],
            "UPPER_VALUE": [lit("242.05")],
            "CONF_UNIT": [res("grams")],
        },
        creator="https://people.example.org/curator",
    )


def add_meet(store: Store):
    return store.create_statement(
        "meet",
        {
            "PERSON": [res("Sarah"), res("Anna")],
            "PERSON_2": [res("Bob"), res("Christopher")],
            "DATE": [lit("4th of July 2021")],
            "LOCATION": [res("New York City")],
        },
        creator="https://people.example.org/curator",
    )


def add_travel(store: Store):
    return store.create_statement(
        "travel",
        {
            "PERSON": [res("Anna")],
            "TRANSPORTATION": [res("train")],
            "DEPARTURE_LOCATION": [res("Berlin")],
            "DESTINATION_LOCATION": [res("Paris")],
            "DATETIME": [lit("2021-07-04")],
        },
        creator="https://people.example.org/curator",
    )


def add_three_measurements(store: Store):
    """The three worked-example magnitudes as plain measurements."""
    anchors = []
    for thing, value in (("orange", "153.6"), ("Apple", "212.45"), ("apple", "241.68")):
        anchors.append(
            store.create_statement(
                "measurement",
                {
                    "OBJECT": [res(thing)],
                    "QUALITY": [res("Weight")],
                    "MAIN_VALUE": [lit(value)],
                    "UNIT": [res("gram")],
                },
                creator="https://people.example.org/curator",
            )
        )
    return anchors


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    outcomes: dict[str, str] = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid or "::" not in nodeid:
                continue
            name = nodeid.split("::", 1)[1]
            if outcomes.get(name) != "failed":
                outcomes[name] = "failed" if status != "passed" else "passed"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(outcomes):
        verdict = "PASS" if outcomes[name] == "passed" else "FAIL"
        criterion = name.removeprefix("test_").replace("_", " ")
        terminalreporter.write_line(f"{verdict}  {criterion}")
