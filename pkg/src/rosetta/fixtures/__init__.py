"""Built-in pattern files, crosswalk specs, and entity maps."""

from __future__ import annotations

from importlib import resources

PATTERN_FILES = (
    "measurement.yaml",
    "interval_measurement.yaml",
    "weight.yaml",
    "travel.yaml",
    "meet.yaml",
)

CROSSWALK_FILES = ("obi.yaml", "oboe.yaml", "qudt.yaml")

ENTITY_MAP_FILES = {"obi": "obi_map.tsv", "oboe": "oboe_map.tsv"}


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def load_builtin_patterns(registry) -> list:
    """Register every shipped pattern file; returns the patterns."""
    import yaml

    return [registry.define(yaml.safe_load(fixture_text(name))) for name in PATTERN_FILES]


def load_builtin_crosswalks() -> dict:
    """Shipped crosswalk specs keyed by spec id."""
    from ..crosswalk import load_crosswalk_spec

    specs = (load_crosswalk_spec(fixture_text(name)) for name in CROSSWALK_FILES)
    return {spec.id: spec for spec in specs}


def load_builtin_entity_maps() -> dict:
    """Shipped entity maps keyed by map name."""
    from ..crosswalk import load_entity_map

    return {
        name: load_entity_map(fixture_text(path), name=name)
        for name, path in ENTITY_MAP_FILES.items()
    }
