from collections import Counter

import pytest

from conftest import add_apple_measurement, add_orange_weight, fresh_store, iri_for, lit, res
from rosetta import vocab
from rosetta.crosswalk import (
    MEASUREMENT_COLUMN_SLOTS,
    apply_crosswalk,
    linking_triples,
    load_crosswalk_spec,
    load_entity_map,
    relational_csv,
)
from rosetta.errors import CrosswalkError, SpecError, UnmappedEntityError
from rosetta.fixtures import (
    fixture_text,
    load_builtin_crosswalks,
    load_builtin_entity_maps,
)
from rosetta.rdfmodel import Literal, serialize
from rosetta.store import Value
from rosetta.vocab import DEFAULT_PREFIXES

OBO = "http://purl.obolibrary.org/obo/"
OBOE = "http://ecoinformatics.org/oboe/oboe.1.2/oboe-core.owl#"

SPECS = load_builtin_crosswalks()
MAPS = load_builtin_entity_maps()


def _measurement(store):
    anchor = add_apple_measurement(store)
    pattern = store.registry.get_by_ref(anchor.pattern_ref)
    return anchor.latest, pattern


def test_builtin_specs_parse_and_bind_to_measurement():
    store = fresh_store()
    pattern = store.registry.resolve("measurement")
    for spec_id in ("obi-measurement", "oboe-measurement", "qudt-measurement"):
        spec = SPECS[spec_id]
        load_crosswalk_spec(fixture_text(f"{spec_id.split('-')[0]}.yaml"), pattern)
        assert spec.source_pattern == "measurement"


def test_obi_output_has_five_linking_triples():
    store = fresh_store()
    version, pattern = _measurement(store)
    out = apply_crosswalk(version, pattern, SPECS["obi-measurement"], MAPS["obi"])
    assert len(linking_triples(out)) == 5


def test_oboe_output_has_six_linking_triples():
    store = fresh_store()
    version, pattern = _measurement(store)
    out = apply_crosswalk(version, pattern, SPECS["oboe-measurement"], MAPS["oboe"])
    assert len(linking_triples(out)) == 6


def test_obi_output_structure():
    store = fresh_store()
    version, pattern = _measurement(store)
    out = apply_crosswalk(version, pattern, SPECS["obi-measurement"], MAPS["obi"])
    assert out.graph_names() == [version.iri]
    quality = f"{version.iri}/xw/obi-measurement/quality"
    svs = f"{version.iri}/xw/obi-measurement/svs"
    g = version.iri
    assert (quality, vocab.RDF_TYPE, OBO + "PATO_0000128", g) in out
    assert (iri_for("Apple"), OBO + "RO_0000086", quality, g) in out
    assert (svs, OBO + "OBI_0001937", Literal("212.45", vocab.XSD_DECIMAL), g) in out
    assert (svs, OBO + "IAO_0000039", OBO + "UO_0000021", g) in out


def test_oboe_output_structure():
    store = fresh_store()
    version, pattern = _measurement(store)
    out = apply_crosswalk(version, pattern, SPECS["oboe-measurement"], MAPS["oboe"])
    g = version.iri
    observation = f"{version.iri}/xw/oboe-measurement/observation"
    measurement = f"{version.iri}/xw/oboe-measurement/measurement"
    characteristic = f"{version.iri}/xw/oboe-measurement/characteristic"
    standard = f"{version.iri}/xw/oboe-measurement/standard"
    assert (observation, OBOE + "ofEntity", iri_for("Apple"), g) in out
    assert (characteristic, vocab.RDF_TYPE, OBO + "NCIT_C25208", g) in out
    assert (measurement, OBOE + "hasValue", Literal("212.45", vocab.XSD_DECIMAL), g) in out
    assert (standard, OBOE + "hasUnit", OBO + "UO_0000021", g) in out


def test_literal_values_preserved_verbatim_in_both_outputs():
    store = fresh_store()
    version, pattern = _measurement(store)
    for spec_id, entity_map in (("obi-measurement", MAPS["obi"]),
                                ("oboe-measurement", MAPS["oboe"])):
        out = apply_crosswalk(version, pattern, SPECS[spec_id], entity_map)
        out_literals = Counter(
            q.o.lexical for q in out if isinstance(q.o, Literal)
        )
        spec = SPECS[spec_id]
        slot_labels = [t.o[1:] for t in spec.triple_templates if t.o.startswith("$")]
        expected = Counter()
        for label in slot_labels:
            for value in version.parts().get(label, ()):
                if value.lexical is not None:
                    expected[value.lexical] += 1
        assert out_literals == expected
        assert out_literals["212.45"] == 1


def test_weight_statement_values_survive_into_obi_graph():
    # the 241.68 sentence of the interval pattern has no QUALITY slot, so the
    # crosswalk acceptance example runs on the plain measurement pattern
    store = fresh_store()
    anchor = store.create_statement(
        "measurement",
        {
            "OBJECT": [res("apple")],
            "QUALITY": [res("weight")],
            "MAIN_VALUE": [lit("241.68")],
            "UNIT": [res("grams")],
        },
        creator="u:a",
    )
    pattern = store.registry.get_by_ref(anchor.pattern_ref)
    for spec_id, emap in (("obi-measurement", MAPS["obi"]), ("oboe-measurement", MAPS["oboe"])):
        out = apply_crosswalk(anchor.latest, pattern, SPECS[spec_id], emap)
        lexicals = [q.o.lexical for q in out if isinstance(q.o, Literal)]
        assert lexicals == ["241.68"]


def test_unmapped_unit_names_the_offending_iri():
    store = fresh_store()
    wikidata_gram = "http://www.wikidata.org/entity/Q41803"
    store.register_labels({wikidata_gram: "gram"})
    anchor = store.create_statement(
        "measurement",
        {
            "OBJECT": [res("apple")],
            "QUALITY": [res("Weight")],
            "MAIN_VALUE": [lit("212.45")],
            "UNIT": [Value(iri=wikidata_gram)],
        },
        creator="u:a",
    )
    pattern = store.registry.get_by_ref(anchor.pattern_ref)
    withheld = load_entity_map(
        "https://qualities.example.org/weight-cap\tskos:exactMatch\t"
        "http://purl.obolibrary.org/obo/PATO_0000128\n",
        name="obi",
    )
    with pytest.raises(UnmappedEntityError) as err:
        apply_crosswalk(anchor.latest, pattern, SPECS["obi-measurement"], withheld)
    assert err.value.details["iri"] == wikidata_gram
    assert err.value.details["map_name"] == "obi"
    assert wikidata_gram in err.value.message


def test_empty_required_slot_raises_crosswalk_error():
    store = fresh_store()
    spec = SPECS["obi-measurement"]
    anchor = store.create_statement(
        "measurement",
        {
            "OBJECT": [res("apple")],
            "QUALITY": [res("Weight")],
            "MAIN_VALUE": [lit("212.45")],
            "UNIT": [res("gram")],
        },
        creator="u:a",
    )
    pattern = store.registry.get_by_ref(anchor.pattern_ref)
    starved = type(spec)(
        id=spec.id,
        source_pattern=spec.source_pattern,
        target_name=spec.target_name,
        node_templates=spec.node_templates,
        triple_templates=spec.triple_templates,
        required_slots=spec.required_slots + ("CONFIDENCE_LEVEL",),
        mapped_slots=spec.mapped_slots,
        entity_map_ref=spec.entity_map_ref,
    )
    with pytest.raises(CrosswalkError):
        apply_crosswalk(anchor.latest, pattern, starved, MAPS["obi"])


def test_pattern_mismatch_raises():
    store = fresh_store()
    anchor = add_orange_weight(store)
    weight_anchor = store.create_statement(
        "weight",
        {"OBJECT": [res("orange")], "MAIN_VALUE": [lit("153.6")], "UNIT": [res("gram")]},
        creator="u:a",
    )
    weight_pattern = store.registry.get_by_ref(weight_anchor.pattern_ref)
    with pytest.raises(CrosswalkError):
        apply_crosswalk(weight_anchor.latest, weight_pattern,
                        SPECS["obi-measurement"], MAPS["obi"])
    assert anchor  # measurement anchor untouched


def test_unknown_slot_var_rejected_against_pattern():
    store = fresh_store()
    pattern = store.registry.resolve("measurement")
    text = fixture_text("obi.yaml").replace("$MAIN_VALUE", "$FOO")
    with pytest.raises(SpecError):
        load_crosswalk_spec(text, pattern)


def test_degenerate_spec_without_triples_rejected():
    with pytest.raises(SpecError):
        load_crosswalk_spec(
            "id: empty\nsource_pattern: measurement\ntarget: X\ntriples: []\n"
        )


def test_unknown_node_var_rejected():
    with pytest.raises(SpecError):
        load_crosswalk_spec(
            "id: bad\nsource_pattern: measurement\ntarget: X\n"
            "triples:\n  - ['?ghost', 'https://example.org/p', '$OBJECT']\n"
        )


def test_entity_map_rejects_duplicate_source():
    with pytest.raises(SpecError):
        load_entity_map(
            "https://a.example.org/x\tskos:exactMatch\thttps://b.example.org/1\n"
            "https://a.example.org/x\tskos:exactMatch\thttps://b.example.org/2\n"
        )


def test_output_is_deterministic():
    store = fresh_store()
    version, pattern = _measurement(store)
    spec = SPECS["oboe-measurement"]
    first = serialize(apply_crosswalk(version, pattern, spec, MAPS["oboe"]),
                      "trig", DEFAULT_PREFIXES)
    second = serialize(apply_crosswalk(version, pattern, spec, MAPS["oboe"]),
                       "trig", DEFAULT_PREFIXES)
    assert first == second


def test_multi_value_slot_expands_per_value():
    store = fresh_store()
    spec = load_crosswalk_spec(
        "id: meetings\nsource_pattern: meet\ntarget: flat\n"
        "triples:\n"
        "  - ['$PERSON', 'https://example.org/met', '$PERSON_2']\n"
    )
    anchor = store.create_statement(
        "meet",
        {
            "PERSON": [res("Sarah"), res("Anna")],
            "PERSON_2": [res("Bob"), res("Christopher")],
        },
        creator="u:a",
    )
    pattern = store.registry.get_by_ref(anchor.pattern_ref)
    out = apply_crosswalk(anchor.latest, pattern, spec)
    assert len(out) == 4  # 2 subjects x 2 objects


def test_relational_csv_matches_expected_layout():
    store = fresh_store()
    version, pattern = _measurement(store)
    text = relational_csv([(version, pattern)])
    lines = text.splitlines()
    assert lines[0] == "OBJECT,QUALITY,VALUE,UNIT,STATEMENT_ID"
    assert lines[1] == (
        f"{iri_for('Apple')},{iri_for('Weight')},212.45,"
        f"{iri_for('gram')},{version.iri}"
    )
    assert tuple(MEASUREMENT_COLUMN_SLOTS) == ("OBJECT", "QUALITY", "VALUE", "UNIT")
