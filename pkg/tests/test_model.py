import math

import pytest
from helpers import F, K, T, U, assemble, make_module, random_instance

from splitchip.model import (
    Configuration,
    ExposureTable,
    SchemaError,
    SystemConfiguration,
    SystemSpec,
    constraints_to_doc,
    load_constraints,
    load_system,
    parse_constraints,
    parse_system,
    save_system,
    validate_system,
)


def two_module_doc():
    char = {
        cfg: {"fmax": 1e9, "area": 1e4, "p_dyn_at_fmax": 0.01, "p_static": 0.001}
        for cfg in ("TRUSTED", "UNTRUSTED", "UNTRUSTED_KEY_LOCKED", "UNTRUSTED_FSM_OBF")
    }
    return {
        "modules": [
            {"id": "a", "domain": "d0", "criticality": 0.5, "characterization": char},
            {"id": "b", "domain": "d0", "criticality": 0.2, "characterization": char},
        ],
        "domains": [{"id": "d0"}],
        "channels": [
            {"src": "a", "dst": "b", "bandwidth": 1e9, "latency_on_chip": 1e-9}
        ],
    }


def test_configuration_enum_is_stable():
    assert [c.name for c in Configuration] == [
        "TRUSTED",
        "UNTRUSTED",
        "UNTRUSTED_KEY_LOCKED",
        "UNTRUSTED_FSM_OBF",
    ]
    assert Configuration.TRUSTED.on_trusted_ic
    assert not any(
        c.on_trusted_ic for c in Configuration if c is not Configuration.TRUSTED
    )


def test_well_formed_two_module_spec_validates():
    spec = parse_system(two_module_doc())
    report = validate_system(spec)
    assert report.ok and report.errors == []


def test_unknown_channel_module_is_error():
    spec = parse_system(two_module_doc())
    bad = SystemSpec(
        modules=spec.modules,
        domains=spec.domains,
        channels=spec.channels
        + (spec.channels[0].__class__("ghost", "b", 1.0, 1e-9),),
        exposure=spec.exposure,
    )
    report = validate_system(bad)
    assert any("unknown module" in e for e in report.errors)


def test_untrusted_exposure_must_be_one():
    spec = parse_system(two_module_doc())
    bad = SystemSpec(
        modules=spec.modules,
        domains=spec.domains,
        channels=spec.channels,
        exposure=ExposureTable({T: 0.05, U: 0.9, K: 0.9, F: 0.85}),
    )
    report = validate_system(bad)
    assert any("untrusted exposure must equal 1" in e for e in report.errors)


def test_obfuscated_fmax_above_untrusted_warns_not_rejects():
    m = make_module("a", "d0", 0.5, 1e9, factors={K: (1.2, 1.06, 1.08, 1.06)})
    spec = assemble([m])
    report = validate_system(spec)
    assert report.ok
    assert any("obfuscation usually costs speed" in w for w in report.warnings)


def test_load_rejects_empty_module_list():
    doc = two_module_doc()
    doc["modules"] = []
    with pytest.raises(SchemaError, match="empty"):
        parse_system(doc)


def test_load_rejects_duplicate_module_id():
    doc = two_module_doc()
    doc["modules"].append(dict(doc["modules"][0]))
    with pytest.raises(SchemaError, match="duplicate id"):
        parse_system(doc)


def test_load_reports_json_position_on_parse_error():
    with pytest.raises(SchemaError, match=r"line \d+ column \d+"):
        load_system("{\n  \"modules\": [,]\n}")


def test_load_names_offending_field():
    doc = two_module_doc()
    doc["modules"][1]["criticality"] = "high"
    with pytest.raises(SchemaError, match=r"modules\[1\].criticality"):
        parse_system(doc)


def test_example_soc_has_16_modules_in_4_domains(example_spec):
    assert len(example_spec.modules) == 16
    assert len(example_spec.domains) == 4


def test_roundtrip_example(example_spec, example_constraints):
    text = save_system(example_spec, example_constraints)
    again = load_system(text)
    assert again == example_spec
    assert load_constraints(text, again) == example_constraints


def test_roundtrip_random_instances():
    for seed in range(25):
        spec, constraints = random_instance(seed)
        text = save_system(spec, constraints)
        again = load_system(text)
        assert again == spec, seed
        assert load_constraints(text, again) == constraints, seed


def test_validate_is_pure(example_spec):
    r1 = validate_system(example_spec)
    r2 = validate_system(example_spec)
    assert r1.errors == r2.errors and r1.warnings == r2.warnings


def test_domains_partition_modules(example_spec):
    members = [mid for d in example_spec.domains for mid in d.members]
    assert sorted(members) == sorted(m.id for m in example_spec.modules)


def test_default_exposure_when_omitted():
    spec = parse_system(two_module_doc())
    assert spec.exposure[U] == 1.0
    assert spec.exposure[T] == 0.05
    assert spec.exposure[K] == 0.9
    assert spec.exposure[F] == 0.85


def test_constraint_override_paths():
    spec = parse_system(two_module_doc())
    cs = parse_constraints(
        {
            "domain_f_min": {"d0": 1e9},
            "p_total_max": 1.0,
            "latency": [{"id": "x", "path": [0], "max_latency": 1e-8}],
        },
        spec,
    )
    assert cs.with_override("p_total_max", 2.0).p_total_max == 2.0
    assert cs.with_override("domain_f_min.d0", 5e8).domain_f_min["d0"] == 5e8
    assert (
        cs.with_override("latency_max.x", 1e-7).latency_constraints[0].max_latency
        == 1e-7
    )
    with pytest.raises(KeyError):
        cs.with_override("latency_max.nope", 1.0)
    with pytest.raises(KeyError):
        cs.with_override("not_a_field", 1.0)


def test_latency_path_must_connect():
    spec = parse_system(two_module_doc())
    with pytest.raises(SchemaError, match="disconnected"):
        parse_constraints(
            {"latency": [{"id": "x", "path": [0, 0], "max_latency": 1e-8}]}, spec
        )


def test_parallel_channel_ref_requires_index():
    doc = two_module_doc()
    doc["channels"].append(dict(doc["channels"][0]))
    spec = parse_system(doc)
    with pytest.raises(SchemaError, match="ambiguous"):
        parse_constraints(
            {"latency": [{"id": "x", "path": [{"src": "a", "dst": "b"}], "max_latency": 1e-8}]},
            spec,
        )


def test_unbounded_constraints_parse_as_infinity():
    spec = parse_system(two_module_doc())
    cs = parse_constraints({}, spec)
    assert math.isinf(cs.p_total_max) and math.isinf(cs.area_total_max)
    assert cs.p_trusted_max is None
    doc = constraints_to_doc(cs, spec)
    assert doc["p_total_max"] is None


def test_assignment_respects_placement_in_validation():
    m = make_module("a", "d0", 0.5, 1e9, placement=U)
    spec = assemble([m])
    cfg = SystemConfiguration.uniform(spec, U)
    assert cfg["a"] is U
