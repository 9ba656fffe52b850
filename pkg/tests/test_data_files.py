"""The shipped dataset stays valid against the shipped schemas."""

import json

import pytest
from helpers import DATA, EXAMPLE_SOC, FOUR_RUNS

jsonschema = pytest.importorskip("jsonschema")


def make_validator(schema_name):
    from referencing import Registry, Resource

    schema_dir = DATA / "schemas"
    registry = Registry()
    store = {}
    for p in schema_dir.glob("*.schema.json"):
        doc = json.loads(p.read_text())
        store[doc["$id"]] = doc
        registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))
    return jsonschema.Draft7Validator(store[schema_name], registry=registry)


def test_system_file_matches_schema():
    v = make_validator("system.schema.json")
    errors = list(v.iter_errors(json.loads(EXAMPLE_SOC.read_text())))
    assert errors == []


def test_sweep_file_matches_schema():
    v = make_validator("sweep.schema.json")
    assert list(v.iter_errors(json.loads(FOUR_RUNS.read_text()))) == []


@pytest.mark.parametrize("name", ["advanced", "legacy"])
def test_technology_files_match_schema(name):
    v = make_validator("technology.schema.json")
    doc = json.loads((DATA / "tech" / f"{name}.json").read_text())
    assert list(v.iter_errors(doc)) == []


@pytest.mark.parametrize("module", ["gps_corr", "uart_tx"])
def test_module_files_match_schemas(module):
    nl_v = make_validator("netlist.schema.json")
    fsm_v = make_validator("fsm.schema.json")
    d = DATA / "modules" / module
    assert list(nl_v.iter_errors(json.loads((d / "netlist.json").read_text()))) == []
    assert list(fsm_v.iter_errors(json.loads((d / "fsm.json").read_text()))) == []


def test_run_record_schema_accepts_live_output(example_spec, example_constraints):
    from splitchip.workbench import run_once

    v = make_validator("run_record.schema.json")
    record = run_once(example_spec, example_constraints)
    doc = json.loads(json.dumps(record.to_doc(example_spec)))
    assert list(v.iter_errors(doc)) == []


def test_example_constraints_are_exactly_the_untrusted_baseline(
    example_spec, example_constraints
):
    from helpers import U
    from splitchip.metrics import evaluate
    from splitchip.model import SystemConfiguration

    cfg = SystemConfiguration.uniform(example_spec, U)
    base = evaluate(example_spec, cfg, example_constraints)
    assert base.feasible
    assert base.power.total == example_constraints.p_total_max
    for d, f in base.domain_freq.items():
        assert example_constraints.domain_f_min[d] == f
    for lc in example_constraints.latency_constraints:
        assert base.latencies[lc.id] == lc.max_latency
