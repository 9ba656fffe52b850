import json

import pytest
from helpers import EXAMPLE_SOC, FOUR_RUNS, T, U, random_instance

from splitchip.model import ALL_CONFIGURATIONS, SchemaError
from splitchip.workbench import (
    RunStore,
    SweepSpec,
    load_sweep,
    parse_sweep,
    run_once,
    run_sweep,
)
from splitchip.workbench.sweep import SweepError, apply_overrides


def test_run_once_requires_trusted_and_untrusted():
    spec, cs = random_instance(1, max_modules=4)
    with pytest.raises(ValueError, match="must include"):
        run_once(spec, cs, enabled_configs=(T,))


def test_run_once_rejects_placement_in_disabled_config():
    from helpers import K, assemble, make_module
    from splitchip.model import ConstraintSet

    spec = assemble([make_module("locked", "d", 0.5, 1e9, placement=K)])
    with pytest.raises(ValueError, match="not in the enabled"):
        run_once(spec, ConstraintSet(), enabled_configs=(T, U))


def test_run_once_baseline_on_example(example_spec, example_constraints):
    record = run_once(example_spec, example_constraints, enabled_configs=(T, U))
    assert record.result.best is not None
    assert all(c is U for c in record.result.best.assignment.values())
    assert record.eval is not None and record.eval.feasible
    assert record.enabled_configs == (T, U)


def test_degenerate_sweep_equals_run_once(example_spec, example_constraints):
    sweep = SweepSpec(base=example_constraints)
    records = run_sweep(example_spec, sweep, workers=1)
    assert len(records) == 1
    direct = run_once(
        example_spec, example_constraints, enabled_configs=ALL_CONFIGURATIONS
    )
    assert records[0].result == direct.result
    assert records[0].eval == direct.eval


def test_cartesian_axes_enumeration(example_spec, example_constraints):
    doc = {
        "axes": [
            {"path": "p_total_max", "values": [1.0, 2.0]},
            {"path": "io_bandwidth_max", "values": [1e9, 2e9, 3e9]},
        ]
    }
    sweep = parse_sweep(doc, example_spec, default_base=example_constraints)
    points = sweep.points()
    assert len(points) == 6
    # first axis varies slowest, values in declared order
    assert points[0].overrides == (("p_total_max", 1.0), ("io_bandwidth_max", 1e9))
    assert points[1].overrides == (("p_total_max", 1.0), ("io_bandwidth_max", 2e9))
    assert points[3].overrides == (("p_total_max", 2.0), ("io_bandwidth_max", 1e9))
    cs = apply_overrides(example_constraints, points[3].overrides)
    assert cs.p_total_max == 2.0 and cs.io_bandwidth_max == 1e9


def test_axis_path_validated(example_spec, example_constraints):
    with pytest.raises(SchemaError, match="unknown"):
        parse_sweep(
            {"axes": [{"path": "bogus_field", "values": [1]}]},
            example_spec,
            default_base=example_constraints,
        )
    with pytest.raises(SchemaError, match="unknown domain"):
        parse_sweep(
            {"axes": [{"path": "domain_f_min.nope", "values": [1]}]},
            example_spec,
            default_base=example_constraints,
        )


def test_worker_count_does_not_change_results(example_spec, example_constraints):
    sweep = load_sweep(FOUR_RUNS.read_text(), example_spec, default_base=example_constraints)
    seq = run_sweep(example_spec, sweep, workers=1)
    par = run_sweep(example_spec, sweep, workers=8)
    assert [r.result for r in seq] == [r.result for r in par]
    assert [r.eval for r in seq] == [r.eval for r in par]
    assert [r.run_id for r in seq] == list(range(len(seq)))


def test_16_point_cartesian_sweep_independent_of_workers(
    example_spec, example_constraints
):
    doc = {
        "axes": [
            {
                "path": "p_total_max",
                "values": [example_constraints.p_total_max * s for s in (1.0, 1.2, 1.5, 2.0)],
            },
            {
                "path": "domain_f_min.crypto",
                "values": [
                    example_constraints.domain_f_min["crypto"] / s
                    for s in (1.0, 1.5, 2.4, 3.2)
                ],
            },
        ]
    }
    sweep = parse_sweep(doc, example_spec, default_base=example_constraints)
    assert len(sweep.points()) == 16
    seq = run_sweep(example_spec, sweep, workers=1)
    par = run_sweep(example_spec, sweep, workers=8)
    assert [r.result for r in seq] == [r.result for r in par]


def test_sweep_point_errors_are_tagged(example_spec, example_constraints):
    doc = {"runs": [{"overrides": {}, "enabled_configs": ["TRUSTED"]}]}
    sweep = parse_sweep(doc, example_spec, default_base=example_constraints)
    with pytest.raises(SweepError, match="sweep point 0"):
        run_sweep(example_spec, sweep, workers=2)


def test_run_store_is_append_only_and_monotone():
    store = RunStore()
    spec, cs = random_instance(3, max_modules=3)
    ids = []
    for _ in range(3):
        rid = store.allocate_id()
        ids.append(rid)
        store.add(run_once(spec, cs, run_id=rid))
    assert ids == [0, 1, 2]
    assert [r.run_id for r in store.list()] == ids
    assert store.delete(1)
    assert not store.delete(1)
    assert [r.run_id for r in store.list()] == [0, 2]
    assert store.allocate_id() == 3  # ids never reused


def test_run_record_serializes(example_spec, example_constraints, tmp_path):
    store = RunStore()
    record = run_once(example_spec, example_constraints, run_id=store.allocate_id())
    store.add(record)
    out = tmp_path / "runs.json"
    store.save(str(out), example_spec)
    docs = json.loads(out.read_text())
    assert docs[0]["run_id"] == 0
    assert docs[0]["eval"]["feasible"] is True
    assert set(docs[0]["enabled_configs"]) == {c.name for c in ALL_CONFIGURATIONS}


# --- CLI ---------------------------------------------------------------------


def run_cli(*argv):
    from splitchip.cli import main

    return main(list(argv))


def test_cli_validate_ok(capsys):
    assert run_cli("validate", str(EXAMPLE_SOC)) == 0
    out = capsys.readouterr().out
    assert "16 modules" in out


def test_cli_validate_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"modules\": []}")
    assert run_cli("validate", str(bad)) == 1
    assert "error" in capsys.readouterr().err


def test_cli_optimize_and_evaluate_roundtrip(tmp_path, capsys):
    out = tmp_path / "opt.json"
    rc = run_cli("optimize", str(EXAMPLE_SOC), "--disable-locking", "-o", str(out))
    assert rc == 0
    doc = json.loads(out.read_text())
    best = doc["result"]["best"]
    assert set(best.values()) == {"UNTRUSTED"}

    assignment = tmp_path / "assign.json"
    assignment.write_text(json.dumps(best))
    ev_out = tmp_path / "eval.json"
    rc = run_cli(
        "evaluate", str(EXAMPLE_SOC), "--assignment", str(assignment), "-o", str(ev_out)
    )
    assert rc == 0
    ev = json.loads(ev_out.read_text())
    assert ev["feasible"] is True
    assert ev["vulnerability"] == doc["eval"]["vulnerability"]


def test_cli_sweep_four_runs(tmp_path):
    report = tmp_path / "report.json"
    rc = run_cli(
        "sweep", str(EXAMPLE_SOC), str(FOUR_RUNS), "--workers", "4", "-o", str(report)
    )
    assert rc == 0
    docs = json.loads(report.read_text())
    assert len(docs) == 4
    vulns = [d["eval"]["vulnerability"] for d in docs]
    assert vulns[0] > vulns[1] >= vulns[2] >= vulns[3]


def test_cli_lock_roundtrip(tmp_path, capsys):
    from helpers import DATA

    netlist = DATA / "modules" / "gps_corr" / "netlist.json"
    locked = tmp_path / "locked.json"
    key = tmp_path / "key.txt"
    rc = run_cli(
        "lock-xor", str(netlist), "--k", "4", "--seed", "7", "-o", str(locked), "--key-out", str(key)
    )
    assert rc == 0
    from splitchip.locking import key_from_hex
    from splitchip.netlist import parse_netlist

    nl = parse_netlist(locked.read_text())
    assert sum(1 for p in nl.inputs if p.startswith("key")) == 4
    assert len(key_from_hex(key.read_text(), 4)) == 4

    fsm = DATA / "modules" / "gps_corr" / "fsm.json"
    obf = tmp_path / "obf.json"
    fkey = tmp_path / "fkey.json"
    rc = run_cli(
        "lock-fsm", str(fsm), "--chain", "2", "--traps", "2", "--seed", "3",
        "-o", str(obf), "--key-out", str(fkey),
    )
    assert rc == 0
    seq = json.loads(fkey.read_text())
    assert len(seq) == 2 and all(len(v) == 1 for v in seq)


def test_cli_characterize(tmp_path):
    from helpers import DATA

    out = tmp_path / "char.json"
    rc = run_cli(
        "characterize",
        str(DATA / "modules" / "gps_corr"),
        "--trusted", str(DATA / "tech" / "legacy.json"),
        "--untrusted", str(DATA / "tech" / "advanced.json"),
        "-o", str(out),
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {c.name for c in ALL_CONFIGURATIONS}
    assert doc["TRUSTED"]["fmax"] == pytest.approx(doc["UNTRUSTED"]["fmax"] / 3, rel=1e-9)
