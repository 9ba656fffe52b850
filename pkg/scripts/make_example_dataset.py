#!/usr/bin/env python3
"""Regenerate the shipped example dataset under data/.

The 16-module SoC is synthetic but engineered so the demo narrative is
airtight:

* baseline constraints equal the all-untrusted metrics exactly; every
  single-module deviation then breaks a constraint (trusted placements
  break their domain's frequency floor because per-domain fmax spreads are
  below the 3x trusted slowdown; obfuscated placements either break the
  floor, for a domain's slowest module, or strictly raise power),
* the four-run sweep relaxes exactly the bounds needed to let crypto move
  to the trusted IC (run 1), the rest pick up obfuscation (run 2), and the
  CPU get key-locked (run 3).

The script re-runs the optimizer and asserts all of that before writing.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from splitchip.fsm import fsm_from_doc, save_fsm
from splitchip.metrics import evaluate
from splitchip.model import (
    Channel,
    ClockDomain,
    ConfigMetrics,
    Configuration,
    ConstraintSet,
    DEFAULT_EXPOSURE,
    ExposureTable,
    LatencyConstraint,
    ModuleCharacterization,
    ModuleSpec,
    SystemConfiguration,
    SystemSpec,
    save_system,
    validate_system,
)
from splitchip.netlist import netlist_from_doc, save_netlist
from splitchip.technology import scaled_technology, technology_from_doc, technology_to_doc
from splitchip.workbench import run_sweep
from splitchip.optimize import branch_and_bound

DATA = Path(__file__).resolve().parent.parent / "data"

# id, domain, criticality, fmax_untrusted (Hz), area (um^2), p_dyn@fmax (W), p_static (W)
MODULES = [
    ("gps_rf_if", "gps", 0.35, 1.40e9, 1.20e5, 0.180, 0.0080),
    ("gps_acq", "gps", 0.45, 1.30e9, 2.50e5, 0.220, 0.0120),
    ("gps_corr", "gps", 0.40, 1.00e9, 5.00e5, 0.300, 0.0200),
    ("gps_track", "gps", 0.50, 1.20e9, 1.80e5, 0.150, 0.0090),
    ("gps_nav", "gps", 0.55, 1.15e9, 1.40e5, 0.100, 0.0060),
    ("gps_pps", "gps", 0.30, 1.50e9, 0.30e5, 0.030, 0.0020),
    ("aes_gcm", "crypto", 0.95, 0.95e9, 0.80e5, 0.060, 0.0040),
    ("sha_hmac", "crypto", 0.85, 1.10e9, 0.60e5, 0.050, 0.0030),
    ("rsa_exp", "crypto", 0.90, 0.90e9, 1.20e5, 0.080, 0.0050),
    ("trng", "crypto", 0.80, 1.25e9, 0.40e5, 0.020, 0.0020),
    ("cpu", "cpu", 0.75, 1.10e9, 2.20e5, 0.250, 0.0150),
    ("ram", "cpu", 0.65, 1.30e9, 3.00e5, 0.120, 0.0180),
    ("uart", "io", 0.20, 0.40e9, 0.20e5, 0.008, 0.0010),
    ("spi", "io", 0.15, 0.48e9, 0.25e5, 0.010, 0.0012),
    ("gpio", "io", 0.10, 0.55e9, 0.15e5, 0.006, 0.0008),
    ("jtag", "io", 0.05, 0.60e9, 0.30e5, 0.005, 0.0015),
]

# src, dst, bandwidth (bit/s), on-chip latency (s)
CHANNELS = [
    ("gps_rf_if", "gps_acq", 64e9, 2e-9),
    ("gps_rf_if", "gps_corr", 64e9, 2e-9),
    ("gps_acq", "gps_corr", 32e9, 2e-9),
    ("gps_corr", "gps_track", 24e9, 3e-9),
    ("gps_track", "gps_corr", 16e9, 2e-9),
    ("gps_track", "gps_nav", 8e9, 3e-9),
    ("gps_nav", "gps_pps", 2e9, 2e-9),
    ("gps_nav", "aes_gcm", 0.5e9, 4e-9),
    ("gps_nav", "cpu", 2.5e9, 5e-9),
    ("cpu", "gps_nav", 1.5e9, 5e-9),
    ("cpu", "gps_rf_if", 0.5e9, 5e-9),
    ("cpu", "gps_acq", 0.8e9, 5e-9),
    ("cpu", "gps_corr", 1.0e9, 5e-9),
    ("cpu", "gps_track", 0.6e9, 5e-9),
    ("cpu", "gps_pps", 0.2e9, 5e-9),
    ("cpu", "aes_gcm", 1.2e9, 5e-9),
    ("aes_gcm", "cpu", 1.2e9, 5e-9),
    ("cpu", "sha_hmac", 1.0e9, 5e-9),
    ("sha_hmac", "cpu", 1.0e9, 5e-9),
    ("cpu", "rsa_exp", 0.8e9, 5e-9),
    ("rsa_exp", "cpu", 0.8e9, 5e-9),
    ("cpu", "trng", 0.1e9, 5e-9),
    ("trng", "cpu", 0.5e9, 5e-9),
    ("trng", "aes_gcm", 0.1e9, 4e-9),
    ("trng", "rsa_exp", 0.1e9, 4e-9),
    ("cpu", "ram", 12e9, 8e-9),
    ("ram", "cpu", 12e9, 8e-9),
    ("cpu", "uart", 0.1e9, 6e-9),
    ("uart", "cpu", 0.1e9, 6e-9),
    ("cpu", "spi", 0.2e9, 6e-9),
    ("spi", "cpu", 0.2e9, 6e-9),
    ("cpu", "gpio", 0.1e9, 6e-9),
    ("gpio", "cpu", 0.1e9, 6e-9),
    ("cpu", "jtag", 0.05e9, 6e-9),
    ("jtag", "cpu", 0.05e9, 6e-9),
]

TRUSTED_FACTORS = {"fmax": 1 / 3, "area": 8.0, "p_dyn": 4 / 3, "p_static": 2.0}


def build_spec() -> SystemSpec:
    rng = random.Random(20240817)
    modules = []
    for mid, dom, crit, f_u, a_u, pd_u, ps_u in MODULES:
        key = (
            rng.uniform(0.91, 0.96),
            rng.uniform(1.04, 1.10),
            rng.uniform(1.05, 1.12),
            rng.uniform(1.04, 1.10),
        )
        fsm = (
            rng.uniform(0.90, 0.95),
            rng.uniform(1.05, 1.12),
            rng.uniform(1.06, 1.14),
            rng.uniform(1.05, 1.12),
        )
        table = {
            Configuration.UNTRUSTED: ConfigMetrics(f_u, a_u, pd_u, ps_u),
            Configuration.TRUSTED: ConfigMetrics(
                f_u * TRUSTED_FACTORS["fmax"],
                a_u * TRUSTED_FACTORS["area"],
                pd_u * TRUSTED_FACTORS["p_dyn"],
                ps_u * TRUSTED_FACTORS["p_static"],
            ),
            Configuration.UNTRUSTED_KEY_LOCKED: ConfigMetrics(
                f_u * key[0], a_u * key[1], pd_u * key[2], ps_u * key[3]
            ),
            Configuration.UNTRUSTED_FSM_OBF: ConfigMetrics(
                f_u * fsm[0], a_u * fsm[1], pd_u * fsm[2], ps_u * fsm[3]
            ),
        }
        modules.append(
            ModuleSpec(
                id=mid,
                clock_domain=dom,
                criticality=crit,
                characterization=ModuleCharacterization(table),
            )
        )
    domain_ids = []
    for _, dom, *_ in MODULES:
        if dom not in domain_ids:
            domain_ids.append(dom)
    domains = tuple(
        ClockDomain(id=d, members=tuple(m.id for m in modules if m.clock_domain == d))
        for d in domain_ids
    )
    channels = tuple(Channel(*c) for c in CHANNELS)
    spec = SystemSpec(
        modules=tuple(modules),
        domains=domains,
        channels=tuple(channels),
        exposure=ExposureTable(dict(DEFAULT_EXPOSURE)),
    )
    report = validate_system(spec)
    assert report.ok, report.errors
    return spec


def channel_index(spec: SystemSpec, src: str, dst: str) -> int:
    for i, ch in enumerate(spec.channels):
        if ch.src == src and ch.dst == dst:
            return i
    raise KeyError((src, dst))


def build_baseline(spec: SystemSpec) -> ConstraintSet:
    """Constraints held exactly at the all-untrusted system's metrics."""
    all_u = SystemConfiguration.uniform(spec, Configuration.UNTRUSTED)
    paths = {
        "gps_pipeline": [
            channel_index(spec, "gps_rf_if", "gps_acq"),
            channel_index(spec, "gps_acq", "gps_corr"),
            channel_index(spec, "gps_corr", "gps_track"),
        ],
        "fix_to_crypto": [
            channel_index(spec, "gps_nav", "aes_gcm"),
            channel_index(spec, "aes_gcm", "cpu"),
        ],
        "cpu_uart_echo": [
            channel_index(spec, "cpu", "uart"),
            channel_index(spec, "uart", "cpu"),
        ],
    }
    probe = ConstraintSet(
        external_io_baseline=1e9,
        inter_chip_delay=5e-9,
        io_bandwidth_max=12e9,
        area_total_max=5.5e6,
        latency_constraints=tuple(
            LatencyConstraint(id=k, path=tuple(v), max_latency=1.0)
            for k, v in paths.items()
        ),
    )
    base_eval = evaluate(spec, all_u, probe)
    return ConstraintSet(
        domain_f_min=dict(base_eval.domain_freq),
        p_total_max=base_eval.power.total,
        io_bandwidth_max=12e9,
        external_io_baseline=1e9,
        latency_constraints=tuple(
            LatencyConstraint(
                id=lc.id, path=lc.path, max_latency=base_eval.latencies[lc.id]
            )
            for lc in probe.latency_constraints
        ),
        area_total_max=5.5e6,
        inter_chip_delay=5e-9,
    )


def build_sweep_doc(spec: SystemSpec, baseline: ConstraintSet) -> dict:
    crypto_fmin = baseline.domain_f_min["crypto"]
    cpu_fmin = baseline.domain_f_min["cpu"]
    run1 = {
        "domain_f_min.crypto": crypto_fmin / 3.2,
        "p_total_max": baseline.p_total_max * 1.5,
        "latency_max.fix_to_crypto": 50e-9,
    }
    run3 = dict(run1)
    run3["domain_f_min.cpu"] = cpu_fmin / 1.1
    plain = ["TRUSTED", "UNTRUSTED"]
    return {
        "runs": [
            {"overrides": {}, "enabled_configs": plain},
            {"overrides": run1, "enabled_configs": plain},
            {"overrides": run1},
            {"overrides": run3},
        ]
    }


# --------------------------------------------------------------------------
# Characterizer demo inputs


def gps_corr_netlist() -> dict:
    """8-tap code correlator: shift register, XNOR match, AND-reduce; the
    match hit feeds the acquisition FSM, which gates the output."""
    gates = []
    dffs = []
    for i in range(8):
        d = "sig_in" if i == 0 else f"sr{i - 1}"
        dffs.append({"d": d, "q": f"sr{i}"})
        gates.append(
            {"id": f"xn{i}", "type": "XNOR2", "inputs": [f"sr{i}", f"code{i}"], "output": f"m{i}"}
        )
    # AND reduction tree over m0..m7
    level = [f"m{i}" for i in range(8)]
    n = 0
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level), 2):
            out = f"a{n}"
            gates.append(
                {"id": f"and{n}", "type": "AND2", "inputs": [level[i], level[i + 1]], "output": out}
            )
            nxt.append(out)
            n += 1
        level = nxt
    gates.append({"id": "hit_buf", "type": "BUF", "inputs": [level[0]], "output": "fsm_in0"})
    gates.append(
        {"id": "out_gate", "type": "AND2", "inputs": [level[0], "fsm_out0"], "output": "corr_hit"}
    )
    return {
        "name": "gps_corr",
        "inputs": ["sig_in"] + [f"code{i}" for i in range(8)] + ["fsm_out0"],
        "outputs": ["corr_hit", "fsm_in0"],
        "gates": gates,
        "dffs": dffs,
    }


def gps_corr_fsm() -> dict:
    return {
        "states": ["IDLE", "SEARCH", "LOCKED"],
        "reset": "IDLE",
        "input_width": 1,
        "output_width": 1,
        "transitions": [
            {"state": "IDLE", "input": "-", "next": "SEARCH", "output": "0"},
            {"state": "SEARCH", "input": "1", "next": "LOCKED", "output": "1"},
            {"state": "SEARCH", "input": "0", "next": "SEARCH", "output": "0"},
            {"state": "LOCKED", "input": "0", "next": "SEARCH", "output": "0"},
            {"state": "LOCKED", "input": "1", "next": "LOCKED", "output": "1"},
        ],
    }


def uart_tx_netlist() -> dict:
    """4-bit transmit shifter with FSM-driven load/shift-enable."""
    gates = []
    dffs = []
    for i in range(4):
        hold = f"h{i}"
        load = f"ld{i}"
        shift_src = f"tx{i + 1}" if i < 3 else "stop_fill_zero"
        gates.append({"id": f"mux_l{i}", "type": "AND2", "inputs": ["fsm_out0", f"din{i}"], "output": load})
        gates.append({"id": f"mux_s{i}", "type": "AND2", "inputs": ["fsm_out1", shift_src], "output": f"sh{i}"})
        gates.append({"id": f"mux_o{i}", "type": "OR2", "inputs": [load, f"sh{i}"], "output": hold})
        dffs.append({"d": hold, "q": f"tx{i}"})
    gates.append({"id": "zero0", "type": "XOR2", "inputs": ["din0", "din0"], "output": "stop_fill_zero"})
    gates.append({"id": "busy0", "type": "OR2", "inputs": ["fsm_out0", "fsm_out1"], "output": "busy"})
    gates.append({"id": "start_buf", "type": "BUF", "inputs": ["tx_start"], "output": "fsm_in0"})
    return {
        "name": "uart_tx",
        "inputs": ["tx_start"] + [f"din{i}" for i in range(4)] + ["fsm_out0", "fsm_out1"],
        "outputs": ["tx0", "busy", "fsm_in0"],
        "gates": gates,
        "dffs": dffs,
    }


def uart_tx_fsm() -> dict:
    return {
        "states": ["IDLE", "LOAD", "SHIFT1", "SHIFT2", "SHIFT3", "STOP"],
        "reset": "IDLE",
        "input_width": 1,
        "output_width": 2,
        "transitions": [
            {"state": "IDLE", "input": "1", "next": "LOAD", "output": "10"},
            {"state": "LOAD", "input": "-", "next": "SHIFT1", "output": "01"},
            {"state": "SHIFT1", "input": "-", "next": "SHIFT2", "output": "01"},
            {"state": "SHIFT2", "input": "-", "next": "SHIFT3", "output": "01"},
            {"state": "SHIFT3", "input": "-", "next": "STOP", "output": "00"},
            {"state": "STOP", "input": "-", "next": "IDLE", "output": "00"},
        ],
    }


def advanced_tech_doc() -> dict:
    cells = {
        "INV": (8e-12, 0.30, 2e-9, 0.5e-15),
        "BUF": (9e-12, 0.35, 2e-9, 0.6e-15),
        "AND2": (14e-12, 0.50, 3e-9, 1.0e-15),
        "OR2": (14e-12, 0.50, 3e-9, 1.0e-15),
        "NAND2": (10e-12, 0.40, 3e-9, 0.8e-15),
        "NOR2": (11e-12, 0.40, 3e-9, 0.8e-15),
        "XOR2": (18e-12, 0.70, 4e-9, 1.6e-15),
        "XNOR2": (19e-12, 0.70, 4e-9, 1.6e-15),
        "DFF": (25e-12, 1.50, 8e-9, 2.0e-15),
    }
    return {
        "name": "advanced_node",
        "cells": {
            k: {"delay": d, "area": a, "leakage": l, "switch_energy": e}
            for k, (d, a, l, e) in cells.items()
        },
        "seq_overhead": 30e-12,
        "activity_factor": 0.1,
    }


def verify(spec: SystemSpec, baseline: ConstraintSet, sweep_doc: dict):
    from splitchip.workbench.sweep import parse_sweep

    all_u = SystemConfiguration.uniform(spec, Configuration.UNTRUSTED)
    base_eval = evaluate(spec, all_u, baseline)
    assert base_eval.feasible, base_eval.violations

    for enabled in (
        (Configuration.TRUSTED, Configuration.UNTRUSTED),
        None,
    ):
        res = branch_and_bound(spec, baseline, enabled=enabled)
        assert res.best is not None
        assert res.best.assignment == all_u.assignment, (
            "run 0 must be all-untrusted",
            {k: v.name for k, v in res.best.assignment.items() if v != Configuration.UNTRUSTED},
        )

    sweep = parse_sweep(sweep_doc, spec, default_base=baseline)
    records = run_sweep(spec, sweep, workers=4)
    vulns = [r.eval.vulnerability for r in records]
    assert all(r.result.best is not None for r in records)
    assert vulns[0] > vulns[1] >= vulns[2] >= vulns[3], vulns
    for i, r in enumerate(records):
        moved = {
            mid: cfg.name
            for mid, cfg in r.result.best.assignment.items()
            if cfg != Configuration.UNTRUSTED
        }
        print(f"run {i}: vulnerability={vulns[i]:.4f} non-untrusted={moved}")
    return vulns, records


def main() -> None:
    spec = build_spec()
    baseline = build_baseline(spec)
    sweep_doc = build_sweep_doc(spec, baseline)
    vulns, records = verify(spec, baseline, sweep_doc)

    soc_dir = DATA / "example_soc"
    soc_dir.mkdir(parents=True, exist_ok=True)
    (soc_dir / "system.json").write_text(save_system(spec, baseline) + "\n")
    (soc_dir / "four_runs.json").write_text(json.dumps(sweep_doc, indent=2) + "\n")

    # real payload fixtures for the explorer UI's contract tests
    fe_tests = DATA.parent / "frontend" / "tests"
    if fe_tests.is_dir():
        (fe_tests / "example_system.json").write_text(
            save_system(spec, baseline) + "\n"
        )
        (fe_tests / "four_runs_report.json").write_text(
            json.dumps([r.to_doc(spec) for r in records], indent=2) + "\n"
        )

    tech_dir = DATA / "tech"
    tech_dir.mkdir(parents=True, exist_ok=True)
    advanced = technology_from_doc(advanced_tech_doc())
    legacy = scaled_technology(
        advanced, "legacy_node", delay=3.0, area=8.0, leakage=2.0, switch_energy=4.0
    )
    (tech_dir / "advanced.json").write_text(
        json.dumps(technology_to_doc(advanced), indent=2) + "\n"
    )
    (tech_dir / "legacy.json").write_text(
        json.dumps(technology_to_doc(legacy), indent=2) + "\n"
    )

    for name, nl_doc, fsm_doc in (
        ("gps_corr", gps_corr_netlist(), gps_corr_fsm()),
        ("uart_tx", uart_tx_netlist(), uart_tx_fsm()),
    ):
        mod_dir = DATA / "modules" / name
        mod_dir.mkdir(parents=True, exist_ok=True)
        nl = netlist_from_doc(nl_doc)  # validates
        fsm = fsm_from_doc(fsm_doc)
        (mod_dir / "netlist.json").write_text(save_netlist(nl) + "\n")
        (mod_dir / "fsm.json").write_text(save_fsm(fsm) + "\n")

    print(f"wrote {DATA}; four-run vulnerabilities: {[round(v, 4) for v in vulns]}")


if __name__ == "__main__":
    main()
