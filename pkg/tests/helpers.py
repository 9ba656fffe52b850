"""Shared fixtures-in-code: instance generators and independent oracles.

The oracles here deliberately re-derive results by the most direct route
available (full enumeration, explicit path walks) and stay independent of
the implementations they check.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from splitchip.metrics import evaluate
from splitchip.model import (
    ALL_CONFIGURATIONS,
    Channel,
    ClockDomain,
    ConfigMetrics,
    Configuration,
    ConstraintSet,
    ExposureTable,
    LatencyConstraint,
    ModuleCharacterization,
    ModuleSpec,
    SystemConfiguration,
    SystemSpec,
    validate_system,
)
from splitchip.netlist import COMB_CELLS, Netlist, netlist_from_doc

REPO = Path(__file__).resolve().parent.parent
DATA = REPO / "data"
EXAMPLE_SOC = DATA / "example_soc" / "system.json"
FOUR_RUNS = DATA / "example_soc" / "four_runs.json"

U = Configuration.UNTRUSTED
T = Configuration.TRUSTED
K = Configuration.UNTRUSTED_KEY_LOCKED
F = Configuration.UNTRUSTED_FSM_OBF


def make_module(
    mid: str,
    domain: str,
    crit: float,
    f_u: float,
    area_u: float = 1e5,
    pd_u: float = 0.05,
    ps_u: float = 0.005,
    placement=None,
    factors=None,
) -> ModuleSpec:
    """Module with conventional trusted/locked/obfuscated scaling."""
    fac = {
        T: (1 / 3, 8.0, 4 / 3, 2.0),
        K: (0.93, 1.06, 1.08, 1.06),
        F: (0.90, 1.09, 1.10, 1.08),
    }
    if factors:
        fac.update(factors)
    table = {U: ConfigMetrics(f_u, area_u, pd_u, ps_u)}
    for cfg, (ff, fa, fd, fs) in fac.items():
        table[cfg] = ConfigMetrics(f_u * ff, area_u * fa, pd_u * fd, ps_u * fs)
    return ModuleSpec(
        id=mid,
        clock_domain=domain,
        criticality=crit,
        characterization=ModuleCharacterization(table),
        placement=placement,
    )


def assemble(modules, channels=(), exposure=None) -> SystemSpec:
    domain_ids = []
    for m in modules:
        if m.clock_domain not in domain_ids:
            domain_ids.append(m.clock_domain)
    domains = tuple(
        ClockDomain(id=d, members=tuple(m.id for m in modules if m.clock_domain == d))
        for d in domain_ids
    )
    expo = exposure or {T: 0.05, U: 1.0, K: 0.9, F: 0.85}
    spec = SystemSpec(
        modules=tuple(modules),
        domains=domains,
        channels=tuple(Channel(*c) if not isinstance(c, Channel) else c for c in channels),
        exposure=ExposureTable(expo),
    )
    report = validate_system(spec)
    assert report.ok, report.errors
    return spec


def random_instance(seed: int, max_modules: int = 10):
    """Seeded random (spec, constraints) pair around a feasible baseline."""
    rng = random.Random(seed)
    n = rng.randint(2, max_modules)
    n_dom = rng.randint(1, min(4, n))
    modules = []
    for i in range(n):
        f_u = rng.uniform(0.4e9, 2.5e9)
        placement = None
        if rng.random() < 0.08:
            placement = rng.choice(list(ALL_CONFIGURATIONS))
        modules.append(
            make_module(
                f"m{i}",
                f"d{i % n_dom}",
                crit=rng.uniform(0.0, 1.0),
                f_u=f_u,
                area_u=rng.uniform(1e4, 5e5),
                pd_u=rng.uniform(0.005, 0.3),
                ps_u=rng.uniform(0.0005, 0.03),
                placement=placement,
                factors={
                    T: (
                        1 / rng.uniform(2.2, 3.8),
                        rng.uniform(5.0, 9.0),
                        rng.uniform(1.1, 1.6),
                        rng.uniform(1.4, 2.4),
                    ),
                    K: (
                        rng.uniform(0.85, 0.99),
                        rng.uniform(1.02, 1.12),
                        rng.uniform(1.02, 1.18),
                        rng.uniform(1.02, 1.12),
                    ),
                    F: (
                        rng.uniform(0.82, 0.99),
                        rng.uniform(1.02, 1.15),
                        rng.uniform(1.02, 1.20),
                        rng.uniform(1.02, 1.15),
                    ),
                },
            )
        )
    channels = []
    for _ in range(rng.randint(n, 3 * n)):
        a, b = rng.sample(range(n), 2)
        channels.append(
            Channel(
                src=f"m{a}",
                dst=f"m{b}",
                bandwidth=rng.uniform(0.05e9, 8e9),
                latency_on_chip=rng.uniform(0.5e-9, 9e-9),
            )
        )
    exposure = {
        U: 1.0,
        T: rng.uniform(0.0, 0.2),
        K: rng.uniform(0.6, 1.0),
        F: rng.uniform(0.6, 1.0),
    }
    spec = assemble(modules, channels, exposure)

    all_u = SystemConfiguration.uniform(spec, U)
    probe = ConstraintSet(
        external_io_baseline=rng.uniform(0, 2e9),
        inter_chip_delay=rng.uniform(0, 8e-9),
    )
    base = evaluate(spec, all_u, probe)
    lat = []
    for li in range(rng.randint(0, 2)):
        length = rng.randint(1, 3)
        start = rng.randrange(len(channels))
        path = [start]
        for _ in range(length - 1):
            cur_dst = channels[path[-1]].dst
            nxt = [i for i, ch in enumerate(channels) if ch.src == cur_dst]
            if not nxt:
                break
            path.append(rng.choice(nxt))
        base_lat = sum(channels[i].latency_on_chip for i in path)
        lat.append(
            LatencyConstraint(
                id=f"lat{li}",
                path=tuple(path),
                max_latency=base_lat * rng.uniform(1.0, 3.0)
                + probe.inter_chip_delay * rng.randint(0, len(path)),
            )
        )
    constraints = ConstraintSet(
        domain_f_min={
            d.id: base.domain_freq[d.id] * rng.uniform(0.2, 1.0)
            for d in spec.domains
            if rng.random() < 0.85
        },
        p_total_max=base.power.total * rng.uniform(0.9, 2.2),
        p_trusted_max=base.power.total * rng.uniform(0.1, 1.5)
        if rng.random() < 0.3
        else None,
        p_untrusted_max=base.power.total * rng.uniform(0.8, 1.5)
        if rng.random() < 0.3
        else None,
        io_bandwidth_max=probe.external_io_baseline + rng.uniform(0.2e9, 25e9),
        external_io_baseline=probe.external_io_baseline,
        latency_constraints=tuple(lat),
        area_total_max=base.area.total * rng.uniform(1.0, 5.0),
        inter_chip_delay=probe.inter_chip_delay,
    )
    return spec, constraints


def engine_brute_force(spec, constraints, enabled=None):
    """Ground-truth optimizer: evaluate() on every assignment, with the
    documented tie rule re-stated inline.  Only sensible for small n."""
    from splitchip.optimize import allowed_configurations, module_search_order

    allowed = allowed_configurations(spec, enabled)
    ids = [m.id for m in spec.modules]
    order = module_search_order(spec)
    best = None
    best_key = None
    count = 0
    for combo in itertools.product(*(allowed[mid] for mid in ids)):
        count += 1
        cfg = SystemConfiguration(dict(zip(ids, combo)))
        ev = evaluate(spec, cfg, constraints)
        if not ev.feasible:
            continue
        key = (
            ev.vulnerability,
            ev.power.total,
            ev.area.total,
            tuple(int(cfg[mid]) for mid in order),
        )
        if best_key is None or key < best_key:
            best_key = key
            best = (cfg, ev)
    return best, count


def random_dag_netlist(seed: int, max_gates: int = 12, n_inputs: int = 3) -> Netlist:
    """Random combinational DAG for timing/locking tests."""
    rng = random.Random(seed)
    n_gates = rng.randint(1, max_gates)
    nets = [f"i{k}" for k in range(n_inputs)]
    gates = []
    for g in range(n_gates):
        typ = rng.choice(COMB_CELLS)
        n_in = 1 if typ in ("INV", "BUF") else 2
        ins = [rng.choice(nets) for _ in range(n_in)]
        out = f"n{g}"
        gates.append({"id": f"g{g}", "type": typ, "inputs": ins, "output": out})
        nets.append(out)
    driven = {g["output"] for g in gates}
    consumed = {x for g in gates for x in g["inputs"]}
    outputs = sorted(driven - consumed) or [gates[-1]["output"]]
    return netlist_from_doc(
        {
            "name": f"dag{seed}",
            "inputs": [f"i{k}" for k in range(n_inputs)],
            "outputs": outputs,
            "gates": gates,
            "dffs": [],
        }
    )


def enumerate_paths_delay(nl: Netlist, tech) -> float:
    """Exhaustive longest-path oracle: walk every source-to-sink path."""
    consumers: dict[str, list] = {}
    for g in nl.gates:
        for net in g.inputs:
            consumers.setdefault(net, []).append(g)
    pos = set(nl.outputs)
    d_nets = {ff.d for ff in nl.dffs}
    best = float("-inf")

    def walk(net: str, acc: float, from_ff: bool):
        nonlocal best
        if net in pos:
            total = acc + (tech.seq_overhead if from_ff else 0.0)
            best = max(best, total)
        if net in d_nets:
            best = max(best, acc + tech.seq_overhead)
        for g in consumers.get(net, ()):
            walk(g.output, acc + tech.delay(g.type), from_ff)

    for pi in nl.inputs:
        walk(pi, 0.0, False)
    for ff in nl.dffs:
        walk(ff.q, 0.0, True)
    return best if best != float("-inf") else 0.0
