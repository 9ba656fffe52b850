"""Static timing analysis, max-frequency search, area and power estimates.

Paths run from a launch point (PI or DFF q) to a capture point (PO or DFF
d).  A path that starts or ends at a register is charged ``seq_overhead``
once, no matter how many register endpoints it touches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .netlist import Netlist
from .technology import Technology

MAX_FMAX_ITERATIONS = 32
SLACK_TOLERANCE = 1e-15  # s


@dataclass(frozen=True)
class TimingReport:
    critical_delay: float  # s
    critical_path: tuple[str, ...]  # gate ids, launch to capture
    slack: float  # target_period - critical_delay


@dataclass(frozen=True)
class FmaxResult:
    fmax: float  # Hz
    period: float  # s
    iterations: int


def sta(nl: Netlist, tech: Technology, target_period: float = 0.0) -> TimingReport:
    """Longest-path timing at a target period.

    Arrival times are tracked in two lanes (paths launched from PIs vs from
    DFF q pins) so the single sequencing-overhead charge can be applied to
    exactly the paths that touch a register.
    """
    NEG = -math.inf
    # lane 0: launched at a PI; lane 1: launched at a DFF q
    arr: dict[str, list[float]] = {}
    pred: dict[str, list] = {}
    for pi in nl.inputs:
        arr[pi] = [0.0, NEG]
        pred[pi] = [None, None]
    for ff in nl.dffs:
        a = arr.setdefault(ff.q, [NEG, NEG])
        a[1] = 0.0
        pred.setdefault(ff.q, [None, None])

    for g in nl.topo_gates:
        d = tech.delay(g.type)
        best = [NEG, NEG]
        best_pred = [None, None]
        for net in g.inputs:
            a = arr.get(net)
            if a is None:
                continue
            for lane in (0, 1):
                if a[lane] != NEG and a[lane] + d > best[lane]:
                    best[lane] = a[lane] + d
                    best_pred[lane] = net
        arr[g.output] = best
        pred[g.output] = best_pred

    best_delay = NEG
    best_end: tuple[str, int] | None = None
    seq = tech.seq_overhead

    def consider(net: str, capture_is_ff: bool):
        nonlocal best_delay, best_end
        a = arr.get(net)
        if a is None:
            return
        for lane in (0, 1):
            if a[lane] == NEG:
                continue
            total = a[lane]
            if capture_is_ff or lane == 1:
                total += seq
            if total > best_delay:
                best_delay = total
                best_end = (net, lane)

    for po in nl.outputs:
        consider(po, False)
    for ff in nl.dffs:
        consider(ff.d, True)

    if best_end is None:
        return TimingReport(0.0, (), target_period)

    path: list[str] = []
    net, lane = best_end
    while net is not None:
        g = nl.gate_by_output.get(net)
        if g is not None:
            path.append(g.id)
        net = pred.get(net, [None, None])[lane]
    path.reverse()
    return TimingReport(best_delay, tuple(path), target_period - best_delay)


def find_max_frequency(nl: Netlist, tech: Technology) -> FmaxResult:
    """Period-relaxation loop: start at zero, add back the negative slack
    until timing is met.

    The fixed-delay model converges in at most two iterations; the loop
    shape is kept so a period-dependent timing oracle can slot in.
    """
    period = 0.0
    for it in range(1, MAX_FMAX_ITERATIONS + 1):
        rep = sta(nl, tech, period)
        if rep.slack >= -SLACK_TOLERANCE:
            fmax = math.inf if period <= 0.0 else 1.0 / period
            return FmaxResult(fmax=fmax, period=period, iterations=it)
        period = period - rep.slack
    raise RuntimeError(
        f"{nl.name}: max-frequency search did not converge in"
        f" {MAX_FMAX_ITERATIONS} iterations"
    )


def estimate_area(nl: Netlist, tech: Technology) -> float:
    """Cell area sum; constant with clock period."""
    total = 0.0
    for g in nl.gates:
        total += tech.cells[g.type].area
    total += len(nl.dffs) * tech.cells["DFF"].area
    return total


@dataclass(frozen=True)
class PowerEstimate:
    p_dyn: float  # W
    p_static: float  # W


def estimate_power(nl: Netlist, tech: Technology, f: float) -> PowerEstimate:
    if not f > 0:
        raise ValueError("frequency must be > 0")
    leak = 0.0
    energy = 0.0
    for g in nl.gates:
        c = tech.cells[g.type]
        leak += c.leakage
        energy += c.switch_energy
    dffc = tech.cells["DFF"]
    leak += len(nl.dffs) * dffc.leakage
    energy += len(nl.dffs) * dffc.switch_energy
    return PowerEstimate(p_dyn=tech.activity_factor * f * energy, p_static=leak)
