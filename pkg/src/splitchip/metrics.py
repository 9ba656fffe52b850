"""The five system metrics plus vulnerability, and constraint checking.

Everything here is a pure function of (spec, assignment, constraints).
Accumulation orders are fixed (module/channel declaration order) so the
compiled search kernel can reproduce these numbers bit-for-bit; change an
order here only together with the kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .model import (
    ConstraintSet,
    LatencyConstraint,
    SystemConfiguration,
    SystemSpec,
)


@dataclass(frozen=True)
class Violation:
    constraint: str
    required: float
    actual: float

    def to_doc(self) -> dict:
        return {
            "constraint": self.constraint,
            "required": self.required,
            "actual": self.actual,
        }


@dataclass(frozen=True)
class Split:
    trusted: float
    untrusted: float

    @property
    def total(self) -> float:
        return self.trusted + self.untrusted


@dataclass(frozen=True)
class EvaluationResult:
    domain_freq: Mapping[str, float]
    power: Split
    io_bandwidth: float
    latencies: Mapping[str, float]
    area: Split
    vulnerability: float
    violations: tuple[Violation, ...]

    @property
    def feasible(self) -> bool:
        return not self.violations

    def to_doc(self) -> dict:
        return {
            "domain_freq": dict(self.domain_freq),
            "power": {
                "trusted": self.power.trusted,
                "untrusted": self.power.untrusted,
                "total": self.power.total,
            },
            "io_bandwidth": self.io_bandwidth,
            "latencies": dict(self.latencies),
            "area": {
                "trusted": self.area.trusted,
                "untrusted": self.area.untrusted,
                "total": self.area.total,
            },
            "vulnerability": self.vulnerability,
            "feasible": self.feasible,
            "violations": [v.to_doc() for v in self.violations],
        }


def domain_frequency(spec: SystemSpec, cfg: SystemConfiguration, domain_id: str) -> float:
    """A domain runs at the slowest member's max frequency."""
    domain = spec.domain_map[domain_id]
    if not domain.members:
        raise ValueError(f"domain {domain_id!r} has no members")
    f = math.inf
    for mid in domain.members:
        fm = spec.module_map[mid].characterization[cfg[mid]].fmax
        if fm < f:
            f = fm
    return f


def _all_domain_freqs(spec: SystemSpec, cfg: SystemConfiguration) -> dict[str, float]:
    return {d.id: domain_frequency(spec, cfg, d.id) for d in spec.domains}


def system_power(spec: SystemSpec, cfg: SystemConfiguration) -> Split:
    """Static plus frequency-scaled dynamic power, bucketed per IC.

    Each module's characterized dynamic power is scaled by the ratio of its
    clock-domain frequency to its own max frequency.
    """
    freqs = _all_domain_freqs(spec, cfg)
    trusted = 0.0
    untrusted = 0.0
    for m in spec.modules:
        cm = m.characterization[cfg[m.id]]
        p = cm.p_static + cm.p_dyn_at_fmax * (freqs[m.clock_domain] / cm.fmax)
        if cfg[m.id].on_trusted_ic:
            trusted += p
        else:
            untrusted += p
    return Split(trusted=trusted, untrusted=untrusted)


def io_bandwidth(spec: SystemSpec, cfg: SystemConfiguration, constraints: ConstraintSet) -> float:
    """External baseline plus the bandwidth-weighted cut between the ICs."""
    total = constraints.external_io_baseline
    for ch in spec.channels:
        if cfg[ch.src].on_trusted_ic != cfg[ch.dst].on_trusted_ic:
            total += ch.bandwidth
    return total


def io_latency(
    spec: SystemSpec,
    cfg: SystemConfiguration,
    constraint: LatencyConstraint,
    constraints: ConstraintSet,
) -> float:
    """Path latency; each cut-crossing channel pays the inter-chip delay."""
    total = 0.0
    for ci in constraint.path:
        ch = spec.channels[ci]
        term = ch.latency_on_chip
        if cfg[ch.src].on_trusted_ic != cfg[ch.dst].on_trusted_ic:
            term += constraints.inter_chip_delay
        total += term
    return total


def total_area(spec: SystemSpec, cfg: SystemConfiguration) -> Split:
    trusted = 0.0
    untrusted = 0.0
    for m in spec.modules:
        a = m.characterization[cfg[m.id]].area
        if cfg[m.id].on_trusted_ic:
            trusted += a
        else:
            untrusted += a
    return Split(trusted=trusted, untrusted=untrusted)


def vulnerability(spec: SystemSpec, cfg: SystemConfiguration) -> float:
    """Sum over modules of criticality times configuration exposure."""
    total = 0.0
    for m in spec.modules:
        total += m.criticality * spec.exposure[cfg[m.id]]
    return total


def evaluate(
    spec: SystemSpec, cfg: SystemConfiguration, constraints: ConstraintSet
) -> EvaluationResult:
    """All metrics plus the violation list; feasible iff no violations."""
    freqs = _all_domain_freqs(spec, cfg)
    power = system_power(spec, cfg)
    io = io_bandwidth(spec, cfg, constraints)
    lats = {
        lc.id: io_latency(spec, cfg, lc, constraints)
        for lc in constraints.latency_constraints
    }
    area = total_area(spec, cfg)
    vuln = vulnerability(spec, cfg)

    violations: list[Violation] = []
    for d in spec.domains:
        f_min = constraints.domain_f_min.get(d.id)
        if f_min is not None and freqs[d.id] < f_min:
            violations.append(Violation(f"domain_f_min:{d.id}", f_min, freqs[d.id]))
    if power.total > constraints.p_total_max:
        violations.append(Violation("p_total_max", constraints.p_total_max, power.total))
    if constraints.p_trusted_max is not None and power.trusted > constraints.p_trusted_max:
        violations.append(
            Violation("p_trusted_max", constraints.p_trusted_max, power.trusted)
        )
    if (
        constraints.p_untrusted_max is not None
        and power.untrusted > constraints.p_untrusted_max
    ):
        violations.append(
            Violation("p_untrusted_max", constraints.p_untrusted_max, power.untrusted)
        )
    if io > constraints.io_bandwidth_max:
        violations.append(Violation("io_bandwidth_max", constraints.io_bandwidth_max, io))
    for lc in constraints.latency_constraints:
        if lats[lc.id] > lc.max_latency:
            violations.append(Violation(f"latency:{lc.id}", lc.max_latency, lats[lc.id]))
    if area.total > constraints.area_total_max:
        violations.append(Violation("area_total_max", constraints.area_total_max, area.total))
    for m in spec.modules:
        if m.placement is not None and cfg[m.id] is not m.placement:
            violations.append(
                Violation(f"placement:{m.id}", float(m.placement), float(cfg[m.id]))
            )

    return EvaluationResult(
        domain_freq=freqs,
        power=power,
        io_bandwidth=io,
        latencies=lats,
        area=area,
        vulnerability=vuln,
        violations=tuple(violations),
    )
