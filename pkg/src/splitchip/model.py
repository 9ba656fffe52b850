"""Problem-instance data model: modules, clock domains, channels, constraints.

All types are plain immutable dataclasses. Structural rules are enforced in
two places: the JSON loaders raise :class:`SchemaError` with a field path,
and :func:`validate_system` returns a report without raising so callers can
collect every problem at once.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Mapping, Optional


class Configuration(enum.IntEnum):
    """Per-module placement choice.

    ``TRUSTED`` is the only value fabricated on the trusted IC; the other
    three live on the untrusted IC.  The integer values define the
    tie-breaking order used by the optimizers.
    """

    TRUSTED = 0
    UNTRUSTED = 1
    UNTRUSTED_KEY_LOCKED = 2
    UNTRUSTED_FSM_OBF = 3

    @property
    def on_trusted_ic(self) -> bool:
        return self is Configuration.TRUSTED


ALL_CONFIGURATIONS = tuple(Configuration)

# Placeholder exposure values used when a system file omits the table.
DEFAULT_EXPOSURE = {
    Configuration.TRUSTED: 0.05,
    Configuration.UNTRUSTED: 1.0,
    Configuration.UNTRUSTED_KEY_LOCKED: 0.9,
    Configuration.UNTRUSTED_FSM_OBF: 0.85,
}


class SchemaError(ValueError):
    """Raised by the loaders for malformed documents.

    ``path`` names the offending field, e.g. ``modules[2].criticality``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class ConfigMetrics:
    """Characterized numbers for one module in one configuration."""

    fmax: float  # Hz
    area: float  # um^2
    p_dyn_at_fmax: float  # W
    p_static: float  # W


@dataclass(frozen=True)
class ModuleCharacterization:
    """Per-configuration {fmax, area, dynamic power at fmax, static power}."""

    table: Mapping[Configuration, ConfigMetrics]

    def __getitem__(self, cfg: Configuration) -> ConfigMetrics:
        return self.table[cfg]

    def fmax(self, cfg: Configuration) -> float:
        return self.table[cfg].fmax


@dataclass(frozen=True)
class ModuleSpec:
    id: str
    clock_domain: str
    criticality: float
    characterization: ModuleCharacterization
    placement: Optional[Configuration] = None


@dataclass(frozen=True)
class ClockDomain:
    id: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class Channel:
    """Directed inter-module link; a bidirectional bus is two channels."""

    src: str
    dst: str
    bandwidth: float  # bits/s
    latency_on_chip: float  # s


@dataclass(frozen=True)
class LatencyConstraint:
    """Bound on the end-to-end latency of a connected channel path.

    ``path`` holds indices into ``SystemSpec.channels``; consecutive
    channels must share an endpoint (dst of k == src of k+1).
    """

    id: str
    path: tuple[int, ...]
    max_latency: float  # s


@dataclass(frozen=True)
class ExposureTable:
    exposure: Mapping[Configuration, float]

    def __getitem__(self, cfg: Configuration) -> float:
        return self.exposure[cfg]


@dataclass(frozen=True)
class ConstraintSet:
    """User bounds on every metric plus the fixed cut model parameters.

    Missing or infinite bounds mean "unconstrained"; ``domain_f_min`` is a
    partial map (domains without an entry have no frequency requirement).
    """

    domain_f_min: Mapping[str, float] = field(default_factory=dict)
    p_total_max: float = math.inf
    p_trusted_max: Optional[float] = None
    p_untrusted_max: Optional[float] = None
    io_bandwidth_max: float = math.inf
    external_io_baseline: float = 0.0
    latency_constraints: tuple[LatencyConstraint, ...] = ()
    area_total_max: float = math.inf
    inter_chip_delay: float = 0.0

    def with_override(self, path: str, value: float) -> "ConstraintSet":
        """Return a copy with one field replaced.

        Recognized paths: plain scalar field names, ``domain_f_min.<domain>``
        and ``latency_max.<constraint id>``.
        """
        if path.startswith("domain_f_min."):
            dom = path.split(".", 1)[1]
            fmin = dict(self.domain_f_min)
            fmin[dom] = value
            return replace(self, domain_f_min=fmin)
        if path.startswith("latency_max."):
            cid = path.split(".", 1)[1]
            if cid not in {c.id for c in self.latency_constraints}:
                raise KeyError(f"no latency constraint named {cid!r}")
            lcs = tuple(
                replace(c, max_latency=value) if c.id == cid else c
                for c in self.latency_constraints
            )
            return replace(self, latency_constraints=lcs)
        scalar = {
            "p_total_max",
            "p_trusted_max",
            "p_untrusted_max",
            "io_bandwidth_max",
            "external_io_baseline",
            "area_total_max",
            "inter_chip_delay",
        }
        if path not in scalar:
            raise KeyError(f"unknown constraint field path {path!r}")
        return replace(self, **{path: value})


@dataclass(frozen=True)
class SystemSpec:
    modules: tuple[ModuleSpec, ...]
    domains: tuple[ClockDomain, ...]
    channels: tuple[Channel, ...]
    exposure: ExposureTable

    @cached_property
    def module_map(self) -> dict[str, ModuleSpec]:
        return {m.id: m for m in self.modules}

    @cached_property
    def domain_map(self) -> dict[str, ClockDomain]:
        return {d.id: d for d in self.domains}


@dataclass(frozen=True)
class SystemConfiguration:
    """Total assignment of modules to configurations."""

    assignment: Mapping[str, Configuration]

    def __getitem__(self, module_id: str) -> Configuration:
        return self.assignment[module_id]

    @staticmethod
    def uniform(spec: SystemSpec, cfg: Configuration) -> "SystemConfiguration":
        return SystemConfiguration({m.id: cfg for m in spec.modules})


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_system(spec: SystemSpec) -> ValidationReport:
    """Check every structural invariant; never raises.

    An empty error list means the spec is usable by the metric engine and
    the optimizers.  Warnings flag legal-but-suspicious data, e.g. an
    obfuscated configuration that is faster than plain untrusted.
    """
    rep = ValidationReport()
    err = rep.errors.append
    warn = rep.warnings.append

    if not spec.modules:
        err("system has no modules")

    seen_modules: set[str] = set()
    for i, m in enumerate(spec.modules):
        if m.id in seen_modules:
            err(f"duplicate module id {m.id!r}")
        seen_modules.add(m.id)
        if m.criticality < 0:
            err(f"module {m.id!r}: criticality must be >= 0")
        tbl = m.characterization.table
        missing = [c.name for c in ALL_CONFIGURATIONS if c not in tbl]
        if missing:
            err(f"module {m.id!r}: characterization missing {', '.join(missing)}")
            continue
        for cfg in ALL_CONFIGURATIONS:
            cm = tbl[cfg]
            if not cm.fmax > 0:
                err(f"module {m.id!r}: fmax[{cfg.name}] must be > 0")
            if not cm.area > 0:
                err(f"module {m.id!r}: area[{cfg.name}] must be > 0")
            if cm.p_dyn_at_fmax < 0 or cm.p_static < 0:
                err(f"module {m.id!r}: powers[{cfg.name}] must be >= 0")
        f_unt = tbl[Configuration.UNTRUSTED].fmax
        for cfg in (Configuration.UNTRUSTED_KEY_LOCKED, Configuration.UNTRUSTED_FSM_OBF):
            if tbl[cfg].fmax > f_unt:
                warn(
                    f"module {m.id!r}: fmax[{cfg.name}] exceeds fmax[UNTRUSTED]"
                    " (obfuscation usually costs speed)"
                )

    seen_domains: set[str] = set()
    membership: dict[str, str] = {}
    for d in spec.domains:
        if d.id in seen_domains:
            err(f"duplicate domain id {d.id!r}")
        seen_domains.add(d.id)
        if not d.members:
            err(f"domain {d.id!r} has no members")
        for mid in d.members:
            if mid not in seen_modules:
                err(f"domain {d.id!r}: unknown module {mid!r}")
            elif mid in membership:
                err(f"module {mid!r} belongs to domains {membership[mid]!r} and {d.id!r}")
            else:
                membership[mid] = d.id
    for m in spec.modules:
        if m.clock_domain not in seen_domains:
            err(f"module {m.id!r}: unknown clock domain {m.clock_domain!r}")
        elif membership.get(m.id) != m.clock_domain:
            err(f"module {m.id!r}: not a member of its clock domain {m.clock_domain!r}")

    for i, ch in enumerate(spec.channels):
        for end, name in ((ch.src, "src"), (ch.dst, "dst")):
            if end not in seen_modules:
                err(f"channels[{i}].{name}: unknown module {end!r}")
        if ch.src == ch.dst:
            err(f"channels[{i}]: src and dst are both {ch.src!r}")
        if ch.bandwidth < 0:
            err(f"channels[{i}]: bandwidth must be >= 0")
        if ch.latency_on_chip < 0:
            err(f"channels[{i}]: latency_on_chip must be >= 0")

    expo = spec.exposure.exposure
    missing = [c.name for c in ALL_CONFIGURATIONS if c not in expo]
    if missing:
        err(f"exposure table missing {', '.join(missing)}")
    else:
        for cfg in ALL_CONFIGURATIONS:
            if not 0.0 <= expo[cfg] <= 1.0:
                err(f"exposure[{cfg.name}] must be in [0, 1]")
        if expo[Configuration.UNTRUSTED] != 1.0:
            err("untrusted exposure must equal 1")
        worst = min(
            expo[c] for c in ALL_CONFIGURATIONS if c is not Configuration.TRUSTED
        )
        if expo[Configuration.TRUSTED] > worst:
            err("exposure[TRUSTED] must not exceed any other configuration's exposure")

    return rep


def validate_constraints(constraints: ConstraintSet, spec: SystemSpec) -> ValidationReport:
    """Constraint-side counterpart of :func:`validate_system`."""
    rep = ValidationReport()
    err = rep.errors.append

    for dom, fmin in constraints.domain_f_min.items():
        if dom not in spec.domain_map:
            err(f"domain_f_min: unknown domain {dom!r}")
        if not fmin > 0:
            err(f"domain_f_min[{dom!r}] must be > 0")
    for name in ("p_total_max", "io_bandwidth_max", "area_total_max"):
        if not getattr(constraints, name) > 0:
            err(f"{name} must be > 0")
    for name in ("p_trusted_max", "p_untrusted_max"):
        v = getattr(constraints, name)
        if v is not None and not v > 0:
            err(f"{name} must be > 0")
    if constraints.inter_chip_delay < 0:
        err("inter_chip_delay must be >= 0")
    if constraints.external_io_baseline < 0:
        err("external_io_baseline must be >= 0")

    n_channels = len(spec.channels)
    seen_ids: set[str] = set()
    for lc in constraints.latency_constraints:
        if lc.id in seen_ids:
            err(f"duplicate latency constraint id {lc.id!r}")
        seen_ids.add(lc.id)
        if not lc.max_latency > 0:
            err(f"latency constraint {lc.id!r}: max_latency must be > 0")
        if not lc.path:
            err(f"latency constraint {lc.id!r}: path is empty")
            continue
        bad = [k for k in lc.path if not 0 <= k < n_channels]
        if bad:
            err(f"latency constraint {lc.id!r}: channel index out of range")
            continue
        for a, b in zip(lc.path, lc.path[1:]):
            if spec.channels[a].dst != spec.channels[b].src:
                err(
                    f"latency constraint {lc.id!r}: path is disconnected between"
                    f" channels {a} and {b}"
                )
    return rep


# ---------------------------------------------------------------------------
# JSON loading / saving


def _expect(doc: Any, path: str, typ, what: str):
    if not isinstance(doc, typ):
        raise SchemaError(path, f"expected {what}")
    return doc


def _number(doc: Any, path: str, *, allow_none: bool = False) -> Any:
    if doc is None and allow_none:
        return None
    if isinstance(doc, bool) or not isinstance(doc, (int, float)):
        raise SchemaError(path, "expected a number")
    return float(doc)


def _config(name: Any, path: str) -> Configuration:
    try:
        return Configuration[str(name)]
    except KeyError:
        raise SchemaError(path, f"unknown configuration {name!r}") from None


def _characterization(doc: Any, path: str) -> ModuleCharacterization:
    d = _expect(doc, path, dict, "an object keyed by configuration name")
    table = {}
    for cfg in ALL_CONFIGURATIONS:
        if cfg.name not in d:
            raise SchemaError(path, f"missing configuration {cfg.name}")
        entry = _expect(d[cfg.name], f"{path}.{cfg.name}", dict, "an object")
        table[cfg] = ConfigMetrics(
            fmax=_number(entry.get("fmax"), f"{path}.{cfg.name}.fmax"),
            area=_number(entry.get("area"), f"{path}.{cfg.name}.area"),
            p_dyn_at_fmax=_number(
                entry.get("p_dyn_at_fmax"), f"{path}.{cfg.name}.p_dyn_at_fmax"
            ),
            p_static=_number(entry.get("p_static"), f"{path}.{cfg.name}.p_static"),
        )
    return ModuleCharacterization(table)


def _resolve_channel_ref(ref: Any, path: str, spec_channels: tuple[Channel, ...]) -> int:
    if isinstance(ref, bool):
        raise SchemaError(path, "expected a channel index or {src, dst} object")
    if isinstance(ref, int):
        if not 0 <= ref < len(spec_channels):
            raise SchemaError(path, f"channel index {ref} out of range")
        return ref
    if isinstance(ref, dict):
        src, dst = ref.get("src"), ref.get("dst")
        hits = [
            i
            for i, ch in enumerate(spec_channels)
            if ch.src == src and ch.dst == dst
        ]
        if not hits:
            raise SchemaError(path, f"no channel {src!r} -> {dst!r}")
        if len(hits) > 1:
            raise SchemaError(
                path,
                f"channel {src!r} -> {dst!r} is ambiguous (parallel channels);"
                " use an index",
            )
        return hits[0]
    raise SchemaError(path, "expected a channel index or {src, dst} object")


def parse_system(doc: Any) -> SystemSpec:
    """Build a SystemSpec from an already-parsed JSON document."""
    top = _expect(doc, "", dict, "a JSON object")

    modules_doc = _expect(top.get("modules"), "modules", list, "an array")
    if not modules_doc:
        raise SchemaError("modules", "module list is empty")
    modules = []
    seen: set[str] = set()
    for i, md in enumerate(modules_doc):
        p = f"modules[{i}]"
        md = _expect(md, p, dict, "an object")
        mid = _expect(md.get("id"), f"{p}.id", str, "a string")
        if mid in seen:
            raise SchemaError(f"{p}.id", f"duplicate id {mid!r}")
        seen.add(mid)
        placement = md.get("placement")
        modules.append(
            ModuleSpec(
                id=mid,
                clock_domain=_expect(md.get("domain"), f"{p}.domain", str, "a string"),
                criticality=_number(md.get("criticality"), f"{p}.criticality"),
                characterization=_characterization(
                    md.get("characterization"), f"{p}.characterization"
                ),
                placement=None
                if placement is None
                else _config(placement, f"{p}.placement"),
            )
        )

    domains_doc = _expect(top.get("domains"), "domains", list, "an array")
    domains = []
    for i, dd in enumerate(domains_doc):
        p = f"domains[{i}]"
        dd = _expect(dd, p, dict, "an object")
        did = _expect(dd.get("id"), f"{p}.id", str, "a string")
        members = tuple(m.id for m in modules if m.clock_domain == did)
        domains.append(ClockDomain(id=did, members=members))

    channels_doc = _expect(top.get("channels", []), "channels", list, "an array")
    channels = []
    for i, cd in enumerate(channels_doc):
        p = f"channels[{i}]"
        cd = _expect(cd, p, dict, "an object")
        channels.append(
            Channel(
                src=_expect(cd.get("src"), f"{p}.src", str, "a string"),
                dst=_expect(cd.get("dst"), f"{p}.dst", str, "a string"),
                bandwidth=_number(cd.get("bandwidth"), f"{p}.bandwidth"),
                latency_on_chip=_number(
                    cd.get("latency_on_chip"), f"{p}.latency_on_chip"
                ),
            )
        )

    expo_doc = top.get("exposure")
    if expo_doc is None:
        exposure = ExposureTable(dict(DEFAULT_EXPOSURE))
    else:
        expo_doc = _expect(expo_doc, "exposure", dict, "an object")
        exposure = ExposureTable(
            {
                _config(k, "exposure"): _number(v, f"exposure.{k}")
                for k, v in expo_doc.items()
            }
        )

    spec = SystemSpec(
        modules=tuple(modules),
        domains=tuple(domains),
        channels=tuple(channels),
        exposure=exposure,
    )
    report = validate_system(spec)
    if not report.ok:
        raise SchemaError("", "; ".join(report.errors))
    return spec


def load_system(text: str) -> SystemSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("", f"line {e.lineno} column {e.colno}: {e.msg}") from e
    return parse_system(doc)


def parse_constraints(doc: Any, spec: SystemSpec) -> ConstraintSet:
    """Parse a constraints object (standalone file or the system file's
    ``constraints`` key)."""
    top = _expect(doc, "constraints", dict, "an object")

    fmin_doc = _expect(
        top.get("domain_f_min", {}), "constraints.domain_f_min", dict, "an object"
    )
    domain_f_min = {
        k: _number(v, f"constraints.domain_f_min.{k}") for k, v in fmin_doc.items()
    }

    lat_doc = _expect(top.get("latency", []), "constraints.latency", list, "an array")
    lcs = []
    for i, ld in enumerate(lat_doc):
        p = f"constraints.latency[{i}]"
        ld = _expect(ld, p, dict, "an object")
        path_doc = _expect(ld.get("path"), f"{p}.path", list, "an array")
        if not path_doc:
            raise SchemaError(f"{p}.path", "path is empty")
        path = tuple(
            _resolve_channel_ref(r, f"{p}.path[{j}]", spec.channels)
            for j, r in enumerate(path_doc)
        )
        lcs.append(
            LatencyConstraint(
                id=_expect(ld.get("id"), f"{p}.id", str, "a string"),
                path=path,
                max_latency=_number(ld.get("max_latency"), f"{p}.max_latency"),
            )
        )

    def bound(name: str, default: float) -> float:
        v = top.get(name)
        if v is None:
            return default
        return _number(v, f"constraints.{name}")

    constraints = ConstraintSet(
        domain_f_min=domain_f_min,
        p_total_max=bound("p_total_max", math.inf),
        p_trusted_max=_number(
            top.get("p_trusted_max"), "constraints.p_trusted_max", allow_none=True
        ),
        p_untrusted_max=_number(
            top.get("p_untrusted_max"), "constraints.p_untrusted_max", allow_none=True
        ),
        io_bandwidth_max=bound("io_bandwidth_max", math.inf),
        external_io_baseline=bound("external_io_baseline", 0.0),
        latency_constraints=tuple(lcs),
        area_total_max=bound("area_total_max", math.inf),
        inter_chip_delay=bound("inter_chip_delay", 0.0),
    )
    report = validate_constraints(constraints, spec)
    if not report.ok:
        raise SchemaError("constraints", "; ".join(report.errors))
    return constraints


def load_constraints(text: str, spec: SystemSpec) -> ConstraintSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("", f"line {e.lineno} column {e.colno}: {e.msg}") from e
    # A full system document is accepted; use its embedded constraints.
    if isinstance(doc, dict) and "constraints" in doc and "modules" in doc:
        doc = doc["constraints"]
    return parse_constraints(doc, spec)


def _finite_or_none(v: Optional[float]):
    if v is None or math.isinf(v):
        return None
    return v


def constraints_to_doc(constraints: ConstraintSet, spec: SystemSpec) -> dict:
    return {
        "domain_f_min": dict(constraints.domain_f_min),
        "p_total_max": _finite_or_none(constraints.p_total_max),
        "p_trusted_max": _finite_or_none(constraints.p_trusted_max),
        "p_untrusted_max": _finite_or_none(constraints.p_untrusted_max),
        "io_bandwidth_max": _finite_or_none(constraints.io_bandwidth_max),
        "external_io_baseline": constraints.external_io_baseline,
        "latency": [
            {"id": lc.id, "path": list(lc.path), "max_latency": lc.max_latency}
            for lc in constraints.latency_constraints
        ],
        "area_total_max": _finite_or_none(constraints.area_total_max),
        "inter_chip_delay": constraints.inter_chip_delay,
    }


def system_to_doc(spec: SystemSpec) -> dict:
    return {
        "modules": [
            {
                "id": m.id,
                "domain": m.clock_domain,
                "criticality": m.criticality,
                **({"placement": m.placement.name} if m.placement is not None else {}),
                "characterization": {
                    cfg.name: {
                        "fmax": cm.fmax,
                        "area": cm.area,
                        "p_dyn_at_fmax": cm.p_dyn_at_fmax,
                        "p_static": cm.p_static,
                    }
                    for cfg, cm in ((c, m.characterization[c]) for c in ALL_CONFIGURATIONS)
                },
            }
            for m in spec.modules
        ],
        "domains": [{"id": d.id} for d in spec.domains],
        "channels": [
            {
                "src": ch.src,
                "dst": ch.dst,
                "bandwidth": ch.bandwidth,
                "latency_on_chip": ch.latency_on_chip,
            }
            for ch in spec.channels
        ],
        "exposure": {cfg.name: spec.exposure[cfg] for cfg in ALL_CONFIGURATIONS},
    }


def save_system(spec: SystemSpec, constraints: Optional[ConstraintSet] = None) -> str:
    doc = system_to_doc(spec)
    if constraints is not None:
        doc["constraints"] = constraints_to_doc(constraints, spec)
    return json.dumps(doc, indent=2)


def parse_assignment(doc: Any, spec: SystemSpec) -> SystemConfiguration:
    top = _expect(doc, "assignment", dict, "an object")
    if "assignment" in top:
        top = _expect(top["assignment"], "assignment", dict, "an object")
    assignment = {}
    for mid, cfg_name in top.items():
        if mid not in spec.module_map:
            raise SchemaError("assignment", f"unknown module {mid!r}")
        assignment[mid] = _config(cfg_name, f"assignment.{mid}")
    missing = [m.id for m in spec.modules if m.id not in assignment]
    if missing:
        raise SchemaError("assignment", f"missing modules: {', '.join(missing)}")
    return SystemConfiguration(assignment)


def load_assignment(text: str, spec: SystemSpec) -> SystemConfiguration:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("", f"line {e.lineno} column {e.colno}: {e.msg}") from e
    return parse_assignment(doc, spec)


def assignment_to_doc(cfg: SystemConfiguration, spec: SystemSpec) -> dict:
    return {m.id: cfg[m.id].name for m in spec.modules}
