"""Constraint sweeps: Cartesian axes or an explicit scripted run list,
executed on a worker pool with results in point-enumeration order."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Any, Iterable, Optional

from ..model import (
    ALL_CONFIGURATIONS,
    Configuration,
    ConstraintSet,
    SchemaError,
    SystemSpec,
    parse_constraints,
)
from .runs import RunRecord, run_once


class SweepError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepAxis:
    path: str  # ConstraintSet field path, see ConstraintSet.with_override
    values: tuple[float, ...]


@dataclass(frozen=True)
class SweepPoint:
    overrides: tuple[tuple[str, float], ...]
    enabled_configs: tuple[Configuration, ...]


@dataclass(frozen=True)
class SweepSpec:
    base: ConstraintSet
    axes: tuple[SweepAxis, ...] = ()
    runs: tuple[SweepPoint, ...] = ()
    enabled_configs: tuple[Configuration, ...] = ALL_CONFIGURATIONS

    def points(self) -> list[SweepPoint]:
        """Explicit runs if given, else the Cartesian product of the axes."""
        if self.runs:
            return list(self.runs)
        if not self.axes:
            return [SweepPoint(overrides=(), enabled_configs=self.enabled_configs)]
        combos = product(*(axis.values for axis in self.axes))
        return [
            SweepPoint(
                overrides=tuple(zip((a.path for a in self.axes), combo)),
                enabled_configs=self.enabled_configs,
            )
            for combo in combos
        ]


def apply_overrides(base: ConstraintSet, overrides: Iterable[tuple[str, float]]) -> ConstraintSet:
    c = base
    for path, value in overrides:
        c = c.with_override(path, value)
    return c


def _check_path(path: str, base: ConstraintSet, spec: SystemSpec) -> None:
    try:
        base.with_override(path, 1.0)
    except KeyError as e:
        raise SchemaError("sweep", str(e)) from e
    if path.startswith("domain_f_min."):
        dom = path.split(".", 1)[1]
        if dom not in spec.domain_map:
            raise SchemaError("sweep", f"unknown domain {dom!r} in axis path {path!r}")


def _enabled(doc: Any, path: str) -> tuple[Configuration, ...]:
    if doc is None:
        return ALL_CONFIGURATIONS
    if not isinstance(doc, list):
        raise SchemaError(path, "expected a list of configuration names")
    try:
        return tuple(sorted({Configuration[str(x)] for x in doc}, key=int))
    except KeyError as e:
        raise SchemaError(path, f"unknown configuration {e.args[0]!r}") from None


def parse_sweep(
    doc: Any, spec: SystemSpec, default_base: Optional[ConstraintSet] = None
) -> SweepSpec:
    """Sweep file: ``{"base": constraints?, "axes": [...]}`` for Cartesian
    sweeps, or ``{"base": ..., "runs": [{"overrides": {...},
    "enabled_configs": [...]}, ...]}`` for scripted run sequences."""
    if not isinstance(doc, dict):
        raise SchemaError("sweep", "expected a JSON object")
    if "base" in doc:
        base = parse_constraints(doc["base"], spec)
    elif default_base is not None:
        base = default_base
    else:
        raise SchemaError("sweep.base", "missing (and the system file has no constraints)")

    enabled_default = _enabled(doc.get("enabled_configs"), "sweep.enabled_configs")

    axes = []
    for i, ad in enumerate(doc.get("axes", [])):
        p = f"sweep.axes[{i}]"
        if not isinstance(ad, dict) or "path" not in ad or "values" not in ad:
            raise SchemaError(p, "expected {path, values}")
        path = str(ad["path"])
        _check_path(path, base, spec)
        values = tuple(float(v) for v in ad["values"])
        if not values:
            raise SchemaError(p, "values is empty")
        axes.append(SweepAxis(path=path, values=values))

    runs = []
    for i, rd in enumerate(doc.get("runs", [])):
        p = f"sweep.runs[{i}]"
        if not isinstance(rd, dict):
            raise SchemaError(p, "expected an object")
        overrides = []
        for path, value in rd.get("overrides", {}).items():
            _check_path(str(path), base, spec)
            overrides.append((str(path), float(value)))
        runs.append(
            SweepPoint(
                overrides=tuple(overrides),
                enabled_configs=_enabled(
                    rd.get("enabled_configs"), f"{p}.enabled_configs"
                ),
            )
        )
    if axes and runs:
        raise SchemaError("sweep", "give either axes or runs, not both")

    return SweepSpec(
        base=base, axes=tuple(axes), runs=tuple(runs), enabled_configs=enabled_default
    )


def load_sweep(
    text: str, spec: SystemSpec, default_base: Optional[ConstraintSet] = None
) -> SweepSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("", f"line {e.lineno} column {e.colno}: {e.msg}") from e
    return parse_sweep(doc, spec, default_base)


def run_sweep(
    spec: SystemSpec,
    sweep: SweepSpec,
    workers: int = 1,
    backend: Optional[str] = None,
) -> list[RunRecord]:
    """Execute every sweep point; results are ordered by point index and
    independent of worker count."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    points = sweep.points()

    def one(item: tuple[int, SweepPoint]) -> RunRecord:
        idx, point = item
        try:
            constraints = apply_overrides(sweep.base, point.overrides)
            return run_once(
                spec,
                constraints,
                enabled_configs=point.enabled_configs,
                run_id=idx,
                backend=backend,
            )
        except Exception as e:
            raise SweepError(f"sweep point {idx}: {e}") from e

    if workers == 1:
        return [one(item) for item in enumerate(points)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, enumerate(points)))
