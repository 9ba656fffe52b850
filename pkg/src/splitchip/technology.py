"""Desk-scale technology model: fixed 9-cell library with per-cell costs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .netlist import CELL_TYPES


@dataclass(frozen=True)
class CellCost:
    delay: float  # s
    area: float  # um^2
    leakage: float  # W
    switch_energy: float  # J per toggle


@dataclass(frozen=True)
class Technology:
    name: str
    cells: Mapping[str, CellCost]
    seq_overhead: float  # s, clock-to-q plus setup, once per register-bounded path
    activity_factor: float  # fraction of cells toggling per cycle

    def delay(self, cell: str) -> float:
        return self.cells[cell].delay


class TechnologyError(ValueError):
    pass


def validate_technology(tech: Technology) -> None:
    cells = set(tech.cells)
    expected = set(CELL_TYPES)
    if cells != expected:
        missing = sorted(expected - cells)
        extra = sorted(cells - expected)
        parts = []
        if missing:
            parts.append(f"missing cells: {', '.join(missing)}")
        if extra:
            parts.append(f"unknown cells: {', '.join(extra)}")
        raise TechnologyError(f"{tech.name}: {'; '.join(parts)}")
    for name, c in tech.cells.items():
        for attr in ("delay", "area", "leakage", "switch_energy"):
            if not getattr(c, attr) > 0:
                raise TechnologyError(f"{tech.name}: {name}.{attr} must be > 0")
    if not tech.seq_overhead > 0:
        raise TechnologyError(f"{tech.name}: seq_overhead must be > 0")
    if not 0.0 < tech.activity_factor <= 1.0:
        raise TechnologyError(f"{tech.name}: activity_factor must be in (0, 1]")


def parse_technology(text: str) -> Technology:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise TechnologyError(f"line {e.lineno} column {e.colno}: {e.msg}") from e
    return technology_from_doc(doc)


def technology_from_doc(doc) -> Technology:
    if not isinstance(doc, dict):
        raise TechnologyError("technology document must be a JSON object")
    try:
        cells = {
            name: CellCost(
                delay=float(c["delay"]),
                area=float(c["area"]),
                leakage=float(c["leakage"]),
                switch_energy=float(c["switch_energy"]),
            )
            for name, c in doc["cells"].items()
        }
        tech = Technology(
            name=str(doc.get("name", "tech")),
            cells=cells,
            seq_overhead=float(doc["seq_overhead"]),
            activity_factor=float(doc["activity_factor"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise TechnologyError(f"malformed technology document: {e!r}") from e
    validate_technology(tech)
    return tech


def technology_to_doc(tech: Technology) -> dict:
    return {
        "name": tech.name,
        "cells": {
            name: {
                "delay": c.delay,
                "area": c.area,
                "leakage": c.leakage,
                "switch_energy": c.switch_energy,
            }
            for name, c in tech.cells.items()
        },
        "seq_overhead": tech.seq_overhead,
        "activity_factor": tech.activity_factor,
    }


def scaled_technology(
    base: Technology,
    name: str,
    delay: float = 1.0,
    area: float = 1.0,
    leakage: float = 1.0,
    switch_energy: float = 1.0,
) -> Technology:
    """Uniformly scaled variant of ``base`` (older node = larger factors)."""
    return Technology(
        name=name,
        cells={
            cell: CellCost(
                delay=c.delay * delay,
                area=c.area * area,
                leakage=c.leakage * leakage,
                switch_energy=c.switch_energy * switch_energy,
            )
            for cell, c in base.cells.items()
        },
        seq_overhead=base.seq_overhead * delay,
        activity_factor=base.activity_factor,
    )
