"""Gate-level structural netlists: parsing, validation, and simulation.

The cell library is fixed: eight combinational primitives plus DFF.
Simulation is width-generic: net values are Python ints treated as bit
vectors under ``mask``, so one pass can evaluate many input patterns at
once (mask ``1`` gives ordinary scalar simulation).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Optional, Sequence

COMB_CELLS = ("INV", "BUF", "AND2", "OR2", "NAND2", "NOR2", "XOR2", "XNOR2")
CELL_TYPES = COMB_CELLS + ("DFF",)
_ARITY = {"INV": 1, "BUF": 1}


class NetlistError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    id: str
    type: str
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class Dff:
    d: str
    q: str


@dataclass(frozen=True)
class Netlist:
    name: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    dffs: tuple[Dff, ...]

    @cached_property
    def gate_by_output(self) -> dict[str, Gate]:
        return {g.output: g for g in self.gates}

    @cached_property
    def state_nets(self) -> tuple[str, ...]:
        return tuple(ff.q for ff in self.dffs)

    @cached_property
    def topo_gates(self) -> tuple[Gate, ...]:
        """Gates in combinational evaluation order (PIs and DFF q are sources)."""
        order, _ = _topo_sort(self)
        return order


def _topo_sort(nl: Netlist) -> tuple[tuple[Gate, ...], Optional[list[str]]]:
    """Kahn ordering over the gate graph; returns (order, cycle-or-None)."""
    sources = set(nl.inputs) | {ff.q for ff in nl.dffs}
    deps: dict[str, int] = {}
    consumers: dict[str, list[Gate]] = {}
    for g in nl.gates:
        pending = 0
        for net in g.inputs:
            if net not in sources:
                pending += 1
                consumers.setdefault(net, []).append(g)
        deps[g.id] = pending
    ready = [g for g in nl.gates if deps[g.id] == 0]
    order: list[Gate] = []
    i = 0
    while i < len(ready):
        g = ready[i]
        i += 1
        order.append(g)
        for h in consumers.get(g.output, ()):
            deps[h.id] -= 1
            if deps[h.id] == 0:
                ready.append(h)
    if len(order) < len(nl.gates):
        stuck = [g for g in nl.gates if deps[g.id] > 0]
        cycle = _find_cycle(nl, stuck)
        return tuple(order), cycle
    return tuple(order), None


def _find_cycle(nl: Netlist, stuck: Sequence[Gate]) -> list[str]:
    by_out = {g.output: g for g in stuck}
    seen: dict[str, int] = {}
    path: list[str] = []
    g = stuck[0]
    while g.id not in seen:
        seen[g.id] = len(path)
        path.append(g.id)
        nxt = None
        for net in g.inputs:
            if net in by_out:
                nxt = by_out[net]
                break
        if nxt is None:
            return path
        g = nxt
    return path[seen[g.id] :]


def validate_netlist(nl: Netlist) -> None:
    """Raise NetlistError on any structural violation."""
    drivers: dict[str, str] = {}

    def drive(net: str, what: str):
        if net in drivers:
            raise NetlistError(
                f"{nl.name}: net {net!r} driven by both {drivers[net]} and {what}"
            )
        drivers[net] = what

    for pi in nl.inputs:
        drive(pi, "primary input")
    seen_gate_ids: set[str] = set()
    for g in nl.gates:
        if g.id in seen_gate_ids:
            raise NetlistError(f"{nl.name}: duplicate gate id {g.id!r}")
        seen_gate_ids.add(g.id)
        if g.type not in COMB_CELLS:
            raise NetlistError(f"{nl.name}: gate {g.id!r}: unknown cell type {g.type!r}")
        if len(g.inputs) != _ARITY.get(g.type, 2):
            raise NetlistError(
                f"{nl.name}: gate {g.id!r}: {g.type} takes"
                f" {_ARITY.get(g.type, 2)} inputs, got {len(g.inputs)}"
            )
        drive(g.output, f"gate {g.id!r}")
    for i, ff in enumerate(nl.dffs):
        drive(ff.q, f"dff[{i}].q")

    def need(net: str, what: str):
        if net not in drivers:
            raise NetlistError(f"{nl.name}: undriven net {net!r} ({what})")

    for g in nl.gates:
        for net in g.inputs:
            need(net, f"input of gate {g.id!r}")
    for i, ff in enumerate(nl.dffs):
        need(ff.d, f"dff[{i}].d")
    for po in nl.outputs:
        need(po, "primary output")

    _, cycle = _topo_sort(nl)
    if cycle is not None:
        raise NetlistError(
            f"{nl.name}: combinational cycle through gates: {' -> '.join(cycle)}"
        )


def parse_netlist(text: str) -> Netlist:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetlistError(f"line {e.lineno} column {e.colno}: {e.msg}") from e
    return netlist_from_doc(doc)


def netlist_from_doc(doc) -> Netlist:
    if not isinstance(doc, dict):
        raise NetlistError("netlist document must be a JSON object")
    try:
        gates = tuple(
            Gate(
                id=str(g["id"]),
                type=str(g["type"]),
                inputs=tuple(str(x) for x in g["inputs"]),
                output=str(g["output"]),
            )
            for g in doc.get("gates", [])
        )
        dffs = tuple(
            Dff(d=str(f["d"]), q=str(f["q"])) for f in doc.get("dffs", [])
        )
        nl = Netlist(
            name=str(doc.get("name", "netlist")),
            inputs=tuple(str(x) for x in doc.get("inputs", [])),
            outputs=tuple(str(x) for x in doc.get("outputs", [])),
            gates=gates,
            dffs=dffs,
        )
    except (KeyError, TypeError) as e:
        raise NetlistError(f"malformed netlist document: {e!r}") from e
    validate_netlist(nl)
    return nl


def netlist_to_doc(nl: Netlist) -> dict:
    return {
        "name": nl.name,
        "inputs": list(nl.inputs),
        "outputs": list(nl.outputs),
        "gates": [
            {"id": g.id, "type": g.type, "inputs": list(g.inputs), "output": g.output}
            for g in nl.gates
        ],
        "dffs": [{"d": ff.d, "q": ff.q} for ff in nl.dffs],
    }


def save_netlist(nl: Netlist) -> str:
    return json.dumps(netlist_to_doc(nl), indent=2)


# ---------------------------------------------------------------------------
# Simulation


def eval_combinational(
    nl: Netlist, sources: Mapping[str, int], mask: int = 1
) -> dict[str, int]:
    """Evaluate all nets given values for every PI and DFF q net.

    Values are bit vectors under ``mask``; bit k of every net is the
    response to bit k of the inputs.
    """
    v = dict(sources)
    for g in nl.topo_gates:
        a = v[g.inputs[0]]
        if g.type == "INV":
            r = a ^ mask
        elif g.type == "BUF":
            r = a
        else:
            b = v[g.inputs[1]]
            if g.type == "AND2":
                r = a & b
            elif g.type == "OR2":
                r = a | b
            elif g.type == "NAND2":
                r = (a & b) ^ mask
            elif g.type == "NOR2":
                r = (a | b) ^ mask
            elif g.type == "XOR2":
                r = a ^ b
            else:  # XNOR2
                r = (a ^ b) ^ mask
        v[g.output] = r
    return v


def initial_state(nl: Netlist) -> dict[str, int]:
    """Power-up state: every DFF holds 0."""
    return {ff.q: 0 for ff in nl.dffs}


def step(
    nl: Netlist,
    state: Mapping[str, int],
    pi_values: Mapping[str, int],
    mask: int = 1,
) -> tuple[dict[str, int], dict[str, int]]:
    """One clock cycle: returns (output values, next state)."""
    sources = dict(state)
    for pi in nl.inputs:
        sources[pi] = pi_values.get(pi, 0)
    v = eval_combinational(nl, sources, mask)
    outs = {po: v[po] for po in nl.outputs}
    nxt = {ff.q: v[ff.d] for ff in nl.dffs}
    return outs, nxt


def input_patterns(n_inputs: int) -> tuple[list[int], int]:
    """Truth-table bit patterns for exhaustive simulation.

    Returns per-input patterns and the width mask; vector index i has input
    k equal to bit k of i.
    """
    width = 1 << n_inputs
    mask = (1 << width) - 1
    pats = []
    for k in range(n_inputs):
        block = (1 << (1 << k)) - 1  # 2^k zeros then 2^k ones, repeated
        period = 1 << (k + 1)
        pat = 0
        for start in range(1 << k, width, period):
            pat |= block << start
        pats.append(pat)
    return pats, mask
