"""Explicit state-transition tables and their one-hot gate implementation.

Table semantics: patterns are strings over ``{0,1,-}``; at most one
transition may match any (state, fully-specified input) pair, and an
unmatched input means "stay in the current state, output all zeros".

The synthesized netlist follows a documented wiring convention so it can
be composed with a datapath by net name:

* inputs: ``reset`` plus ``fsm_in0 .. fsm_in{W-1}``
* outputs: ``fsm_out0 .. fsm_out{V-1}``
* one DFF per state, q net ``fsm__state_<name>``; reset is synchronous and
  forces the reset state's bit.

Power-up is all-zeros, so a valid run holds ``reset`` high for the first
cycle; from the second cycle on the netlist tracks the table started at
``reset_state``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .netlist import Dff, Gate, Netlist, initial_state, step


class FsmError(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    state: str
    pattern: str  # over {0,1,-}, length input_width
    next_state: str
    output: str  # over {0,1}, length output_width


@dataclass(frozen=True)
class FsmTable:
    states: tuple[str, ...]
    reset_state: str
    input_width: int
    output_width: int
    transitions: tuple[Transition, ...]


def patterns_intersect(a: str, b: str) -> bool:
    return all(x == "-" or y == "-" or x == y for x, y in zip(a, b))


def pattern_matches(pattern: str, vector: str) -> bool:
    return all(p == "-" or p == v for p, v in zip(pattern, vector))


def validate_fsm(fsm: FsmTable) -> None:
    if not fsm.states:
        raise FsmError("FSM has no states")
    if len(set(fsm.states)) != len(fsm.states):
        raise FsmError("duplicate state names")
    if fsm.reset_state not in fsm.states:
        raise FsmError(f"reset state {fsm.reset_state!r} is not a state")
    if fsm.input_width < 0 or fsm.output_width < 0:
        raise FsmError("widths must be >= 0")
    states = set(fsm.states)
    by_state: dict[str, list[Transition]] = {}
    for i, t in enumerate(fsm.transitions):
        if t.state not in states:
            raise FsmError(f"transitions[{i}]: unknown state {t.state!r}")
        if t.next_state not in states:
            raise FsmError(f"transitions[{i}]: unknown next state {t.next_state!r}")
        if len(t.pattern) != fsm.input_width or any(c not in "01-" for c in t.pattern):
            raise FsmError(
                f"transitions[{i}]: pattern must be length {fsm.input_width}"
                " over 0/1/-"
            )
        if len(t.output) != fsm.output_width or any(c not in "01" for c in t.output):
            raise FsmError(
                f"transitions[{i}]: output must be length {fsm.output_width} over 0/1"
            )
        by_state.setdefault(t.state, []).append(t)
    for state, ts in by_state.items():
        for i in range(len(ts)):
            for j in range(i + 1, len(ts)):
                if patterns_intersect(ts[i].pattern, ts[j].pattern):
                    raise FsmError(
                        f"nondeterministic table: state {state!r} patterns"
                        f" {ts[i].pattern!r} and {ts[j].pattern!r} overlap"
                    )


def parse_fsm(text: str) -> FsmTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FsmError(f"line {e.lineno} column {e.colno}: {e.msg}") from e
    return fsm_from_doc(doc)


def fsm_from_doc(doc) -> FsmTable:
    if not isinstance(doc, dict):
        raise FsmError("FSM document must be a JSON object")
    try:
        fsm = FsmTable(
            states=tuple(str(s) for s in doc["states"]),
            reset_state=str(doc["reset"]),
            input_width=int(doc["input_width"]),
            output_width=int(doc["output_width"]),
            transitions=tuple(
                Transition(
                    state=str(t["state"]),
                    pattern=str(t["input"]),
                    next_state=str(t["next"]),
                    output=str(t["output"]),
                )
                for t in doc.get("transitions", [])
            ),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise FsmError(f"malformed FSM document: {e!r}") from e
    validate_fsm(fsm)
    return fsm


def fsm_to_doc(fsm: FsmTable) -> dict:
    return {
        "states": list(fsm.states),
        "reset": fsm.reset_state,
        "input_width": fsm.input_width,
        "output_width": fsm.output_width,
        "transitions": [
            {"state": t.state, "input": t.pattern, "next": t.next_state, "output": t.output}
            for t in fsm.transitions
        ],
    }


def save_fsm(fsm: FsmTable) -> str:
    return json.dumps(fsm_to_doc(fsm), indent=2)


def fsm_step(fsm: FsmTable, state: str, vector: str) -> tuple[str, str]:
    """Table interpreter: one step; unmatched input self-loops with zeros."""
    for t in fsm.transitions:
        if t.state == state and pattern_matches(t.pattern, vector):
            return t.next_state, t.output
    return state, "0" * fsm.output_width


def run_table_trace(fsm: FsmTable, vectors: Sequence[str]) -> list[str]:
    """Outputs of the interpreter along ``vectors``, starting at reset."""
    state = fsm.reset_state
    outs = []
    for v in vectors:
        state, out = fsm_step(fsm, state, v)
        outs.append(out)
    return outs


class _NetBuilder:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.gates: list[Gate] = []
        self.n = 0

    def gate(self, typ: str, *ins: str, output: str | None = None) -> str:
        out = output if output is not None else f"{self.prefix}n{self.n}"
        self.gates.append(Gate(f"{self.prefix}g{self.n}", typ, tuple(ins), out))
        self.n += 1
        return out

    def tree(self, typ: str, nets: list[str]) -> str:
        """Balanced binary reduction of a non-empty net list."""
        while len(nets) > 1:
            nxt = [
                self.gate(typ, nets[i], nets[i + 1])
                for i in range(0, len(nets) - 1, 2)
            ]
            if len(nets) % 2:
                nxt.append(nets[-1])
            nets = nxt
        return nets[0]


def synthesize_fsm(fsm: FsmTable) -> Netlist:
    """One-hot implementation of the table.

    Deterministic given the table; raises on a nondeterministic table.
    """
    validate_fsm(fsm)
    b = _NetBuilder("fsm__")
    ins = [f"fsm_in{i}" for i in range(fsm.input_width)]
    q = {s: f"fsm__state_{s}" for s in fsm.states}

    inv_in: dict[int, str] = {}

    def literal(i: int, want: str) -> str:
        if want == "1":
            return ins[i]
        if i not in inv_in:
            inv_in[i] = b.gate("INV", ins[i])
        return inv_in[i]

    match_net: list[str] = []
    for t in fsm.transitions:
        terms = [q[t.state]]
        terms += [literal(i, c) for i, c in enumerate(t.pattern) if c != "-"]
        match_net.append(b.tree("AND2", terms))

    inv_reset = b.gate("INV", "reset")
    const0: list[str] = []

    def zero() -> str:
        if not const0:
            const0.append(b.gate("XOR2", "reset", "reset"))
        return const0[0]

    # stay term: state bit and no transition matched
    stay: dict[str, str] = {}
    for s in fsm.states:
        from_s = [match_net[i] for i, t in enumerate(fsm.transitions) if t.state == s]
        if from_s:
            stay[s] = b.gate("AND2", q[s], b.gate("INV", b.tree("OR2", list(from_s))))
        else:
            stay[s] = q[s]

    dffs = []
    for s in fsm.states:
        terms = [match_net[i] for i, t in enumerate(fsm.transitions) if t.next_state == s]
        terms.append(stay[s])
        pre = b.tree("OR2", terms)
        if s == fsm.reset_state:
            d = b.gate("OR2", "reset", pre)
        else:
            d = b.gate("AND2", inv_reset, pre)
        dffs.append(Dff(d=d, q=q[s]))

    outputs = []
    for j in range(fsm.output_width):
        terms = [
            match_net[i]
            for i, t in enumerate(fsm.transitions)
            if t.output[j] == "1"
        ]
        src = b.tree("OR2", terms) if terms else zero()
        outputs.append(b.gate("BUF", src, output=f"fsm_out{j}"))

    nl = Netlist(
        name="fsm",
        inputs=tuple(["reset"] + ins),
        outputs=tuple(outputs),
        gates=tuple(b.gates),
        dffs=tuple(dffs),
    )
    return nl


def run_netlist_trace(nl: Netlist, fsm: FsmTable, vectors: Sequence[str]) -> list[str]:
    """Outputs of the synthesized netlist along ``vectors``.

    Applies the reset protocol (one all-zero-input reset cycle), then one
    cycle per vector; comparable index-for-index with
    :func:`run_table_trace`.
    """
    state = initial_state(nl)
    pins = {f"fsm_in{i}": 0 for i in range(fsm.input_width)}
    _, state = step(nl, state, {"reset": 1, **pins})
    outs = []
    for v in vectors:
        pi = {"reset": 0}
        for i, c in enumerate(v):
            pi[f"fsm_in{i}"] = 1 if c == "1" else 0
        out_vals, state = step(nl, state, pi)
        outs.append("".join(str(out_vals[f"fsm_out{j}"]) for j in range(fsm.output_width)))
    return outs
