"""Secondary obfuscation transforms: keyed XOR locking and FSM decoy states.

Both transforms are pure and deterministic given their seed.  The XOR/XNOR
convention is keyed so the correct key is not all-zeros: a site whose key
bit is 0 gets an XOR2 (transparent for key=0), a site whose key bit is 1
gets an XNOR2 (transparent for key=1).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .fsm import FsmTable, Transition, validate_fsm
from .netlist import (
    Dff,
    Gate,
    Netlist,
    eval_combinational,
    initial_state,
    input_patterns,
    step,
    validate_netlist,
)

_KEY_NET = re.compile(r"^key\d+$")

EXHAUSTIVE_PI_LIMIT = 20
SEQ_TRACES = 256
SEQ_TRACE_LEN = 64


class LockError(ValueError):
    pass


@dataclass(frozen=True)
class LockSite:
    net: str
    key_index: int
    gate_type: str  # XOR2 or XNOR2


@dataclass(frozen=True)
class LockResult:
    locked: Netlist
    key: tuple[int, ...]
    sites: tuple[LockSite, ...]


def eligible_lock_nets(nl: Netlist) -> list[str]:
    """Gate outputs and PIs, minus key nets from a previous lock pass."""
    nets = [pi for pi in nl.inputs if not _KEY_NET.match(pi)]
    nets += [g.output for g in nl.gates]
    return nets


def insert_key_xor(nl: Netlist, k: int, seed: int) -> LockResult:
    """Insert ``k`` keyed XOR/XNOR gates at seeded-random distinct sites.

    All former fanout of a chosen net (gate inputs, DFF d pins, primary
    outputs) is rewired to the key gate's output.
    """
    if k < 0:
        raise LockError("k must be >= 0")
    eligible = eligible_lock_nets(nl)
    if k > len(eligible):
        raise LockError(f"k={k} exceeds {len(eligible)} eligible nets")
    if k == 0:
        return LockResult(locked=nl, key=(), sites=())

    rng = random.Random(seed)
    chosen = rng.sample(eligible, k)
    key = tuple(rng.getrandbits(1) for _ in range(k))

    existing_keys = sum(1 for pi in nl.inputs if _KEY_NET.match(pi))
    gates = list(nl.gates)
    dffs = list(nl.dffs)
    outputs = list(nl.outputs)
    inputs = list(nl.inputs)
    sites = []
    for i, net in enumerate(chosen):
        key_net = f"key{existing_keys + i}"
        gtype = "XOR2" if key[i] == 0 else "XNOR2"
        new_net = f"{net}__k{existing_keys + i}"
        gates = [
            g
            if net not in g.inputs
            else Gate(g.id, g.type, tuple(new_net if x == net else x for x in g.inputs), g.output)
            for g in gates
        ]
        dffs = [ff if ff.d != net else Dff(d=new_net, q=ff.q) for ff in dffs]
        outputs = [new_net if po == net else po for po in outputs]
        gates.append(Gate(f"keygate{existing_keys + i}", gtype, (net, key_net), new_net))
        inputs.append(key_net)
        sites.append(LockSite(net=net, key_index=i, gate_type=gtype))

    locked = Netlist(
        name=nl.name,
        inputs=tuple(inputs),
        outputs=tuple(outputs),
        gates=tuple(gates),
        dffs=tuple(dffs),
    )
    validate_netlist(locked)
    return LockResult(locked=locked, key=key, sites=tuple(sites))


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    counterexample: Optional[dict]


def _key_values(lock: LockResult, key: Sequence[int], base_keys: int) -> dict[str, int]:
    return {f"key{base_keys + s.key_index}": key[s.key_index] for s in lock.sites}


def check_lock_equivalence(
    original: Netlist,
    lock: LockResult,
    key: Optional[Sequence[int]] = None,
    mode: str = "auto",
    seed: int = 0,
) -> EquivalenceResult:
    """Compare original vs locked outputs under a key (default: the correct
    one).

    Combinational circuits with at most ``EXHAUSTIVE_PI_LIMIT`` inputs are
    checked over all input vectors at once (bit-parallel); sequential
    circuits run 256 random 64-cycle traces.  Outputs are compared
    positionally.
    """
    if key is None:
        key = lock.key
    if len(key) != len(lock.key):
        raise LockError(f"key length {len(key)} != {len(lock.key)}")
    base_keys = sum(1 for pi in original.inputs if _KEY_NET.match(pi))
    key_vals = _key_values(lock, key, base_keys)
    pis = list(original.inputs)

    sequential = bool(original.dffs)
    if mode == "exhaustive" or (mode == "auto" and not sequential):
        if sequential:
            raise LockError("exhaustive mode requires a combinational circuit")
        if len(pis) > EXHAUSTIVE_PI_LIMIT:
            raise LockError(
                f"{len(pis)} primary inputs exceed the exhaustive limit"
                f" ({EXHAUSTIVE_PI_LIMIT}); use trace mode"
            )
        pats, mask = input_patterns(len(pis))
        src = dict(zip(pis, pats))
        v_orig = eval_combinational(original, src, mask)
        src_locked = dict(src)
        for net, bit in key_vals.items():
            src_locked[net] = mask if bit else 0
        v_lock = eval_combinational(lock.locked, src_locked, mask)
        for po_o, po_l in zip(original.outputs, lock.locked.outputs):
            diff = v_orig[po_o] ^ v_lock[po_l]
            if diff:
                idx = (diff & -diff).bit_length() - 1
                cex = {pi: (idx >> b) & 1 for b, pi in enumerate(pis)}
                return EquivalenceResult(equivalent=False, counterexample=cex)
        return EquivalenceResult(equivalent=True, counterexample=None)

    # sequential: random traces
    rng = random.Random(seed)
    for trace in range(SEQ_TRACES):
        st_o = initial_state(original)
        st_l = initial_state(lock.locked)
        history = []
        for cycle in range(SEQ_TRACE_LEN):
            pi_vals = {pi: rng.getrandbits(1) for pi in pis}
            history.append(pi_vals)
            out_o, st_o = step(original, st_o, pi_vals)
            out_l, st_l = step(lock.locked, st_l, {**pi_vals, **key_vals})
            for po_o, po_l in zip(original.outputs, lock.locked.outputs):
                if out_o[po_o] != out_l[po_l]:
                    return EquivalenceResult(
                        equivalent=False,
                        counterexample={"trace": trace, "cycle": cycle, "inputs": history},
                    )
    return EquivalenceResult(equivalent=True, counterexample=None)


def key_to_hex(key: Sequence[int]) -> str:
    """Key bits as a hex string: bit 0 is the most significant bit."""
    if not key:
        return ""
    bits = "".join(str(b) for b in key)
    return format(int(bits, 2), f"0{(len(key) + 3) // 4}x")


def key_from_hex(text: str, k: int) -> tuple[int, ...]:
    text = text.strip()
    if k == 0:
        return ()
    bits = format(int(text, 16), "b").zfill(k)
    if len(bits) > k:
        raise LockError(f"hex key wider than {k} bits")
    return tuple(int(c) for c in bits)


# ---------------------------------------------------------------------------
# FSM obfuscation


@dataclass(frozen=True)
class FsmObfResult:
    obfuscated: FsmTable
    key_sequence: tuple[str, ...]
    chain_states: tuple[str, ...]
    trap_states: tuple[str, ...]

    @property
    def decoy_states(self) -> tuple[str, ...]:
        return self.chain_states + self.trap_states


def _fresh_names(taken: set[str], prefix: str, count: int) -> list[str]:
    names = []
    n = 0
    while len(names) < count:
        cand = f"{prefix}{n}"
        n += 1
        if cand not in taken:
            taken.add(cand)
            names.append(cand)
    return names


def obfuscate_fsm(fsm: FsmTable, chain_len: int, traps: int, seed: int) -> FsmObfResult:
    """Prepend a secret entry chain of decoy states and a closed trap set.

    From chain state j the sampled key vector advances the chain (the last
    one lands on the original reset state); every other input falls into
    the trap set, which cycles among itself on all inputs.  Original states
    and transitions are preserved unmodified.
    """
    validate_fsm(fsm)
    if chain_len < 1 or traps < 1:
        raise LockError("chain_len and traps must be >= 1")
    if fsm.input_width < 1:
        raise LockError("cannot hide a key sequence in a zero-width input FSM")

    rng = random.Random(seed)
    key_sequence = tuple(
        "".join(str(rng.getrandbits(1)) for _ in range(fsm.input_width))
        for _ in range(chain_len)
    )

    taken = set(fsm.states)
    chain = _fresh_names(taken, "decoy_c", chain_len)
    trap = _fresh_names(taken, "decoy_t", traps)
    zeros = "0" * fsm.output_width
    dontcare = "-" * fsm.input_width

    new_transitions = list(fsm.transitions)
    for j, state in enumerate(chain):
        vec = key_sequence[j]
        target = chain[j + 1] if j + 1 < chain_len else fsm.reset_state
        new_transitions.append(Transition(state, vec, target, zeros))
        # complement cover: everything but vec, as disjoint prefix patterns
        for p in range(fsm.input_width):
            flipped = "1" if vec[p] == "0" else "0"
            pattern = vec[:p] + flipped + "-" * (fsm.input_width - p - 1)
            new_transitions.append(Transition(state, pattern, trap[0], zeros))
    for i, state in enumerate(trap):
        new_transitions.append(
            Transition(state, dontcare, trap[(i + 1) % traps], zeros)
        )

    obf = FsmTable(
        states=fsm.states + tuple(chain) + tuple(trap),
        reset_state=chain[0],
        input_width=fsm.input_width,
        output_width=fsm.output_width,
        transitions=tuple(new_transitions),
    )
    validate_fsm(obf)
    return FsmObfResult(
        obfuscated=obf,
        key_sequence=key_sequence,
        chain_states=tuple(chain),
        trap_states=tuple(trap),
    )
