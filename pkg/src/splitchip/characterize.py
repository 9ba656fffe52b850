"""Per-module characterization: build the four configuration netlists and
measure fmax, area, and power for each.

The trusted/untrusted gap comes entirely from the two Technology inputs;
the locked and FSM-obfuscated variants are re-measured transformed
netlists (the fixed-cell model has no gate resizing, so "re-optimize after
locking" reduces to re-running timing, area, and power).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

from .fsm import FsmTable, synthesize_fsm
from .locking import insert_key_xor, obfuscate_fsm
from .model import ConfigMetrics, Configuration, ModuleCharacterization
from .netlist import Netlist, NetlistError, validate_netlist
from .technology import Technology
from .timing import estimate_area, estimate_power, find_max_frequency


@dataclass(frozen=True)
class LockParams:
    """Transform knobs; ``key_count=None`` means 5% of gates (at least 1)."""

    key_count: Optional[int] = None
    chain_len: int = 4
    traps: int = 4
    seed: int = 0

    def resolve_key_count(self, nl: Netlist) -> int:
        if self.key_count is not None:
            return self.key_count
        return max(1, round(0.05 * len(nl.gates)))


def compose(a: Netlist, b: Netlist, name: Optional[str] = None) -> Netlist:
    """Wire two netlists together by net name.

    A primary input of one side that is driven by the other side becomes an
    internal net.  Anything else (duplicate gate ids, a net driven on both
    sides) is a name collision and rejected.
    """
    ids_a = {g.id for g in a.gates}
    ids_b = {g.id for g in b.gates}
    clash = ids_a & ids_b
    if clash:
        raise NetlistError(f"composition gate id collision: {sorted(clash)[:5]}")

    driven_a = {g.output for g in a.gates} | {ff.q for ff in a.dffs}
    driven_b = {g.output for g in b.gates} | {ff.q for ff in b.dffs}
    clash = driven_a & driven_b
    if clash:
        raise NetlistError(f"composition net collision: {sorted(clash)[:5]}")

    inputs = [pi for pi in a.inputs if pi not in driven_b]
    inputs += [pi for pi in b.inputs if pi not in driven_a and pi not in inputs]
    outputs = list(a.outputs) + [po for po in b.outputs if po not in a.outputs]

    nl = Netlist(
        name=name or f"{a.name}+{b.name}",
        inputs=tuple(inputs),
        outputs=tuple(outputs),
        gates=a.gates + b.gates,
        dffs=a.dffs + b.dffs,
    )
    validate_netlist(nl)
    return nl


def _measure(nl: Netlist, tech: Technology) -> ConfigMetrics:
    fr = find_max_frequency(nl, tech)
    power = estimate_power(nl, tech, fr.fmax)
    return ConfigMetrics(
        fmax=fr.fmax,
        area=estimate_area(nl, tech),
        p_dyn_at_fmax=power.p_dyn,
        p_static=power.p_static,
    )


def characterize_module(
    datapath: Netlist,
    fsm: Optional[FsmTable],
    trusted: Technology,
    untrusted: Technology,
    lock_params: LockParams = LockParams(),
) -> ModuleCharacterization:
    """Characterize one module in all four configurations.

    A module without an FSM cannot be FSM-obfuscated; that configuration
    falls back to the plain untrusted numbers with a warning.
    """
    if fsm is not None:
        base = compose(datapath, synthesize_fsm(fsm), name=datapath.name)
    else:
        base = datapath

    k = lock_params.resolve_key_count(base)
    locked = insert_key_xor(base, k, lock_params.seed).locked

    table = {
        Configuration.TRUSTED: _measure(base, trusted),
        Configuration.UNTRUSTED: _measure(base, untrusted),
        Configuration.UNTRUSTED_KEY_LOCKED: _measure(locked, untrusted),
    }

    if fsm is not None:
        obf = obfuscate_fsm(fsm, lock_params.chain_len, lock_params.traps, lock_params.seed)
        obf_nl = compose(datapath, synthesize_fsm(obf.obfuscated), name=datapath.name)
        table[Configuration.UNTRUSTED_FSM_OBF] = _measure(obf_nl, untrusted)
    else:
        warnings.warn(
            f"module {datapath.name!r} has no FSM; FSM-obfuscated configuration"
            " falls back to plain untrusted characterization",
            stacklevel=2,
        )
        table[Configuration.UNTRUSTED_FSM_OBF] = table[Configuration.UNTRUSTED]

    return ModuleCharacterization(table)
