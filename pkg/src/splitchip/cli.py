"""Command-line interface.

    scp validate <system.json>
    scp characterize <module-dir> --trusted <tech> --untrusted <tech> -o <out>
    scp evaluate <system> --assignment <file> [--constraints <file>]
    scp optimize <system> [--constraints <file>] [--disable-locking] [-o <out>]
    scp sweep <system> <sweep.json> [--workers N] [-o <report.json>]
    scp serve <system> [--port P] [--ui <dir>] [--state <file>]
    scp lock-xor <netlist> --k N --seed N -o <out> [--key-out <file>]
    scp lock-fsm <fsm> [--chain N] [--traps N] [--seed N] -o <out> [--key-out <file>]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .characterize import LockParams, characterize_module
from .fsm import parse_fsm, save_fsm
from .locking import insert_key_xor, key_to_hex, obfuscate_fsm
from .metrics import evaluate
from .model import (
    ALL_CONFIGURATIONS,
    Configuration,
    SchemaError,
    load_assignment,
    load_constraints,
    load_system,
    validate_system,
)
from .netlist import parse_netlist, save_netlist
from .optimize import brute_force
from .technology import parse_technology
from .workbench import load_sweep, run_once, run_sweep
from .workbench.server import serve


def _read(path: str) -> str:
    return Path(path).read_text()


def _emit(doc, out: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load_system_and_constraints(args) -> tuple:
    spec = load_system(_read(args.system))
    if getattr(args, "constraints", None):
        constraints = load_constraints(_read(args.constraints), spec)
    else:
        doc = json.loads(_read(args.system))
        if "constraints" not in doc:
            raise SchemaError(
                "constraints", "no --constraints file and none embedded in the system"
            )
        constraints = load_constraints(_read(args.system), spec)
    return spec, constraints


def _enabled_from_args(args) -> tuple[Configuration, ...]:
    if getattr(args, "disable_locking", False):
        return (Configuration.TRUSTED, Configuration.UNTRUSTED)
    return ALL_CONFIGURATIONS


def cmd_validate(args) -> int:
    try:
        spec = load_system(_read(args.system))
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    report = validate_system(spec)
    for w in report.warnings:
        print(f"warning: {w}")
    if report.errors:
        for err in report.errors:
            print(f"error: {err}", file=sys.stderr)
        return 1
    print(
        f"ok: {len(spec.modules)} modules, {len(spec.domains)} domains,"
        f" {len(spec.channels)} channels"
    )
    return 0


def cmd_characterize(args) -> int:
    module_dir = Path(args.module_dir)
    datapath = parse_netlist(_read(module_dir / "netlist.json"))
    fsm_path = module_dir / "fsm.json"
    fsm = parse_fsm(_read(fsm_path)) if fsm_path.exists() else None
    trusted = parse_technology(_read(args.trusted))
    untrusted = parse_technology(_read(args.untrusted))
    params = LockParams(
        key_count=args.key_gates, chain_len=args.chain, traps=args.traps, seed=args.seed
    )
    char = characterize_module(datapath, fsm, trusted, untrusted, params)
    doc = {
        cfg.name: {
            "fmax": char[cfg].fmax,
            "area": char[cfg].area,
            "p_dyn_at_fmax": char[cfg].p_dyn_at_fmax,
            "p_static": char[cfg].p_static,
        }
        for cfg in ALL_CONFIGURATIONS
    }
    _emit(doc, args.out)
    return 0


def cmd_evaluate(args) -> int:
    spec, constraints = _load_system_and_constraints(args)
    cfg = load_assignment(_read(args.assignment), spec)
    result = evaluate(spec, cfg, constraints)
    _emit(result.to_doc(), args.out)
    return 0 if result.feasible else 2


def cmd_optimize(args) -> int:
    spec, constraints = _load_system_and_constraints(args)
    enabled = _enabled_from_args(args)
    if args.brute_force:
        result = brute_force(spec, constraints, enabled=enabled, backend=args.backend)
        _emit(result.to_doc(), args.out)
        return 0 if result.best is not None else 2
    record = run_once(spec, constraints, enabled_configs=enabled, backend=args.backend)
    _emit(record.to_doc(spec), args.out)
    return 0 if record.result.best is not None else 2


def cmd_sweep(args) -> int:
    spec = load_system(_read(args.system))
    default_base = None
    doc = json.loads(_read(args.system))
    if "constraints" in doc:
        default_base = load_constraints(_read(args.system), spec)
    sweep = load_sweep(_read(args.sweep), spec, default_base=default_base)
    records = run_sweep(spec, sweep, workers=args.workers, backend=args.backend)
    _emit([r.to_doc(spec) for r in records], args.out)
    return 0


def cmd_serve(args) -> int:
    spec, constraints = _load_system_and_constraints(args)
    serve(
        spec,
        constraints,
        port=args.port,
        host=args.host,
        ui_dir=args.ui,
        state_path=args.state,
    )
    return 0


def cmd_lock_xor(args) -> int:
    nl = parse_netlist(_read(args.netlist))
    result = insert_key_xor(nl, args.k, args.seed)
    Path(args.out).write_text(save_netlist(result.locked) + "\n")
    key_text = key_to_hex(result.key)
    if args.key_out:
        Path(args.key_out).write_text(key_text + "\n")
    print(
        f"locked {nl.name}: {len(result.sites)} key gates, key=0x{key_text or '0'}"
    )
    return 0


def cmd_lock_fsm(args) -> int:
    fsm = parse_fsm(_read(args.fsm))
    result = obfuscate_fsm(fsm, args.chain, args.traps, args.seed)
    Path(args.out).write_text(save_fsm(result.obfuscated) + "\n")
    if args.key_out:
        Path(args.key_out).write_text(json.dumps(list(result.key_sequence)) + "\n")
    print(
        f"obfuscated FSM: {len(result.chain_states)} chain +"
        f" {len(result.trap_states)} trap states"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scp", description="split-chip partitioning workbench"
    )
    parser.add_argument("--version", action="version", version=f"scp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a system file")
    p.add_argument("system")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("characterize", help="characterize one module directory")
    p.add_argument("module_dir")
    p.add_argument("--trusted", required=True, help="trusted-node technology JSON")
    p.add_argument("--untrusted", required=True, help="untrusted-node technology JSON")
    p.add_argument("--key-gates", type=int, default=None, help="default: 5%% of gates")
    p.add_argument("--chain", type=int, default=4)
    p.add_argument("--traps", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("evaluate", help="evaluate a fixed assignment")
    p.add_argument("system")
    p.add_argument("--assignment", required=True)
    p.add_argument("--constraints", default=None)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("optimize", help="find the minimum-vulnerability partition")
    p.add_argument("system")
    p.add_argument("--constraints", default=None)
    p.add_argument("--disable-locking", action="store_true")
    p.add_argument("--brute-force", action="store_true", help="use the oracle instead")
    p.add_argument("--backend", choices=("python", "cython"), default=None)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="run a constraint sweep")
    p.add_argument("system")
    p.add_argument("sweep")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--backend", choices=("python", "cython"), default=None)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("system")
    p.add_argument("--constraints", default=None)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", default=None, help="static directory with the explorer UI")
    p.add_argument("--state", default=None, help="persist run history here on shutdown")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("lock-xor", help="insert keyed XOR/XNOR gates")
    p.add_argument("netlist")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--key-out", default=None, help="write the key as a hex string")
    p.set_defaults(func=cmd_lock_xor)

    p = sub.add_parser("lock-fsm", help="add decoy states to an FSM")
    p.add_argument("fsm")
    p.add_argument("--chain", type=int, default=4)
    p.add_argument("--traps", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--key-out", default=None, help="write the key input sequence (JSON)")
    p.set_defaults(func=cmd_lock_fsm)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
