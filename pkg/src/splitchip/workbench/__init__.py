from .runs import RunRecord, RunStore, run_once
from .sweep import SweepAxis, SweepPoint, SweepSpec, load_sweep, parse_sweep, run_sweep
from .server import create_app, serve

__all__ = [
    "RunRecord",
    "RunStore",
    "run_once",
    "SweepAxis",
    "SweepPoint",
    "SweepSpec",
    "load_sweep",
    "parse_sweep",
    "run_sweep",
    "create_app",
    "serve",
]
