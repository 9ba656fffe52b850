"""Run records and the in-memory run store."""

from __future__ import annotations

import datetime as _dt
import json
import threading
from dataclasses import dataclass
from typing import Iterable, Optional

from ..metrics import EvaluationResult
from ..model import (
    ALL_CONFIGURATIONS,
    Configuration,
    ConstraintSet,
    SystemSpec,
    constraints_to_doc,
)
from ..optimize import OptimizerResult, branch_and_bound


@dataclass(frozen=True)
class RunRecord:
    run_id: int
    constraints: ConstraintSet
    enabled_configs: tuple[Configuration, ...]
    result: OptimizerResult
    eval: Optional[EvaluationResult]
    timestamp: str

    def to_doc(self, spec: SystemSpec) -> dict:
        return {
            "run_id": self.run_id,
            "constraints": constraints_to_doc(self.constraints, spec),
            "enabled_configs": [c.name for c in self.enabled_configs],
            "result": self.result.to_doc(),
            "eval": None if self.eval is None else self.eval.to_doc(),
            "timestamp": self.timestamp,
        }


def run_once(
    spec: SystemSpec,
    constraints: ConstraintSet,
    enabled_configs: Optional[Iterable[Configuration]] = None,
    run_id: int = 0,
    backend: Optional[str] = None,
) -> RunRecord:
    """One optimization run: branch and bound restricted to the enabled
    configurations, plus the evaluation of the winner."""
    enabled = (
        tuple(ALL_CONFIGURATIONS)
        if enabled_configs is None
        else tuple(sorted(set(enabled_configs), key=int))
    )
    for required in (Configuration.TRUSTED, Configuration.UNTRUSTED):
        if required not in enabled:
            raise ValueError(f"enabled_configs must include {required.name}")
    result = branch_and_bound(spec, constraints, enabled=enabled, backend=backend)
    return RunRecord(
        run_id=run_id,
        constraints=constraints,
        enabled_configs=enabled,
        result=result,
        eval=result.best_eval,
        timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(),
    )


class RunStore:
    """Append-only, id-monotone run history; safe for concurrent requests."""

    def __init__(self):
        self._lock = threading.Lock()
        self._runs: dict[int, RunRecord] = {}
        self._next_id = 0

    def allocate_id(self) -> int:
        with self._lock:
            run_id = self._next_id
            self._next_id += 1
            return run_id

    def add(self, record: RunRecord) -> None:
        with self._lock:
            self._runs[record.run_id] = record

    def get(self, run_id: int) -> Optional[RunRecord]:
        with self._lock:
            return self._runs.get(run_id)

    def delete(self, run_id: int) -> bool:
        with self._lock:
            return self._runs.pop(run_id, None) is not None

    def list(self) -> list[RunRecord]:
        with self._lock:
            return [self._runs[k] for k in sorted(self._runs)]

    def save(self, path: str, spec: SystemSpec) -> None:
        docs = [r.to_doc(spec) for r in self.list()]
        with open(path, "w") as f:
            json.dump(docs, f, indent=2)
