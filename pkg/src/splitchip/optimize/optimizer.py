"""Public optimizer API on top of the search kernels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from ..metrics import EvaluationResult, evaluate, system_power, total_area
from ..model import (
    Configuration,
    ConstraintSet,
    SystemConfiguration,
    SystemSpec,
)
from .problem import build_problem, module_search_order

BRUTE_FORCE_MODULE_CAP = 14


@dataclass(frozen=True)
class PrunedNode:
    """A subtree cut during branch and bound, for offline soundness audits."""

    prefix: dict  # module id -> Configuration, including the pruned child
    incumbent_vulnerability: Optional[float]


@dataclass(frozen=True)
class OptimizerResult:
    best: Optional[SystemConfiguration]
    best_eval: Optional[EvaluationResult]
    nodes_visited: int
    nodes_pruned: int
    proven_optimal: bool
    prune_log: Optional[tuple[PrunedNode, ...]] = None

    def to_doc(self) -> dict:
        return {
            "best": None
            if self.best is None
            else {mid: cfg.name for mid, cfg in self.best.assignment.items()},
            "best_eval": None if self.best_eval is None else self.best_eval.to_doc(),
            "nodes_visited": self.nodes_visited,
            "nodes_pruned": self.nodes_pruned,
            "proven_optimal": self.proven_optimal,
        }


def _kernel_for(backend: Optional[str]):
    from . import _default_kernel, _pykernel

    if backend is None:
        return _default_kernel
    if backend == "python":
        return _pykernel
    if backend == "cython":
        from . import _kernel  # raises ImportError if not built

        return _kernel
    raise ValueError(f"unknown backend {backend!r}")


def _run(
    spec: SystemSpec,
    constraints: ConstraintSet,
    enabled: Optional[Iterable[Configuration]],
    brute: bool,
    backend: Optional[str],
    record_prunes: bool,
) -> OptimizerResult:
    problem = build_problem(spec, constraints, enabled)
    kernel = _kernel_for(backend)
    best_codes, visited, pruned, prune_log = kernel.run_search(
        problem, brute, record_prunes
    )

    best = None
    best_eval = None
    if best_codes is not None:
        best = SystemConfiguration(
            {mid: Configuration(code) for mid, code in zip(problem.ids, best_codes)}
        )
        best_eval = evaluate(spec, best, constraints)

    log = None
    if record_prunes and prune_log is not None:
        log = tuple(
            PrunedNode(
                prefix={
                    problem.ids[i]: Configuration(code) for i, code in entry[0]
                },
                incumbent_vulnerability=entry[1],
            )
            for entry in prune_log
        )
    return OptimizerResult(
        best=best,
        best_eval=best_eval,
        nodes_visited=visited,
        nodes_pruned=pruned,
        proven_optimal=True,
        prune_log=log,
    )


def brute_force(
    spec: SystemSpec,
    constraints: ConstraintSet,
    enabled: Optional[Iterable[Configuration]] = None,
    backend: Optional[str] = None,
) -> OptimizerResult:
    """Enumerate every assignment; the verification oracle for the search.

    Capped at 14 modules (4^14 assignments) to keep desk-scale runtimes.
    """
    if len(spec.modules) > BRUTE_FORCE_MODULE_CAP:
        raise ValueError(
            f"brute force capped at {BRUTE_FORCE_MODULE_CAP} modules;"
            f" got {len(spec.modules)}"
        )
    return _run(spec, constraints, enabled, brute=True, backend=backend, record_prunes=False)


def branch_and_bound(
    spec: SystemSpec,
    constraints: ConstraintSet,
    enabled: Optional[Iterable[Configuration]] = None,
    backend: Optional[str] = None,
    record_prunes: bool = False,
) -> OptimizerResult:
    """Depth-first branch and bound over module assignments.

    Modules are branched in descending-criticality order, children in
    ascending-exposure order; subtrees are cut by sound partial-feasibility
    bounds and a vulnerability lower bound against the incumbent.  Agrees
    with :func:`brute_force` (same assignment, same tie-breaking) on every
    instance the oracle can handle.
    """
    return _run(
        spec, constraints, enabled, brute=False, backend=backend, record_prunes=record_prunes
    )


def tie_break(a: SystemConfiguration, b: SystemConfiguration, spec: SystemSpec) -> int:
    """Total order among equal-vulnerability configurations.

    Lower total power wins, then lower total area, then the
    lexicographically smaller assignment along the search module order
    (configuration order TRUSTED < UNTRUSTED < KEY_LOCKED < FSM_OBF).
    Returns -1 if ``a`` is preferred, 1 if ``b``, 0 if identical.
    """
    pa = system_power(spec, a).total
    pb = system_power(spec, b).total
    if pa != pb:
        return -1 if pa < pb else 1
    aa = total_area(spec, a).total
    ab = total_area(spec, b).total
    if aa != ab:
        return -1 if aa < ab else 1
    for mid in module_search_order(spec):
        ca, cb = a[mid], b[mid]
        if ca != cb:
            return -1 if ca < cb else 1
    return 0
