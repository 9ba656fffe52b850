"""Numeric view of a partitioning instance for the search kernels.

Everything the kernels touch is flattened into arrays indexed by the
module's position in the spec (leaf metric evaluation iterates in spec
order so results match the metric engine bit-for-bit) plus a fixed search
order (descending criticality, then id) with per-depth suffix bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ..model import (
    ALL_CONFIGURATIONS,
    Configuration,
    ConstraintSet,
    SystemSpec,
)

# Slack applied to pruning thresholds so float reordering between the
# incremental bounds and the spec-order leaf sums can never prune a
# borderline-feasible completion.  Pruning less is always sound.
PRUNE_MARGIN = 1e-12


def module_search_order(spec: SystemSpec) -> list[str]:
    """Branching order: descending criticality, ties by id."""
    return [m.id for m in sorted(spec.modules, key=lambda m: (-m.criticality, m.id))]


def allowed_configurations(
    spec: SystemSpec, enabled: Optional[Iterable[Configuration]] = None
) -> dict[str, tuple[Configuration, ...]]:
    """Per-module candidate sets in child-visit order (ascending exposure).

    Placements restrict a module to a single configuration; a placement
    outside the enabled set is an error.
    """
    enabled_set = set(enabled) if enabled is not None else set(ALL_CONFIGURATIONS)
    out: dict[str, tuple[Configuration, ...]] = {}
    for m in spec.modules:
        if m.placement is not None:
            if m.placement not in enabled_set:
                raise ValueError(
                    f"module {m.id!r} is fixed to {m.placement.name},"
                    " which is not in the enabled configuration set"
                )
            cands = [m.placement]
        else:
            cands = sorted(enabled_set, key=lambda c: (spec.exposure[c], int(c)))
        out[m.id] = tuple(cands)
    return out


@dataclass
class CompiledProblem:
    ids: list[str]  # spec order
    n: int
    nd: int
    nc: int
    nl: int
    order: np.ndarray  # int32[n], spec indices in search order
    allowed_flat: np.ndarray  # int8, config codes
    allowed_off: np.ndarray  # int32[n+1], per spec index
    dom: np.ndarray  # int32[n]
    fmin: np.ndarray  # float64[nd], 0.0 = unconstrained
    fmax: np.ndarray  # float64[n,4]
    pstat: np.ndarray  # float64[n,4]
    pdyn: np.ndarray  # float64[n,4]
    area: np.ndarray  # float64[n,4]
    vexp: np.ndarray  # float64[n,4], criticality * exposure
    plb: np.ndarray  # float64[n,4], power lower bound per choice
    suf_vexp: np.ndarray  # float64[n+1], suffix of min allowed vexp, search order
    suf_area: np.ndarray
    suf_plb: np.ndarray
    ch_src: np.ndarray  # int32[nc]
    ch_dst: np.ndarray
    ch_bw: np.ndarray  # float64[nc]
    ch_lat: np.ndarray  # float64[nc]
    ready_off: np.ndarray  # int32[n+1]; per spec index: channels decided when it is assigned
    ready_ch: np.ndarray  # int32
    ready_other: np.ndarray  # int32, the already-assigned endpoint
    chlat_off: np.ndarray  # int32[nc+1]; latency constraints touched per channel
    chlat_idx: np.ndarray  # int32
    chlat_mult: np.ndarray  # float64
    lat_base: np.ndarray  # float64[nl]
    lat_max: np.ndarray  # float64[nl]
    path_off: np.ndarray  # int32[nl+1]
    path_ch: np.ndarray  # int32
    p_total_max: float
    p_trusted_max: float
    p_untrusted_max: float
    io_max: float
    baseline: float
    area_max: float
    delay: float


def build_problem(
    spec: SystemSpec,
    constraints: ConstraintSet,
    enabled: Optional[Iterable[Configuration]] = None,
) -> CompiledProblem:
    n = len(spec.modules)
    ids = [m.id for m in spec.modules]
    index = {mid: i for i, mid in enumerate(ids)}
    dom_index = {d.id: di for di, d in enumerate(spec.domains)}
    nd = len(spec.domains)

    dom = np.array([dom_index[m.clock_domain] for m in spec.modules], dtype=np.int32)
    fmin = np.zeros(nd)
    for did, f in constraints.domain_f_min.items():
        fmin[dom_index[did]] = f

    fmax = np.zeros((n, 4))
    pstat = np.zeros((n, 4))
    pdyn = np.zeros((n, 4))
    area = np.zeros((n, 4))
    vexp = np.zeros((n, 4))
    plb = np.zeros((n, 4))
    expo = [spec.exposure[c] for c in ALL_CONFIGURATIONS]
    for i, m in enumerate(spec.modules):
        fm = fmin[dom[i]]
        for c in range(4):
            cm = m.characterization[Configuration(c)]
            fmax[i, c] = cm.fmax
            pstat[i, c] = cm.p_static
            pdyn[i, c] = cm.p_dyn_at_fmax
            area[i, c] = cm.area
            vexp[i, c] = m.criticality * expo[c]
            plb[i, c] = cm.p_static + cm.p_dyn_at_fmax * (fm / cm.fmax)

    allowed = allowed_configurations(spec, enabled)
    allowed_off = np.zeros(n + 1, dtype=np.int32)
    flat: list[int] = []
    for i, mid in enumerate(ids):
        flat.extend(int(c) for c in allowed[mid])
        allowed_off[i + 1] = len(flat)
    allowed_flat = np.array(flat, dtype=np.int8)

    order = np.array(
        sorted(range(n), key=lambda i: (-spec.modules[i].criticality, ids[i])),
        dtype=np.int32,
    )

    def suffix(values: np.ndarray) -> np.ndarray:
        # values: per spec index, min over that module's allowed configs
        out = np.zeros(n + 1)
        acc = 0.0
        for k in range(n - 1, -1, -1):
            acc += values[order[k]]
            out[k] = acc
        return out

    min_vexp = np.array(
        [min(vexp[i, int(c)] for c in allowed[mid]) for i, mid in enumerate(ids)]
    )
    min_area = np.array(
        [min(area[i, int(c)] for c in allowed[mid]) for i, mid in enumerate(ids)]
    )
    min_plb = np.array(
        [min(plb[i, int(c)] for c in allowed[mid]) for i, mid in enumerate(ids)]
    )
    suf_vexp = suffix(min_vexp)
    suf_area = suffix(min_area)
    suf_plb = suffix(min_plb)

    nc = len(spec.channels)
    ch_src = np.array([index[ch.src] for ch in spec.channels], dtype=np.int32)
    ch_dst = np.array([index[ch.dst] for ch in spec.channels], dtype=np.int32)
    ch_bw = np.array([ch.bandwidth for ch in spec.channels])
    ch_lat = np.array([ch.latency_on_chip for ch in spec.channels])

    pos = np.empty(n, dtype=np.int64)
    for k in range(n):
        pos[order[k]] = k
    ready_lists: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for c in range(nc):
        a, b = int(ch_src[c]), int(ch_dst[c])
        later, other = (a, b) if pos[a] > pos[b] else (b, a)
        ready_lists[later].append((c, other))
    ready_off = np.zeros(n + 1, dtype=np.int32)
    rch: list[int] = []
    rot: list[int] = []
    for i in range(n):
        for c, other in ready_lists[i]:
            rch.append(c)
            rot.append(other)
        ready_off[i + 1] = len(rch)
    ready_ch = np.array(rch, dtype=np.int32)
    ready_other = np.array(rot, dtype=np.int32)

    lcs = constraints.latency_constraints
    nl = len(lcs)
    lat_base = np.zeros(nl)
    lat_max = np.zeros(nl)
    path_off = np.zeros(nl + 1, dtype=np.int32)
    pch: list[int] = []
    ch_members: list[dict[int, int]] = [dict() for _ in range(nc)]
    for l, lc in enumerate(lcs):
        lat_max[l] = lc.max_latency
        base = 0.0
        for ci in lc.path:
            base += ch_lat[ci]
            pch.append(ci)
            ch_members[ci][l] = ch_members[ci].get(l, 0) + 1
        lat_base[l] = base
        path_off[l + 1] = len(pch)
    path_ch = np.array(pch, dtype=np.int32)
    chlat_off = np.zeros(nc + 1, dtype=np.int32)
    cl_idx: list[int] = []
    cl_mult: list[float] = []
    for c in range(nc):
        for l, mult in sorted(ch_members[c].items()):
            cl_idx.append(l)
            cl_mult.append(float(mult))
        chlat_off[c + 1] = len(cl_idx)
    chlat_idx = np.array(cl_idx, dtype=np.int32)
    chlat_mult = np.array(cl_mult)

    def opt(v: Optional[float]) -> float:
        return math.inf if v is None else v

    return CompiledProblem(
        ids=ids,
        n=n,
        nd=nd,
        nc=nc,
        nl=nl,
        order=order,
        allowed_flat=allowed_flat,
        allowed_off=allowed_off,
        dom=dom,
        fmin=fmin,
        fmax=fmax,
        pstat=pstat,
        pdyn=pdyn,
        area=area,
        vexp=vexp,
        plb=plb,
        suf_vexp=suf_vexp,
        suf_area=suf_area,
        suf_plb=suf_plb,
        ch_src=ch_src,
        ch_dst=ch_dst,
        ch_bw=ch_bw,
        ch_lat=ch_lat,
        ready_off=ready_off,
        ready_ch=ready_ch,
        ready_other=ready_other,
        chlat_off=chlat_off,
        chlat_idx=chlat_idx,
        chlat_mult=chlat_mult,
        lat_base=lat_base,
        lat_max=lat_max,
        path_off=path_off,
        path_ch=path_ch,
        p_total_max=constraints.p_total_max,
        p_trusted_max=opt(constraints.p_trusted_max),
        p_untrusted_max=opt(constraints.p_untrusted_max),
        io_max=constraints.io_bandwidth_max,
        baseline=constraints.external_io_baseline,
        area_max=constraints.area_total_max,
        delay=constraints.inter_chip_delay,
    )
