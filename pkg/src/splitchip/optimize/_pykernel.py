"""Pure-Python search kernel: reference implementation and import-time
fallback when the compiled extension is unavailable.

Semantics (visit order, pruning thresholds, leaf arithmetic, tie-breaking,
node counting) must match ``_kernel.pyx`` exactly; keep the two in sync.
"""

from __future__ import annotations

import math

from .problem import PRUNE_MARGIN, CompiledProblem

BACKEND = "python"

_INF = math.inf


def run_search(P: CompiledProblem, brute: bool, record_prunes: bool = False):
    """Depth-first assignment search.

    ``brute`` disables the incumbent seed and every prune, turning the same
    loop into plain enumeration.  Returns
    ``(best_assignment_or_None, nodes_visited, nodes_pruned, prune_log)``
    where the assignment is config codes in spec order.  ``nodes_visited``
    counts complete assignments evaluated.
    """
    n = P.n
    nd = P.nd
    nc = P.nc
    nl = P.nl
    order = P.order.tolist()
    allowed_off = P.allowed_off.tolist()
    allowed_flat = P.allowed_flat.tolist()
    dom = P.dom.tolist()
    fmin = P.fmin.tolist()
    fmax = P.fmax.ravel().tolist()
    pstat = P.pstat.ravel().tolist()
    pdyn = P.pdyn.ravel().tolist()
    area = P.area.ravel().tolist()
    vexp = P.vexp.ravel().tolist()
    plb = P.plb.ravel().tolist()
    suf_vexp = P.suf_vexp.tolist()
    suf_area = P.suf_area.tolist()
    suf_plb = P.suf_plb.tolist()
    ch_src = P.ch_src.tolist()
    ch_dst = P.ch_dst.tolist()
    ch_bw = P.ch_bw.tolist()
    ch_lat = P.ch_lat.tolist()
    ready_off = P.ready_off.tolist()
    ready_ch = P.ready_ch.tolist()
    ready_other = P.ready_other.tolist()
    chlat_off = P.chlat_off.tolist()
    chlat_idx = P.chlat_idx.tolist()
    chlat_mult = P.chlat_mult.tolist()
    lat_base = P.lat_base.tolist()
    lat_max = P.lat_max.tolist()
    path_off = P.path_off.tolist()
    path_ch = P.path_ch.tolist()
    p_total_max = P.p_total_max
    p_trusted_max = P.p_trusted_max
    p_untrusted_max = P.p_untrusted_max
    io_max = P.io_max
    baseline = P.baseline
    area_max = P.area_max
    delay = P.delay

    def cut(bound: float) -> float:
        return bound + PRUNE_MARGIN * (1.0 + abs(bound)) if bound < _INF else _INF

    io_cut = cut(io_max)
    area_cut = cut(area_max)
    power_cut = cut(p_total_max)
    lat_cut = [cut(b) for b in lat_max]

    fd = [0.0] * nd

    def leaf_eval(asg):
        """Feasibility and (vulnerability, total power, total area).

        Mirrors metrics.evaluate: same expressions, same accumulation
        order, exact comparisons.
        """
        for d in range(nd):
            fd[d] = _INF
        for i in range(n):
            v = fmax[4 * i + asg[i]]
            di = dom[i]
            if v < fd[di]:
                fd[di] = v
        for d in range(nd):
            if fd[d] < fmin[d]:
                return False, 0.0, 0.0, 0.0
        pt = 0.0
        pu = 0.0
        for i in range(n):
            c = asg[i]
            ic = 4 * i + c
            p = pstat[ic] + pdyn[ic] * (fd[dom[i]] / fmax[ic])
            if c == 0:
                pt += p
            else:
                pu += p
        tot = pt + pu
        if tot > p_total_max or pt > p_trusted_max or pu > p_untrusted_max:
            return False, 0.0, 0.0, 0.0
        io = baseline
        for c in range(nc):
            if (asg[ch_src[c]] == 0) != (asg[ch_dst[c]] == 0):
                io += ch_bw[c]
        if io > io_max:
            return False, 0.0, 0.0, 0.0
        for l in range(nl):
            lat = 0.0
            for t in range(path_off[l], path_off[l + 1]):
                ch = path_ch[t]
                term = ch_lat[ch]
                if (asg[ch_src[ch]] == 0) != (asg[ch_dst[ch]] == 0):
                    term += delay
                lat += term
            if lat > lat_max[l]:
                return False, 0.0, 0.0, 0.0
        at = 0.0
        au = 0.0
        for i in range(n):
            a = area[4 * i + asg[i]]
            if asg[i] == 0:
                at += a
            else:
                au += a
        if at + au > area_max:
            return False, 0.0, 0.0, 0.0
        v = 0.0
        for i in range(n):
            v += vexp[4 * i + asg[i]]
        return True, v, tot, at + au

    has_inc = False
    inc_v = _INF
    inc_p = _INF
    inc_a = _INF
    inc_asg = [0] * n
    vcut = _INF

    def better(v, p, a, asg):
        if not has_inc:
            return True
        if v != inc_v:
            return v < inc_v
        if p != inc_p:
            return p < inc_p
        if a != inc_a:
            return a < inc_a
        for k in range(n):
            i = order[k]
            if asg[i] != inc_asg[i]:
                return asg[i] < inc_asg[i]
        return False

    def take(v, p, a, asg):
        nonlocal has_inc, inc_v, inc_p, inc_a, vcut
        has_inc = True
        inc_v = v
        inc_p = p
        inc_a = a
        inc_asg[:] = asg
        vcut = cut(v)

    asg = [0] * n

    if not brute:
        # seed: every module at its lowest-exposure candidate
        for k in range(n):
            i = order[k]
            asg[i] = allowed_flat[allowed_off[i]]
        feas, v, p, a = leaf_eval(asg)
        if feas:
            take(v, p, a, asg)

    visited = 0
    pruned = 0
    prune_log = [] if record_prunes else None

    vuln_st = [0.0] * (n + 1)
    plb_st = [0.0] * (n + 1)
    area_st = [0.0] * (n + 1)
    bw_st = [0.0] * (n + 1)
    pen_st: list[list[float]] = [[0.0] * nl for _ in range(n + 1)]
    child_ix = [0] * n

    k = 0
    child_ix[0] = 0
    while k >= 0:
        i = order[k]
        base = allowed_off[i]
        count = allowed_off[i + 1] - base
        ci = child_ix[k]
        if ci >= count:
            k -= 1
            continue
        child_ix[k] = ci + 1
        c = allowed_flat[base + ci]
        ic = 4 * i + c

        vuln_child = vuln_st[k] + vexp[ic]
        bw_child = bw_st[k]
        pen_child = pen_st[k][:] if (nl and not brute) else pen_st[k]

        if brute:
            ok = True
        else:
            ok = False
            while True:  # single-pass prune ladder
                if vuln_child + suf_vexp[k + 1] > vcut:
                    break
                if fmax[ic] < fmin[dom[i]]:
                    break
                trusted = c == 0
                for t in range(ready_off[i], ready_off[i + 1]):
                    if trusted != (asg[ready_other[t]] == 0):
                        ch = ready_ch[t]
                        bw_child += ch_bw[ch]
                        for u in range(chlat_off[ch], chlat_off[ch + 1]):
                            pen_child[chlat_idx[u]] += delay * chlat_mult[u]
                if baseline + bw_child > io_cut:
                    break
                lat_ok = True
                for l in range(nl):
                    if lat_base[l] + pen_child[l] > lat_cut[l]:
                        lat_ok = False
                        break
                if not lat_ok:
                    break
                if area_st[k] + area[ic] + suf_area[k + 1] > area_cut:
                    break
                if plb_st[k] + plb[ic] + suf_plb[k + 1] > power_cut:
                    break
                ok = True
                break
            if not ok:
                pruned += 1
                if record_prunes:
                    prefix = tuple(
                        (order[j], asg[order[j]]) for j in range(k)
                    ) + ((i, c),)
                    prune_log.append((prefix, inc_v if has_inc else None))
                continue

        asg[i] = c
        if k == n - 1:
            visited += 1
            feas, v, p, a = leaf_eval(asg)
            if feas and better(v, p, a, asg):
                take(v, p, a, asg)
            continue

        vuln_st[k + 1] = vuln_child
        plb_st[k + 1] = plb_st[k] + plb[ic]
        area_st[k + 1] = area_st[k] + area[ic]
        bw_st[k + 1] = bw_child
        pen_st[k + 1] = pen_child
        k += 1
        child_ix[k] = 0

    best = list(inc_asg) if has_inc else None
    return best, visited, pruned, prune_log
