# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled search kernel.

Mirror of ``_pykernel.run_search``: identical visit order, pruning
thresholds, leaf arithmetic, tie-breaking, and node counting.  All float
work is plain double arithmetic (no fast-math, no FMA contraction) so the
two backends and the metric engine agree bit-for-bit.
"""

import numpy as np

from .problem import PRUNE_MARGIN

BACKEND = "cython"

cdef double _INF = float("inf")


cdef inline double _cut(double bound):
    if bound < _INF:
        return bound + PRUNE_MARGIN * (1.0 + abs(bound))
    return _INF


cdef bint _leaf_eval(
    signed char[::1] asg,
    int n, int nd, int nc, int nl,
    const int[::1] dom, const double[::1] fmin,
    const double[::1] fmax, const double[::1] pstat, const double[::1] pdyn,
    const double[::1] area, const double[::1] vexp,
    const int[::1] ch_src, const int[::1] ch_dst,
    const double[::1] ch_bw, const double[::1] ch_lat,
    const double[::1] lat_base, const double[::1] lat_max,
    const int[::1] path_off, const int[::1] path_ch,
    double p_total_max, double p_trusted_max, double p_untrusted_max,
    double io_max, double baseline, double area_max, double delay,
    double[::1] fd, double* out_v, double* out_p, double* out_a,
):
    cdef int i, d, c, l, t, ch, ic
    cdef double v, p, pt, pu, tot, io, lat, term, at, au, vv
    for d in range(nd):
        fd[d] = _INF
    for i in range(n):
        v = fmax[4 * i + asg[i]]
        if v < fd[dom[i]]:
            fd[dom[i]] = v
    for d in range(nd):
        if fd[d] < fmin[d]:
            return False
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
        return False
    io = baseline
    for c in range(nc):
        if (asg[ch_src[c]] == 0) != (asg[ch_dst[c]] == 0):
            io += ch_bw[c]
    if io > io_max:
        return False
    for l in range(nl):
        lat = 0.0
        for t in range(path_off[l], path_off[l + 1]):
            ch = path_ch[t]
            term = ch_lat[ch]
            if (asg[ch_src[ch]] == 0) != (asg[ch_dst[ch]] == 0):
                term += delay
            lat += term
        if lat > lat_max[l]:
            return False
    at = 0.0
    au = 0.0
    for i in range(n):
        v = area[4 * i + asg[i]]
        if asg[i] == 0:
            at += v
        else:
            au += v
    if at + au > area_max:
        return False
    vv = 0.0
    for i in range(n):
        vv += vexp[4 * i + asg[i]]
    out_v[0] = vv
    out_p[0] = tot
    out_a[0] = at + au
    return True


def run_search(P, bint brute, bint record_prunes=False):
    """See ``_pykernel.run_search``; same contract."""
    cdef int n = P.n
    cdef int nd = P.nd
    cdef int nc = P.nc
    cdef int nl = P.nl
    cdef const int[::1] order = np.ascontiguousarray(P.order, dtype=np.int32)
    cdef const int[::1] allowed_off = np.ascontiguousarray(P.allowed_off, dtype=np.int32)
    cdef const signed char[::1] allowed_flat = np.ascontiguousarray(P.allowed_flat, dtype=np.int8)
    cdef const int[::1] dom = np.ascontiguousarray(P.dom, dtype=np.int32)
    cdef const double[::1] fmin = np.ascontiguousarray(P.fmin)
    cdef const double[::1] fmax = np.ascontiguousarray(P.fmax.ravel())
    cdef const double[::1] pstat = np.ascontiguousarray(P.pstat.ravel())
    cdef const double[::1] pdyn = np.ascontiguousarray(P.pdyn.ravel())
    cdef const double[::1] area = np.ascontiguousarray(P.area.ravel())
    cdef const double[::1] vexp = np.ascontiguousarray(P.vexp.ravel())
    cdef const double[::1] plb = np.ascontiguousarray(P.plb.ravel())
    cdef const double[::1] suf_vexp = np.ascontiguousarray(P.suf_vexp)
    cdef const double[::1] suf_area = np.ascontiguousarray(P.suf_area)
    cdef const double[::1] suf_plb = np.ascontiguousarray(P.suf_plb)
    cdef const int[::1] ch_src = np.ascontiguousarray(P.ch_src, dtype=np.int32)
    cdef const int[::1] ch_dst = np.ascontiguousarray(P.ch_dst, dtype=np.int32)
    cdef const double[::1] ch_bw = np.ascontiguousarray(P.ch_bw)
    cdef const double[::1] ch_lat = np.ascontiguousarray(P.ch_lat)
    cdef const int[::1] ready_off = np.ascontiguousarray(P.ready_off, dtype=np.int32)
    cdef const int[::1] ready_ch = np.ascontiguousarray(P.ready_ch, dtype=np.int32)
    cdef const int[::1] ready_other = np.ascontiguousarray(P.ready_other, dtype=np.int32)
    cdef const int[::1] chlat_off = np.ascontiguousarray(P.chlat_off, dtype=np.int32)
    cdef const int[::1] chlat_idx = np.ascontiguousarray(P.chlat_idx, dtype=np.int32)
    cdef const double[::1] chlat_mult = np.ascontiguousarray(P.chlat_mult)
    cdef const double[::1] lat_base = np.ascontiguousarray(P.lat_base)
    cdef const double[::1] lat_max = np.ascontiguousarray(P.lat_max)
    cdef const int[::1] path_off = np.ascontiguousarray(P.path_off, dtype=np.int32)
    cdef const int[::1] path_ch = np.ascontiguousarray(P.path_ch, dtype=np.int32)
    cdef double p_total_max = P.p_total_max
    cdef double p_trusted_max = P.p_trusted_max
    cdef double p_untrusted_max = P.p_untrusted_max
    cdef double io_max = P.io_max
    cdef double baseline = P.baseline
    cdef double area_max = P.area_max
    cdef double delay = P.delay

    cdef double io_cut = _cut(io_max)
    cdef double area_cut = _cut(area_max)
    cdef double power_cut = _cut(p_total_max)
    lat_cut_arr = np.array([_cut(b) for b in P.lat_max], dtype=np.float64)
    cdef double[::1] lat_cut = lat_cut_arr

    cdef double[::1] fd = np.zeros(max(nd, 1))
    cdef signed char[::1] asg = np.zeros(max(n, 1), dtype=np.int8)
    cdef signed char[::1] inc_asg = np.zeros(max(n, 1), dtype=np.int8)
    cdef int[::1] child_ix = np.zeros(max(n, 1), dtype=np.int32)
    cdef double[::1] vuln_st = np.zeros(n + 1)
    cdef double[::1] plb_st = np.zeros(n + 1)
    cdef double[::1] area_st = np.zeros(n + 1)
    cdef double[::1] bw_st = np.zeros(n + 1)
    cdef double[:, ::1] pen_st = np.zeros((n + 1, max(nl, 1)))

    cdef bint has_inc = False
    cdef double inc_v = _INF, inc_p = _INF, inc_a = _INF
    cdef double vcut = _INF
    cdef long visited = 0, pruned = 0
    prune_log = [] if record_prunes else None

    cdef int k, i, c, ci, base, count, ic, t, u, l, ch, j
    cdef double vuln_child, bw_child, lv, lp, la
    cdef bint ok, feas, lat_ok, trusted, is_better

    if not brute:
        for k in range(n):
            i = order[k]
            asg[i] = allowed_flat[allowed_off[i]]
        feas = _leaf_eval(
            asg, n, nd, nc, nl, dom, fmin, fmax, pstat, pdyn, area, vexp,
            ch_src, ch_dst, ch_bw, ch_lat, lat_base, lat_max, path_off, path_ch,
            p_total_max, p_trusted_max, p_untrusted_max, io_max, baseline,
            area_max, delay, fd, &lv, &lp, &la,
        )
        if feas:
            has_inc = True
            inc_v = lv
            inc_p = lp
            inc_a = la
            for j in range(n):
                inc_asg[j] = asg[j]
            vcut = _cut(lv)

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
        if nl and not brute:
            for l in range(nl):
                pen_st[k + 1, l] = pen_st[k, l]

        if brute:
            ok = True
        else:
            ok = False
            while True:
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
                            pen_st[k + 1, chlat_idx[u]] += delay * chlat_mult[u]
                if baseline + bw_child > io_cut:
                    break
                lat_ok = True
                for l in range(nl):
                    if lat_base[l] + pen_st[k + 1, l] > lat_cut[l]:
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
                        (int(order[j]), int(asg[order[j]])) for j in range(k)
                    ) + ((int(i), int(c)),)
                    prune_log.append((prefix, inc_v if has_inc else None))
                continue

        asg[i] = c
        if k == n - 1:
            visited += 1
            feas = _leaf_eval(
                asg, n, nd, nc, nl, dom, fmin, fmax, pstat, pdyn, area, vexp,
                ch_src, ch_dst, ch_bw, ch_lat, lat_base, lat_max,
                path_off, path_ch,
                p_total_max, p_trusted_max, p_untrusted_max, io_max, baseline,
                area_max, delay, fd, &lv, &lp, &la,
            )
            if feas:
                if not has_inc:
                    is_better = True
                elif lv != inc_v:
                    is_better = lv < inc_v
                elif lp != inc_p:
                    is_better = lp < inc_p
                elif la != inc_a:
                    is_better = la < inc_a
                else:
                    is_better = False
                    for j in range(n):
                        if asg[order[j]] != inc_asg[order[j]]:
                            is_better = asg[order[j]] < inc_asg[order[j]]
                            break
                if is_better:
                    has_inc = True
                    inc_v = lv
                    inc_p = lp
                    inc_a = la
                    for j in range(n):
                        inc_asg[j] = asg[j]
                    vcut = _cut(lv)
            continue

        vuln_st[k + 1] = vuln_child
        plb_st[k + 1] = plb_st[k] + plb[ic]
        area_st[k + 1] = area_st[k] + area[ic]
        bw_st[k + 1] = bw_child
        k += 1
        child_ix[k] = 0

    best = [int(inc_asg[j]) for j in range(n)] if has_inc else None
    return best, int(visited), int(pruned), prune_log
