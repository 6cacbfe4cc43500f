"""Exact maximum/minimum weight matching (blossom algorithm), numba-compiled.

Array-based port of the classic O(n^3) primal-dual blossom implementation
by Galil / van Rantwijk (the same algorithm networkx ships in pure
Python), restricted to integer weights with doubled dual variables so
every quantity stays integral. ``min_weight_perfect_matching`` converts
float weights to fixed point, flips them against a constant and runs in
maximum-cardinality mode, which yields the minimum-weight perfect
matching whenever one exists.

Bookkeeping: vertices are 0..n-1, blossom slots n..2n-1. For blossom b,
``childs[b-n, :clen]`` lists its sub-blossoms around the odd cycle and
``bedg_*[b-n, i]`` is the cycle edge joining child i to child i+1 mod
clen (first endpoint inside child i). ``scal`` carries the two mutable
scalars (queue length, free-blossom stack top) across helper calls.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_SCALE = float(1 << 20)


@njit(cache=True)
def _leaves_fill(b, n, childs, childs_len, out):
    if b < n:
        out[0] = b
        return 1
    cnt = 0
    stack = np.empty(2 * n + 2, np.int32)
    top = 0
    stack[top] = b
    top += 1
    while top > 0:
        top -= 1
        t = stack[top]
        if t < n:
            out[cnt] = t
            cnt += 1
        else:
            row = t - n
            for i in range(childs_len[row]):
                stack[top] = childs[row, i]
                top += 1
    return cnt


@njit(cache=True)
def _edge_between(ei, ej, inc_ptr, inc_edge, v, w):
    for p in range(inc_ptr[v], inc_ptr[v + 1]):
        k = inc_edge[p]
        if ei[k] == w or ej[k] == w:
            return k
    return -1


@njit(cache=True)
def _slack_pair(ei, ej, ew, inc_ptr, inc_edge, dualvar, v, w):
    k = _edge_between(ei, ej, inc_ptr, inc_edge, v, w)
    return dualvar[v] + dualvar[w] - 2 * ew[k]


@njit(cache=True)
def _assign_label(n, w, t, v, mate, label, le_v, le_w, inblossom, blossombase,
                  be_v, be_w, childs, childs_len, queue, scal, leafbuf):
    """Label blossom of w with t through edge (v, w); v == -1 for roots."""
    w0, t0, v0 = w, t, v
    while True:
        bb = inblossom[w0]
        label[w0] = t0
        label[bb] = t0
        le_v[w0] = v0
        le_w[w0] = w0 if v0 >= 0 else -1
        le_v[bb] = v0
        le_w[bb] = w0 if v0 >= 0 else -1
        be_v[w0] = -1
        be_w[w0] = -1
        be_v[bb] = -1
        be_w[bb] = -1
        if t0 == 1:
            cnt = _leaves_fill(bb, n, childs, childs_len, leafbuf)
            for i in range(cnt):
                queue[scal[0]] = leafbuf[i]
                scal[0] += 1
            return
        # T-blossom: its base's mate becomes an S-blossom
        base = blossombase[bb]
        w0 = mate[base]
        v0 = base
        t0 = 1


@njit(cache=True)
def _augment_blossom(n, b, v, mate, blossomparent, blossombase,
                     childs, childs_len, bedg_v, bedg_w,
                     augstack_b, augstack_v, rotbuf):
    """Swap matched/unmatched edges along the path from v to the base of b."""
    top = 0
    augstack_b[top] = b
    augstack_v[top] = v
    top += 1
    while top > 0:
        top -= 1
        ab = augstack_b[top]
        av = augstack_v[top]
        # bubble up from av to the immediate sub-blossom of ab
        t = av
        while blossomparent[t] != ab:
            t = blossomparent[t]
        if t >= n:
            augstack_b[top] = t
            augstack_v[top] = av
            top += 1
        row = ab - n
        clen = childs_len[row]
        ii = 0
        for ci in range(clen):
            if childs[row, ci] == t:
                ii = ci
                break
        jj = ii
        if ii & 1:
            jj -= clen
            jstep = 1
        else:
            jstep = -1
        while jj != 0:
            jj += jstep
            t2 = childs[row, jj % clen]
            if jstep == 1:
                w2 = bedg_v[row, jj % clen]
                x2 = bedg_w[row, jj % clen]
            else:
                x2 = bedg_v[row, (jj - 1) % clen]
                w2 = bedg_w[row, (jj - 1) % clen]
            if t2 >= n:
                augstack_b[top] = t2
                augstack_v[top] = w2
                top += 1
            jj += jstep
            t2 = childs[row, jj % clen]
            if t2 >= n:
                augstack_b[top] = t2
                augstack_v[top] = x2
                top += 1
            mate[w2] = x2
            mate[x2] = w2
        # rotate childs/edges so the new base child comes first
        if ii > 0:
            for ci in range(clen):
                rotbuf[ci] = childs[row, (ii + ci) % clen]
            for ci in range(clen):
                childs[row, ci] = rotbuf[ci]
            for ci in range(clen):
                rotbuf[ci] = bedg_v[row, (ii + ci) % clen]
            for ci in range(clen):
                bedg_v[row, ci] = rotbuf[ci]
            for ci in range(clen):
                rotbuf[ci] = bedg_w[row, (ii + ci) % clen]
            for ci in range(clen):
                bedg_w[row, ci] = rotbuf[ci]
        blossombase[ab] = av


@njit(cache=True)
def _augment_matching(n, v, w, mate, label, le_v, le_w, inblossom,
                      blossomparent, blossombase, childs, childs_len,
                      bedg_v, bedg_w, augstack_b, augstack_v, rotbuf):
    for side in range(2):
        s = v if side == 0 else w
        j = w if side == 0 else v
        while True:
            bs = inblossom[s]
            if bs >= n:
                _augment_blossom(n, bs, s, mate, blossomparent, blossombase,
                                 childs, childs_len, bedg_v, bedg_w,
                                 augstack_b, augstack_v, rotbuf)
            mate[s] = j
            if le_v[bs] == -1:
                break
            t = le_v[bs]
            bt = inblossom[t]
            s2 = le_v[bt]
            j2 = le_w[bt]
            if bt >= n:
                _augment_blossom(n, bt, j2, mate, blossomparent, blossombase,
                                 childs, childs_len, bedg_v, bedg_w,
                                 augstack_b, augstack_v, rotbuf)
            mate[j2] = s2
            s = s2
            j = j2


@njit(cache=True)
def _add_blossom(n, ei, ej, ew, inc_ptr, inc_edge, base, v, w,
                 mate, label, le_v, le_w, inblossom, blossomparent,
                 blossombase, bused, dualvar, blossomdual,
                 childs, childs_len, bedg_v, bedg_w,
                 mbe_v, mbe_w, mbe_len, be_v, be_w,
                 unused, queue, scal, leafbuf, leafbuf2, tmpbuf,
                 bet_v, bet_w, bet_touch):
    bb = inblossom[base]
    bv = inblossom[v]
    bw = inblossom[w]
    scal[1] -= 1
    b = unused[scal[1]]
    row = b - n
    bused[b] = 1
    blossombase[b] = base
    blossomparent[b] = -1
    blossomparent[bb] = b

    # childs = [bb] + reversed(trace from v) + trace from w
    # edges = reversed([(v,w)] + labeledges of v-trace) + swapped w-trace
    tlen = 0
    tv = v
    bv3 = bv
    while bv3 != bb:
        blossomparent[bv3] = b
        tmpbuf[tlen] = bv3
        tlen += 1
        bedg_v[row, tlen] = le_v[bv3]
        bedg_w[row, tlen] = le_w[bv3]
        tv = le_v[bv3]
        bv3 = inblossom[tv]
    bedg_v[row, 0] = v
    bedg_w[row, 0] = w
    # reverse edges 0..tlen inclusive
    lo = 0
    hi = tlen
    while lo < hi:
        t1, t2 = bedg_v[row, lo], bedg_w[row, lo]
        bedg_v[row, lo] = bedg_v[row, hi]
        bedg_w[row, lo] = bedg_w[row, hi]
        bedg_v[row, hi] = t1
        bedg_w[row, hi] = t2
        lo += 1
        hi -= 1
    childs[row, 0] = bb
    for i in range(tlen):
        childs[row, 1 + i] = tmpbuf[tlen - 1 - i]
    clen = tlen + 1

    tw = w
    bw3 = bw
    while bw3 != bb:
        blossomparent[bw3] = b
        childs[row, clen] = bw3
        bedg_v[row, clen] = le_w[bw3]
        bedg_w[row, clen] = le_v[bw3]
        clen += 1
        tw = le_v[bw3]
        bw3 = inblossom[tw]
    childs_len[row] = clen

    label[b] = 1
    le_v[b] = le_v[bb]
    le_w[b] = le_w[bb]
    blossomdual[b] = 0

    cnt = _leaves_fill(b, n, childs, childs_len, leafbuf)
    for i in range(cnt):
        lv = leafbuf[i]
        if label[inblossom[lv]] == 2:
            queue[scal[0]] = lv
            scal[0] += 1
        inblossom[lv] = b

    # least-slack edges to other S-blossoms
    ntouch = 0
    for ci in range(clen):
        bv4 = childs[row, ci]
        if bv4 >= n and mbe_len[bv4 - n] >= 0:
            r2 = bv4 - n
            for q2 in range(mbe_len[r2]):
                vv = mbe_v[r2, q2]
                ww = mbe_w[r2, q2]
                if inblossom[ww] == b:
                    vv, ww = ww, vv
                bj = inblossom[ww]
                if bj != b and label[bj] == 1:
                    sl = _slack_pair(ei, ej, ew, inc_ptr, inc_edge, dualvar,
                                     vv, ww)
                    if bet_v[bj] == -1:
                        bet_v[bj] = vv
                        bet_w[bj] = ww
                        bet_touch[ntouch] = bj
                        ntouch += 1
                    elif sl < _slack_pair(ei, ej, ew, inc_ptr, inc_edge,
                                          dualvar, bet_v[bj], bet_w[bj]):
                        bet_v[bj] = vv
                        bet_w[bj] = ww
            mbe_len[r2] = -1
        else:
            cnt2 = _leaves_fill(bv4, n, childs, childs_len, leafbuf2)
            for li in range(cnt2):
                vv = leafbuf2[li]
                for p2 in range(inc_ptr[vv], inc_ptr[vv + 1]):
                    k2 = inc_edge[p2]
                    ww = ej[k2] if ei[k2] == vv else ei[k2]
                    bj = inblossom[ww]
                    if bj != b and label[bj] == 1:
                        sl = dualvar[vv] + dualvar[ww] - 2 * ew[k2]
                        if bet_v[bj] == -1:
                            bet_v[bj] = vv
                            bet_w[bj] = ww
                            bet_touch[ntouch] = bj
                            ntouch += 1
                        elif sl < _slack_pair(ei, ej, ew, inc_ptr, inc_edge,
                                              dualvar, bet_v[bj], bet_w[bj]):
                            bet_v[bj] = vv
                            bet_w[bj] = ww
        be_v[bv4] = -1
        be_w[bv4] = -1

    mcount = 0
    for q2 in range(ntouch):
        bj = bet_touch[q2]
        mbe_v[row, mcount] = bet_v[bj]
        mbe_w[row, mcount] = bet_w[bj]
        mcount += 1
        bet_v[bj] = -1
        bet_w[bj] = -1
    mbe_len[row] = mcount

    be_v[b] = -1
    be_w[b] = -1
    best = np.int64(0)
    have = False
    for q2 in range(mcount):
        sl = _slack_pair(ei, ej, ew, inc_ptr, inc_edge, dualvar,
                         mbe_v[row, q2], mbe_w[row, q2])
        if not have or sl < best:
            best = sl
            have = True
            be_v[b] = mbe_v[row, q2]
            be_w[b] = mbe_w[row, q2]


@njit(cache=True)
def _expand_blossom(n, ei, ej, inc_ptr, inc_edge, b, endstage,
                    mate, label, le_v, le_w, inblossom, blossomparent,
                    blossombase, bused, blossomdual, allowedge,
                    childs, childs_len, bedg_v, bedg_w, mbe_len, be_v, be_w,
                    unused, queue, scal, leafbuf, estack):
    """Expand top-level blossom b; endstage expansion recurses into
    zero-dual sub-blossoms, mid-stage (T-blossom) expansion relabels."""
    etop = 0
    estack[etop] = b
    etop += 1
    while etop > 0:
        etop -= 1
        bcur = estack[etop]
        row = bcur - n
        clen = childs_len[row]
        for ci in range(clen):
            s = childs[row, ci]
            blossomparent[s] = -1
            if s < n:
                inblossom[s] = s
            elif endstage and blossomdual[s] == 0:
                estack[etop] = s
                etop += 1
            else:
                cnt = _leaves_fill(s, n, childs, childs_len, leafbuf)
                for li in range(cnt):
                    inblossom[leafbuf[li]] = s

        if (not endstage) and label[bcur] == 2:
            entrychild = inblossom[le_w[bcur]]
            jj = 0
            for ci in range(clen):
                if childs[row, ci] == entrychild:
                    jj = ci
                    break
            if jj & 1:
                jj -= clen
                jstep = 1
            else:
                jstep = -1
            vv = le_v[bcur]
            ww = le_w[bcur]
            while jj != 0:
                if jstep == 1:
                    p2 = bedg_v[row, jj % clen]
                    q2 = bedg_w[row, jj % clen]
                else:
                    q2 = bedg_v[row, (jj - 1) % clen]
                    p2 = bedg_w[row, (jj - 1) % clen]
                label[ww] = 0
                label[q2] = 0
                _assign_label(n, ww, 2, vv, mate, label, le_v, le_w, inblossom,
                              blossombase, be_v, be_w, childs, childs_len,
                              queue, scal, leafbuf)
                allowedge[_edge_between(ei, ej, inc_ptr, inc_edge, p2, q2)] = 1
                jj += jstep
                if jstep == 1:
                    vv = bedg_v[row, jj % clen]
                    ww = bedg_w[row, jj % clen]
                else:
                    ww = bedg_v[row, (jj - 1) % clen]
                    vv = bedg_w[row, (jj - 1) % clen]
                allowedge[_edge_between(ei, ej, inc_ptr, inc_edge, vv, ww)] = 1
                jj += jstep
            bw6 = childs[row, jj % clen]
            label[ww] = 2
            label[bw6] = 2
            le_v[ww] = vv
            le_w[ww] = ww
            le_v[bw6] = vv
            le_w[bw6] = ww
            be_v[bw6] = -1
            be_w[bw6] = -1
            jj += jstep
            while childs[row, jj % clen] != entrychild:
                bv6 = childs[row, jj % clen]
                if label[bv6] == 1:
                    jj += jstep
                    continue
                vfound = -1
                if bv6 >= n:
                    cnt = _leaves_fill(bv6, n, childs, childs_len, leafbuf)
                    for li in range(cnt):
                        if label[leafbuf[li]] != 0:
                            vfound = leafbuf[li]
                            break
                else:
                    if label[bv6] != 0:
                        vfound = bv6
                if vfound >= 0:
                    label[vfound] = 0
                    label[mate[blossombase[bv6]]] = 0
                    _assign_label(n, vfound, 2, le_v[vfound], mate, label,
                                  le_v, le_w, inblossom, blossombase,
                                  be_v, be_w, childs, childs_len,
                                  queue, scal, leafbuf)
                jj += jstep

        label[bcur] = 0
        le_v[bcur] = -1
        le_w[bcur] = -1
        be_v[bcur] = -1
        be_w[bcur] = -1
        blossomparent[bcur] = -1
        blossombase[bcur] = -1
        blossomdual[bcur] = 0
        bused[bcur] = 0
        unused[scal[1]] = bcur
        scal[1] += 1
        mbe_len[row] = -1


@njit(cache=True)
def _mwm(n, ei, ej, ew, inc_ptr, inc_edge, maxcardinality):  # noqa: C901
    nb = 2 * n
    m = ei.shape[0]

    maxweight = np.int64(0)
    for k in range(m):
        if ew[k] > maxweight:
            maxweight = ew[k]

    mate = np.full(n, -1, np.int32)
    label = np.zeros(nb, np.int8)
    le_v = np.full(nb, -1, np.int32)
    le_w = np.full(nb, -1, np.int32)
    inblossom = np.arange(n, dtype=np.int32)
    blossomparent = np.full(nb, -1, np.int32)
    blossombase = np.full(nb, -1, np.int32)
    for v in range(n):
        blossombase[v] = v
    bused = np.zeros(nb, np.uint8)
    dualvar = np.full(n, maxweight, np.int64)
    blossomdual = np.zeros(nb, np.int64)
    allowedge = np.zeros(m, np.uint8)
    queue = np.empty(16 * n + 64, np.int32)
    scal = np.zeros(2, np.int64)   # scal[0] = queue length, scal[1] = free top

    rows = max(n, 1)
    cap = n + 2
    childs = np.full((rows, cap), -1, np.int32)
    childs_len = np.zeros(rows, np.int32)
    bedg_v = np.full((rows, cap), -1, np.int32)
    bedg_w = np.full((rows, cap), -1, np.int32)
    mbe_v = np.full((rows, cap), -1, np.int32)
    mbe_w = np.full((rows, cap), -1, np.int32)
    mbe_len = np.full(rows, -1, np.int32)
    be_v = np.full(nb, -1, np.int32)
    be_w = np.full(nb, -1, np.int32)
    unused = np.empty(rows, np.int32)
    for i in range(n):
        unused[i] = n + i
    scal[1] = n

    leafbuf = np.empty(rows, np.int32)
    leafbuf2 = np.empty(rows, np.int32)
    tmpbuf = np.empty(nb + 2, np.int32)
    path_buf = np.empty(nb + 2, np.int32)
    estack = np.empty(nb + 2, np.int32)
    augstack_b = np.empty(nb + 2, np.int32)
    augstack_v = np.empty(nb + 2, np.int32)
    rotbuf = np.empty(cap, np.int32)
    bet_v = np.full(nb, -1, np.int32)
    bet_w = np.full(nb, -1, np.int32)
    bet_touch = np.empty(nb, np.int32)

    while True:  # stages
        label[:] = 0
        le_v[:] = -1
        le_w[:] = -1
        be_v[:] = -1
        be_w[:] = -1
        mbe_len[:] = -1
        allowedge[:] = 0
        scal[0] = 0

        for v in range(n):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                _assign_label(n, v, 1, -1, mate, label, le_v, le_w, inblossom,
                              blossombase, be_v, be_w, childs, childs_len,
                              queue, scal, leafbuf)

        augmented = False
        while True:  # substages
            while scal[0] > 0 and not augmented:
                scal[0] -= 1
                v = queue[scal[0]]
                for pp in range(inc_ptr[v], inc_ptr[v + 1]):
                    k = inc_edge[pp]
                    w = ej[k] if ei[k] == v else ei[k]
                    bv = inblossom[v]
                    bw = inblossom[w]
                    if bv == bw:
                        continue
                    kslack = dualvar[ei[k]] + dualvar[ej[k]] - 2 * ew[k]
                    if not allowedge[k] and kslack <= 0:
                        allowedge[k] = 1
                    if allowedge[k]:
                        if label[bw] == 0:
                            _assign_label(n, w, 2, v, mate, label, le_v, le_w,
                                          inblossom, blossombase, be_v, be_w,
                                          childs, childs_len, queue, scal,
                                          leafbuf)
                        elif label[bw] == 1:
                            # scan for a common ancestor (new blossom base)
                            base = -1
                            pv, pw = v, w
                            plen = 0
                            while pv != -1:
                                bbb = inblossom[pv]
                                if label[bbb] & 4:
                                    base = blossombase[bbb]
                                    break
                                path_buf[plen] = bbb
                                plen += 1
                                label[bbb] = 5
                                if le_v[bbb] == -1:
                                    pv = -1
                                else:
                                    pv = le_v[bbb]
                                    bbb = inblossom[pv]
                                    pv = le_v[bbb]
                                if pw != -1:
                                    pv, pw = pw, pv
                            for i in range(plen):
                                label[path_buf[i]] = 1
                            if base >= 0:
                                _add_blossom(n, ei, ej, ew, inc_ptr, inc_edge,
                                             base, v, w, mate, label, le_v,
                                             le_w, inblossom, blossomparent,
                                             blossombase, bused, dualvar,
                                             blossomdual, childs, childs_len,
                                             bedg_v, bedg_w, mbe_v, mbe_w,
                                             mbe_len, be_v, be_w, unused,
                                             queue, scal, leafbuf, leafbuf2,
                                             tmpbuf, bet_v, bet_w, bet_touch)
                            else:
                                _augment_matching(n, v, w, mate, label, le_v,
                                                  le_w, inblossom,
                                                  blossomparent, blossombase,
                                                  childs, childs_len, bedg_v,
                                                  bedg_w, augstack_b,
                                                  augstack_v, rotbuf)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            le_v[w] = v
                            le_w[w] = w
                    elif label[bw] == 1:
                        if be_v[bv] == -1 or kslack < _slack_pair(
                                ei, ej, ew, inc_ptr, inc_edge, dualvar,
                                be_v[bv], be_w[bv]):
                            be_v[bv] = v
                            be_w[bv] = w
                    elif label[w] == 0:
                        if be_v[w] == -1 or kslack < _slack_pair(
                                ei, ej, ew, inc_ptr, inc_edge, dualvar,
                                be_v[w], be_w[w]):
                            be_v[w] = v
                            be_w[w] = w

            if augmented:
                break

            deltatype = -1
            delta = np.int64(0)
            deltaedge_v = -1
            deltaedge_w = -1
            deltablossom = -1

            if not maxcardinality:
                deltatype = 1
                delta = dualvar[0]
                for v in range(n):
                    if dualvar[v] < delta:
                        delta = dualvar[v]

            for v in range(n):
                if label[inblossom[v]] == 0 and be_v[v] != -1:
                    d = _slack_pair(ei, ej, ew, inc_ptr, inc_edge, dualvar,
                                    be_v[v], be_w[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge_v = be_v[v]
                        deltaedge_w = be_w[v]

            for b in range(nb):
                if b >= n and not bused[b]:
                    continue
                if blossomparent[b] == -1 and label[b] == 1 and be_v[b] != -1:
                    ksl = _slack_pair(ei, ej, ew, inc_ptr, inc_edge, dualvar,
                                      be_v[b], be_w[b])
                    d = ksl // 2
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge_v = be_v[b]
                        deltaedge_w = be_w[b]

            for b in range(n, nb):
                if bused[b] and blossomparent[b] == -1 and label[b] == 2:
                    if deltatype == -1 or blossomdual[b] < delta:
                        delta = blossomdual[b]
                        deltatype = 4
                        deltablossom = b

            if deltatype == -1:
                deltatype = 1
                mind = dualvar[0]
                for v in range(n):
                    if dualvar[v] < mind:
                        mind = dualvar[v]
                delta = mind if mind > 0 else np.int64(0)

            for v in range(n):
                lab = label[inblossom[v]]
                if lab == 1:
                    dualvar[v] -= delta
                elif lab == 2:
                    dualvar[v] += delta
            for b in range(n, nb):
                if bused[b] and blossomparent[b] == -1:
                    if label[b] == 1:
                        blossomdual[b] += delta
                    elif label[b] == 2:
                        blossomdual[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2 or deltatype == 3:
                k3 = _edge_between(ei, ej, inc_ptr, inc_edge,
                                   deltaedge_v, deltaedge_w)
                allowedge[k3] = 1
                queue[scal[0]] = deltaedge_v
                scal[0] += 1
            else:
                _expand_blossom(n, ei, ej, inc_ptr, inc_edge, deltablossom,
                                False, mate, label, le_v, le_w, inblossom,
                                blossomparent, blossombase, bused,
                                blossomdual, allowedge, childs, childs_len,
                                bedg_v, bedg_w, mbe_len, be_v, be_w,
                                unused, queue, scal, leafbuf, estack)

        if not augmented:
            break

        for b in range(n, nb):
            if bused[b] and blossomparent[b] == -1 and label[b] == 1 and \
                    blossomdual[b] == 0:
                _expand_blossom(n, ei, ej, inc_ptr, inc_edge, b, True,
                                mate, label, le_v, le_w, inblossom,
                                blossomparent, blossombase, bused,
                                blossomdual, allowedge, childs, childs_len,
                                bedg_v, bedg_w, mbe_len, be_v, be_w,
                                unused, queue, scal, leafbuf, estack)

    return mate


def _csr_incidence(n: int, ei: np.ndarray, ej: np.ndarray):
    m = len(ei)
    ends = np.concatenate([ei, ej]).astype(np.int64)
    eids = np.concatenate([np.arange(m), np.arange(m)]).astype(np.int32)
    order = np.argsort(ends, kind="stable")
    inc = eids[order]
    deg = np.bincount(ends + 1, minlength=n + 1)
    indptr = np.cumsum(deg)
    return indptr.astype(np.int64), inc


def max_weight_matching(n: int, edges, maxcardinality: bool = True) -> np.ndarray:
    """Exact maximum-weight matching over integer-weight edges.

    ``edges`` holds (i, j, w) triples with 0 <= i, j < n, i != j, integer w.
    Parallel edges collapse to their maximum weight; self loops are
    rejected. Returns the mate array (-1 marks unmatched vertices).
    """
    if n == 0:
        return np.zeros(0, np.int32)
    best: dict[tuple[int, int], int] = {}
    for i, j, w in edges:
        if i == j:
            raise ValueError("self loops are not allowed")
        key = (i, j) if i < j else (j, i)
        w = int(w)
        if key not in best or w > best[key]:
            best[key] = w
    if not best:
        return np.full(n, -1, np.int32)
    canon = sorted((i, j, w) for (i, j), w in best.items())
    ei = np.array([e[0] for e in canon], np.int32)
    ej = np.array([e[1] for e in canon], np.int32)
    ew = np.array([e[2] for e in canon], np.int64)
    indptr, inc = _csr_incidence(n, ei, ej)
    return _mwm(n, ei, ej, ew, indptr, inc, maxcardinality)


def min_weight_perfect_matching(n: int, edges) -> list[tuple[int, int]]:
    """Exact minimum-weight perfect matching; raises if none exists.

    Float weights are converted to fixed point (2^20 resolution) and
    flipped against a constant, so a maximum-cardinality maximum-weight
    matching of the transformed graph is a minimum-weight perfect matching
    of the original.
    """
    if n % 2:
        raise ValueError("odd number of vertices cannot be perfectly matched")
    if n == 0:
        return []
    scaled = [(i, j, int(round(w * _SCALE))) for i, j, w in edges]
    top = max(w for _, _, w in scaled) + 1
    flipped = [(i, j, top - w) for i, j, w in scaled]
    mate = max_weight_matching(n, flipped, maxcardinality=True)
    if np.any(mate < 0):
        raise RuntimeError("graph admits no perfect matching")
    return [(v, int(mate[v])) for v in range(n) if v < int(mate[v])]
