"""Numba kernels backing the tableau simulator and the classical lattice analysis.

Tableau layout: rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers.
x/z bits are packed 64 per word along axis 1; ``r`` holds one sign bit per
row (0 -> +1, 1 -> -1). Phase bookkeeping uses the XZ normal form: a row
with sign bit r and y = popcount(x & z) represents i^(2r+y) * X^x * Z^z.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U1 = np.uint64(1)
U2 = np.uint64(2)
U4 = np.uint64(4)
U56 = np.uint64(56)
M1 = np.uint64(0x5555555555555555)
M2 = np.uint64(0x3333333333333333)
M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def _popcount(v):
    v = v - ((v >> U1) & M1)
    v = (v & M2) + ((v >> U2) & M2)
    v = (v + (v >> U4)) & M4
    return np.int64((v * H01) >> U56)


# ---------------------------------------------------------------------------
# Clifford gates
# ---------------------------------------------------------------------------


@njit(cache=True)
def cnot_many(xs, zs, r, ctrls, tgts):
    rows = xs.shape[0]
    for k in range(ctrls.shape[0]):
        a = ctrls[k]
        b = tgts[k]
        wa = a >> 6
        ba = np.uint64(a & 63)
        wb = b >> 6
        bb = np.uint64(b & 63)
        for i in range(rows):
            xa = (xs[i, wa] >> ba) & U1
            za = (zs[i, wa] >> ba) & U1
            xb = (xs[i, wb] >> bb) & U1
            zb = (zs[i, wb] >> bb) & U1
            r[i] ^= np.uint8(xa & zb & (xb ^ za ^ U1))
            xs[i, wb] ^= xa << bb
            zs[i, wa] ^= zb << ba


@njit(cache=True)
def h_many(xs, zs, r, qubits):
    rows = xs.shape[0]
    for k in range(qubits.shape[0]):
        q = qubits[k]
        w = q >> 6
        b = np.uint64(q & 63)
        for i in range(rows):
            x = (xs[i, w] >> b) & U1
            z = (zs[i, w] >> b) & U1
            r[i] ^= np.uint8(x & z)
            flip = (x ^ z) << b
            xs[i, w] ^= flip
            zs[i, w] ^= flip


@njit(cache=True)
def pauli_many(xs, zs, r, qubits, codes):
    """Apply Pauli gates; codes: 1 = X, 2 = Y, 3 = Z (0 skipped)."""
    rows = xs.shape[0]
    for k in range(qubits.shape[0]):
        code = codes[k]
        if code == 0:
            continue
        q = qubits[k]
        w = q >> 6
        b = np.uint64(q & 63)
        for i in range(rows):
            x = (xs[i, w] >> b) & U1
            z = (zs[i, w] >> b) & U1
            if code == 1:
                r[i] ^= np.uint8(z)
            elif code == 3:
                r[i] ^= np.uint8(x)
            else:
                r[i] ^= np.uint8(x ^ z)


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _row_mult(xs, zs, r, i, p):
    """row_i := row_i * row_p (rows must commute)."""
    W = xs.shape[1]
    t = np.int64(2 * (r[i] + r[p]))
    for w in range(W):
        t += _popcount(xs[i, w] & zs[i, w])
        t += _popcount(xs[p, w] & zs[p, w])
        t += 2 * _popcount(zs[i, w] & xs[p, w])
        xs[i, w] ^= xs[p, w]
        zs[i, w] ^= zs[p, w]
        t -= _popcount(xs[i, w] & zs[i, w])
    r[i] = np.uint8((t % 4) >> 1)


@njit(cache=True)
def measure_single(xs, zs, r, q, x_basis, rng):
    """Measure Z_q (or X_q when x_basis). Returns (outcome_bit, deterministic).

    Worst case O(n^2) bit operations when an update is required.
    """
    rows = xs.shape[0]
    n = rows >> 1
    W = xs.shape[1]
    w = q >> 6
    b = np.uint64(q & 63)

    p = -1
    for i in range(n, rows):
        word = zs[i, w] if x_basis else xs[i, w]
        if (word >> b) & U1:
            p = i
            break

    if p >= 0:
        outcome = np.uint8(rng.integers(0, 2))
        for i in range(rows):
            if i == p or i == p - n:
                continue
            word = zs[i, w] if x_basis else xs[i, w]
            if (word >> b) & U1:
                _row_mult(xs, zs, r, i, p)
        for ww in range(W):
            xs[p - n, ww] = xs[p, ww]
            zs[p - n, ww] = zs[p, ww]
            xs[p, ww] = np.uint64(0)
            zs[p, ww] = np.uint64(0)
        r[p - n] = r[p]
        if x_basis:
            xs[p, w] = U1 << b
        else:
            zs[p, w] = U1 << b
        r[p] = outcome
        return outcome, False

    # Deterministic: multiply out the stabilizer rows whose destabilizer
    # partners anticommute with the observable.
    sx = np.zeros(W, np.uint64)
    sz = np.zeros(W, np.uint64)
    u = np.int64(0)
    for i in range(n):
        word = zs[i, w] if x_basis else xs[i, w]
        if (word >> b) & U1:
            s = i + n
            u += 2 * r[s]
            for ww in range(W):
                u += _popcount(xs[s, ww] & zs[s, ww])
                u += 2 * _popcount(sz[ww] & xs[s, ww])
                sx[ww] ^= xs[s, ww]
                sz[ww] ^= zs[s, ww]
    outcome = np.uint8((u % 4) >> 1)
    return outcome, True


@njit(cache=True)
def measure_single_many(xs, zs, r, qubits, x_basis, rng, out_bits, out_det):
    for k in range(qubits.shape[0]):
        bit, det = measure_single(xs, zs, r, qubits[k], x_basis, rng)
        out_bits[k] = bit
        out_det[k] = det


@njit(cache=True)
def reset_many(xs, zs, r, qubits, x_basis, rng):
    """Force each qubit into the +1 eigenstate of Z (or X when x_basis)."""
    for k in range(qubits.shape[0]):
        q = qubits[k]
        bit, _ = measure_single(xs, zs, r, q, x_basis, rng)
        if bit:
            w = q >> 6
            b = np.uint64(q & 63)
            for i in range(xs.shape[0]):
                # flip sign with the anticommuting partner: X after Z-measure,
                # Z after X-measure
                word = xs[i, w] if x_basis else zs[i, w]
                r[i] ^= np.uint8((word >> b) & U1)


@njit(cache=True)
def measure_pauli(xs, zs, r, px, pz, yp, rng):
    """Measure a +1-phase Hermitian Pauli given by packed (px, pz) bit masks.

    yp must equal popcount(px & pz). Returns (outcome_bit, deterministic).
    """
    rows = xs.shape[0]
    n = rows >> 1
    W = xs.shape[1]

    p = -1
    for i in range(n, rows):
        acc = np.int64(0)
        for w in range(W):
            acc += _popcount(xs[i, w] & pz[w]) + _popcount(zs[i, w] & px[w])
        if acc & 1:
            p = i
            break

    if p >= 0:
        outcome = np.uint8(rng.integers(0, 2))
        for i in range(rows):
            if i == p or i == p - n:
                continue
            acc = np.int64(0)
            for w in range(W):
                acc += _popcount(xs[i, w] & pz[w]) + _popcount(zs[i, w] & px[w])
            if acc & 1:
                _row_mult(xs, zs, r, i, p)
        for w in range(W):
            xs[p - n, w] = xs[p, w]
            zs[p - n, w] = zs[p, w]
            xs[p, w] = px[w]
            zs[p, w] = pz[w]
        r[p - n] = r[p]
        r[p] = outcome
        return outcome, False

    sx = np.zeros(W, np.uint64)
    sz = np.zeros(W, np.uint64)
    u = np.int64(0)
    for i in range(n):
        acc = np.int64(0)
        for w in range(W):
            acc += _popcount(xs[i, w] & pz[w]) + _popcount(zs[i, w] & px[w])
        if acc & 1:
            s = i + n
            u += 2 * r[s]
            for w in range(W):
                u += _popcount(xs[s, w] & zs[s, w])
                u += 2 * _popcount(sz[w] & xs[s, w])
                sx[w] ^= xs[s, w]
                sz[w] ^= zs[s, w]
    outcome = np.uint8(((u - yp) % 4) >> 1)
    return outcome, True


@njit(cache=True)
def measure_pauli_many(xs, zs, r, pxs, pzs, yps, rng, out_bits, out_det):
    for k in range(pxs.shape[0]):
        bit, det = measure_pauli(xs, zs, r, pxs[k], pzs[k], yps[k], rng)
        out_bits[k] = bit
        out_det[k] = det


# ---------------------------------------------------------------------------
# First-order fault-mechanism enumeration for the decoder graph
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _detect_node(kind0, g0, u0, tau, s, measured_now, nextm, node_id):
    """Detector node for an X appearing on a qubit at (tau, end of slot s)."""
    if kind0 == 1:
        return g0  # boundary node id stored directly
    if measured_now[g0, tau] and s < u0:
        return node_id[g0, tau]
    return node_id[g0, nextm[g0, tau + 1]]


@njit(cache=True, inline="always")
def _pattern_add(patt_n, patt_c, np_cnt, n):
    for t2 in range(np_cnt):
        if patt_n[t2] == n:
            patt_c[t2] += 1
            return np_cnt
    patt_n[np_cnt] = n
    patt_c[np_cnt] = 1
    return np_cnt + 1


@njit(cache=True, inline="always")
def _emit_pattern(patt_n, patt_c, np_cnt, rate, src,
                  out_n1, out_n2, out_p, out_src, cnt):
    """Write the odd-parity residue of a pattern as an edge emission."""
    odd0 = -1
    odd1 = -1
    n_odd = 0
    for t2 in range(np_cnt):
        if patt_c[t2] % 2:
            if n_odd == 0:
                odd0 = patt_n[t2]
            elif n_odd == 1:
                odd1 = patt_n[t2]
            n_odd += 1
    if n_odd != 2:
        return cnt
    if odd0 > odd1:
        odd0, odd1 = odd1, odd0
    out_n1[cnt] = odd0
    out_n2[cnt] = odd1
    out_p[cnt] = rate
    out_src[cnt] = src
    return cnt + 1


@njit(cache=True)
def emit_mechanisms(n_rounds, p_comp,
                    ep_kind, ep_g, ep_slot, fq_idx,
                    di_row, di_slot, di_start, di_step,
                    gt_row, gt_slot, gt_is_star, gt_gid,
                    gt_suffix_ptr, gt_suffix_slot, gt_suffix_qrow,
                    gt_start, gt_step, gt_flip_id, gt_joint_id,
                    anc_idle_gid, anc_idle_start, anc_idle_step, anc_idle_cnt,
                    hk_idle_ptr, hk_idle_slot, hk_idle_qrow, hk_idle_start,
                    hk_idle_step, hk_idle_rate_mult, hk_idle_flip_id,
                    pm_gid, pm_start, pm_step, pm_members,
                    measured_now, nextm, node_id,
                    out_n1, out_n2, out_p, out_src):
    """Enumerate every first-order fault mechanism into edge emissions.

    Classes: data idle depolarizing (X/Y at 8p/15 per idle slot), one
    entry per scheduled CNOT with its three non-trivial leg quadrants
    (data-only, ancilla-only, both at 4p/15 each; the joint quadrant's
    pattern is the XOR of the leg patterns), ancilla idle slots (readout
    flip for the measured kind, hook for the other kind), and prep+readout
    flips (p each) per measured member. Returns the emission count.
    """
    xy = 8.0 / 15.0 * p_comp
    quad = 4.0 / 15.0 * p_comp
    cnt = 0
    patt_n = np.empty(16, np.int64)
    patt_c = np.empty(16, np.int64)

    # ---- data idle slots -------------------------------------------------
    for di in range(di_row.shape[0]):
        row = di_row[di]
        s = di_slot[di]
        k1, g1, u1 = ep_kind[row, 0], ep_g[row, 0], ep_slot[row, 0]
        k2, g2, u2 = ep_kind[row, 1], ep_g[row, 1], ep_slot[row, 1]
        src = fq_idx[row]
        tau = di_start[di]
        while tau <= n_rounds:
            n1 = _detect_node(k1, g1, u1, tau, s, measured_now,
                              nextm, node_id)
            n2 = _detect_node(k2, g2, u2, tau, s, measured_now,
                              nextm, node_id)
            if n1 != n2:
                a, b = (n1, n2) if n1 < n2 else (n2, n1)
                out_n1[cnt] = a
                out_n2[cnt] = b
                out_p[cnt] = xy
                out_src[cnt] = src
                cnt += 1
            tau += di_step[di]

    # ---- scheduled CNOTs: three leg quadrants per gate ---------------------
    n_gates = gt_row.shape[0]
    for gi in range(n_gates):
        row = gt_row[gi]
        u = gt_slot[gi]
        k1, g1, u1 = ep_kind[row, 0], ep_g[row, 0], ep_slot[row, 0]
        k2, g2, u2 = ep_kind[row, 1], ep_g[row, 1], ep_slot[row, 1]
        a, b = gt_suffix_ptr[gi], gt_suffix_ptr[gi + 1]
        tau = gt_start[gi]
        while tau <= n_rounds:
            # data leg: persistent X on the data qubit from slot u
            d1 = _detect_node(k1, g1, u1, tau, u, measured_now, nextm, node_id)
            d2 = _detect_node(k2, g2, u2, tau, u, measured_now, nextm, node_id)
            if d1 != d2:
                n1, n2 = (d1, d2) if d1 < d2 else (d2, d1)
                out_n1[cnt] = n1
                out_n2[cnt] = n2
                out_p[cnt] = quad
                out_src[cnt] = fq_idx[row]
                cnt += 1
            # ancilla leg pattern
            np_cnt = 0
            if gt_is_star[gi]:
                for e in range(a, b):
                    srow = gt_suffix_qrow[e]
                    uq = gt_suffix_slot[e]
                    for sl in range(2):
                        n = _detect_node(ep_kind[srow, sl], ep_g[srow, sl],
                                         ep_slot[srow, sl], tau, uq,
                                         measured_now, nextm, node_id)
                        np_cnt = _pattern_add(patt_n, patt_c, np_cnt, n)
            else:
                g = gt_gid[gi]
                np_cnt = _pattern_add(patt_n, patt_c, np_cnt,
                                      node_id[g, tau])
                np_cnt = _pattern_add(patt_n, patt_c, np_cnt,
                                      node_id[g, nextm[g, tau + 1]])
            cnt = _emit_pattern(patt_n, patt_c, np_cnt, quad, gt_flip_id[gi],
                                out_n1, out_n2, out_p, out_src, cnt)
            # joint quadrant: XOR of both legs
            np_cnt = _pattern_add(patt_n, patt_c, np_cnt, d1)
            np_cnt = _pattern_add(patt_n, patt_c, np_cnt, d2)
            cnt = _emit_pattern(patt_n, patt_c, np_cnt, quad, gt_joint_id[gi],
                                out_n1, out_n2, out_p, out_src, cnt)
            tau += gt_step[gi]

    # ---- measured-kind ancilla idle slots: readout flips -------------------
    for c in range(anc_idle_gid.shape[0]):
        g = anc_idle_gid[c]
        rate = anc_idle_cnt[c] * xy
        tau = anc_idle_start[c]
        while tau <= n_rounds:
            n1 = node_id[g, tau]
            n2 = node_id[g, nextm[g, tau + 1]]
            if n1 != n2:
                if n1 > n2:
                    n1, n2 = n2, n1
                out_n1[cnt] = n1
                out_n2[cnt] = n2
                out_p[cnt] = rate
                out_src[cnt] = -1
                cnt += 1
            tau += anc_idle_step[c]

    # ---- other-kind ancilla idle slots: hooks ------------------------------
    n_hidle = hk_idle_ptr.shape[0] - 1
    for h in range(n_hidle):
        a, b = hk_idle_ptr[h], hk_idle_ptr[h + 1]
        rate = hk_idle_rate_mult[h] * xy
        tau = hk_idle_start[h]
        while tau <= n_rounds:
            np_cnt = 0
            for e in range(a, b):
                srow = hk_idle_qrow[e]
                uq = hk_idle_slot[e]
                for sl in range(2):
                    n = _detect_node(ep_kind[srow, sl], ep_g[srow, sl],
                                     ep_slot[srow, sl], tau, uq,
                                     measured_now, nextm, node_id)
                    np_cnt = _pattern_add(patt_n, patt_c, np_cnt, n)
            cnt = _emit_pattern(patt_n, patt_c, np_cnt, rate,
                                hk_idle_flip_id[h],
                                out_n1, out_n2, out_p, out_src, cnt)
            tau += hk_idle_step[h]

    # ---- prep + readout flips ----------------------------------------------
    for c in range(pm_gid.shape[0]):
        g = pm_gid[c]
        rate = 2.0 * p_comp * pm_members[c]
        tau = pm_start[c]
        while tau <= n_rounds:
            n1 = node_id[g, tau]
            n2 = node_id[g, nextm[g, tau + 1]]
            if n1 != n2:
                if n1 > n2:
                    n1, n2 = n2, n1
                out_n1[cnt] = n1
                out_n2[cnt] = n2
                out_p[cnt] = rate
                out_src[cnt] = -1
                cnt += 1
            tau += pm_step[c]
    return cnt


# ---------------------------------------------------------------------------
# Effective-code grouping (union-find + boundary redefinition)
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _find(root, x):
    while root[x] != x:
        root[x] = root[root[x]]
        x = root[x]
    return x


@njit(cache=True)
def classify_checks(disabled, star_adj, plaq_adj, star_sup, plaq_sup,
                    data_row, data_col, star_row, plaq_col, gridmax):
    """Group damaged checks and apply boundary redefinition for both types.

    Returns (star_root, star_dis, star_side, plaq_root, plaq_dis, plaq_side)
    where roots identify supercheck groups, dis flags boundary-disabled
    groups, and side gives the absorbing boundary (0 = top/left, 1 =
    bottom/right, -1 = none).
    """
    n_star = star_sup.shape[0]
    n_plaq = plaq_sup.shape[0]
    nd = disabled.shape[0]

    star_root = np.arange(n_star, dtype=np.int32)
    plaq_root = np.arange(n_plaq, dtype=np.int32)

    for q in range(nd):
        if not disabled[q]:
            continue
        a, b = star_adj[q, 0], star_adj[q, 1]
        if a >= 0 and b >= 0:
            ra, rb = _find(star_root, a), _find(star_root, b)
            if ra != rb:
                star_root[ra] = rb
        a, b = plaq_adj[q, 0], plaq_adj[q, 1]
        if a >= 0 and b >= 0:
            ra, rb = _find(plaq_root, a), _find(plaq_root, b)
            if ra != rb:
                plaq_root[ra] = rb

    star_dis = np.zeros(n_star, np.uint8)
    star_side = np.full(n_star, -1, np.int8)
    plaq_dis = np.zeros(n_plaq, np.uint8)
    plaq_side = np.full(n_plaq, -1, np.int8)

    changed = True
    while changed:
        changed = False
        # Disabled data qubit adjacent to exactly one surviving check of a
        # type disables that check's whole group; the group is absorbed into
        # the boundary the cascade started from.
        for q in range(nd):
            if not disabled[q]:
                continue
            # star type (boundaries: top row / bottom row)
            a, b = star_adj[q, 0], star_adj[q, 1]
            sa = a >= 0 and not star_dis[_find(star_root, a)]
            sb = b >= 0 and not star_dis[_find(star_root, b)]
            if sa != sb:
                live = a if sa else b
                other = b if sa else a
                rl = _find(star_root, live)
                if not star_dis[rl]:
                    if data_row[q] == 0:
                        side = np.int8(0)
                    elif data_row[q] == gridmax:
                        side = np.int8(1)
                    elif other >= 0:
                        side = star_side[_find(star_root, other)]
                    else:
                        side = np.int8(-1)
                    if side >= 0:
                        star_dis[rl] = 1
                        star_side[rl] = side
                        changed = True
            # plaquette type (boundaries: left column / right column)
            a, b = plaq_adj[q, 0], plaq_adj[q, 1]
            sa = a >= 0 and not plaq_dis[_find(plaq_root, a)]
            sb = b >= 0 and not plaq_dis[_find(plaq_root, b)]
            if sa != sb:
                live = a if sa else b
                other = b if sa else a
                rl = _find(plaq_root, live)
                if not plaq_dis[rl]:
                    if data_col[q] == 0:
                        side = np.int8(0)
                    elif data_col[q] == gridmax:
                        side = np.int8(1)
                    elif other >= 0:
                        side = plaq_side[_find(plaq_root, other)]
                    else:
                        side = np.int8(-1)
                    if side >= 0:
                        plaq_dis[rl] = 1
                        plaq_side[rl] = side
                        changed = True

        # A surviving group whose joint support is fully disabled is itself
        # disabled (absorbed into the nearer boundary of its members).
        sup_cnt = np.zeros(n_star, np.int32)
        lo = np.full(n_star, np.int32(1 << 28), np.int32)
        hi = np.full(n_star, np.int32(-1), np.int32)
        for c in range(n_star):
            rc = _find(star_root, c)
            if star_row[c] < lo[rc]:
                lo[rc] = star_row[c]
            if star_row[c] > hi[rc]:
                hi[rc] = star_row[c]
            for j in range(4):
                q = star_sup[c, j]
                if q >= 0 and not disabled[q]:
                    sup_cnt[rc] += 1
        for c in range(n_star):
            if star_root[c] == c and not star_dis[c] and sup_cnt[c] == 0:
                star_dis[c] = 1
                star_side[c] = np.int8(0) if lo[c] <= gridmax - hi[c] else np.int8(1)
                changed = True
        sup_cnt = np.zeros(n_plaq, np.int32)
        lo = np.full(n_plaq, np.int32(1 << 28), np.int32)
        hi = np.full(n_plaq, np.int32(-1), np.int32)
        for c in range(n_plaq):
            rc = _find(plaq_root, c)
            if plaq_col[c] < lo[rc]:
                lo[rc] = plaq_col[c]
            if plaq_col[c] > hi[rc]:
                hi[rc] = plaq_col[c]
            for j in range(4):
                q = plaq_sup[c, j]
                if q >= 0 and not disabled[q]:
                    sup_cnt[rc] += 1
        for c in range(n_plaq):
            if plaq_root[c] == c and not plaq_dis[c] and sup_cnt[c] == 0:
                plaq_dis[c] = 1
                plaq_side[c] = np.int8(0) if lo[c] <= gridmax - hi[c] else np.int8(1)
                changed = True

    for c in range(n_star):
        rc = _find(star_root, c)
        star_root[c] = rc
        star_dis[c] = star_dis[rc]
        star_side[c] = star_side[rc]
    for c in range(n_plaq):
        rc = _find(plaq_root, c)
        plaq_root[c] = rc
        plaq_dis[c] = plaq_dis[rc]
        plaq_side[c] = plaq_side[rc]
    return star_root, star_dis, star_side, plaq_root, plaq_dis, plaq_side


@njit(cache=True)
def spanning_path_exists(disabled, adj, root, dis, side, coord, gridmax):
    """Whether a boundary-to-boundary path exists on the supercheck-group graph.

    ``adj``/``coord`` select the check type and spanning axis: stars with data
    rows for the logical-Z path, plaquettes with data columns for logical-X.
    """
    n_check = root.shape[0]
    top = n_check
    bot = n_check + 1
    uf = np.arange(n_check + 2, dtype=np.int32)
    for q in range(disabled.shape[0]):
        if disabled[q]:
            continue
        e0 = -1
        e1 = -1
        for s in range(2):
            c = adj[q, s]
            if c < 0:
                e = top if coord[q] == 0 else bot
            elif dis[c]:
                e = top if side[c] == 0 else bot
            else:
                e = root[c]
            if s == 0:
                e0 = e
            else:
                e1 = e
        ra, rb = _find(uf, e0), _find(uf, e1)
        if ra != rb:
            uf[ra] = rb
    return _find(uf, top) == _find(uf, bot)


# ---------------------------------------------------------------------------
# Shortest paths on the spacetime detector graph
# ---------------------------------------------------------------------------


@njit(cache=True)
def dijkstra_csr(indptr, nbr, wt, srcs, dist, pred_node, pred_edge,
                 targets, n_targets, cutoff):
    """Multi-source Dijkstra (binary heap, lazy deletion).

    Stops when all flagged targets are settled or the frontier exceeds
    cutoff; unsettled nodes keep dist = inf.
    """
    V = indptr.shape[0] - 1
    for i in range(V):
        dist[i] = np.inf
        pred_node[i] = -1
        pred_edge[i] = -1
    remaining = n_targets
    heap_d = np.empty(nbr.shape[0] + V + srcs.shape[0] + 1, np.float64)
    heap_v = np.empty(nbr.shape[0] + V + srcs.shape[0] + 1, np.int64)
    size = 0
    for si in range(srcs.shape[0]):
        dist[srcs[si]] = 0.0
        heap_d[size] = 0.0
        heap_v[size] = srcs[si]
        size += 1
    done = np.zeros(V, np.uint8)
    while size > 0 and remaining > 0:
        d = heap_d[0]
        v = heap_v[0]
        size -= 1
        heap_d[0] = heap_d[size]
        heap_v[0] = heap_v[size]
        i = 0
        while True:
            l = 2 * i + 1
            if l >= size:
                break
            if l + 1 < size and heap_d[l + 1] < heap_d[l]:
                l += 1
            if heap_d[l] < heap_d[i]:
                heap_d[i], heap_d[l] = heap_d[l], heap_d[i]
                heap_v[i], heap_v[l] = heap_v[l], heap_v[i]
                i = l
            else:
                break
        if done[v] or d > dist[v]:
            continue
        if d > cutoff:
            break
        done[v] = 1
        if targets[v]:
            remaining -= 1
        for e in range(indptr[v], indptr[v + 1]):
            u = nbr[e]
            nd = d + wt[e]
            if nd < dist[u]:
                dist[u] = nd
                pred_node[u] = v
                pred_edge[u] = e
                j = size
                heap_d[j] = nd
                heap_v[j] = u
                size += 1
                while j > 0:
                    par = (j - 1) >> 1
                    if heap_d[par] > heap_d[j]:
                        heap_d[par], heap_d[j] = heap_d[j], heap_d[par]
                        heap_v[par], heap_v[j] = heap_v[j], heap_v[par]
                        j = par
                    else:
                        break
