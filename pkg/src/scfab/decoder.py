"""MWPM decoding: weighted matching graph, exact matching, correction, test.

Defects are matched on a graph whose pairwise weights are shortest-path
costs through a spacetime detector graph. The detector graph's elementary
edges are derived by exact first-order fault propagation: every fault
location of the circuit noise model (idle depolarizing per timestep,
two-qubit depolarizing after each CNOT, ancilla hook faults propagated
through the remaining CNOT order, preparation and readout flips) maps to
the pair of detection events it would create, and probabilities accumulate
per pair. Edge costs are -ln(p_e/(1-p_e)); ``unit_weights`` replaces every
elementary cost with 1. Each elementary edge carries the set of data
qubits whose X flips realize it, so matched paths project onto
corrections.

Boundary matching uses the standard doubling: defect i may match its own
boundary copy at the cost of its cheapest path to either boundary, and
boundary copies pair among themselves at zero cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .effective import EffectiveCode, layout_arrays
from .geometry import DIRECTIONS, PLAQUETTE, STAR, Coord
from .matching import _SCALE as _MATCH_SCALE
from .matching import max_weight_matching
from .noise import NoiseParams
from .syndrome import DefectSet, measured_rounds

_P_FLOOR = 1e-15
_P_CEIL = 0.5 - 1e-9

_SLOT_OF_DIR = {d: i + 1 for i, d in enumerate(DIRECTIONS)}
_MEAS_SLOT = 5


class DecoderConsistencyError(RuntimeError):
    """The correction failed to restore the code space."""


@dataclass(frozen=True)
class Correction:
    """X corrections on the decoded lattice."""

    data_flips: frozenset[Coord]


@dataclass(eq=False)
class MatchingGraph:
    """Defect matching problem plus the path data to turn pairs into flips.

    Matching node ids: 0..D-1 are defects, D..2D-1 their boundary copies.
    Defect-defect edges (pair_i, pair_j, pair_w) are kept only when cheaper
    than two boundary connections, which preserves at least one optimal
    perfect matching; ``edges`` materializes the full boundary-doubled
    graph (boundary edges plus the zero-weight copy clique) on demand.
    """

    kind: str
    effcode: EffectiveCode
    defects: tuple[tuple[int, int], ...]
    pair_i: np.ndarray
    pair_j: np.ndarray
    pair_w: np.ndarray
    unit_weights: bool
    node_of: dict[tuple[int, int], int]
    boundary_weight: np.ndarray
    boundary_pred_node: np.ndarray
    boundary_pred_edge: np.ndarray
    dist: np.ndarray
    pred_node: np.ndarray
    pred_edge: np.ndarray
    edge_flips: tuple[tuple[Coord, ...], ...]   # per directed CSR edge
    detector_edge_p: np.ndarray                 # aggregate p_e per edge
    detector_edge_nodes: np.ndarray             # (m, 2) endpoints per edge

    @property
    def n_defects(self) -> int:
        return len(self.defects)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        D = self.n_defects
        out = [(i, D + i, float(self.boundary_weight[i])) for i in range(D)]
        out += [(int(a), int(b), float(w)) for a, b, w in
                zip(self.pair_i, self.pair_j, self.pair_w)]
        out += [(D + i, D + j, 0.0) for i in range(D)
                for j in range(i + 1, D)]
        return out


def _edge_weight(p_e: float, unit_weights: bool) -> float:
    if unit_weights:
        return 1.0
    p = min(max(p_e, _P_FLOOR), _P_CEIL)
    return -math.log(p / (1.0 - p))


def build_matching_graph(defects: DefectSet, effcode: EffectiveCode,
                         noise: NoiseParams,
                         unit_weights: bool = False) -> MatchingGraph:
    """Weighted matching graph over the defects of one lattice type."""
    kind = defects.kind
    layout = effcode.layout
    arr = layout_arrays(layout)
    p = noise.p_comp
    n_rounds = defects.n_rounds
    groups = effcode.groups(kind)
    n_groups = len(groups)

    # ---- detector nodes ---------------------------------------------------
    node_of: dict[tuple[int, int], int] = {}
    node_id = np.full((max(n_groups, 1), n_rounds + 2), -1, np.int64)
    measured_now = np.zeros((max(n_groups, 1), n_rounds + 2), np.uint8)
    nextm = np.zeros((max(n_groups, 1), n_rounds + 3), np.int64)
    for gid in sorted(defects.meas_times):
        tarr = [t for t in defects.meas_times[gid] if t >= 1]
        for t in tarr:
            node_of[(gid, t)] = len(node_of)
            node_id[gid, t] = node_of[(gid, t)]
            measured_now[gid, t] = 1
        ti = 0
        for tau in range(n_rounds + 3):
            while ti < len(tarr) and tarr[ti] < tau:
                ti += 1
            nextm[gid, tau] = tarr[ti] if ti < len(tarr) else tarr[-1]
    v_near = len(node_of)          # left (X decode) / top (Z decode)
    v_far = v_near + 1
    n_nodes = v_far + 1

    # ---- per-qubit endpoints on the decoded lattice ------------------------
    # each functioning qubit has two slots: a member check (group, cnot slot)
    # or a boundary node
    adj = arr.star_adj if kind == STAR else arr.plaq_adj
    coord = arr.data_row if kind == STAR else arr.data_col
    sites = arr.star_sites if kind == STAR else arr.plaq_sites
    side_of = effcode.disabled_checks
    near_names = ("top",) if kind == STAR else ("left",)

    member_slot: dict[tuple[Coord, Coord], int] = {}
    for g in groups:
        for site in g.members:
            dirs = dict(layout.check_at[site].support)
            for d, q in dirs.items():
                if q in g.member_support.get(site, ()):
                    member_slot[(site, q)] = _SLOT_OF_DIR[d]

    functioning = [qi for qi in range(len(arr.data_sites))
                   if arr.data_sites[qi] not in effcode.disabled_data]
    row_of = {qi: row for row, qi in enumerate(functioning)}
    nf = len(functioning)
    ep_kind = np.zeros((nf, 2), np.int64)
    ep_g = np.zeros((nf, 2), np.int64)
    ep_slot = np.zeros((nf, 2), np.int64)
    fq_idx = np.array(functioning, np.int64)
    for row, qi in enumerate(functioning):
        q = arr.data_sites[qi]
        for s in range(2):
            c = adj[qi, s]
            if c < 0:
                ep_kind[row, s] = 1
                ep_g[row, s] = v_near if coord[qi] == 0 else v_far
                ep_slot[row, s] = 6
                continue
            site = sites[c]
            if site in side_of:
                ep_kind[row, s] = 1
                ep_g[row, s] = v_near if side_of[site] in near_names else v_far
                ep_slot[row, s] = 6
            else:
                ep_kind[row, s] = 0
                ep_g[row, s] = effcode.group_of[site]
                ep_slot[row, s] = member_slot[(site, q)]

    # ---- schedule cadence per group: (first noisy round, stride) -----------
    other = STAR if kind == PLAQUETTE else PLAQUETTE

    def cadence(g):
        rounds_g = measured_rounds(g, n_rounds)
        if not rounds_g:
            return None
        step = 1 if len(rounds_g) < 2 else rounds_g[1] - rounds_g[0]
        return rounds_g[0], step

    # member checks of both kinds touching each functioning qubit, with the
    # CNOT slot and cadence (for parity-aware idle accounting)
    touching: dict[int, list[tuple[int, int, int]]] = {row: []
                                                       for row in range(nf)}
    gates = []          # (row, slot, is_hook, gid, member_site, start, step)
    for gkind in (kind, other):
        for g in effcode.groups(gkind):
            cad = cadence(g)
            if cad is None:
                continue
            start, step = cad
            for site in g.members:
                dirs = dict(layout.check_at[site].support)
                for d, q in dirs.items():
                    if q not in g.member_support.get(site, ()):
                        continue
                    row = row_of[arr.data_idx[q]]
                    slot = _SLOT_OF_DIR[d]
                    touching[row].append((slot, start, step))
                    gates.append((row, slot, gkind == other,
                                  g.index if gkind == kind else -1,
                                  site, start, step))

    # ---- data idle slots (parity aware) --------------------------------------
    di_row: list[int] = []
    di_slot: list[int] = []
    di_start: list[int] = []
    di_step: list[int] = []
    for row in range(nf):
        occ_even = {s for s, start, step in touching[row]
                    if step == 1 or start % 2 == 0}
        occ_odd = {s for s, start, step in touching[row]
                   if step == 1 or start % 2 == 1}
        for s in range(6):
            idle_even = s not in occ_even
            idle_odd = s not in occ_odd
            if idle_even and idle_odd:
                di_row.append(row)
                di_slot.append(s)
                di_start.append(1)
                di_step.append(1)
            elif idle_even:
                di_row.append(row)
                di_slot.append(s)
                di_start.append(2)
                di_step.append(2)
            elif idle_odd:
                di_row.append(row)
                di_slot.append(s)
                di_start.append(1)
                di_step.append(2)

    # ---- per-gate tables (three fault quadrants each) ------------------------
    n_src_base = len(arr.data_sites)
    hook_flips: list[tuple[Coord, ...]] = []

    def register_hook(flips: tuple[Coord, ...]) -> int:
        hook_flips.append(flips)
        return n_src_base + len(hook_flips) - 1

    suffix_of: dict[tuple[Coord, Coord], list[tuple[int, Coord]]] = {}
    targets_of: dict[Coord, list[tuple[int, Coord]]] = {}
    for g in effcode.groups(other):
        for site in g.members:
            dirs = dict(layout.check_at[site].support)
            targets_of[site] = sorted(
                (_SLOT_OF_DIR[d], q) for d, q in dirs.items()
                if q in g.member_support.get(site, ()))

    gt_row: list[int] = []
    gt_slot: list[int] = []
    gt_is_star: list[int] = []
    gt_gid: list[int] = []
    gt_suffix_ptr = [0]
    gt_suffix_slot: list[int] = []
    gt_suffix_qrow: list[int] = []
    gt_start: list[int] = []
    gt_step: list[int] = []
    gt_flip_id: list[int] = []
    gt_joint_id: list[int] = []
    for row, slot, is_hook, gid, site, start, step in gates:
        q = arr.data_sites[fq_idx[row]]
        gt_row.append(row)
        gt_slot.append(slot)
        gt_is_star.append(1 if is_hook else 0)
        gt_gid.append(gid)
        gt_start.append(start)
        gt_step.append(step)
        if is_hook:
            suffix = [(u, tq) for u, tq in targets_of[site] if u > slot]
            for u, tq in suffix:
                gt_suffix_slot.append(u)
                gt_suffix_qrow.append(row_of[arr.data_idx[tq]])
            sflips = tuple(tq for _, tq in suffix)
            gt_flip_id.append(register_hook(sflips) if sflips else -1)
            gt_joint_id.append(register_hook(tuple(sorted(sflips + (q,)))))
        else:
            gt_flip_id.append(-1)
            gt_joint_id.append(fq_idx[row])
        gt_suffix_ptr.append(len(gt_suffix_slot))

    # ---- decoded-kind ancilla idle slots --------------------------------------
    anc_idle_gid: list[int] = []
    anc_idle_start: list[int] = []
    anc_idle_step: list[int] = []
    anc_idle_cnt: list[int] = []
    pm_gid: list[int] = []
    pm_start: list[int] = []
    pm_step: list[int] = []
    pm_members: list[int] = []
    for g in groups:
        if g.index not in defects.meas_times or not g.members:
            continue
        cad = cadence(g)
        if cad is None:
            continue
        start, step = cad
        pm_gid.append(g.index)
        pm_start.append(start)
        pm_step.append(step)
        pm_members.append(len(g.members))
        idle_total = sum(4 - len(g.member_support[m]) for m in g.members)
        if idle_total:
            anc_idle_gid.append(g.index)
            anc_idle_start.append(start)
            anc_idle_step.append(step)
            anc_idle_cnt.append(idle_total)

    # ---- other-kind ancilla idle slots (hooks) ---------------------------------
    hk_idle_ptr = [0]
    hk_idle_slot: list[int] = []
    hk_idle_qrow: list[int] = []
    hk_idle_start: list[int] = []
    hk_idle_step: list[int] = []
    hk_idle_mult: list[int] = []
    hk_idle_flip: list[int] = []
    for g in effcode.groups(other):
        cad = cadence(g)
        if cad is None:
            continue
        start, step = cad
        for site in g.members:
            targets = targets_of[site]
            if not targets:
                continue
            prev = [0] + [u for u, _ in targets[:-1]]
            for k in range(len(targets)):
                # idle slots strictly between the previous CNOT (or prep)
                # and CNOT k; an X there propagates into targets k..end
                mult = targets[k][0] - prev[k] - 1
                if mult <= 0:
                    continue
                suffix = targets[k:]
                for u, tq in suffix:
                    hk_idle_slot.append(u)
                    hk_idle_qrow.append(row_of[arr.data_idx[tq]])
                hk_idle_start.append(start)
                hk_idle_step.append(step)
                hk_idle_mult.append(mult)
                hk_idle_flip.append(
                    register_hook(tuple(tq for _, tq in suffix)))
                hk_idle_ptr.append(len(hk_idle_slot))

    # ---- enumerate mechanisms ----------------------------------------------------
    per_round = (n_rounds + 1)
    cap = (len(di_row) + 3 * len(gt_row) + len(anc_idle_gid)
           + len(hk_idle_mult) + len(pm_gid)) * per_round + 64
    out_n1 = np.empty(cap, np.int64)
    out_n2 = np.empty(cap, np.int64)
    out_p = np.empty(cap, np.float64)
    out_src = np.empty(cap, np.int64)

    cnt = _k.emit_mechanisms(
        n_rounds, p,
        ep_kind, ep_g, ep_slot, fq_idx,
        np.array(di_row, np.int64), np.array(di_slot, np.int64),
        np.array(di_start, np.int64), np.array(di_step, np.int64),
        np.array(gt_row, np.int64), np.array(gt_slot, np.int64),
        np.array(gt_is_star, np.int64), np.array(gt_gid, np.int64),
        np.array(gt_suffix_ptr, np.int64),
        np.array(gt_suffix_slot, np.int64),
        np.array(gt_suffix_qrow, np.int64),
        np.array(gt_start, np.int64), np.array(gt_step, np.int64),
        np.array(gt_flip_id, np.int64), np.array(gt_joint_id, np.int64),
        np.array(anc_idle_gid, np.int64), np.array(anc_idle_start, np.int64),
        np.array(anc_idle_step, np.int64), np.array(anc_idle_cnt, np.int64),
        np.array(hk_idle_ptr, np.int64), np.array(hk_idle_slot, np.int64),
        np.array(hk_idle_qrow, np.int64), np.array(hk_idle_start, np.int64),
        np.array(hk_idle_step, np.int64), np.array(hk_idle_mult, np.int64),
        np.array(hk_idle_flip, np.int64),
        np.array(pm_gid, np.int64), np.array(pm_start, np.int64),
        np.array(pm_step, np.int64), np.array(pm_members, np.int64),
        measured_now, nextm, node_id,
        out_n1, out_n2, out_p, out_src)

    n1 = out_n1[:cnt]
    n2 = out_n2[:cnt]
    probs = out_p[:cnt]
    srcs = out_src[:cnt]

    # ---- aggregate emissions into edges ---------------------------------------
    ekey = n1 * n_nodes + n2
    uniq, inverse = np.unique(ekey, return_inverse=True)
    p_e = np.bincount(inverse, weights=probs, minlength=len(uniq))
    # representative flips: fewest qubits wins (chains: none, data: one)
    prio = np.where(srcs < 0, 0, np.where(srcs < n_src_base, 1, 2))
    order = np.lexsort((prio, ekey))
    sorted_keys = ekey[order]
    first = np.searchsorted(sorted_keys, uniq, side="left")
    rep_src = srcs[order][first]

    def src_flips(code: int) -> tuple[Coord, ...]:
        if code < 0:
            return ()
        if code < n_src_base:
            return (arr.data_sites[code],)
        return hook_flips[code - n_src_base]

    # ---- CSR detector graph ----------------------------------------------------
    ea = (uniq // n_nodes).astype(np.int64)
    eb = (uniq % n_nodes).astype(np.int64)
    if unit_weights:
        ew = np.ones(len(uniq), np.float64)
    else:
        pc = np.clip(p_e, _P_FLOOR, _P_CEIL)
        ew = -np.log(pc / (1.0 - pc))
    m2 = 2 * len(uniq)
    deg = np.bincount(np.concatenate([ea, eb]) + 1, minlength=n_nodes + 1)
    indptr = np.cumsum(deg)
    nbr = np.empty(m2, np.int64)
    wt = np.empty(m2, np.float64)
    eflips: list[tuple[Coord, ...]] = [()] * m2
    fill = indptr[:-1].copy()
    for idx in range(len(uniq)):
        a, b, w = int(ea[idx]), int(eb[idx]), float(ew[idx])
        fl = src_flips(int(rep_src[idx]))
        nbr[fill[a]] = b
        wt[fill[a]] = w
        eflips[fill[a]] = fl
        fill[a] += 1
        nbr[fill[b]] = a
        wt[fill[b]] = w
        eflips[fill[b]] = fl
        fill[b] += 1

    # ---- shortest-path trees ------------------------------------------------
    # one multi-source run from both boundaries gives every defect's cheapest
    # boundary connection; per-defect runs are cut off at the pruning radius
    D = len(defects.defects)
    defect_nodes = np.array([node_of[d] for d in defects.defects], np.int64)
    targets = np.zeros(n_nodes, np.uint8)
    targets[defect_nodes] = 1
    n_targets = int(targets.sum())

    bdist = np.empty(n_nodes, np.float64)
    bpred_node = np.empty(n_nodes, np.int32)
    bpred_edge = np.empty(n_nodes, np.int32)
    _k.dijkstra_csr(indptr, nbr, wt, np.array([v_near, v_far], np.int64),
                    bdist, bpred_node, bpred_edge, targets, n_targets, np.inf)
    wb = bdist[defect_nodes]
    if D and not np.all(np.isfinite(wb)):
        bad = defects.defects[int(np.argmax(~np.isfinite(wb)))]
        raise DecoderConsistencyError(f"defect {bad} cannot reach a boundary")
    wb_max = float(wb.max()) if D else 0.0

    dist = np.empty((D, n_nodes), np.float64)
    pred_node = np.empty((D, n_nodes), np.int32)
    pred_edge = np.empty((D, n_nodes), np.int32)
    for i in range(D):
        _k.dijkstra_csr(indptr, nbr, wt, defect_nodes[i:i + 1], dist[i],
                        pred_node[i], pred_edge[i], targets, n_targets,
                        float(wb[i]) + wb_max)

    # ---- matching graph -------------------------------------------------------
    pi_list: list[np.ndarray] = []
    pj_list: list[np.ndarray] = []
    pw_list: list[np.ndarray] = []
    for i in range(D):
        dv = dist[i, defect_nodes]
        keep = np.flatnonzero(np.isfinite(dv) & (dv < wb[i] + wb))
        keep = keep[keep > i]
        if keep.size:
            pi_list.append(np.full(keep.size, i, np.int64))
            pj_list.append(keep.astype(np.int64))
            pw_list.append(dv[keep])
    pair_i = np.concatenate(pi_list) if pi_list else np.zeros(0, np.int64)
    pair_j = np.concatenate(pj_list) if pj_list else np.zeros(0, np.int64)
    pair_w = np.concatenate(pw_list) if pw_list else np.zeros(0, np.float64)

    return MatchingGraph(
        kind=kind, effcode=effcode, defects=defects.defects,
        pair_i=pair_i, pair_j=pair_j, pair_w=pair_w,
        unit_weights=unit_weights, node_of=node_of,
        boundary_weight=wb, boundary_pred_node=bpred_node,
        boundary_pred_edge=bpred_edge, dist=dist,
        pred_node=pred_node, pred_edge=pred_edge, edge_flips=tuple(eflips),
        detector_edge_p=p_e, detector_edge_nodes=np.stack([ea, eb], axis=1))


def mwpm(graph: MatchingGraph) -> list[tuple[int, int]]:
    """Exact minimum-weight perfect matching over defects + boundary copies.

    Solved via the standard reduction: a perfect matching of the doubled
    graph costs sum(w_boundary) minus the gain of every defect pair matched
    directly, so a maximum-weight matching over defect-defect edges with
    gain w_b(i) + w_b(j) - w(i, j) gives the same optimum without the
    zero-weight copy clique.
    """
    D = graph.n_defects
    if D == 0:
        return []
    wb = graph.boundary_weight
    gains = wb[graph.pair_i] + wb[graph.pair_j] - graph.pair_w
    keep = np.flatnonzero(gains > 0)
    gi = np.round(gains[keep] * _MATCH_SCALE).astype(np.int64)
    gain_edges = list(zip(graph.pair_i[keep].tolist(),
                          graph.pair_j[keep].tolist(), gi.tolist()))
    mate = max_weight_matching(D, gain_edges, maxcardinality=False)
    pairing: list[tuple[int, int]] = []
    spare_copies = []
    for v in range(D):
        if mate[v] == -1:
            pairing.append((v, D + v))
        elif v < mate[v]:
            pairing.append((v, int(mate[v])))
            spare_copies.extend((D + v, D + int(mate[v])))
    for a, b in zip(spare_copies[::2], spare_copies[1::2]):
        pairing.append((a, b))
    return pairing


def _walk_tree(pred_node: np.ndarray, pred_edge: np.ndarray,
               edge_flips, target_node: int, flips: set[Coord]) -> None:
    node = target_node
    while True:
        pe = pred_edge[node]
        if pe < 0:
            break
        for q in edge_flips[pe]:
            if q in flips:
                flips.discard(q)
            else:
                flips.add(q)
        node = pred_node[node]


def pairing_to_correction(pairing: list[tuple[int, int]],
                          graph: MatchingGraph) -> Correction:
    """Project each matched pair's shortest path onto data-qubit flips.

    Timelike segments contribute nothing; boundary-copy pairs are virtual.
    """
    D = graph.n_defects
    flips: set[Coord] = set()
    node_ids = [graph.node_of[d] for d in graph.defects]
    for a, b in pairing:
        if a > b:
            a, b = b, a
        if a >= D:
            continue
        if b == a + D:
            # boundary tree is rooted at the boundary: walk from the defect
            _walk_tree(graph.boundary_pred_node, graph.boundary_pred_edge,
                       graph.edge_flips, node_ids[a], flips)
        elif b < D:
            _walk_tree(graph.pred_node[a], graph.pred_edge[a],
                       graph.edge_flips, node_ids[b], flips)
        else:
            raise ValueError(f"invalid pairing ({a}, {b})")
    return Correction(frozenset(flips))


def logical_failure(error_plus_correction, effcode: EffectiveCode) -> bool:
    """Whether the combined flip string acts as a logical X.

    Requires the code space to be restored (even overlap with every
    decoded-type group operator); the logical test is odd overlap with the
    gauge-commuting logical-Z representative.
    """
    flips = frozenset(error_plus_correction)
    bad = flips - effcode.layout.data_qubits
    if bad:
        raise ValueError(f"flips contain non-data sites: {sorted(bad)[:3]}")
    for g in effcode.plaq_groups:
        if len(flips & g.support) % 2:
            raise DecoderConsistencyError(
                f"plaquette group {g.index} not restored")
    zbar = effcode.bare_logical_z
    if zbar is None:
        raise ValueError("effective code has no logical Z (percolated)")
    return len(flips & frozenset(zbar)) % 2 == 1
