"""Per-round gate schedules and their execution on a tableau.

A round is six timesteps: syndrome-qubit preparation, CNOTs in the fixed
north/west/east/south order, and syndrome-qubit measurement. Undamaged
checks run every round; members of a damaged star group run only on
X-parity (even) rounds and members of a damaged plaquette group only on
Z-parity (odd) rounds, so the measured set of operators always commutes.
Disabled checks and disabled data qubits get no gates and no noise; every
other enabled qubit that is not acted on in a slot idles (with idle noise).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .effective import EffectiveCode
from .geometry import DIRECTIONS, PLAQUETTE, STAR, CodeLayout, Coord
from .noise import (
    FaultSiteAudit,
    NoiseParams,
    draw_flips,
    draw_single_qubit_faults,
    draw_two_qubit_faults,
)

SLOT_NAMES = ("prep", "cnot-n", "cnot-w", "cnot-e", "cnot-s", "measure")


def round_parity(round_index: int) -> str:
    """Gauge parity of a round: star (X) gauges on even rounds."""
    return STAR if round_index % 2 == 0 else PLAQUETTE


@dataclass(frozen=True)
class ScheduledCheck:
    site: Coord
    kind: str
    ancilla: int                       # tableau index
    cnots: dict[str, int]              # direction -> data tableau index
    group_index: int


@dataclass(frozen=True, eq=False)
class RoundSchedule:
    round_index: int
    parity: str
    checks: tuple[ScheduledCheck, ...]
    # kernel-ready arrays, one entry per slot where applicable
    prep_x: np.ndarray = field(repr=False)
    prep_z: np.ndarray = field(repr=False)
    cnot_ctrl: dict[str, np.ndarray] = field(repr=False)
    cnot_tgt: dict[str, np.ndarray] = field(repr=False)
    meas_x: np.ndarray = field(repr=False)
    meas_z: np.ndarray = field(repr=False)
    meas_x_sites: tuple[Coord, ...] = field(repr=False)
    meas_z_sites: tuple[Coord, ...] = field(repr=False)
    idle: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def slots(self) -> dict[str, list]:
        """Spec-shaped view: per-slot gate instruction lists."""
        out: dict[str, list] = {}
        out["prep"] = [("prep_x", int(q)) for q in self.prep_x] + \
                      [("prep_z", int(q)) for q in self.prep_z]
        for d in DIRECTIONS:
            out[f"cnot-{d}"] = [("cnot", int(a), int(b)) for a, b in
                                zip(self.cnot_ctrl[d], self.cnot_tgt[d])]
        out["measure"] = [("meas_x", int(q)) for q in self.meas_x] + \
                         [("meas_z", int(q)) for q in self.meas_z]
        return out


class ScheduledLattice:
    """Precomputed circuit structure of one fabricated lattice.

    Holds the two alternating-round schedules, the packed gauge operators
    used by the perfect rounds, and the tableau size; one instance per
    trial (construction is pure given the effective code).
    """

    def __init__(self, effcode: EffectiveCode, layout: CodeLayout):
        self.effcode = effcode
        self.layout = layout
        self.n_qubits = layout.n_qubits
        self.words = (self.n_qubits + 63) // 64
        index = layout.qubit_index

        self.enabled_data = sorted(layout.data_qubits - effcode.disabled_data)
        self.member_checks: list[ScheduledCheck] = []
        for groups in (effcode.star_groups, effcode.plaq_groups):
            for g in groups:
                for site in g.members:
                    original = dict(layout.check_at[site].support)
                    surviving = set(g.member_support[site])
                    cnots = {d: index[q] for d, q in original.items()
                             if q in surviving}
                    self.member_checks.append(ScheduledCheck(
                        site=site, kind=g.kind, ancilla=index[site],
                        cnots=cnots, group_index=g.index))
        self.member_checks.sort(key=lambda sc: sc.site)
        self._by_site = {sc.site: sc for sc in self.member_checks}

        enabled = [index[q] for q in self.enabled_data]
        enabled += [sc.ancilla for sc in self.member_checks]
        self.enabled_qubits = np.array(sorted(enabled), np.int64)

        self._packed: dict[Coord, tuple[np.ndarray, np.ndarray, int]] = {}
        self._schedules = {STAR: self._build(0), PLAQUETTE: self._build(1)}

    def damaged(self, sc: ScheduledCheck) -> bool:
        g = self.effcode.groups(sc.kind)[sc.group_index]
        return g.damaged

    def scheduled_checks(self, parity: str) -> list[ScheduledCheck]:
        out = []
        for sc in self.member_checks:
            if not self.damaged(sc) or sc.kind == parity:
                out.append(sc)
        return out

    def _build(self, round_index: int) -> RoundSchedule:
        parity = round_parity(round_index)
        checks = tuple(self.scheduled_checks(parity))
        prep_x = np.array([sc.ancilla for sc in checks if sc.kind == STAR], np.int64)
        prep_z = np.array([sc.ancilla for sc in checks if sc.kind == PLAQUETTE],
                          np.int64)
        cnot_ctrl: dict[str, np.ndarray] = {}
        cnot_tgt: dict[str, np.ndarray] = {}
        busy: dict[str, set[int]] = {}
        for d in DIRECTIONS:
            ctrls, tgts = [], []
            for sc in checks:
                data = sc.cnots.get(d)
                if data is None:
                    continue
                if sc.kind == STAR:       # ancilla is control for X checks
                    ctrls.append(sc.ancilla)
                    tgts.append(data)
                else:                     # data is control for Z checks
                    ctrls.append(data)
                    tgts.append(sc.ancilla)
            cnot_ctrl[d] = np.array(ctrls, np.int64)
            cnot_tgt[d] = np.array(tgts, np.int64)
            busy[d] = set(ctrls) | set(tgts)

        anc_busy = {sc.ancilla for sc in checks}
        idle = []
        for slot in SLOT_NAMES:
            if slot in ("prep", "measure"):
                occupied = anc_busy
            else:
                occupied = busy[slot.split("-")[1]]
            idle.append(np.array([q for q in self.enabled_qubits
                                  if q not in occupied], np.int64))

        meas_x_sites = tuple(sc.site for sc in checks if sc.kind == STAR)
        meas_z_sites = tuple(sc.site for sc in checks if sc.kind == PLAQUETTE)
        return RoundSchedule(
            round_index=round_index, parity=parity, checks=checks,
            prep_x=prep_x, prep_z=prep_z,
            cnot_ctrl=cnot_ctrl, cnot_tgt=cnot_tgt,
            meas_x=prep_x, meas_z=prep_z,
            meas_x_sites=meas_x_sites, meas_z_sites=meas_z_sites,
            idle=tuple(idle))

    def schedule_for(self, round_index: int) -> RoundSchedule:
        base = self._schedules[round_parity(round_index)]
        if base.round_index == round_index:
            return base
        return RoundSchedule(
            round_index=round_index, parity=base.parity, checks=base.checks,
            prep_x=base.prep_x, prep_z=base.prep_z,
            cnot_ctrl=base.cnot_ctrl, cnot_tgt=base.cnot_tgt,
            meas_x=base.meas_x, meas_z=base.meas_z,
            meas_x_sites=base.meas_x_sites, meas_z_sites=base.meas_z_sites,
            idle=base.idle)

    def packed_gauge_op(self, site: Coord):
        """Packed restricted check operator for perfect projective rounds."""
        op = self._packed.get(site)
        if op is None:
            sc = self._by_site[site]
            qubits = list(sc.cnots.values())
            px = np.zeros(self.words, np.uint64)
            pz = np.zeros(self.words, np.uint64)
            target = px if sc.kind == STAR else pz
            for q in qubits:
                target[q >> 6] |= np.uint64(1) << np.uint64(q & 63)
            op = (px, pz, 0)
            self._packed[site] = op
        return op

    def packed_round_ops(self):
        """Stacked gauge operators for one perfect round, star type first."""
        if not hasattr(self, "_packed_round"):
            order = [sc.site for sc in self.member_checks if sc.kind == STAR]
            order += [sc.site for sc in self.member_checks
                      if sc.kind == PLAQUETTE]
            k = len(order)
            pxs = np.zeros((k, self.words), np.uint64)
            pzs = np.zeros((k, self.words), np.uint64)
            yps = np.zeros(k, np.int64)
            for i, site in enumerate(order):
                px, pz, yp = self.packed_gauge_op(site)
                pxs[i] = px
                pzs[i] = pz
                yps[i] = yp
            self._packed_round = (tuple(order), pxs, pzs, yps)
        return self._packed_round


@lru_cache(maxsize=8)
def _lattice_cache(effcode: EffectiveCode, layout: CodeLayout) -> ScheduledLattice:
    return ScheduledLattice(effcode, layout)


def build_schedule(effcode: EffectiveCode, layout: CodeLayout,
                   round_index: int) -> RoundSchedule:
    """Gate schedule for one round of syndrome extraction."""
    return _lattice_cache(effcode, layout).schedule_for(round_index)


def run_round(t, sched: RoundSchedule, noise: NoiseParams, rng,
              audit: FaultSiteAudit | None = None) -> dict[Coord, int]:
    """Execute one noisy round; returns measured value per scheduled check site.

    Timestep order: preparation (+prep flips), four CNOT slots (+two-qubit
    depolarizing), measurement (+readout flips); idle depolarizing on every
    enabled qubit not acted on in a slot.
    """
    p = noise.p_comp

    def idle_noise(slot: int):
        qs = sched.idle[slot]
        if audit is not None:
            audit.idles += len(qs)
        if p > 0.0 and len(qs):
            codes = draw_single_qubit_faults(p, len(qs), rng)
            if codes.any():
                t.apply_paulis(qs, codes)

    # -- preparation -------------------------------------------------------
    t.reset_many(sched.prep_x, "X", rng)
    t.reset_many(sched.prep_z, "Z", rng)
    if audit is not None:
        audit.preparations += len(sched.prep_x) + len(sched.prep_z)
    if p > 0.0:
        flips = draw_flips(p, len(sched.prep_x), rng)
        if flips.any():   # |+> prepared orthogonal: Z flip
            t.apply_paulis(sched.prep_x[flips], np.full(int(flips.sum()), 3, np.uint8))
        flips = draw_flips(p, len(sched.prep_z), rng)
        if flips.any():   # |0> prepared orthogonal: X flip
            t.apply_paulis(sched.prep_z[flips], np.full(int(flips.sum()), 1, np.uint8))
    idle_noise(0)

    # -- CNOT slots ----------------------------------------------------------
    for si, d in enumerate(DIRECTIONS, start=1):
        ctrls, tgts = sched.cnot_ctrl[d], sched.cnot_tgt[d]
        t.apply_cnots(ctrls, tgts)
        if audit is not None:
            audit.two_qubit_gates += len(ctrls)
        if p > 0.0 and len(ctrls):
            codes = draw_two_qubit_faults(p, len(ctrls), rng)
            if codes.any():
                both = np.concatenate([ctrls, tgts])
                t.apply_paulis(both, np.concatenate([codes[:, 0], codes[:, 1]]))
        idle_noise(si)

    # -- measurement ---------------------------------------------------------
    bits_x = t.measure_many(sched.meas_x, "X", rng)
    bits_z = t.measure_many(sched.meas_z, "Z", rng)
    if audit is not None:
        audit.measurements += len(bits_x) + len(bits_z)
    if p > 0.0:
        bits_x = bits_x ^ draw_flips(p, len(bits_x), rng)
        bits_z = bits_z ^ draw_flips(p, len(bits_z), rng)
    idle_noise(5)

    outcomes: dict[Coord, int] = {}
    for site, bit in zip(sched.meas_x_sites, bits_x):
        outcomes[site] = -1 if bit else +1
    for site, bit in zip(sched.meas_z_sites, bits_z):
        outcomes[site] = -1 if bit else +1
    return outcomes


def run_perfect_round(t, lattice: ScheduledLattice, rng) -> dict[Coord, int]:
    """Project every gauge constituent of both types, star type first.

    Only group products of these raw outcomes are ever compared across
    rounds, so the internal measurement order cannot randomize anything
    that is used downstream.
    """
    order, pxs, pzs, yps = lattice.packed_round_ops()
    bits = t.measure_packed_many(pxs, pzs, yps, rng)
    return {site: (-1 if bit else +1) for site, bit in zip(order, bits)}
