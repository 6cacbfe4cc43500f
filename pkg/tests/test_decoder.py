import math

import numpy as np
import pytest

from scfab.decoder import (
    DecoderConsistencyError,
    build_matching_graph,
    logical_failure,
    mwpm,
    pairing_to_correction,
)
from scfab.effective import build_effective_code, map_to_disabled, sample_fabrication
from scfab.geometry import build_layout
from scfab.noise import NoiseParams
from scfab.schedule import ScheduledLattice, run_perfect_round, run_round
from scfab.syndrome import SyndromeHistory, detection_events
from scfab.tableau import Tableau

LAY3 = build_layout(3)
LAY5 = build_layout(5)
NOISE = NoiseParams(0.004)


def _simulate(layout, eff, n_rounds, seed, noise=NoiseParams(0.0), inject=None):
    lat = ScheduledLattice(eff, layout)
    t = Tableau(layout.n_qubits)
    rng = np.random.default_rng(seed)
    ref = run_perfect_round(t, lat, rng)
    rounds = []
    for k in range(1, n_rounds + 1):
        if inject:
            inject(t, k, rng)
        out = run_round(t, lat.schedule_for(k), noise, rng)
        rounds.append((k, out))
    fin = run_perfect_round(t, lat, rng)
    return t, SyndromeHistory(ref, rounds, fin)


def _decode(defects, eff, noise=NOISE, unit_weights=False):
    graph = build_matching_graph(defects, eff, noise, unit_weights)
    pairing = mwpm(graph)
    return graph, pairing, pairing_to_correction(pairing, graph)


def test_no_defects_empty_everything():
    eff = build_effective_code(LAY3, set())
    _, hist = _simulate(LAY3, eff, 4, seed=0)
    ds = detection_events(hist, eff)
    graph, pairing, corr = _decode(ds, eff)
    assert pairing == []
    assert corr.data_flips == frozenset()


def test_single_data_error_corrected_same_qubit_class():
    eff = build_effective_code(LAY3, set())

    def inject(t, k, rng):
        if k == 3:
            t.apply_paulis(np.array([LAY3.qubit_index[(2, 2)]], np.int64),
                           np.array([1], np.uint8))

    t, hist = _simulate(LAY3, eff, 5, seed=1, inject=inject)
    ds = detection_events(hist, eff)
    assert len(ds.defects) == 2
    graph, pairing, corr = _decode(ds, eff)
    combined = corr.data_flips ^ {(2, 2)}
    assert logical_failure(combined, eff) is False


def test_single_measurement_chain_matched_timelike():
    # two defects on the same group at consecutive times: pure timelike
    eff = build_effective_code(LAY3, set())
    _, hist = _simulate(LAY3, eff, 6, seed=2)
    site = (2, 1)
    gid = eff.group_of[site]
    by_round = dict(hist.rounds)
    by_round[3] = dict(by_round[3])
    by_round[3][site] = -by_round[3][site]
    hist = SyndromeHistory(hist.reference,
                           sorted(by_round.items()), hist.final)
    ds = detection_events(hist, eff)
    assert ds.defects == ((gid, 3), (gid, 4))
    graph, pairing, corr = _decode(ds, eff)
    assert pairing[0] == (0, 1)
    assert corr.data_flips == frozenset()  # timelike path: no flips


def test_boundary_matching_single_defect_pair_near_edge():
    eff = build_effective_code(LAY3, set())

    def inject(t, k, rng):
        if k == 2:  # X on the left-edge qubit (2,0): only plaquette (2,1) sees it
            t.apply_paulis(np.array([LAY3.qubit_index[(2, 0)]], np.int64),
                           np.array([1], np.uint8))

    t, hist = _simulate(LAY3, eff, 4, seed=3, inject=inject)
    ds = detection_events(hist, eff)
    gid = eff.group_of[(2, 1)]
    assert {d[0] for d in ds.defects} == {gid}
    graph, pairing, corr = _decode(ds, eff)
    combined = corr.data_flips ^ {(2, 0)}
    assert logical_failure(combined, eff) is False


def test_correction_avoids_disabled_qubits():
    rng = np.random.default_rng(4)
    checked = 0
    for _ in range(25):
        spec = sample_fabrication(LAY5, 0.04, 0.04, rng)
        eff = build_effective_code(LAY5, map_to_disabled(LAY5, spec))
        if eff.percolated:
            continue
        checked += 1
        t, hist = _simulate(LAY5, eff, 10, seed=int(rng.integers(1 << 30)),
                            noise=NoiseParams(0.006))
        ds = detection_events(hist, eff)
        graph, pairing, corr = _decode(ds, eff, NoiseParams(0.006))
        assert not (corr.data_flips & eff.disabled_data)
        # matched pairing covers every defect exactly once
        D = len(ds.defects)
        seen = sorted(q for pair in pairing for q in pair)
        assert seen == list(range(2 * D))
    assert checked >= 10


def test_matching_graph_boundary_doubling_shape():
    eff = build_effective_code(LAY3, set())

    def inject(t, k, rng):
        if k == 2:
            t.apply_paulis(np.array([LAY3.qubit_index[(2, 2)]], np.int64),
                           np.array([1], np.uint8))

    _, hist = _simulate(LAY3, eff, 4, seed=5, inject=inject)
    ds = detection_events(hist, eff)
    graph = build_matching_graph(ds, eff, NOISE)
    D = graph.n_defects
    assert D == 2
    edges = graph.edges
    assert (0, D + 0, pytest.approx(float(graph.boundary_weight[0]))) in edges
    zero_edges = [(a, b) for a, b, w in edges if a >= D and b >= D]
    assert zero_edges == [(D, D + 1)]
    # the two defects share one cheap spacelike edge
    pair_edges = [(a, b, w) for a, b, w in edges if a < D and b < D]
    assert len(pair_edges) == 1


def test_unit_weights_mode():
    eff = build_effective_code(LAY3, set())

    def inject(t, k, rng):
        if k == 2:
            t.apply_paulis(np.array([LAY3.qubit_index[(2, 2)]], np.int64),
                           np.array([1], np.uint8))

    _, hist = _simulate(LAY3, eff, 4, seed=6, inject=inject)
    ds = detection_events(hist, eff)
    graph = build_matching_graph(ds, eff, NOISE, unit_weights=True)
    pair_w = [w for a, b, w in graph.edges
              if a < graph.n_defects and b < graph.n_defects]
    assert pair_w == [1.0]


def test_edge_probabilities_calibrated_against_simulation():
    """First-order consistency between the noise model and the edge weights.

    Every detector-graph edge flips its two endpoints, so the expected
    defect count per trial is about 2 * sum(p_e) minus the boundary-edge
    halves (boundary nodes are not detectors).
    """
    layout = build_layout(3)
    eff = build_effective_code(layout, set())
    lat = ScheduledLattice(eff, layout)
    # small p so that second-order effects (parity cancellation on a node,
    # both legs of one two-qubit fault firing at once) stay at the percent
    # level and the first-order edge probabilities are the whole story
    noise = NoiseParams(0.001)
    n_rounds = 6
    trials = 6000
    total = 0
    ds_last = None
    for i in range(trials):
        rng = np.random.default_rng((17, i))
        t = Tableau(layout.n_qubits)
        ref = run_perfect_round(t, lat, rng)
        rounds = [(k, run_round(t, lat.schedule_for(k), noise, rng))
                  for k in range(1, n_rounds + 1)]
        fin = run_perfect_round(t, lat, rng)
        ds_last = detection_events(SyndromeHistory(ref, rounds, fin), eff)
        total += len(ds_last.defects)
    graph = build_matching_graph(ds_last, eff, noise)
    n_detectors = len(graph.node_of)
    mult = (graph.detector_edge_nodes < n_detectors).sum(axis=1)
    expected = float((graph.detector_edge_p * mult).sum())
    got = total / trials
    assert got == pytest.approx(expected, rel=0.10), (got, expected)


def test_redefined_boundary_edge_is_one_spacelike_unit():
    # disabled (2,0) kills plaquette (2,1) (absorbed left); the group of
    # (2,3) then reaches the boundary through one functioning qubit
    eff = build_effective_code(LAY3, {(2, 0)})

    def inject(t, k, rng):
        if k == 2:
            t.apply_paulis(np.array([LAY3.qubit_index[(2, 2)]], np.int64),
                           np.array([1], np.uint8))

    _, hist = _simulate(LAY3, eff, 4, seed=8, inject=inject)
    ds = detection_events(hist, eff)
    gid = eff.group_of[(2, 3)]
    assert {d[0] for d in ds.defects} == {gid}
    graph = build_matching_graph(ds, eff, NOISE, unit_weights=True)
    assert np.all(graph.boundary_weight == 1.0)
    # and the resulting correction heals the error
    pairing = mwpm(graph)
    corr = pairing_to_correction(pairing, graph)
    assert logical_failure(corr.data_flips ^ {(2, 2)}, eff) is False


def test_logical_error_rate_monotone_in_p_comp():
    # fixed fabrication instance; rate non-decreasing in p_comp (3 sigma)
    from scfab.experiments import TrialConfig, run_trial

    disabled_spec = sample_fabrication(LAY5, 0.03, 0.03,
                                       np.random.default_rng(123))
    rates = []
    n = 700
    for p in (0.003, 0.012):
        cfg = TrialConfig(L=5, p_comp=p, seed=77, trials=n,
                          fabrication=disabled_spec)
        errs = sum(bool(run_trial(cfg, i).logical_error) for i in range(n))
        rates.append(errs / n)
    se = math.sqrt(sum(r * (1 - r) for r in rates) / n + 1e-12)
    assert rates[1] >= rates[0] - 3 * se, rates


def test_logical_failure_examples():
    eff = build_effective_code(LAY5, set())
    # error == correction
    assert logical_failure(frozenset(), eff) is False
    # a full logical X path
    assert logical_failure(frozenset(eff.bare_logical_x), eff) is True
    # an X-type stabilizer element (star support) is harmless
    for g in eff.star_groups:
        assert logical_failure(g.support, eff) is False
    # ... including a merged supercheck's support
    eff2 = build_effective_code(LAY5, {(4, 4)})
    superstar = next(g for g in eff2.star_groups if g.damaged)
    assert logical_failure(superstar.support, eff2) is False
    # non-restored string raises
    with pytest.raises(DecoderConsistencyError):
        logical_failure(frozenset({(2, 2)}), eff)
    with pytest.raises(ValueError):
        logical_failure(frozenset({(1, 0)}), eff)  # not a data site


def test_supercheck_region_correction_restores_codespace():
    eff = build_effective_code(LAY5, {(4, 4)})

    def inject(t, k, rng):
        if k == 4:  # error inside the merged region's neighbourhood
            t.apply_paulis(np.array([LAY5.qubit_index[(4, 2)]], np.int64),
                           np.array([1], np.uint8))

    t, hist = _simulate(LAY5, eff, 8, seed=7, inject=inject)
    ds = detection_events(hist, eff)
    graph, pairing, corr = _decode(ds, eff)
    combined = corr.data_flips ^ {(4, 2)}
    assert logical_failure(combined, eff) is False
