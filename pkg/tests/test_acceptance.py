"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them
as they complete). The Monte-Carlo campaigns follow the smoke/reduced
trial counts the criteria themselves allow; total runtime is dominated by
criteria 1 and 8 (circuit-level threshold campaigns) and is a couple of
hours on two cores.
"""

import math

import numpy as np
import pytest

from scfab.decoder import build_matching_graph, mwpm, pairing_to_correction
from scfab.effective import (
    analytic_percolation_estimate,
    build_effective_code,
    map_to_disabled,
    sample_fabrication,
)
from scfab.experiments import (
    TrialConfig,
    crossing_of_rates,
    estimate_threshold,
    fit_exponential,
    mean_effective_distance,
    native_vs_effective,
    percolation_rate,
    run_campaign,
    run_trial,
)
from scfab.geometry import build_layout
from scfab.matching import min_weight_perfect_matching
from scfab.noise import NoiseParams
from scfab.schedule import ScheduledLattice, run_perfect_round, run_round
from scfab.syndrome import SyndromeHistory, detection_events
from scfab.tableau import Tableau

from statevector import StateVector

SEED = 20260808


def report(criterion, ok, detail):
    print(f"\n[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


# ---------------------------------------------------------------------------
# 1 + 8: circuit-level thresholds (shared fault-free campaign)
# ---------------------------------------------------------------------------

BASELINE_PCOMPS = tuple(round(0.005 + 0.0005 * k, 6) for k in range(9))
SMOKE_TRIALS = 5000
SWEEP_TRIALS = 10000


@pytest.fixture(scope="module")
def baseline_threshold():
    cfgs = [TrialConfig(L=L, p_comp=pc, seed=SEED, trials=SMOKE_TRIALS)
            for L in (5, 7, 9) for pc in BASELINE_PCOMPS]
    points = run_campaign(cfgs)
    assert all(pt.internal_errors == 0 for pt in points)
    return estimate_threshold(points)


@pytest.mark.slow
def test_criterion_1_baseline_threshold(baseline_threshold):
    est = baseline_threshold
    ok = est.crossing is not None and abs(est.crossing - 0.0071) <= 0.0025
    report(1, ok, f"fault-free crossing {est.crossing} (sigma {est.sigma}), "
           f"target 0.0071 +- 0.0025 (smoke tolerance)")


def _sweep_threshold(p_qubit, p_link, predicted):
    grid = [predicted * f for f in (0.6, 0.85, 1.1, 1.35)]
    cfgs = [TrialConfig(L=L, p_comp=pc, p_qubit=p_qubit, p_link=p_link,
                        seed=SEED + 1, trials=SWEEP_TRIALS)
            for L in (5, 7) for pc in grid]
    points = run_campaign(cfgs)
    assert all(pt.internal_errors == 0 for pt in points)
    return estimate_threshold(points)


@pytest.mark.slow
def test_criterion_8_threshold_decay(baseline_threshold):
    t0 = baseline_threshold.crossing
    assert t0 is not None
    results = {}
    for kind, beta_ref in (("link", -20.0), ("qubit", -22.0)):
        pts = [(0.0, t0)]
        for p_fab in (0.02, 0.04, 0.06):
            predicted = 0.0071 * math.exp(beta_ref * p_fab)
            est = _sweep_threshold(p_qubit=p_fab if kind == "qubit" else 0.0,
                                   p_link=p_fab if kind == "link" else 0.0,
                                   predicted=predicted)
            assert est.crossing is not None, \
                f"no crossing for {kind} sweep at p_fab={p_fab}"
            pts.append((p_fab, est.crossing))
        fit = fit_exponential(pts)
        results[kind] = (fit.beta, pts)
    ok_link = abs(results["link"][0] - (-20.0)) <= 5.0
    ok_qubit = abs(results["qubit"][0] - (-22.0)) <= 5.0
    report(8, ok_link and ok_qubit,
           f"link beta {results['link'][0]:.1f} (target -20 +- 5) from "
           f"{results['link'][1]}; qubit beta {results['qubit'][0]:.1f} "
           f"(target -22 +- 5) from {results['qubit'][1]}")


# ---------------------------------------------------------------------------
# 2: percolation thresholds
# ---------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_2_percolation_thresholds():
    instances = 10000
    sweeps = {
        "link": (0.16, (0.145, 0.1525, 0.16, 0.1675, 0.175)),
        "qubit": (0.145, (0.13, 0.1375, 0.145, 0.1525, 0.16)),
    }
    crossings = {}
    for kind, (target, ps) in sweeps.items():
        series = {}
        for L in (20, 40, 60):
            xs, ys = [], []
            for p in ps:
                ys.append(percolation_rate(L, kind, p, instances, SEED + 2))
                xs.append(p)
            series[L] = (np.array(xs), np.array(ys))
        crossings[kind] = crossing_of_rates(series)
    ok_link = crossings["link"] is not None and \
        abs(crossings["link"] - 0.16) <= 0.01
    ok_qubit = crossings["qubit"] is not None and \
        abs(crossings["qubit"] - 0.145) <= 0.01
    report(2, ok_link and ok_qubit,
           f"link crossing {crossings['link']} (target 0.16 +- 0.01), "
           f"qubit crossing {crossings['qubit']} (target 0.145 +- 0.01)")


# ---------------------------------------------------------------------------
# 3: analytic estimates
# ---------------------------------------------------------------------------


def test_criterion_3_analytic_estimates():
    _, p_link = analytic_percolation_estimate(0.0, "link")
    _, p_qubit = analytic_percolation_estimate(0.0, "qubit")
    ok = abs(p_link - 0.15910) <= 1e-4 and abs(p_qubit - 0.12945) <= 1e-4
    report(3, ok, f"1-0.5^(1/4) = {p_link:.6f}, 1-0.5^(1/5) = {p_qubit:.6f}")


# ---------------------------------------------------------------------------
# 4: effective distance
# ---------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_4_effective_distance():
    for L in range(2, 16):
        eff = build_effective_code(build_layout(L), set())
        assert eff.effective_distance_z == L and eff.effective_distance_x == L
    instances = 1000
    monotone = True
    detail = []
    for kind in ("link", "qubit"):
        for L in (5, 9, 13):
            means = [mean_effective_distance(L, kind, p, instances, SEED + 3)
                     for p in (0.02, 0.06, 0.10)]
            detail.append(f"{kind} L={L}: {['%.2f' % m for m in means]}")
            if not (means[0] > means[1] > means[2]):
                monotone = False
    report(4, monotone,
           "L'=L at p=0 for L<=15; mean L' strictly decreasing: "
           + "; ".join(detail))


# ---------------------------------------------------------------------------
# 5: noiseless determinism on fabricated lattices
# ---------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_5_noiseless_determinism():
    layout = build_layout(9)
    rng = np.random.default_rng(SEED + 4)
    noise0 = NoiseParams(0.0)
    checked = 0
    attempts = 0
    while checked < 500 and attempts < 5000:
        attempts += 1
        spec = sample_fabrication(layout, 0.05, 0.05, rng)
        eff = build_effective_code(layout, map_to_disabled(layout, spec))
        if eff.percolated:
            continue
        checked += 1
        lat = ScheduledLattice(eff, layout)
        t = Tableau(layout.n_qubits)
        ref = run_perfect_round(t, lat, rng)
        rounds = [(k, run_round(t, lat.schedule_for(k), noise0, rng))
                  for k in range(1, 19)]
        fin = run_perfect_round(t, lat, rng)
        hist = SyndromeHistory(ref, rounds, fin)
        for kind in ("plaquette", "star"):
            ds = detection_events(hist, eff, kind)
            assert ds.defects == (), \
                f"defects on noiseless instance {attempts}: {ds.defects[:4]}"
        out = run_trial(TrialConfig(L=9, p_comp=0.0, seed=SEED + 4, trials=1,
                                    fabrication=spec), attempts)
        assert out.logical_error is False
    report(5, checked == 500,
           f"{checked} non-percolated instances, zero detection events and "
           f"zero logical errors ({attempts} sampled)")


# ---------------------------------------------------------------------------
# 6: decoder exactness vs brute force
# ---------------------------------------------------------------------------


def _enumerate_min_perfect(d, bw, pair_w):
    best = [math.inf]

    def rec(rem, acc):
        if acc >= best[0]:
            return
        if not rem:
            best[0] = acc
            return
        a = rem[0]
        rec(rem[1:], acc + bw[a])
        for b in rem[1:]:
            if (a, b) in pair_w:
                rec([x for x in rem[1:] if x != b], acc + pair_w[(a, b)])

    rec(list(range(d)), 0.0)
    return best[0]


def _graph_instances(count, rng):
    """Random boundary-doubled instances plus real decoded ones."""
    out = []
    while len(out) < count * 0.6:
        d = int(rng.integers(1, 11))
        bw = {a: float(rng.random() * 6 + 0.1) for a in range(d)}
        pair_w = {}
        for a in range(d):
            for b in range(a + 1, d):
                if rng.random() < 0.75:
                    pair_w[(a, b)] = float(rng.random() * 8 + 0.1)
        out.append((d, bw, pair_w))
    layout = build_layout(5)
    eff = build_effective_code(layout, set())
    lat = ScheduledLattice(eff, layout)
    noise = NoiseParams(0.004)
    while len(out) < count:
        t = Tableau(layout.n_qubits)
        ref = run_perfect_round(t, lat, rng)
        rounds = [(k, run_round(t, lat.schedule_for(k), noise, rng))
                  for k in range(1, 11)]
        fin = run_perfect_round(t, lat, rng)
        ds = detection_events(SyndromeHistory(ref, rounds, fin), eff)
        dnum = len(ds.defects)
        if not 1 <= dnum <= 10:
            continue
        graph = build_matching_graph(ds, eff, noise)
        bw = {a: float(graph.boundary_weight[a]) for a in range(dnum)}
        pair_w = {(int(a), int(b)): float(w) for a, b, w in
                  zip(graph.pair_i, graph.pair_j, graph.pair_w)}
        out.append((dnum, bw, pair_w))
    return out


def test_criterion_6_decoder_exactness():
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for d, bw, pair_w in _graph_instances(200, rng):
        edges = [(a, d + a, w) for a, w in bw.items()]
        edges += [(a, b, w) for (a, b), w in pair_w.items()]
        edges += [(d + a, d + b, 0.0) for a in range(d)
                  for b in range(a + 1, d)]
        pairs = min_weight_perfect_matching(2 * d, edges)
        wmap = {}
        for i, j, w in edges:
            key = (min(i, j), max(i, j))
            wmap[key] = min(wmap.get(key, math.inf), w)
        got = sum(wmap[p] for p in pairs)
        want = _enumerate_min_perfect(d, bw, pair_w)
        worst = max(worst, abs(got - want))
        assert abs(got - want) <= 1e-5, (d, got, want)
    report(6, True, f"200 instances, blossom == enumeration "
           f"(max |difference| {worst:.2e})")


# ---------------------------------------------------------------------------
# 7: tableau vs state-vector oracle
# ---------------------------------------------------------------------------


def _random_circuit(rng, n, n_gates):
    gates = []
    for _ in range(n_gates):
        kind = rng.integers(0, 5)
        if kind == 0:
            gates.append(("H", int(rng.integers(0, n))))
        elif kind == 1:
            a = int(rng.integers(0, n))
            b = int(rng.integers(0, n - 1))
            gates.append(("CNOT", a, b + 1 if b >= a else b))
        else:
            gates.append(("XYZ"[kind - 2], int(rng.integers(0, n))))
    return gates


@pytest.mark.slow
def test_criterion_7_tableau_vs_statevector():
    rng = np.random.default_rng(SEED + 6)
    n = 4
    n_samples = 10000
    worst_chi2 = 0.0
    for circuit_idx in range(50):
        gates = _random_circuit(rng, n, 30)
        bases = [str(rng.choice(["Z", "X"])) for _ in range(n)]
        sv = StateVector(n)
        for g in gates:
            sv.apply_gate(*g)
        dist = sv.outcome_distribution(list(range(n)), bases)

        counts = {}
        for k in range(n_samples):
            r = np.random.default_rng((SEED, circuit_idx, k))
            t = Tableau(n)
            for g in gates:
                t.apply_gate(*g)
            outs = tuple(t.measure(q, bases[q], r)[0] for q in range(n))
            assert outs in dist, f"outcome outside oracle support: {outs}"
            counts[outs] = counts.get(outs, 0) + 1

        chi2 = 0.0
        for outs, p in dist.items():
            exp = p * n_samples
            chi2 += (counts.get(outs, 0) - exp) ** 2 / exp
        df = max(len(dist) - 1, 1)
        limit = df + 3.0 * math.sqrt(2.0 * df)
        worst_chi2 = max(worst_chi2, chi2 - limit)
        assert chi2 <= limit, (circuit_idx, chi2, limit)
    report(7, True, f"50 circuits within chi-square 3-sigma "
           f"(worst margin {worst_chi2:.2f})")


# ---------------------------------------------------------------------------
# 9: native vs effective distance
# ---------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_9_native_vs_effective():
    cmp = native_vs_effective(intended_L=7, target_Lprime=5, p_comp=0.004,
                              p_qubit=0.02, p_link=0.02, trials=15000,
                              seed=SEED + 7)
    assert cmp.fabricated.internal_errors == 0
    assert cmp.native.internal_errors == 0
    ok = cmp.native.p_log < cmp.fabricated.p_log and cmp.z_score >= 3.0
    report(9, ok,
           f"fabricated p_log {cmp.fabricated.p_log:.4f} "
           f"vs native {cmp.native.p_log:.4f}, z = {cmp.z_score:.1f} "
           f"({cmp.accepted_instances} instances from "
           f"{cmp.candidates_scanned} candidates)")


# ---------------------------------------------------------------------------
# 10: supercheck weight growth
# ---------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_10_supercheck_weight_growth():
    instances = 1000
    rng = np.random.default_rng(SEED + 8)
    means = {}
    for L in (5, 9, 13, 17):
        layout = build_layout(L)
        weights = []
        for i in range(instances):
            spec = sample_fabrication(layout, 0.0, 0.10, rng)
            eff = build_effective_code(layout, map_to_disabled(layout, spec))
            if not eff.percolated:
                weights.append(eff.max_supercheck_weight)
        means[L] = float(np.mean(weights))
    ok = means[5] < means[9] < means[13] < means[17]
    report(10, ok, f"mean max supercheck weight at p_link=10%: {means}")
