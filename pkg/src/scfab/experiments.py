"""Monte-Carlo campaign driver: trials, sweeps, thresholds, fits, studies.

Every trial is deterministic given (master seed, trial index): the trial
RNG is spawned from a SeedSequence keyed on both, so campaign results are
identical for any degree of parallelism and any chunking.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .decoder import (
    DecoderConsistencyError,
    build_matching_graph,
    mwpm,
    pairing_to_correction,
)
from .effective import (
    FabricationSpec,
    _bitmap_from_faults,
    _draw_faults,
    build_effective_code,
    layout_arrays,
    map_to_disabled,
    percolation_status,
    sample_fabrication,
)
from .geometry import CodeLayout, build_layout
from .noise import NoiseParams
from .schedule import ScheduledLattice, run_perfect_round, run_round
from .syndrome import SyndromeHistory, detection_events
from .tableau import Tableau


class TrialInternalError(RuntimeError):
    """A consistency check failed inside the trial pipeline."""


# default sweep grids: computational error 0.05%..1.00% in 0.05% steps;
# fabrication error 0..10% in 2% steps plus the 5% comparison point
DEFAULT_PCOMP_GRID = tuple(round(0.0005 * k, 6) for k in range(1, 21))
DEFAULT_FAB_GRID = (0.0, 0.02, 0.04, 0.05, 0.06, 0.08, 0.10)


@lru_cache(maxsize=None)
def _layout(L: int) -> CodeLayout:
    return build_layout(L)


@dataclass(frozen=True)
class TrialConfig:
    L: int
    p_comp: float
    p_qubit: float = 0.0
    p_link: float = 0.0
    rounds: int | None = None          # default 2L
    seed: int = 0
    trials: int = 0
    unit_weights: bool = False
    fabrication: FabricationSpec | None = None

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("L must be >= 2")
        for name in ("p_comp", "p_qubit", "p_link"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.rounds is not None and self.rounds < 1:
            raise ValueError("rounds must be >= 1")

    @property
    def n_rounds(self) -> int:
        return self.rounds if self.rounds is not None else 2 * self.L


@dataclass(frozen=True)
class TrialOutcome:
    percolated: bool
    logical_error: bool | None = None
    effective_distance: int | None = None
    max_supercheck_weight: int | None = None


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(trial_index,)))


def run_trial(cfg: TrialConfig, trial_index: int) -> TrialOutcome:
    """Full pipeline for one trial; deterministic in (cfg.seed, trial_index)."""
    rng = trial_rng(cfg.seed, trial_index)
    layout = _layout(cfg.L)
    spec = cfg.fabrication
    if spec is None:
        spec = sample_fabrication(layout, cfg.p_qubit, cfg.p_link, rng)
    disabled = map_to_disabled(layout, spec)
    eff = build_effective_code(layout, disabled)
    if eff.percolated:
        return TrialOutcome(percolated=True)

    noise = NoiseParams(cfg.p_comp)
    lat = ScheduledLattice(eff, layout)
    t = Tableau(layout.n_qubits)

    reference = run_perfect_round(t, lat, rng)
    for g in eff.plaq_groups:
        val = 1
        for site in g.members:
            val *= reference[site]
        if val != 1:
            raise TrialInternalError(
                f"plaquette group {g.index} reference product is {val}")

    rounds = []
    for k in range(1, cfg.n_rounds + 1):
        rounds.append((k, run_round(t, lat.schedule_for(k), noise, rng)))
    final = run_perfect_round(t, lat, rng)

    history = SyndromeHistory(reference, rounds, final)
    defects = detection_events(history, eff)
    graph = build_matching_graph(defects, eff, noise, cfg.unit_weights)
    pairing = mwpm(graph)
    correction = pairing_to_correction(pairing, graph)

    if correction.data_flips:
        idx = np.array([layout.qubit_index[q] for q in sorted(correction.data_flips)],
                       np.int64)
        t.apply_paulis(idx, np.ones(len(idx), np.uint8))

    check = run_perfect_round(t, lat, rng)
    for g in eff.plaq_groups:
        val = 1
        for site in g.members:
            val *= check[site]
        if val != 1:
            raise TrialInternalError(
                f"code space not restored on plaquette group {g.index}")

    zbar = [layout.qubit_index[q] for q in eff.bare_logical_z]
    outcome, deterministic = t.measure_pauli([], zbar, rng)
    if not deterministic:
        raise TrialInternalError("logical Z measurement was not deterministic")
    return TrialOutcome(
        percolated=False,
        logical_error=(outcome == -1),
        effective_distance=eff.effective_distance,
        max_supercheck_weight=eff.max_supercheck_weight)


# ---------------------------------------------------------------------------
# Campaigns
# ---------------------------------------------------------------------------


@dataclass
class CampaignPoint:
    config: TrialConfig
    trials: int
    percolated: int
    logical_errors: int
    internal_errors: int = 0

    @property
    def decoded_trials(self) -> int:
        return self.trials - self.percolated

    @property
    def p_log(self) -> float:
        n = self.decoded_trials
        return self.logical_errors / n if n else float("nan")

    @property
    def std_err(self) -> float:
        n = self.decoded_trials
        if not n:
            return float("nan")
        p = self.p_log
        return math.sqrt(max(p * (1.0 - p), 1.0 / n) / n)


def _campaign_chunk(cfg: TrialConfig, lo: int, hi: int) -> tuple[int, int, int]:
    perc = errs = internal = 0
    for i in range(lo, hi):
        try:
            out = run_trial(cfg, i)
        except (TrialInternalError, DecoderConsistencyError):
            internal += 1
            continue
        if out.percolated:
            perc += 1
        elif out.logical_error:
            errs += 1
    return perc, errs, internal


def default_workers() -> int:
    env = os.environ.get("SCFAB_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def run_campaign(configs, workers: int | None = None,
                 progress=None) -> list[CampaignPoint]:
    """Run every config for config.trials trials; order-independent tallies."""
    workers = default_workers() if workers is None else max(1, workers)
    points = []
    jobs = []
    for cfg in configs:
        chunk = max(1, min(cfg.trials, (cfg.trials + 4 * workers - 1)
                           // (4 * workers))) if cfg.trials else 1
        spans = [(cfg, lo, min(lo + chunk, cfg.trials))
                 for lo in range(0, cfg.trials, chunk)]
        jobs.append(spans)
    flat = [span for spans in jobs for span in spans]

    results: dict[tuple[int, int, int], tuple[int, int, int]] = {}
    if workers == 1 or len(flat) <= 1:
        for idx, (cfg, lo, hi) in enumerate(flat):
            results[idx] = _campaign_chunk(cfg, lo, hi)
            if progress:
                progress(idx + 1, len(flat))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = {pool.submit(_campaign_chunk, cfg, lo, hi): idx
                    for idx, (cfg, lo, hi) in enumerate(flat)}
            done = 0
            for fut in as_completed(futs):
                results[futs[fut]] = fut.result()
                done += 1
                if progress:
                    progress(done, len(flat))

    idx = 0
    for cfg, spans in zip(configs, jobs):
        perc = errs = internal = 0
        for _ in spans:
            p, e, ie = results[idx]
            perc += p
            errs += e
            internal += ie
            idx += 1
        points.append(CampaignPoint(config=cfg, trials=cfg.trials,
                                    percolated=perc, logical_errors=errs,
                                    internal_errors=internal))
    return points


CSV_HEADER = "L,p_comp,p_qubit,p_link,trials,percolated,logical_errors,p_log,std_err"


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def campaign_to_csv(points) -> str:
    lines = [CSV_HEADER]
    for pt in points:
        c = pt.config
        lines.append(
            f"{c.L},{_fmt(c.p_comp)},{_fmt(c.p_qubit)},{_fmt(c.p_link)},"
            f"{pt.trials},{pt.percolated},{pt.logical_errors},"
            f"{_fmt(pt.p_log)},{_fmt(pt.std_err)}")
    return "\n".join(lines) + "\n"


def campaign_to_json(points) -> str:
    rows = []
    for pt in points:
        c = pt.config
        rows.append({
            "L": c.L, "p_comp": c.p_comp, "p_qubit": c.p_qubit,
            "p_link": c.p_link, "trials": pt.trials,
            "percolated": pt.percolated, "logical_errors": pt.logical_errors,
            "p_log": pt.p_log, "std_err": pt.std_err,
        })
    return json.dumps(rows, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# Threshold estimation and exponential fits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdEstimate:
    crossing: float | None
    sigma: float | None
    pair_crossings: tuple[float, ...]
    reason: str = ""


def _quadratic_fit(x, y):
    deg = 2 if len(x) >= 3 else 1
    return np.polyfit(x, y, deg)


def _pair_crossing(cx, cy, lo, hi):
    """Root of (cx - cy) inside [lo, hi], or None."""
    diff = np.polysub(cx, cy)
    roots = np.roots(diff)
    real = [float(r.real) for r in roots
            if abs(r.imag) < 1e-12 and lo - 1e-12 <= r.real <= hi + 1e-12]
    if not real:
        return None
    mid = 0.5 * (lo + hi)
    return min(real, key=lambda r: abs(r - mid))


def estimate_threshold(points, bootstrap: int = 200,
                       rng_seed: int = 0) -> ThresholdEstimate:
    """Crossing point of logical-error curves for >= 2 distances.

    Fits each distance's curve with a local quadratic in p_comp and
    intersects consecutive-distance pairs; uncertainty comes from a
    parametric binomial bootstrap of every campaign point.
    """
    curves: dict[int, list[CampaignPoint]] = {}
    for pt in points:
        curves.setdefault(pt.config.L, []).append(pt)
    if len(curves) < 2:
        raise ValueError("need campaign points for at least 2 distances")
    for L, pts in curves.items():
        if len(pts) < 3:
            raise ValueError(f"need >= 3 p_comp values per distance (L={L})")
        pts.sort(key=lambda pt: pt.config.p_comp)

    los = max(min(pt.config.p_comp for pt in pts) for pts in curves.values())
    his = min(max(pt.config.p_comp for pt in pts) for pts in curves.values())
    Ls = sorted(curves)

    def crossings(rates: dict[int, np.ndarray]):
        fits = {L: _quadratic_fit([pt.config.p_comp for pt in curves[L]],
                                  rates[L]) for L in Ls}
        out = []
        for a, b in zip(Ls, Ls[1:]):
            r = _pair_crossing(fits[a], fits[b], los, his)
            if r is not None:
                out.append(r)
        return out

    base = {L: np.array([pt.p_log for pt in curves[L]]) for L in Ls}
    main = crossings(base)
    if len(main) < len(Ls) - 1:
        return ThresholdEstimate(None, None, tuple(main),
                                 reason="curves do not cross in range")

    rng = np.random.default_rng(rng_seed)
    boots = []
    for _ in range(bootstrap):
        rates = {}
        for L in Ls:
            rs = []
            for pt in curves[L]:
                n = max(1, pt.decoded_trials)
                rs.append(rng.binomial(n, min(max(pt.p_log, 0.0), 1.0)) / n)
            rates[L] = np.array(rs)
        cs = crossings(rates)
        if cs:
            boots.append(float(np.mean(cs)))
    sigma = float(np.std(boots)) if len(boots) >= 10 else None
    return ThresholdEstimate(float(np.mean(main)), sigma, tuple(main))


@dataclass(frozen=True)
class FitResult:
    alpha: float
    beta: float
    residuals: tuple[float, ...]


def fit_exponential(thresholds) -> FitResult:
    """Least-squares fit of threshold(p_fab) = alpha * exp(beta * p_fab)."""
    pts = sorted(thresholds)
    if len(pts) < 3:
        raise ValueError("need at least 3 (p_fab, threshold) points")
    for p, t in pts:
        if t <= 0:
            raise ValueError(f"non-positive threshold {t} at p_fab={p}")
    x = np.array([p for p, _ in pts])
    y = np.log([t for _, t in pts])
    beta, loga = np.polyfit(x, y, 1)
    resid = y - (loga + beta * x)
    return FitResult(alpha=float(np.exp(loga)), beta=float(beta),
                     residuals=tuple(float(r) for r in resid))


# ---------------------------------------------------------------------------
# Classical studies: percolation, effective distance, supercheck weights
# ---------------------------------------------------------------------------


def _classical_chunk(L, p_qubit, p_link, seed, lo, hi, want):
    """Classical per-instance quantities; want in {'perc','dist','weight'}."""
    layout = _layout(L)
    arr = layout_arrays(layout)
    out = []
    for i in range(lo, hi):
        rng = trial_rng(seed, i)
        fq, fl = _draw_faults(arr, p_qubit, p_link, rng)
        bitmap = _bitmap_from_faults(arr, fq, fl)
        if want == "perc":
            out.append(1 if percolation_status(layout, bitmap) else 0)
            continue
        disabled = frozenset(arr.data_sites[k] for k in np.flatnonzero(bitmap))
        eff = build_effective_code(layout, disabled)
        if eff.percolated:
            out.append(-1)
        elif want == "dist":
            out.append(eff.effective_distance)
        else:
            out.append(eff.max_supercheck_weight)
    return out


def _classical_study(L, p_qubit, p_link, instances, seed, want,
                     workers: int | None = None):
    workers = default_workers() if workers is None else max(1, workers)
    chunk = max(1, (instances + 4 * workers - 1) // (4 * workers))
    spans = [(lo, min(lo + chunk, instances))
             for lo in range(0, instances, chunk)]
    vals: list[int] = []
    if workers == 1 or len(spans) <= 1:
        for lo, hi in spans:
            vals.extend(_classical_chunk(L, p_qubit, p_link, seed, lo, hi, want))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_classical_chunk, L, p_qubit, p_link, seed,
                                lo, hi, want) for lo, hi in spans]
            for f in futs:
                vals.extend(f.result())
    return vals


def percolation_rate(L: int, kind: str, p: float, instances: int, seed: int,
                     workers: int | None = None) -> float:
    """Fraction of fabricated instances that cannot encode a logical qubit."""
    pq, pl = (p, 0.0) if kind == "qubit" else (0.0, p)
    vals = _classical_study(L, pq, pl, instances, seed, "perc", workers)
    return sum(vals) / len(vals)


def mean_effective_distance(L: int, kind: str, p: float, instances: int,
                            seed: int, workers: int | None = None) -> float:
    """Average L' over non-percolated instances."""
    pq, pl = (p, 0.0) if kind == "qubit" else (0.0, p)
    vals = [v for v in _classical_study(L, pq, pl, instances, seed, "dist",
                                        workers) if v != -1]
    if not vals:
        return float("nan")
    return float(np.mean(vals))


def supercheck_weight_stats(L: int, p_link: float, instances: int, seed: int,
                            p_qubit: float = 0.0,
                            workers: int | None = None) -> dict[int, int]:
    """Histogram of the max supercheck weight over non-percolated instances."""
    vals = [v for v in _classical_study(L, p_qubit, p_link, instances, seed,
                                        "weight", workers) if v != -1]
    hist: dict[int, int] = {}
    for v in vals:
        hist[v] = hist.get(v, 0) + 1
    return hist


def crossing_of_rates(series: dict[int, tuple[np.ndarray, np.ndarray]],
                      ) -> float | None:
    """Crossing estimate for rate-vs-p curves keyed by L (used for percolation)."""
    Ls = sorted(series)
    lo = max(series[L][0].min() for L in Ls)
    hi = min(series[L][0].max() for L in Ls)
    crossings = []
    for a, b in zip(Ls, Ls[1:]):
        fa = _quadratic_fit(series[a][0], series[a][1])
        fb = _quadratic_fit(series[b][0], series[b][1])
        r = _pair_crossing(fa, fb, lo, hi)
        if r is not None:
            crossings.append(r)
    if not crossings:
        return None
    return float(np.mean(crossings))


# ---------------------------------------------------------------------------
# Native vs effective comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NativeComparison:
    fabricated: CampaignPoint
    native: CampaignPoint
    accepted_instances: int
    candidates_scanned: int

    @property
    def z_score(self) -> float:
        pa, pb = self.fabricated.p_log, self.native.p_log
        se = math.hypot(self.fabricated.std_err, self.native.std_err)
        return (pa - pb) / se if se > 0 else float("nan")


def _filter_chunk(L, p_qubit, p_link, target, seed, lo, hi):
    layout = _layout(L)
    accepted = []
    for i in range(lo, hi):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(0xF117E5, i)))
        spec = sample_fabrication(layout, p_qubit, p_link, rng)
        eff = build_effective_code(layout, map_to_disabled(layout, spec))
        if not eff.percolated and eff.effective_distance == target:
            accepted.append(i)
    return accepted


def _fab_trial_chunk(cfg: TrialConfig, fab_indices, seed, p_qubit, p_link):
    layout = _layout(cfg.L)
    perc = errs = internal = 0
    for i in fab_indices:
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(0xF117E5, i)))
        spec = sample_fabrication(layout, p_qubit, p_link, rng)
        try:
            out = run_trial(replace(cfg, fabrication=spec), i)
        except (TrialInternalError, DecoderConsistencyError):
            internal += 1
            continue
        if out.percolated:
            perc += 1
        elif out.logical_error:
            errs += 1
    return perc, errs, internal


def native_vs_effective(intended_L: int, target_Lprime: int, p_comp: float,
                        p_qubit: float, p_link: float, trials: int, seed: int,
                        max_candidates: int | None = None,
                        workers: int | None = None) -> NativeComparison:
    """p_log of fabricated (L -> L') instances vs native distance-L' codes.

    Fabricated instances are filtered classically to effective distance
    target_Lprime, then one noisy trial runs per accepted instance.
    """
    if target_Lprime > intended_L:
        raise ValueError("target L' cannot exceed the intended distance")
    workers = default_workers() if workers is None else max(1, workers)
    max_candidates = max_candidates or 200 * trials

    accepted: list[int] = []
    lo = 0
    step = max(trials, 512)
    while len(accepted) < trials and lo < max_candidates:
        hi = min(lo + step, max_candidates)
        chunk = max(1, (hi - lo + 4 * workers - 1) // (4 * workers))
        spans = [(a, min(a + chunk, hi)) for a in range(lo, hi, chunk)]
        if workers == 1:
            batches = [_filter_chunk(intended_L, p_qubit, p_link,
                                     target_Lprime, seed, a, b)
                       for a, b in spans]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                batches = [f.result() for f in
                           [pool.submit(_filter_chunk, intended_L, p_qubit,
                                        p_link, target_Lprime, seed, a, b)
                            for a, b in spans]]
        for batch in batches:
            accepted.extend(batch)
        lo = hi
    scanned = lo
    if len(accepted) < trials:
        raise RuntimeError(
            f"only {len(accepted)} of {trials} instances with L'="
            f"{target_Lprime} found in {scanned} candidates")
    accepted = accepted[:trials]

    base = TrialConfig(L=intended_L, p_comp=p_comp, seed=seed, trials=trials)
    chunk = max(1, (trials + 4 * workers - 1) // (4 * workers))
    spans = [accepted[a:a + chunk] for a in range(0, trials, chunk)]
    if workers == 1 or len(spans) <= 1:
        parts = [_fab_trial_chunk(base, s, seed, p_qubit, p_link)
                 for s in spans]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = [f.result() for f in
                     [pool.submit(_fab_trial_chunk, base, s, seed,
                                  p_qubit, p_link) for s in spans]]
    perc = sum(p for p, _, _ in parts)
    errs = sum(e for _, e, _ in parts)
    internal = sum(i for _, _, i in parts)
    fab_point = CampaignPoint(
        config=TrialConfig(L=intended_L, p_comp=p_comp, p_qubit=p_qubit,
                           p_link=p_link, seed=seed, trials=trials),
        trials=trials, percolated=perc, logical_errors=errs,
        internal_errors=internal)

    native_cfg = TrialConfig(L=target_Lprime, p_comp=p_comp, seed=seed + 1,
                             trials=trials)
    native_point = run_campaign([native_cfg], workers=workers)[0]
    return NativeComparison(fabricated=fab_point, native=native_point,
                            accepted_instances=len(accepted),
                            candidates_scanned=scanned)
