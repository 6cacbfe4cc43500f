"""Command-line interface for simulation campaigns and classical studies."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .effective import analytic_percolation_estimate, parse_fabrication_file
from .experiments import (
    DEFAULT_PCOMP_GRID,
    TrialConfig,
    campaign_to_csv,
    campaign_to_json,
    crossing_of_rates,
    estimate_threshold,
    fit_exponential,
    mean_effective_distance,
    native_vs_effective,
    percolation_rate,
    run_campaign,
    supercheck_weight_stats,
)
from .geometry import build_layout


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", type=Path, default=None,
                   help="write output to this path instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _emit(text: str, args) -> None:
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


def _noise_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p-comp", type=float, nargs="+", default=None,
                   help="computational error rates "
                        "(default: 0.05%% to 1.00%% in 0.05%% steps)")
    p.add_argument("--p-qubit", type=float, default=0.0)
    p.add_argument("--p-link", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--rounds", type=int, default=None)
    p.add_argument("--unit-weights", action="store_true")
    p.add_argument("--fab-file", type=Path, default=None,
                   help="fixed fabrication pattern applied to every trial")


def _build_configs(args) -> list[TrialConfig]:
    fabrication = None
    if args.fab_file:
        if len(args.L) != 1:
            raise ValueError("--fab-file requires a single --L")
        layout = build_layout(args.L[0])
        fabrication = parse_fabrication_file(args.fab_file.read_text(), layout)
    pcomps = args.p_comp if args.p_comp is not None else DEFAULT_PCOMP_GRID
    return [
        TrialConfig(L=L, p_comp=pc, p_qubit=args.p_qubit, p_link=args.p_link,
                    rounds=args.rounds, seed=args.seed, trials=args.trials,
                    unit_weights=args.unit_weights, fabrication=fabrication)
        for L in args.L for pc in pcomps
    ]


def _cmd_simulate(args) -> int:
    points = run_campaign(_build_configs(args), workers=args.workers)
    text = campaign_to_csv(points) if args.format == "csv" \
        else campaign_to_json(points)
    _emit(text, args)
    return 0


def _cmd_threshold(args) -> int:
    points = run_campaign(_build_configs(args), workers=args.workers)
    est = estimate_threshold(points)
    payload = {
        "crossing": est.crossing,
        "sigma": est.sigma,
        "pair_crossings": list(est.pair_crossings),
        "reason": est.reason,
    }
    _emit(json.dumps(payload, indent=1) + "\n", args)
    return 0


def _cmd_percolation(args) -> int:
    rows = ["kind,L,p,instances,percolated_fraction"]
    series: dict[int, tuple[list[float], list[float]]] = {}
    for L in args.L:
        xs, ys = [], []
        for p in args.p:
            rate = percolation_rate(L, args.kind, p, args.instances,
                                    args.seed, workers=args.workers)
            rows.append(f"{args.kind},{L},{p:.10g},{args.instances},{rate:.10g}")
            xs.append(p)
            ys.append(rate)
        series[L] = (np.array(xs), np.array(ys))
    if len(args.L) >= 2:
        crossing = crossing_of_rates(series)
        rows.append(f"# crossing estimate: "
                    f"{crossing if crossing is not None else 'none'}")
    _, p_star = analytic_percolation_estimate(0.0, args.kind)
    rows.append(f"# analytic bulk estimate p*: {p_star:.6f}")
    _emit("\n".join(rows) + "\n", args)
    return 0


def _cmd_distance(args) -> int:
    rows = ["kind,L,p,instances,mean_effective_distance"]
    for L in args.L:
        for p in args.p:
            m = mean_effective_distance(L, args.kind, p, args.instances,
                                        args.seed, workers=args.workers)
            rows.append(f"{args.kind},{L},{p:.10g},{args.instances},{m:.10g}")
    _emit("\n".join(rows) + "\n", args)
    return 0


def _cmd_superchecks(args) -> int:
    rows = ["L,p_link,max_weight,count"]
    for L in args.L:
        hist = supercheck_weight_stats(L, args.p_link, args.instances,
                                       args.seed, workers=args.workers)
        for w in sorted(hist):
            rows.append(f"{L},{args.p_link:.10g},{w},{hist[w]}")
    _emit("\n".join(rows) + "\n", args)
    return 0


def _cmd_fit(args) -> int:
    pts = []
    for item in args.points:
        p, t = item.split(":")
        pts.append((float(p), float(t)))
    fit = fit_exponential(pts)
    payload = {"alpha": fit.alpha, "beta": fit.beta,
               "residuals": list(fit.residuals)}
    _emit(json.dumps(payload, indent=1) + "\n", args)
    return 0


def _cmd_native_compare(args) -> int:
    cmp = native_vs_effective(
        intended_L=args.intended_L, target_Lprime=args.native_L,
        p_comp=args.p_comp, p_qubit=args.p_qubit, p_link=args.p_link,
        trials=args.trials, seed=args.seed, workers=args.workers)
    payload = {
        "fabricated": {"L": args.intended_L, "p_log": cmp.fabricated.p_log,
                       "std_err": cmp.fabricated.std_err},
        "native": {"L": args.native_L, "p_log": cmp.native.p_log,
                   "std_err": cmp.native.std_err},
        "z_score": cmp.z_score,
        "accepted_instances": cmp.accepted_instances,
        "candidates_scanned": cmp.candidates_scanned,
    }
    _emit(json.dumps(payload, indent=1) + "\n", args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="scfab",
        description="Surface code simulations with permanent fabrication errors")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run campaign points")
    p.add_argument("--L", type=int, nargs="+", required=True)
    _noise_args(p)
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("threshold", help="campaign grid + crossing estimate")
    p.add_argument("--L", type=int, nargs="+", required=True)
    _noise_args(p)
    _add_common(p)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("percolation", help="classical percolation rates")
    p.add_argument("--kind", choices=("link", "qubit"), required=True)
    p.add_argument("--L", type=int, nargs="+", required=True)
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--instances", type=int, default=10000)
    _add_common(p)
    p.set_defaults(func=_cmd_percolation)

    p = sub.add_parser("distance", help="average effective code distance")
    p.add_argument("--kind", choices=("link", "qubit"), required=True)
    p.add_argument("--L", type=int, nargs="+", required=True)
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--instances", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("superchecks", help="max supercheck weight histogram")
    p.add_argument("--L", type=int, nargs="+", required=True)
    p.add_argument("--p-link", type=float, default=0.10)
    p.add_argument("--instances", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=_cmd_superchecks)

    p = sub.add_parser("fit", help="exponential fit of thresholds")
    p.add_argument("--points", nargs="+", required=True,
                   metavar="P_FAB:THRESHOLD")
    _add_common(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("native-compare",
                       help="fabricated L->L' vs native L' logical error rates")
    p.add_argument("--intended-L", type=int, required=True)
    p.add_argument("--native-L", type=int, required=True)
    p.add_argument("--p-comp", type=float, required=True)
    p.add_argument("--p-qubit", type=float, default=0.02)
    p.add_argument("--p-link", type=float, default=0.02)
    p.add_argument("--trials", type=int, default=2000)
    _add_common(p)
    p.set_defaults(func=_cmd_native_compare)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
