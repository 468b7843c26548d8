"""Command-line entry point: simulate, analyze, sweep, induct."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from pathlib import Path

from . import complexity, estimator, induction, io
from .engine import BoundaryPolicy, MapParams
from .errors import FitError

WORKER_ENV_VAR = "MAPBIAS_WORKERS"

_SUMMARY_COLUMNS = (
    "mu",
    "eps",
    "delta",
    "transient_skip",
    "samples",
    "seed",
    "status",
    "distinct_patterns",
    "entropy_bits",
    "max_probability",
    "spearman_rho",
    "slope",
    "intercept",
    "dataset",
    "error",
)


def _add_map_options(parser, listed: bool = False):
    if listed:
        # Sweep subcommand: comma-separated value lists per axis.
        parser.add_argument("--mu", required=True, help="comma-separated mu values")
        parser.add_argument("--eps", required=True, help="comma-separated eps values")
        parser.add_argument("--delta", default="0", help="comma-separated delta values")
        parser.add_argument(
            "--skip-transient", default="0", help="comma-separated transient skips"
        )
    else:
        parser.add_argument("--mu", type=float, required=True, help="map parameter mu")
        parser.add_argument(
            "--eps", type=float, default=0.0, help="dynamical noise half-width"
        )
        parser.add_argument(
            "--delta", type=float, default=0.0, help="measurement noise half-width"
        )
        parser.add_argument(
            "--skip-transient",
            type=int,
            default=0,
            help="iterations discarded before recording",
        )
    parser.add_argument("--n", type=int, default=25, help="output string length")
    parser.add_argument(
        "--samples",
        type=int,
        default=estimator.DEFAULT_SAMPLES,
        help="Monte Carlo sample count",
    )
    parser.add_argument("--seed", type=int, default=1, help="master RNG seed")
    parser.add_argument(
        "--boundary",
        choices=[p.value for p in BoundaryPolicy],
        default=BoundaryPolicy.CLAMP.value,
        help="out-of-range state handling",
    )
    parser.add_argument(
        "--norm",
        choices=["corpus", "exhaustive", "observed"],
        default="corpus",
        help="how the complexity-scale maximum is determined",
    )
    parser.add_argument(
        "--corpus-size",
        type=int,
        default=complexity.DEFAULT_CORPUS_SIZE,
        help="random-corpus size for --norm corpus",
    )
    parser.add_argument(
        "--corpus-seed",
        type=int,
        default=complexity.DEFAULT_CORPUS_SEED,
        help="random-corpus seed for --norm corpus",
    )
    parser.add_argument(
        "--shard-size",
        type=int,
        default=estimator.DEFAULT_SHARD_SIZE,
        help="samples per RNG shard (part of the reproducibility contract)",
    )


def _add_fit_options(parser):
    parser.add_argument(
        "--bin-width", type=float, default=1.0, help="envelope bin width"
    )
    parser.add_argument(
        "--exclude-singletons",
        action="store_true",
        help="drop patterns observed once before fitting",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapbias",
        description=(
            "Sample digitized noisy logistic-map trajectories, estimate "
            "pattern probabilities and complexities, fit the simplicity-bias "
            "envelope, and compare next-bit predictors."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one sampling experiment")
    _add_map_options(p_sim)
    p_sim.add_argument("--out", required=True, help="output stem (writes STEM.csv etc.)")

    p_ana = sub.add_parser("analyze", help="fit envelope and bias metrics of a dataset")
    p_ana.add_argument("--data", required=True, help="dataset CSV path")
    p_ana.add_argument("--meta", default=None, help="dataset meta JSON (default: sidecar)")
    _add_fit_options(p_ana)
    p_ana.add_argument("--out", required=True, help="analysis JSON path")

    p_swp = sub.add_parser("sweep", help="run a parameter grid of experiments")
    _add_map_options(p_swp, listed=True)
    _add_fit_options(p_swp)
    p_swp.add_argument("--out", required=True, help="output directory")

    p_ind = sub.add_parser("induct", help="compare Laplace and AP next-bit predictors")
    mode = p_ind.add_mutually_exclusive_group(required=True)
    mode.add_argument("--explicit", type=int, help="plain run length n")
    mode.add_argument("--power-tower", type=int, help="run length m**m for this m")
    mode.add_argument(
        "--map-derived", action="store_true", help="run length from the map transition"
    )
    p_ind.add_argument("--mu", type=float, default=None, help="map parameter mu")
    p_ind.add_argument("--x0-log10", type=float, default=None, help="log10 of x0")
    p_ind.add_argument("--threshold", type=float, default=0.5, help="crossing threshold")
    p_ind.add_argument("--out", default=None, help="report JSON path (default: stdout)")

    return parser


def _params_from_args(args) -> MapParams:
    return MapParams(
        mu=args.mu,
        eps=args.eps,
        delta=args.delta,
        n=args.n,
        transient_skip=args.skip_transient,
        boundary_policy=BoundaryPolicy(args.boundary),
    )


def _make_scale(norm: str, n: int, corpus_size: int, corpus_seed: int, ft=None):
    if norm == "corpus":
        return complexity.random_corpus_scale(n, corpus_size, corpus_seed)
    if norm == "exhaustive":
        return complexity.exhaustive_scale(n)
    if ft is None:
        raise ValueError("observed normalization needs a sampled table")
    return complexity.observed_scale(ft.patterns, n)


def _stem_path(stem, ext: str) -> Path:
    # Plain concatenation: stems like "mu3.0_eps0.125" contain dots that
    # Path.with_suffix would clobber.
    return Path(str(stem) + ext)


def _simulate_to_files(params, samples, seed, shard_size, norm, corpus_size,
                       corpus_seed, out_stem) -> dict:
    """Shared by simulate and sweep cells; returns the meta payload."""
    ft = estimator.sample_distribution(params, samples, seed, shard_size)
    scale = _make_scale(norm, params.n, corpus_size, corpus_seed, ft)
    ds = estimator.build_dataset(ft, scale)
    io.write_dataset_csv(ds, _stem_path(out_stem, ".csv"))
    meta = {
        "kind": "mapbias-dataset",
        "config": {
            **io.map_params_to_dict(params),
            "samples": samples,
            "seed": seed,
            "shard_size": shard_size,
            "norm": norm,
        },
        "scale": scale.to_dict(),
        "summary": {
            "distinct_patterns": len(ds),
            "max_probability": float(ds.probabilities.max()),
        },
    }
    io.write_json(meta, _stem_path(out_stem, ".meta.json"))
    return meta


def cmd_simulate(args) -> int:
    params = _params_from_args(args)
    meta = _simulate_to_files(
        params,
        args.samples,
        args.seed,
        args.shard_size,
        args.norm,
        args.corpus_size,
        args.corpus_seed,
        args.out,
    )
    print(
        f"wrote {_stem_path(args.out, '.csv')}: "
        f"{meta['summary']['distinct_patterns']} distinct patterns "
        f"from {args.samples} samples"
    )
    return 0


def _analysis_payload(ds, bin_width, exclude_singletons, config=None) -> dict:
    fit = None
    fit_error = None
    try:
        fit = estimator.fit_upper_bound(ds, bin_width, exclude_singletons)
    except FitError as exc:
        fit_error = str(exc)
    metrics = estimator.bias_metrics(ds)
    payload = {
        "kind": "mapbias-analysis",
        "slope": fit.slope if fit else None,
        "slope_log10": fit.slope_log10 if fit else None,
        "intercept": fit.intercept if fit else None,
        "bin_width": bin_width,
        "bins": fit.to_dict()["bins"] if fit else None,
        "method": fit.method if fit else None,
        "fit_error": fit_error,
        **metrics.to_dict(),
        "reference_bound": {"a": 1.0, "b": 0.0},
        "exclude_singletons": exclude_singletons,
        "config": config,
    }
    return payload


def cmd_analyze(args) -> int:
    ds = io.read_dataset_csv(args.data)
    if args.meta:
        meta_path = Path(args.meta)
    else:
        data = str(args.data)
        stem = data[: -len(".csv")] if data.endswith(".csv") else data
        meta_path = _stem_path(stem, ".meta.json")
    config = None
    if meta_path.exists():
        config = io.read_json(meta_path).get("config")
    payload = _analysis_payload(ds, args.bin_width, args.exclude_singletons, config)
    io.write_json(payload, args.out)
    slope = payload["slope"]
    print(
        f"wrote {args.out}: slope="
        + (f"{slope:.4f}" if slope is not None else f"n/a ({payload['fit_error']})")
    )
    return 0


def _parse_value_list(text: str, cast) -> list:
    values = [cast(part) for part in text.split(",") if part.strip() != ""]
    if not values:
        raise ValueError(f"empty value list: {text!r}")
    return values


def _cell_stem(out_dir: Path, mu, eps, delta, skip) -> Path:
    return out_dir / f"mu{mu:g}_eps{eps:g}_delta{delta:g}_skip{skip}"


def _run_sweep_cell(job: dict) -> dict:
    """One sweep cell: simulate, analyze, report a summary row."""
    row = {key: "" for key in _SUMMARY_COLUMNS}
    row.update(
        mu=f"{job['mu']:g}",
        eps=f"{job['eps']:g}",
        delta=f"{job['delta']:g}",
        transient_skip=str(job["skip"]),
        samples=str(job["samples"]),
        seed=str(job["seed"]),
    )
    try:
        params = MapParams(
            mu=job["mu"],
            eps=job["eps"],
            delta=job["delta"],
            n=job["n"],
            transient_skip=job["skip"],
            boundary_policy=BoundaryPolicy(job["boundary"]),
        )
        stem = job["stem"]
        meta = _simulate_to_files(
            params,
            job["samples"],
            job["seed"],
            job["shard_size"],
            job["norm"],
            job["corpus_size"],
            job["corpus_seed"],
            stem,
        )
        ds = io.read_dataset_csv(_stem_path(stem, ".csv"))
        payload = _analysis_payload(
            ds, job["bin_width"], job["exclude_singletons"], meta["config"]
        )
        io.write_json(payload, _stem_path(stem, ".analysis.json"))
        row.update(
            status="ok",
            distinct_patterns=str(payload["distinct_patterns"]),
            entropy_bits=f"{payload['entropy_bits']:.6g}",
            max_probability=f"{payload['max_probability']:.6g}",
            spearman_rho=(
                f"{payload['spearman_rho']:.6g}"
                if payload["spearman_rho"] is not None
                else ""
            ),
            slope=f"{payload['slope']:.6g}" if payload["slope"] is not None else "",
            intercept=(
                f"{payload['intercept']:.6g}" if payload["intercept"] is not None else ""
            ),
            dataset=_stem_path(stem, ".csv").name,
        )
        if payload["fit_error"]:
            row["error"] = payload["fit_error"]
    except Exception as exc:  # cell failures are recorded, sweep continues
        row.update(status="error", error=str(exc))
    return row


def _worker_budget() -> int:
    raw = os.environ.get(WORKER_ENV_VAR)
    if raw:
        return max(1, int(raw))
    return max(1, min(4, os.cpu_count() or 1))


def cmd_sweep(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    mus = _parse_value_list(args.mu, float)
    epss = _parse_value_list(args.eps, float)
    deltas = _parse_value_list(args.delta, float)
    skips = _parse_value_list(args.skip_transient, int)
    if args.norm in ("corpus", "exhaustive"):
        # Build the shared scale once; forked workers inherit the cache.
        _make_scale(args.norm, args.n, args.corpus_size, args.corpus_seed)
    jobs = [
        {
            "mu": mu,
            "eps": eps,
            "delta": delta,
            "skip": skip,
            "n": args.n,
            "samples": args.samples,
            "seed": args.seed,
            "boundary": args.boundary,
            "shard_size": args.shard_size,
            "norm": args.norm,
            "corpus_size": args.corpus_size,
            "corpus_seed": args.corpus_seed,
            "bin_width": args.bin_width,
            "exclude_singletons": args.exclude_singletons,
            "stem": str(_cell_stem(out_dir, mu, eps, delta, skip)),
        }
        for mu, eps, delta, skip in product(mus, epss, deltas, skips)
    ]
    budget = _worker_budget()
    if budget > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=budget) as pool:
            rows = list(pool.map(_run_sweep_cell, jobs))
    else:
        rows = [_run_sweep_cell(job) for job in jobs]
    lines = [",".join(_SUMMARY_COLUMNS)]
    for row in rows:
        lines.append(",".join(row[col].replace(",", ";") for col in _SUMMARY_COLUMNS))
    io.atomic_write_lines(out_dir / "summary.csv", lines)
    failed = [row for row in rows if row["status"] != "ok"]
    print(f"sweep: {len(rows) - len(failed)}/{len(rows)} cells ok -> {out_dir}")
    for row in failed:
        print(
            f"  failed cell mu={row['mu']} eps={row['eps']} delta={row['delta']} "
            f"skip={row['transient_skip']}: {row['error']}",
            file=sys.stderr,
        )
    return 1 if failed else 0


def cmd_induct(args) -> int:
    if args.explicit is not None:
        scenario = induction.ExplicitRun(args.explicit)
    elif args.power_tower is not None:
        scenario = induction.PowerTowerRun(args.power_tower)
    else:
        if args.mu is None or args.x0_log10 is None:
            raise ValueError("--map-derived needs --mu and --x0-log10")
        scenario = induction.MapDerivedRun(
            mu=args.mu, x0_log10=args.x0_log10, threshold=args.threshold
        )
    report = induction.compare_predictors(scenario)
    payload = {
        "kind": "mapbias-induction",
        "scenario": {
            "type": type(scenario).__name__,
            **dataclasses.asdict(scenario),
        },
        **report.to_dict(),
    }
    if args.out:
        io.write_json(payload, args.out)
        print(f"wrote {args.out}")
    else:
        print(json.dumps(payload, indent=2))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "analyze": cmd_analyze,
        "sweep": cmd_sweep,
        "induct": cmd_induct,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
