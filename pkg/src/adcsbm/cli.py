"""Command-line interface.

Subcommands: generate, sweep, eval, calibrate.  Exit codes: 0 success,
2 configuration error, 3 generation error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bundle import generate, read_bundle, write_bundle
from .config import GeneratorConfig, ScenarioConfig, SplitParams
from .errors import BundleError, ConfigError, GenerationError
from .scenarios import (
    calibrate_feature_signal,
    evaluate_method,
    preset_scenario,
    run_scenario,
    write_aggregates_csv,
    write_results_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GENERATION = 3
EXIT_IO = 4


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise BundleError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _load_generator_config(path: str | None, seed: int | None) -> GeneratorConfig:
    config = GeneratorConfig.from_dict(_load_json(path)) if path else GeneratorConfig()
    if seed is not None:
        from dataclasses import replace

        config = replace(config, seed=seed)
    return config


def cmd_generate(args) -> int:
    config = _load_generator_config(args.config, args.seed)
    bundle = generate(config)
    write_bundle(bundle, args.out)
    print(
        json.dumps(
            {
                "out": args.out,
                "seed": bundle.seed,
                "nodes": bundle.graph.n,
                "edges": bundle.graph.num_edges,
            }
        )
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    if os.path.exists(args.scenario) and args.scenario.endswith(".json"):
        scenario = ScenarioConfig.from_dict(_load_json(args.scenario))
        if args.trials is not None:
            from dataclasses import replace

            scenario = replace(scenario, trials=args.trials)
    else:
        scenario = preset_scenario(
            args.scenario, seed=args.seed or 0, trials=args.trials or 20
        )
    result = run_scenario(scenario, workers=args.workers)
    out = args.out
    try:
        if out.endswith(".csv"):
            results_path = out
            agg_path = os.path.join(os.path.dirname(out) or ".", "aggregates.csv")
        else:
            os.makedirs(out, exist_ok=True)
            results_path = os.path.join(out, "results.csv")
            agg_path = os.path.join(out, "aggregates.csv")
        write_results_csv(result, results_path)
        write_aggregates_csv(result, agg_path)
    except OSError as exc:
        raise BundleError(f"cannot write results: {exc}") from exc
    print(
        json.dumps(
            {
                "results": results_path,
                "aggregates": agg_path,
                "rows": len(result.rows),
                "failures": len(result.failures),
            }
        )
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    bundle = read_bundle(args.bundle)
    task = (
        "semisupervised"
        if args.method in ("label_prop", "nearest_centroid")
        else "unsupervised"
    )
    split = SplitParams(shots=args.shots, val_per_class=args.val_per_class)
    metric, score = evaluate_method(args.method, bundle, task, split)
    print(json.dumps({"method": args.method, "metric": metric, "score": score}))
    return EXIT_OK


def cmd_calibrate(args) -> int:
    config = _load_generator_config(args.config, args.seed)
    sigma_c, km, sp = calibrate_feature_signal(
        config, trials=args.trials, tolerance=args.tolerance
    )
    print(
        json.dumps(
            {"sigma_c": sigma_c, "kmeans_nmi": km, "spectral_nmi": sp}
        )
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adcsbm",
        description="Attributed degree-corrected SBM benchmark generator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate one dataset bundle")
    p.add_argument("--config", help="JSON generator config (defaults if omitted)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", required=True, help="output bundle directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sweep", help="run a scenario sweep")
    p.add_argument("--scenario", required=True, help="preset name or JSON file")
    p.add_argument("--trials", type=int, help="trials per grid value")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, help="master seed for presets")
    p.add_argument("--out", required=True, help="results .csv path or directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eval", help="run one baseline on a stored bundle")
    p.add_argument("--bundle", required=True, help="bundle directory")
    p.add_argument(
        "--method",
        required=True,
        choices=("spectral", "kmeans", "label_prop", "nearest_centroid"),
    )
    p.add_argument("--shots", type=int, default=20)
    p.add_argument("--val-per-class", type=int, default=30)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("calibrate", help="calibrate sigma_c to the graph signal")
    p.add_argument("--config", help="JSON generator config (defaults if omitted)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--tolerance", type=float, default=0.02)
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GenerationError as exc:
        print(f"generation error: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except BundleError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
