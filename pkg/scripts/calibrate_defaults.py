"""Calibrate sigma_c so feature-only clustering matches the graph signal.

Prints the calibrated center scale for the default generator at a chosen
cross-cluster degree, which is useful when building configs where neither
modality dominates.
"""

import argparse
import json

from adcsbm import GeneratorConfig, apply_parameter, calibrate_feature_signal


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--d-out", type=float, default=2.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--tolerance", type=float, default=0.02)
    args = parser.parse_args()

    config = apply_parameter(
        GeneratorConfig(seed=args.seed), "graph.d_out", args.d_out
    )
    sigma_c, kmeans_nmi, spectral_nmi = calibrate_feature_signal(
        config, trials=args.trials, tolerance=args.tolerance
    )
    print(
        json.dumps(
            {
                "d_out": args.d_out,
                "sigma_c": sigma_c,
                "kmeans_nmi": kmeans_nmi,
                "spectral_nmi": spectral_nmi,
            }
        )
    )


if __name__ == "__main__":
    main()
