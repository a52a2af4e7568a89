"""Acceptance suite: one criterion per test, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the verdict lines.
"""

import json
import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest
from scipy.stats import spearmanr

from adcsbm.baselines import (
    kmeans,
    label_propagation,
    make_few_shot_split,
    spectral_graph_clustering,
)
from adcsbm.bundle import generate
from adcsbm.config import GeneratorConfig, ScenarioConfig, apply_parameter
from adcsbm.features import feature_separation_stats
from adcsbm.metrics import classification_accuracy, clustering_accuracy, nmi
from adcsbm.sbm import GraphParams, build_block_matrix, detectability_threshold
from adcsbm.scenarios import _semisupervised_base
from adcsbm.seeds import derive_trial_seed, stage_rng
from oracles import clustering_accuracy_bruteforce, nmi_bruteforce


def verdict(tag: str, description: str, ok: bool) -> bool:
    print(f"[{tag}] {description}: {'PASS' if ok else 'FAIL'}")
    return ok


def default_bundle(seed: int, **param_overrides):
    config = GeneratorConfig(seed=seed)
    for path, value in param_overrides.items():
        config = apply_parameter(config, path.replace("__", "."), value)
    return generate(replace(config, seed=seed))


class TestAcceptance:
    def test_a1_detectability_threshold_value(self):
        value = detectability_threshold(20.0, 4)
        ok = value == 2.76393202250021
        assert verdict(
            "A1", "detectability threshold d/k - sqrt(d/k) at defaults", ok
        )

    @pytest.mark.xfail(
        strict=True,
        reason=(
            "treats d_out as the total external degree; with the per-cluster "
            "convention used throughout (required for the phase transition at "
            "d_out = d/k to exist), the balanced-block expectations are "
            "1750 within and 500 between, not 2250 and 166.67"
        ),
    )
    def test_a2_block_expectations_total_external_convention(self):
        sizes = np.full(4, 250)
        bm = build_block_matrix(GraphParams(), sizes)
        ok = bm.entries[0, 0] == pytest.approx(2250.0, rel=1e-3) and bm.entries[
            0, 1
        ] == pytest.approx(166.67, rel=1e-3)
        assert verdict(
            "A2", "block expectations under total-external d_out reading", ok
        )

    def test_a2_block_expectations_realized(self):
        # per-other-cluster convention: 250 * (20 - 3*2) / 2 = 1750 within,
        # (250 + 250)/2 * 2 = 500 between each ordered pair
        sizes = np.full(4, 250)
        bm = build_block_matrix(GraphParams(), sizes)
        exact = bm.entries[0, 0] == 1750.0 and np.allclose(
            bm.entries[~np.eye(4, dtype=bool)], 500.0
        )

        counts = np.zeros((4, 4))
        n_seeds = 10
        for seed in range(n_seeds):
            bundle = default_bundle(seed)
            labels = bundle.assignment.labels
            bm_s = build_block_matrix(bundle.config.graph, bundle.assignment.sizes)
            u, v = labels[bundle.graph.edges[:, 0]], labels[bundle.graph.edges[:, 1]]
            realized = np.zeros((4, 4))
            np.add.at(realized, (np.minimum(u, v), np.maximum(u, v)), 1)
            counts += (realized + np.triu(realized, 1).T) - bm_s.entries
        # mean deviation over seeds, three standard errors of the block count
        se = 3.0 * np.sqrt(bm.entries / n_seeds)
        sampled = bool(np.all(np.abs(counts / n_seeds) <= se))
        ok = exact and sampled
        assert verdict(
            "A2b", "block expectations match realized edge counts (3 SE)", ok
        )

    def test_a3_phase_transition_at_threshold(self):
        scores = {1.0: [], 5.0: []}
        for d_out in scores:
            for seed in range(20):
                bundle = default_bundle(
                    derive_trial_seed(0, int(d_out), seed), graph__d_out=d_out
                )
                pred = spectral_graph_clustering(
                    bundle.graph, 4, rng=stage_rng(bundle.seed, "split")
                )
                scores[d_out].append(nmi(pred, bundle.assignment.labels))
        strong, weak = np.mean(scores[1.0]), np.mean(scores[5.0])
        ok = strong >= 0.9 and weak <= 0.1
        assert verdict(
            "A3",
            f"spectral NMI {strong:.3f} >= 0.9 below threshold, "
            f"{weak:.3f} <= 0.1 at the uniform point",
            ok,
        )

    def test_a4_feature_signal_monotone(self):
        grid = (0.01, 0.1, 0.5, 1.0, 3.0, 10.0)
        means = []
        for gi, sigma_c in enumerate(grid):
            vals = []
            for seed in range(20):
                bundle = default_bundle(
                    derive_trial_seed(1, gi, seed), features__sigma_c=sigma_c
                )
                pred = kmeans(
                    bundle.features, 4, rng=stage_rng(bundle.seed, "split")
                )
                vals.append(nmi(pred, bundle.assignment.labels))
            means.append(np.mean(vals))
        rho = spearmanr(grid, means).statistic
        ok = rho >= 0.9
        assert verdict(
            "A4", f"kmeans NMI monotone in sigma_c (spearman {rho:.3f} >= 0.9)", ok
        )

    def test_a5_bss_wss_slope(self):
        grid = (0.5, 1.0, 2.0, 4.0)
        means = []
        for gi, sigma_c in enumerate(grid):
            ratios = []
            for seed in range(50):
                bundle = default_bundle(
                    derive_trial_seed(2, gi, seed), features__sigma_c=sigma_c
                )
                stats = feature_separation_stats(
                    bundle.features, bundle.feature_assignment.labels
                )
                ratios.append(stats.ratio)
            means.append(np.mean(ratios))
        # BSS/WSS ~ sigma_c^2, so the log-log slope against sigma_c^2 is 1
        slope = np.polyfit(np.log(np.square(grid)), np.log(means), 1)[0]
        ok = abs(slope - 1.0) <= 0.2
        assert verdict(
            "A5", f"BSS/WSS log-log slope {slope:.3f} within 1 +/- 0.2", ok
        )

    def test_a6_homophily_controls_label_propagation(self):
        accs = {0.0: [], 1.0: []}
        for ratio in accs:
            for trial in range(20):
                seed = derive_trial_seed(3, int(ratio), trial)
                config = apply_parameter(
                    _semisupervised_base(seed), "graph.d_out_over_d", ratio
                )
                bundle = generate(replace(config, seed=seed))
                truth = bundle.assignment.labels
                split = make_few_shot_split(
                    truth, 20, 30, stage_rng(seed, "split")
                )
                pred = label_propagation(bundle.graph, split, truth)
                accs[ratio].append(
                    classification_accuracy(pred, truth, split.test_mask)
                )
        homophilous, uniform = np.mean(accs[0.0]), np.mean(accs[1.0])
        ok = homophilous - uniform >= 0.3 and uniform <= 0.35
        assert verdict(
            "A6",
            f"label propagation {homophilous:.3f} -> {uniform:.3f} as the "
            "graph signal vanishes (gap >= 0.3, endpoint <= 0.35)",
            ok,
        )

    def test_a7_metric_oracle_agreement(self):
        rng = np.random.default_rng(12345)
        worst = 0.0
        for _ in range(200):
            n = int(rng.integers(2, 51))
            a = rng.integers(0, int(rng.integers(1, 7)), size=n)
            b = rng.integers(0, int(rng.integers(1, 7)), size=n)
            worst = max(worst, abs(nmi(a, b) - nmi_bruteforce(a, b)))
            worst = max(
                worst,
                abs(
                    clustering_accuracy(a, b)
                    - clustering_accuracy_bruteforce(a, b)
                ),
            )
        ok = worst <= 1e-12
        assert verdict(
            "A7", f"metrics match brute-force oracles (max err {worst:.2e})", ok
        )

    def test_a8_sweep_determinism_across_workers(self, tmp_path):
        from adcsbm.features import FeatureParams
        from adcsbm.sbm import GraphParams, PowerLawParams

        scenario = ScenarioConfig(
            name="determinism",
            base=GeneratorConfig(
                graph=GraphParams(
                    n=200, k=4, d=10.0, d_out=1.0,
                    power_law=PowerLawParams(d_min=2.0, d_max=4.0, alpha=2.0),
                ),
                features=FeatureParams(s=8, k_f=4),
                seed=11,
            ),
            parameter="graph.d_out",
            grid=(0.5, 2.0),
            methods=("spectral", "kmeans"),
            trials=3,
        )
        sc_path = tmp_path / "scenario.json"
        sc_path.write_text(json.dumps(scenario.to_dict()))
        outputs = []
        for workers in (1, 3):
            out = tmp_path / f"w{workers}"
            proc = subprocess.run(
                [
                    sys.executable, "-m", "adcsbm", "sweep",
                    "--scenario", str(sc_path),
                    "--workers", str(workers),
                    "--out", str(out),
                ],
                capture_output=True,
                text=True,
            )
            assert proc.returncode == 0, proc.stderr
            outputs.append((out / "results.csv").read_bytes())
        ok = outputs[0] == outputs[1]
        assert verdict(
            "A8", "sweep results byte-identical across worker counts", ok
        )


@pytest.mark.parametrize("seed", [0, 1])
def test_secondary_binding_parity(seed, tmp_path):
    bindings = pytest.importorskip("adcsbm_bindings")

    config = GeneratorConfig(seed=seed).to_dict()
    arrays = bindings.generate_py(config, seed=seed, workdir=str(tmp_path))
    bundle = generate(GeneratorConfig.from_dict(config))
    ok = (
        np.array_equal(arrays.edge_index.T, bundle.graph.edges)
        and np.array_equal(arrays.labels, bundle.assignment.labels)
        and np.array_equal(arrays.features, bundle.features)
    )
    assert verdict("S1", "native binding arrays match in-process generation", ok)
