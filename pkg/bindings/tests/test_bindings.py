import json
import subprocess
import sys

import numpy as np
import pytest

from adcsbm_bindings import (
    ArrayBundle,
    BundleException,
    ConfigException,
    GenerationException,
    SchemaException,
    generate_py,
    load_bundle_py,
)


def random_config(rng):
    n = int(rng.integers(80, 300))
    k = int(rng.integers(2, 5))
    d = float(rng.uniform(6.0, 16.0))
    d_out = float(rng.uniform(0.2, d / (2 * (k - 1))))
    config = {
        "schema": 1,
        "seed": int(rng.integers(0, 10_000)),
        "graph": {
            "n": n,
            "k": k,
            "d": d,
            "d_out": d_out,
            "power_law": {"d_min": 2.0, "d_max": 4.0, "alpha": 2.0},
        },
        "features": {
            "s": int(rng.integers(2, 12)),
            "k_f": k,
            "mode": "match",
            "sigma": 1.0,
            "sigma_c": float(rng.uniform(0.5, 4.0)),
        },
        "edge_features": None,
    }
    if rng.random() < 0.5:
        config["edge_features"] = {"s_e": 3, "sigma_e": 0.5, "x_e": 2.0}
    return config


def cli_generate(config, out_dir, tmp_path):
    config_path = tmp_path / "cli_config.json"
    config_path.write_text(json.dumps(config))
    proc = subprocess.run(
        [sys.executable, "-m", "adcsbm", "generate",
         "--config", str(config_path), "--out", str(out_dir)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out_dir


class TestParity:
    def test_ten_random_configs_match_cli_bundles(self, tmp_path):
        rng = np.random.default_rng(77)
        for i in range(10):
            config = random_config(rng)
            via_binding = generate_py(config, workdir=str(tmp_path / f"gen{i}"))
            cli_dir = cli_generate(config, tmp_path / f"cli{i}", tmp_path)
            via_cli = load_bundle_py(str(cli_dir))
            assert np.array_equal(via_binding.edge_index, via_cli.edge_index)
            assert np.array_equal(via_binding.labels, via_cli.labels)
            assert via_binding.features.tobytes() == via_cli.features.tobytes()
            if config["edge_features"] is None:
                assert via_binding.edge_features is None
                assert via_cli.edge_features is None
            else:
                assert (
                    via_binding.edge_features.tobytes()
                    == via_cli.edge_features.tobytes()
                )
            assert via_binding.metadata == via_cli.metadata

    def test_seed_override_changes_output(self, tmp_path):
        rng = np.random.default_rng(5)
        config = random_config(rng)
        a = generate_py(config, seed=1)
        b = generate_py(config, seed=2)
        assert a.metadata["seed"] == 1
        assert b.metadata["seed"] == 2
        assert not np.array_equal(a.edge_index, b.edge_index)


class TestGenerateErrors:
    def test_invalid_degree_budget_raises_config(self):
        rng = np.random.default_rng(9)
        config = random_config(rng)
        config["graph"]["d_out"] = config["graph"]["d"]
        with pytest.raises(ConfigException):
            generate_py(config)

    def test_non_mapping_config(self):
        with pytest.raises(ConfigException):
            generate_py([1, 2, 3])

    def test_generation_failure_maps_to_exception(self):
        # 5 nodes over 4 clusters with this seed leaves a cluster empty
        config = {
            "schema": 1,
            "seed": 0,
            "graph": {
                "n": 5, "k": 4, "d": 2.0, "d_out": 0.5,
                "power_law": {"d_min": 2.0, "d_max": 4.0, "alpha": 2.0},
            },
            "features": {"s": 4, "k_f": 4, "mode": "match",
                         "sigma": 1.0, "sigma_c": 1.0},
            "edge_features": None,
        }
        with pytest.raises(GenerationException):
            generate_py(config)


class TestLoad:
    def _bundle_dir(self, tmp_path):
        config = random_config(np.random.default_rng(21))
        config["edge_features"] = None
        return cli_generate(config, tmp_path / "bundle", tmp_path), config

    def test_shapes(self, tmp_path):
        directory, config = self._bundle_dir(tmp_path)
        bundle = load_bundle_py(str(directory))
        assert isinstance(bundle, ArrayBundle)
        n, s = config["graph"]["n"], config["features"]["s"]
        assert bundle.edge_index.shape[0] == 2
        assert bundle.features.shape == (n, s)
        assert bundle.labels.shape == (n,)
        assert bundle.edge_features is None
        assert (bundle.edge_index[0] < bundle.edge_index[1]).all()

    def test_missing_meta_is_schema_error(self, tmp_path):
        directory, _ = self._bundle_dir(tmp_path)
        (directory / "meta.json").unlink()
        with pytest.raises(SchemaException):
            load_bundle_py(str(directory))

    def test_wrong_schema_version(self, tmp_path):
        directory, _ = self._bundle_dir(tmp_path)
        meta = json.loads((directory / "meta.json").read_text())
        meta["schema"] = 99
        (directory / "meta.json").write_text(json.dumps(meta))
        with pytest.raises(SchemaException):
            load_bundle_py(str(directory))

    def test_zero_nodes_rejected(self, tmp_path):
        directory, _ = self._bundle_dir(tmp_path)
        meta = json.loads((directory / "meta.json").read_text())
        meta["config"]["graph"]["n"] = 0
        (directory / "meta.json").write_text(json.dumps(meta))
        with pytest.raises(BundleException):
            load_bundle_py(str(directory))

    def test_tampered_edges_rejected(self, tmp_path):
        directory, _ = self._bundle_dir(tmp_path)
        lines = (directory / "edges.tsv").read_text().splitlines()
        lines[0] = "0\t999999"
        (directory / "edges.tsv").write_text("\n".join(lines) + "\n")
        with pytest.raises(BundleException):
            load_bundle_py(str(directory))
