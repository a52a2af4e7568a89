"""Generate and load adcsbm bundles as numpy arrays via the CLI boundary."""

from __future__ import annotations

import json
import os
import shutil
import subprocess
import sys
import tempfile
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

SCHEMA_VERSION = 1

_EXIT_CONFIG = 2
_EXIT_GENERATION = 3
_EXIT_IO = 4


class BindingsError(Exception):
    """Base class for all binding-level failures."""


class ConfigException(BindingsError):
    """The config mapping was rejected (CLI exit code 2)."""


class GenerationException(BindingsError):
    """Dataset generation failed (CLI exit code 3)."""


class BundleException(BindingsError):
    """A bundle could not be read or failed validation (CLI exit code 4)."""


class SchemaException(BundleException):
    """A bundle directory is structurally invalid (missing or bad files)."""


@dataclass(frozen=True)
class ArrayBundle:
    """One dataset as plain arrays, mirroring the bundle's shapes.

    ``edge_index`` is a 2 x |E| int64 array (row 0 = u, row 1 = v, u < v),
    ``features`` is n x s float64, ``labels`` is length-n int64, and
    ``edge_features`` is |E| x s_e float64 or None.  ``metadata`` is the
    parsed meta.json mapping.
    """

    edge_index: np.ndarray
    features: np.ndarray
    labels: np.ndarray
    edge_features: Optional[np.ndarray]
    metadata: dict


def _cli_command() -> list:
    exe = shutil.which("adcsbm")
    if exe:
        return [exe]
    return [sys.executable, "-m", "adcsbm"]


def _raise_for_exit(code: int, stderr: str) -> None:
    message = stderr.strip() or f"adcsbm exited with code {code}"
    if code == _EXIT_CONFIG:
        raise ConfigException(message)
    if code == _EXIT_GENERATION:
        raise GenerationException(message)
    if code == _EXIT_IO:
        raise BundleException(message)
    raise BindingsError(message)


def generate_py(
    config: Mapping,
    seed: Optional[int] = None,
    workdir: Optional[str] = None,
) -> ArrayBundle:
    """Generate one dataset through the CLI and return its arrays.

    ``config`` must follow the generator's JSON schema; ``seed`` overrides
    the config's seed when given.  ``workdir`` keeps the intermediate
    bundle on disk instead of a temporary directory.
    """
    if not isinstance(config, Mapping):
        raise ConfigException(f"config must be a mapping, got {type(config).__name__}")

    def run(directory: str) -> ArrayBundle:
        config_path = os.path.join(directory, "config.json")
        bundle_dir = os.path.join(directory, "bundle")
        with open(config_path, "w") as fh:
            json.dump(dict(config), fh)
        command = _cli_command() + ["generate", "--config", config_path, "--out", bundle_dir]
        if seed is not None:
            command += ["--seed", str(int(seed))]
        proc = subprocess.run(command, capture_output=True, text=True)
        if proc.returncode != 0:
            _raise_for_exit(proc.returncode, proc.stderr)
        return load_bundle_py(bundle_dir)

    if workdir is not None:
        os.makedirs(workdir, exist_ok=True)
        return run(workdir)
    with tempfile.TemporaryDirectory(prefix="adcsbm-bindings-") as tmp:
        return run(tmp)


def _require_file(directory: str, name: str) -> str:
    path = os.path.join(directory, name)
    if not os.path.exists(path):
        raise SchemaException(f"bundle is missing {name}")
    return path


def _read_matrix(path: str, sep: str, dtype) -> np.ndarray:
    try:
        with open(path) as fh:
            rows = [line.split(sep) for line in fh.read().splitlines() if line]
    except OSError as exc:
        raise BundleException(f"cannot read {path}: {exc}") from exc
    try:
        return np.array(rows, dtype=dtype)
    except ValueError as exc:
        raise BundleException(f"malformed values in {path}: {exc}") from exc


def load_bundle_py(directory: str) -> ArrayBundle:
    """Parse a bundle directory into an ArrayBundle, validating shapes."""
    meta_path = _require_file(directory, "meta.json")
    try:
        with open(meta_path) as fh:
            metadata = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaException(f"cannot parse meta.json: {exc}") from exc
    if metadata.get("schema") != SCHEMA_VERSION:
        raise SchemaException(f"unsupported bundle schema {metadata.get('schema')!r}")
    config = metadata.get("config", {})
    graph_cfg = config.get("graph", {})
    n = int(graph_cfg.get("n", 0))
    s = int(config.get("features", {}).get("s", 0))
    if n < 1:
        raise BundleException(f"metadata declares n = {n}, need n >= 1")
    if s < 1:
        raise BundleException(f"metadata declares s = {s}, need s >= 1")

    edges = _read_matrix(_require_file(directory, "edges.tsv"), "\t", np.int64)
    edges = edges.reshape(-1, 2)
    labels = _read_matrix(
        _require_file(directory, "labels.csv"), ",", np.int64
    ).ravel()
    features = _read_matrix(
        _require_file(directory, "features.csv"), ",", np.float64
    )

    if edges.shape[0]:
        if edges.min() < 0 or edges.max() >= n:
            raise BundleException("edge endpoint outside [0, n)")
        if (edges[:, 0] >= edges[:, 1]).any():
            raise BundleException("edges must satisfy u < v")
    if labels.shape[0] != n:
        raise BundleException(f"labels.csv has {labels.shape[0]} rows, expected {n}")
    if features.shape != (n, s):
        raise BundleException(
            f"features.csv has shape {features.shape}, expected {(n, s)}"
        )

    edge_features = None
    if config.get("edge_features") is not None:
        s_e = int(config["edge_features"].get("s_e", 0))
        edge_features = _read_matrix(
            _require_file(directory, "edge_features.csv"), ",", np.float64
        ).reshape(-1, s_e)
        if edge_features.shape[0] != edges.shape[0]:
            raise BundleException("edge_features.csv row count does not match edges")

    return ArrayBundle(
        edge_index=np.ascontiguousarray(edges.T),
        features=features,
        labels=labels,
        edge_features=edge_features,
        metadata=metadata,
    )
