"""Dataset generation pipeline and on-disk bundle format.

A bundle directory holds:
  edges.tsv           two tab-separated integer columns, u < v, sorted
  labels.csv          one graph-cluster id per line
  features.csv        n rows of s comma-separated reals
  feature_labels.csv  one feature-cluster id per line
  edge_features.csv   optional; row i corresponds to row i of edges.tsv
  meta.json           config echo + seed + schema version

Reals are written with 17 significant digits so float64 round-trips
exactly through the text format.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import features as feat
from . import sbm
from .config import SCHEMA_VERSION, GeneratorConfig
from .errors import (
    AdcsbmError,
    BundleError,
    GenerationError,
    SchemaError,
    ValidationError,
)
from .seeds import stage_rng


@dataclass(frozen=True)
class DatasetBundle:
    """One generated instance: graph, labels, features, and provenance."""

    graph: sbm.Graph
    assignment: sbm.ClusterAssignment
    features: np.ndarray
    feature_assignment: feat.FeatureAssignment
    edge_features: Optional[np.ndarray]
    config: GeneratorConfig
    seed: int


def generate(config: GeneratorConfig) -> DatasetBundle:
    """Run the full generation pipeline, fully determined by config.seed."""
    seed = config.seed
    try:
        assignment = sbm.sample_memberships(
            config.graph.n, config.graph.k, stage_rng(seed, "memberships")
        )
        block = sbm.build_block_matrix(config.graph, assignment.sizes)
        theta = sbm.sample_degree_propensities(
            assignment, config.graph.power_law, stage_rng(seed, "theta")
        )
        graph = sbm.sample_graph(assignment, block, theta, stage_rng(seed, "graph"))
        fa = feat.build_feature_memberships(
            assignment,
            config.features.k_f,
            config.features.mode,
            stage_rng(seed, "feature_memberships"),
        )
        centers = feat.sample_centers(
            config.features.k_f,
            config.features.s,
            config.features.sigma_c,
            stage_rng(seed, "centers"),
        )
        X = feat.sample_node_features(
            fa, centers, config.features.sigma, stage_rng(seed, "node_features")
        )
        edge_X = None
        if config.edge_features is not None:
            edge_X = feat.sample_edge_features(
                graph,
                assignment,
                config.edge_features,
                stage_rng(seed, "edge_features"),
            )
    except AdcsbmError:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        raise GenerationError(f"generation failed: {exc}") from exc
    return DatasetBundle(
        graph=graph,
        assignment=assignment,
        features=X,
        feature_assignment=fa,
        edge_features=edge_X,
        config=config,
        seed=seed,
    )


def _write_reals(path: str, array: np.ndarray) -> None:
    with open(path, "w") as fh:
        for row in np.atleast_2d(array):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _write_ints(path: str, array: np.ndarray, sep: str) -> None:
    with open(path, "w") as fh:
        for row in np.atleast_2d(array):
            fh.write(sep.join(str(int(v)) for v in np.atleast_1d(row)) + "\n")


def write_bundle(bundle: DatasetBundle, directory: str) -> None:
    """Serialize a bundle into ``directory`` (created if missing)."""
    try:
        os.makedirs(directory, exist_ok=True)
        _write_ints(os.path.join(directory, "edges.tsv"), bundle.graph.edges, "\t")
        _write_ints(
            os.path.join(directory, "labels.csv"),
            bundle.assignment.labels[:, None],
            ",",
        )
        _write_reals(os.path.join(directory, "features.csv"), bundle.features)
        _write_ints(
            os.path.join(directory, "feature_labels.csv"),
            bundle.feature_assignment.labels[:, None],
            ",",
        )
        if bundle.edge_features is not None:
            _write_reals(
                os.path.join(directory, "edge_features.csv"), bundle.edge_features
            )
        meta = {
            "schema": SCHEMA_VERSION,
            "seed": int(bundle.seed),
            "config": bundle.config.to_dict(),
        }
        with open(os.path.join(directory, "meta.json"), "w") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise BundleError(f"cannot write bundle: {exc}") from exc


def _load_lines(directory: str, name: str) -> list:
    path = os.path.join(directory, name)
    if not os.path.exists(path):
        raise SchemaError(f"bundle is missing {name}")
    try:
        with open(path) as fh:
            return [line for line in fh.read().splitlines() if line != ""]
    except OSError as exc:
        raise BundleError(f"cannot read {name}: {exc}") from exc


def read_bundle(directory: str) -> DatasetBundle:
    """Parse and validate a bundle directory written by write_bundle."""
    meta_path = os.path.join(directory, "meta.json")
    if not os.path.exists(meta_path):
        raise SchemaError("bundle is missing meta.json")
    try:
        with open(meta_path) as fh:
            meta = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot parse meta.json: {exc}") from exc
    if meta.get("schema") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported bundle schema {meta.get('schema')!r}")
    config = GeneratorConfig.from_dict(meta.get("config", {}))
    seed = int(meta.get("seed", config.seed))
    n, k = config.graph.n, config.graph.k

    try:
        edge_rows = [
            [int(v) for v in line.split("\t")] for line in _load_lines(directory, "edges.tsv")
        ]
        labels = np.array(
            [int(line) for line in _load_lines(directory, "labels.csv")], dtype=np.int64
        )
        X = np.array(
            [
                [float(v) for v in line.split(",")]
                for line in _load_lines(directory, "features.csv")
            ],
            dtype=np.float64,
        )
        flabels = np.array(
            [int(line) for line in _load_lines(directory, "feature_labels.csv")],
            dtype=np.int64,
        )
    except ValueError as exc:
        raise ValidationError(f"malformed bundle contents: {exc}") from exc

    edges = np.array(edge_rows, dtype=np.int64).reshape(-1, 2)
    if edges.shape[0] and any(len(r) != 2 for r in edge_rows):
        raise ValidationError("edges.tsv rows must have exactly two columns")
    if edges.shape[0]:
        if edges.min() < 0 or edges.max() >= n:
            raise ValidationError("edge endpoint outside [0, n)")
        if (edges[:, 0] >= edges[:, 1]).any():
            raise ValidationError("edges must satisfy u < v")
    if labels.shape[0] != n:
        raise ValidationError(f"labels.csv has {labels.shape[0]} rows, expected {n}")
    if labels.min(initial=0) < 0 or labels.max(initial=0) >= k:
        raise ValidationError("cluster label outside [0, k)")
    if X.shape != (n, config.features.s):
        raise ValidationError(
            f"features.csv has shape {X.shape}, expected {(n, config.features.s)}"
        )
    if flabels.shape[0] != n:
        raise ValidationError("feature_labels.csv row count does not match n")

    edge_X = None
    if config.edge_features is not None:
        rows = _load_lines(directory, "edge_features.csv")
        edge_X = np.array(
            [[float(v) for v in line.split(",")] for line in rows], dtype=np.float64
        ).reshape(-1, config.edge_features.s_e)
        if edge_X.shape[0] != edges.shape[0]:
            raise ValidationError("edge_features.csv row count does not match edges.tsv")

    sizes = np.bincount(labels, minlength=k)
    if (sizes == 0).any():
        raise ValidationError("bundle has an empty cluster")
    return DatasetBundle(
        graph=sbm.Graph(n=n, edges=edges),
        assignment=sbm.ClusterAssignment(labels=labels, sizes=sizes),
        features=X,
        feature_assignment=feat.FeatureAssignment(
            labels=flabels, k_f=config.features.k_f
        ),
        edge_features=edge_X,
        config=config,
        seed=seed,
    )
