"""Gaussian mixture node features and inter/intra-class edge features.

Feature-cluster memberships can match the graph clusters exactly, refine
them (nest), or coarsen them (group).  Nesting and grouping are
"incomplete" on purpose: only the lowest-index clusters split or merge,
so the relation between the two partitions is deterministic given
(k, k_f) and a seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateClusters, InvalidParams, ModeMismatch
from .sbm import ClusterAssignment, Graph


class MembershipMode(str, enum.Enum):
    MATCH = "match"
    NEST = "nest"
    GROUP = "group"


@dataclass(frozen=True)
class FeatureParams:
    """Node-feature generation parameters.

    ``sigma_c`` scales the cluster centers, ``sigma`` the within-cluster
    spread; their squared ratio controls the between/within sum-of-squares
    separation of the resulting mixture.
    """

    s: int = 32
    k_f: int = 4
    mode: MembershipMode = MembershipMode.MATCH
    sigma: float = 1.0
    sigma_c: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "mode", MembershipMode(self.mode))
        if self.s < 1:
            raise InvalidParams(f"s must be >= 1, got {self.s}")
        if self.k_f < 1:
            raise InvalidParams(f"k_f must be >= 1, got {self.k_f}")
        if self.sigma <= 0:
            raise InvalidParams(f"sigma must be positive, got {self.sigma}")
        if self.sigma_c < 0:
            raise InvalidParams(f"sigma_c must be >= 0, got {self.sigma_c}")

    def validate_against(self, k: int) -> None:
        mode, k_f = self.mode, self.k_f
        if mode is MembershipMode.MATCH and k_f != k:
            raise ModeMismatch(f"match mode requires k_f == k ({k_f} != {k})")
        if mode is MembershipMode.NEST and k_f <= k:
            raise ModeMismatch(f"nest mode requires k_f > k ({k_f} <= {k})")
        if mode is MembershipMode.GROUP and k_f >= k:
            raise ModeMismatch(f"group mode requires k_f < k ({k_f} >= {k})")


@dataclass(frozen=True)
class EdgeFeatureParams:
    """Edge-feature parameters: dimension, spread, and inter-class mean shift."""

    s_e: int = 4
    sigma_e: float = 1.0
    x_e: float = 0.0

    def __post_init__(self):
        if self.s_e < 1:
            raise InvalidParams(f"s_e must be >= 1, got {self.s_e}")
        if self.sigma_e <= 0:
            raise InvalidParams(f"sigma_e must be positive, got {self.sigma_e}")


@dataclass(frozen=True)
class FeatureAssignment:
    """Node-to-feature-cluster labels in [0, k_f)."""

    labels: np.ndarray
    k_f: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        if labels.size and (labels.min() < 0 or labels.max() >= self.k_f):
            raise InvalidParams("feature labels outside [0, k_f)")


@dataclass(frozen=True)
class BssWssRatio:
    """Between/within sum-of-squares decomposition around the global mean."""

    ratio: float
    bss: float
    wss: float
    degenerate: bool = False


def build_feature_memberships(
    assignment: ClusterAssignment,
    k_f: int,
    mode: MembershipMode,
    rng: np.random.Generator,
) -> FeatureAssignment:
    """Derive feature-cluster labels from the graph clusters.

    match: identity.  nest: the first ``k_f - k`` graph clusters (round-robin
    if more splits than clusters) each shed a fair-coin half of their nodes
    into a fresh feature cluster, so every feature cluster stays inside one
    graph cluster.  group: graph cluster ``c`` maps to feature cluster
    ``c % k_f``, merging the high-index clusters round-robin.
    """
    mode = MembershipMode(mode)
    k = assignment.k
    if mode is MembershipMode.MATCH:
        if k_f != k:
            raise ModeMismatch(f"match mode requires k_f == k ({k_f} != {k})")
        return FeatureAssignment(labels=assignment.labels.copy(), k_f=k_f)
    if mode is MembershipMode.NEST:
        if k_f <= k:
            raise ModeMismatch(f"nest mode requires k_f > k ({k_f} <= {k})")
        labels = assignment.labels.copy()
        for j in range(k_f - k):
            parent = j % k
            # split the still-unsplit remainder of the parent cluster
            candidates = np.flatnonzero(labels == parent)
            coin = rng.random(candidates.shape[0]) < 0.5
            labels[candidates[coin]] = k + j
        return FeatureAssignment(labels=labels, k_f=k_f)
    if mode is MembershipMode.GROUP:
        if k_f >= k:
            raise ModeMismatch(f"group mode requires k_f < k ({k_f} >= {k})")
        return FeatureAssignment(labels=assignment.labels % k_f, k_f=k_f)
    raise ModeMismatch(f"unknown mode {mode!r}")


def sample_centers(
    k_f: int, s: int, sigma_c: float, rng: np.random.Generator
) -> np.ndarray:
    """k_f zero-mean cluster centers with i.i.d. Normal(0, sigma_c^2) entries."""
    if k_f < 1 or s < 1:
        raise InvalidParams("k_f and s must be positive")
    return rng.normal(0.0, sigma_c, size=(k_f, s))


def sample_node_features(
    feature_assignment: FeatureAssignment,
    centers: np.ndarray,
    sigma: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Row i ~ Normal(centers[label_i], sigma^2 I), independent across nodes."""
    centers = np.asarray(centers, dtype=np.float64)
    labels = feature_assignment.labels
    if labels.size and labels.max() >= centers.shape[0]:
        raise InvalidParams("feature label outside center table")
    noise = rng.normal(0.0, sigma, size=(labels.shape[0], centers.shape[1]))
    return centers[labels] + noise


def sample_edge_features(
    graph: Graph,
    assignment: ClusterAssignment,
    params: EdgeFeatureParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """One feature row per edge, in the graph's canonical (u, v) edge order.

    Within-cluster edges are Normal(0, sigma_e^2 I); cross-cluster edges get
    every coordinate shifted by ``x_e``.
    """
    if graph.n != assignment.n:
        raise InvalidParams("graph and assignment disagree on n")
    m = graph.num_edges
    values = rng.normal(0.0, params.sigma_e, size=(m, params.s_e))
    if m:
        inter = (
            assignment.labels[graph.edges[:, 0]]
            != assignment.labels[graph.edges[:, 1]]
        )
        values[inter] += params.x_e
    return values


def feature_separation_stats(
    features: np.ndarray, labels: np.ndarray
) -> BssWssRatio:
    """Between/within sum-of-squares ratio of a labeled feature matrix.

    Returns an inf ratio when the within term vanishes with distinct
    centers, and a flagged 0 when the matrix is globally constant.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.shape[0] != labels.shape[0]:
        raise InvalidParams("features and labels disagree on n")
    present = np.unique(labels)
    if present.shape[0] < 2:
        raise DegenerateClusters("need at least 2 nonempty clusters")
    global_mean = features.mean(axis=0)
    bss = 0.0
    wss = 0.0
    for c in present:
        rows = features[labels == c]
        mean_c = rows.mean(axis=0)
        bss += rows.shape[0] * float(np.sum((mean_c - global_mean) ** 2))
        wss += float(np.sum((rows - mean_c) ** 2))
    if wss == 0.0:
        if bss == 0.0:
            return BssWssRatio(ratio=0.0, bss=0.0, wss=0.0, degenerate=True)
        return BssWssRatio(ratio=float("inf"), bss=bss, wss=0.0)
    return BssWssRatio(ratio=bss / wss, bss=bss, wss=wss)
