"""Classical baselines: graph-only and feature-only clustering plus
semi-supervised classifiers.

These are reference methods for the benchmark harness, chosen so that each
one consumes exactly one signal: spectral clustering sees only edges,
k-means only features, label propagation only edges plus seed labels, and
nearest centroid only features plus seed labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import (
    ClassTooSmall,
    ConvergenceFailure,
    DegenerateInput,
    InvalidParams,
)
from .sbm import Graph

EIGEN_RESIDUAL_BOUND = 1e-5


@dataclass(frozen=True)
class SplitSpec:
    """Few-shot node partition: boolean train/val/test masks plus shot count."""

    train_mask: np.ndarray
    val_mask: np.ndarray
    test_mask: np.ndarray
    shots: int

    def __post_init__(self):
        for name in ("train_mask", "val_mask", "test_mask"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=bool))
        overlap = (
            (self.train_mask & self.val_mask)
            | (self.train_mask & self.test_mask)
            | (self.val_mask & self.test_mask)
        )
        if overlap.any():
            raise InvalidParams("split masks must be disjoint")
        if not self.test_mask.any():
            raise ClassTooSmall("test set is empty")


def kmeans(
    features: np.ndarray,
    k: int,
    max_iter: int = 100,
    n_init: int = 10,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Lloyd's algorithm with k-means++ seeding, best of n_init restarts by SSE."""
    X = np.asarray(features, dtype=np.float64)
    if rng is None:
        rng = np.random.default_rng()
    if k < 1:
        raise InvalidParams(f"k must be >= 1, got {k}")
    if k > X.shape[0]:
        raise DegenerateInput(f"k={k} exceeds number of rows {X.shape[0]}")
    if np.unique(X, axis=0).shape[0] < k:
        raise DegenerateInput(f"fewer than k={k} distinct rows")

    best_labels, best_sse = None, np.inf
    for _ in range(n_init):
        labels, sse = _lloyd(X, k, max_iter, rng)
        if sse < best_sse:
            best_labels, best_sse = labels, sse
    return best_labels


def _plusplus_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    dist2 = np.sum((X - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = dist2.sum()
        if total == 0:
            centers[j] = X[rng.integers(n)]
        else:
            centers[j] = X[rng.choice(n, p=dist2 / total)]
        dist2 = np.minimum(dist2, np.sum((X - centers[j]) ** 2, axis=1))
    return centers


def _assign(X: np.ndarray, centers: np.ndarray):
    # ||x - c||^2 expanded; ties go to the lowest cluster id via argmin
    d2 = (
        np.sum(X**2, axis=1)[:, None]
        - 2.0 * X @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    labels = np.argmin(d2, axis=1)
    sse = float(np.maximum(d2[np.arange(X.shape[0]), labels], 0.0).sum())
    return labels, sse


def _lloyd(X: np.ndarray, k: int, max_iter: int, rng: np.random.Generator):
    centers = _plusplus_init(X, k, rng)
    labels, sse = _assign(X, centers)
    for _ in range(max_iter):
        for j in range(k):
            members = X[labels == j]
            if members.shape[0]:
                centers[j] = members.mean(axis=0)
            else:
                # reseed an empty cluster at the point farthest from its center
                far = np.argmax(np.sum((X - centers[labels]) ** 2, axis=1))
                centers[j] = X[far]
        new_labels, new_sse = _assign(X, centers)
        assert new_sse <= sse + 1e-7 * max(sse, 1.0), "SSE increased in Lloyd step"
        converged = np.array_equal(new_labels, labels)
        labels, sse = new_labels, new_sse
        if converged:
            break
    return labels, sse


def _adjacency(graph: Graph) -> sp.csr_matrix:
    m = graph.num_edges
    rows = np.concatenate([graph.edges[:, 0], graph.edges[:, 1]])
    cols = np.concatenate([graph.edges[:, 1], graph.edges[:, 0]])
    data = np.ones(2 * m)
    return sp.csr_matrix((data, (rows, cols)), shape=(graph.n, graph.n))


def spectral_embedding(
    graph: Graph,
    k: int,
    tol: float = 1e-6,
    max_iter: int | None = None,
    rng: np.random.Generator | None = None,
):
    """Top-k eigenpairs of the degree-regularized normalized adjacency.

    The regularizer (average degree added to every degree) keeps the
    normalization well conditioned on sparse or disconnected graphs.
    Returns (vectors n x k, values); every returned pair satisfies
    ||M v - lambda v|| <= EIGEN_RESIDUAL_BOUND.
    """
    if rng is None:
        rng = np.random.default_rng()
    if k < 2:
        raise InvalidParams(f"k must be >= 2, got {k}")
    if k >= graph.n:
        raise InvalidParams(f"k={k} must be below n={graph.n}")
    A = _adjacency(graph)
    deg = np.asarray(A.sum(axis=1)).ravel()
    tau = deg.mean()
    if tau == 0.0:
        # edgeless graph: the operator is identically zero
        vecs = np.zeros((graph.n, k))
        vecs[np.arange(k), np.arange(k)] = 1.0
        return vecs, np.zeros(k)
    scale = 1.0 / np.sqrt(deg + tau)
    M = sp.diags(scale) @ A @ sp.diags(scale)
    v0 = rng.normal(size=graph.n)
    try:
        vals, vecs = eigsh(
            M, k=k, which="LA", tol=tol, v0=v0, maxiter=max_iter
        )
    except ArpackNoConvergence as exc:
        raise ConvergenceFailure(f"eigensolver did not converge: {exc}") from exc
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    residuals = np.linalg.norm(M @ vecs - vecs * vals, axis=0)
    if (residuals > EIGEN_RESIDUAL_BOUND).any():
        raise ConvergenceFailure(
            f"eigen-residuals {residuals.max():.2e} exceed {EIGEN_RESIDUAL_BOUND}"
        )
    return vecs, vals


def spectral_graph_clustering(
    graph: Graph,
    k: int,
    rng: np.random.Generator | None = None,
    n_init: int = 10,
) -> np.ndarray:
    """Cluster nodes by k-means on the rows of the spectral embedding."""
    if rng is None:
        rng = np.random.default_rng()
    vecs, _ = spectral_embedding(graph, k, rng=rng)
    try:
        return kmeans(vecs, k, rng=rng, n_init=n_init)
    except DegenerateInput:
        # fewer than k distinct embedding rows: everything is one cluster
        return np.zeros(graph.n, dtype=np.int64)


def make_few_shot_split(
    labels: np.ndarray,
    shots: int,
    val_per_class: int,
    rng: np.random.Generator,
) -> SplitSpec:
    """Per class: ``shots`` train and ``val_per_class`` val nodes without
    replacement; everything else is test."""
    labels = np.asarray(labels, dtype=np.int64)
    if shots < 1 or val_per_class < 0:
        raise InvalidParams("shots must be >= 1 and val_per_class >= 0")
    n = labels.shape[0]
    train = np.zeros(n, dtype=bool)
    val = np.zeros(n, dtype=bool)
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if idx.shape[0] < shots + val_per_class:
            raise ClassTooSmall(
                f"class {c} has {idx.shape[0]} nodes, needs {shots + val_per_class}"
            )
        perm = rng.permutation(idx)
        train[perm[:shots]] = True
        val[perm[shots : shots + val_per_class]] = True
    test = ~(train | val)
    if not test.any():
        raise ClassTooSmall("no nodes left for the test set")
    return SplitSpec(train_mask=train, val_mask=val, test_mask=test, shots=shots)


def label_propagation(
    graph: Graph,
    split: SplitSpec,
    labels: np.ndarray,
    alpha_mix: float = 0.9,
    max_iter: int = 50,
    tol: float = 1e-6,
) -> np.ndarray:
    """Seeded diffusion F <- alpha S F + (1 - alpha) Y with clamped seeds.

    S is the symmetrically normalized adjacency; predictions are the
    per-row argmax (lowest class id on ties).  Unlabeled isolated nodes
    fall back to the majority train label.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != graph.n:
        raise InvalidParams("labels length does not match graph")
    if not 0 < alpha_mix < 1:
        raise InvalidParams(f"alpha_mix must lie in (0, 1), got {alpha_mix}")
    classes = np.unique(labels)
    class_pos = {c: i for i, c in enumerate(classes)}
    n, c = graph.n, classes.shape[0]

    A = _adjacency(graph)
    deg = np.asarray(A.sum(axis=1)).ravel()
    inv_sqrt = np.where(deg > 0, 1.0 / np.sqrt(np.maximum(deg, 1.0)), 0.0)
    S = sp.diags(inv_sqrt) @ A @ sp.diags(inv_sqrt)

    Y = np.zeros((n, c))
    train_idx = np.flatnonzero(split.train_mask)
    Y[train_idx, [class_pos[labels[i]] for i in train_idx]] = 1.0

    F = Y.copy()
    for _ in range(max_iter):
        new_F = alpha_mix * (S @ F) + (1.0 - alpha_mix) * Y
        new_F[train_idx] = Y[train_idx]
        change = float(np.abs(new_F - F).max())
        F = new_F
        if change < tol:
            break

    pred = classes[np.argmax(F, axis=1)]
    pred[train_idx] = labels[train_idx]
    counts = np.bincount([class_pos[labels[i]] for i in train_idx], minlength=c)
    majority = classes[np.argmax(counts)]
    orphan = (deg == 0) & ~split.train_mask
    pred[orphan] = majority
    return pred


def nearest_centroid(
    features: np.ndarray, split: SplitSpec, labels: np.ndarray
) -> np.ndarray:
    """Predict every node's class by its nearest train-set class centroid."""
    X = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != X.shape[0]:
        raise InvalidParams("labels length does not match features")
    classes = np.unique(labels)
    centroids = np.empty((classes.shape[0], X.shape[1]))
    for i, cl in enumerate(classes):
        members = split.train_mask & (labels == cl)
        if not members.any():
            raise ClassTooSmall(f"class {cl} has no train nodes")
        centroids[i] = X[members].mean(axis=0)
    d2 = (
        np.sum(X**2, axis=1)[:, None]
        - 2.0 * X @ centroids.T
        + np.sum(centroids**2, axis=1)[None, :]
    )
    return classes[np.argmin(d2, axis=1)]
