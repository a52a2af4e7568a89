"""Degree-corrected stochastic block model sampling.

The generator plants ``k`` clusters in a graph of ``n`` nodes and controls
two degree budgets per node: the expected average degree ``d`` and the
expected sub-degree ``d_out`` towards *each* cluster other than the node's
own.  The within-cluster degree is therefore ``d - (k - 1) * d_out``, which
keeps the total expected degree at exactly ``d`` for every valid ``d_out``
and makes the graph completely unclustered at ``d_out = d / k``.  Degree
heterogeneity comes from a truncated power-law propensity vector that is
mean-normalized within each block.

Edges are drawn independently per node pair with probability
``min(theta_i * theta_j * rate, 1)``, so block-level edge counts match the
expected-count matrix exactly (no small-rate collapse bias).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyBlock, InvalidParams, RateOverflow

# Pairwise rates above this are treated as a sign of a degenerate
# configuration rather than silently saturated.
RATE_GUARD = 50.0


@dataclass(frozen=True)
class PowerLawParams:
    """Truncated power-law degree propensity: density ~ x^(-alpha) on [d_min, d_max]."""

    d_min: float = 2.0
    d_max: float = 4.0
    alpha: float = 2.0

    def __post_init__(self):
        if self.d_min <= 0:
            raise InvalidParams(f"d_min must be positive, got {self.d_min}")
        if self.d_max < self.d_min:
            raise InvalidParams(f"d_max={self.d_max} < d_min={self.d_min}")
        if self.alpha <= 0:
            raise InvalidParams(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class GraphParams:
    """Structural parameters of one graph draw.

    ``d_out`` is the expected sub-degree of a node to each cluster other
    than its own; it must satisfy ``(k - 1) * d_out <= d`` so the
    within-cluster degree stays nonnegative.
    """

    n: int = 1000
    k: int = 4
    d: float = 20.0
    d_out: float = 2.0
    power_law: PowerLawParams = field(default_factory=PowerLawParams)

    def __post_init__(self):
        if self.n <= 0:
            raise InvalidParams(f"n must be positive, got {self.n}")
        if self.k < 2:
            raise InvalidParams(f"k must be >= 2, got {self.k}")
        if self.k > self.n:
            raise InvalidParams(f"k={self.k} exceeds n={self.n}")
        if not 0 < self.d < self.n:
            raise InvalidParams(f"d must lie in (0, n), got {self.d}")
        if self.d_out < 0:
            raise InvalidParams(f"d_out must be >= 0, got {self.d_out}")
        if self.d_in < 0:
            raise InvalidParams(
                f"(k - 1) * d_out = {(self.k - 1) * self.d_out} exceeds d = {self.d}"
            )

    @property
    def d_in(self) -> float:
        """Expected within-cluster degree, d - (k - 1) * d_out."""
        return self.d - (self.k - 1) * self.d_out


@dataclass(frozen=True)
class ClusterAssignment:
    """Node-to-cluster labels plus realized block sizes."""

    labels: np.ndarray
    sizes: np.ndarray

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def k(self) -> int:
        return self.sizes.shape[0]

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        sizes = np.asarray(self.sizes, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "sizes", sizes)
        if labels.min(initial=0) < 0 or labels.max(initial=0) >= sizes.shape[0]:
            raise InvalidParams("labels outside [0, k)")
        if sizes.sum() != labels.shape[0]:
            raise InvalidParams("sizes do not sum to n")
        if (sizes == 0).any():
            raise EmptyBlock("assignment contains an empty cluster")


@dataclass(frozen=True)
class BlockMatrix:
    """k x k symmetric matrix of expected edge counts between cluster pairs.

    The diagonal counts each within-block edge once; the total degree mass
    ``2 * sum(diag) + 2 * sum(offdiag upper)`` equals ``n * d``.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidParams("block matrix must be square")
        if not np.allclose(entries, entries.T):
            raise InvalidParams("block matrix must be symmetric")
        if (entries < 0).any():
            raise InvalidParams("block matrix entries must be nonnegative")

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    def degree_mass(self) -> float:
        """Total expected degree over all nodes (should equal n * d)."""
        e = self.entries
        return float(2.0 * np.trace(e) + (e.sum() - np.trace(e)))


@dataclass(frozen=True)
class ThetaVector:
    """Per-node degree propensities, mean-normalized to 1 within each block."""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=np.float64)
        object.__setattr__(self, "theta", theta)
        if (theta <= 0).any():
            raise InvalidParams("theta entries must be positive")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; edges are (u, v) pairs with u < v, sorted."""

    n: int
    edges: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "edges", edges)
        if edges.shape[0]:
            if edges.min() < 0 or edges.max() >= self.n:
                raise InvalidParams("edge endpoint outside [0, n)")
            if (edges[:, 0] >= edges[:, 1]).any():
                raise InvalidParams("edges must satisfy u < v")

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        if self.edges.shape[0]:
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
        return deg


@dataclass(frozen=True)
class GraphStats:
    """Summary statistics used to validate generated graphs."""

    average_degree: float
    degree_histogram: np.ndarray
    within_block_fraction: float
    block_pair_counts: np.ndarray


def sample_memberships(n: int, k: int, rng: np.random.Generator) -> ClusterAssignment:
    """Draw each node's cluster uniformly at random from [0, k).

    Raises EmptyBlock if any cluster ends up empty; retrying with a fresh
    seed is the caller's choice.
    """
    if k < 2:
        raise InvalidParams(f"k must be >= 2, got {k}")
    if n < k:
        raise EmptyBlock(f"n={n} < k={k}: some cluster must be empty")
    labels = rng.integers(0, k, size=n)
    sizes = np.bincount(labels, minlength=k)
    if (sizes == 0).any():
        empty = np.flatnonzero(sizes == 0).tolist()
        raise EmptyBlock(f"clusters {empty} received zero nodes")
    return ClusterAssignment(labels=labels, sizes=sizes)


def build_block_matrix(params: GraphParams, sizes: np.ndarray) -> BlockMatrix:
    """Expected edge counts per block pair from (d, d_out) and realized sizes.

    Diagonal: ``sizes_a * d_in / 2`` with ``d_in = d - (k - 1) * d_out``.
    Off-diagonal: ``(sizes_a + sizes_b) / 2 * d_out``, the symmetrized
    average of the two per-node sub-degree targets (they coincide for
    equal block sizes).
    """
    sizes = np.asarray(sizes, dtype=np.float64)
    if sizes.shape[0] != params.k:
        raise InvalidParams("sizes length does not match k")
    d_in = params.d_in
    if d_in < 0:
        raise InvalidParams("within-cluster degree is negative")
    entries = np.add.outer(sizes, sizes) / 2.0 * params.d_out
    np.fill_diagonal(entries, sizes * d_in / 2.0)
    return BlockMatrix(entries=entries)


def sample_degree_propensities(
    assignment: ClusterAssignment,
    params: PowerLawParams,
    rng: np.random.Generator,
) -> ThetaVector:
    """Draw i.i.d. truncated power-law propensities and normalize per block.

    Raw values come from the continuous density proportional to x^(-alpha)
    on [d_min, d_max], sampled by inverse CDF.  Each block is then rescaled
    to mean 1 so the block matrix keeps its expected-count meaning.
    """
    n = assignment.n
    raw = _truncated_power_law(params, rng.random(n))
    theta = raw.copy()
    for c in range(assignment.k):
        mask = assignment.labels == c
        theta[mask] /= theta[mask].mean()
    return ThetaVector(theta=theta)


def _truncated_power_law(params: PowerLawParams, u: np.ndarray) -> np.ndarray:
    """Inverse CDF of the truncated power law evaluated at uniforms ``u``."""
    lo, hi, alpha = params.d_min, params.d_max, params.alpha
    if hi == lo:
        return np.full_like(u, lo)
    if abs(alpha - 1.0) < 1e-12:
        return lo * np.power(hi / lo, u)
    g = 1.0 - alpha
    return np.power(lo**g + u * (hi**g - lo**g), 1.0 / g)


def sample_graph(
    assignment: ClusterAssignment,
    block_matrix: BlockMatrix,
    theta: ThetaVector,
    rng: np.random.Generator,
) -> Graph:
    """Sample a simple graph with pairwise rates theta_i * theta_j * rate(a, b).

    The per-pair base rate is ``D_ab / (sizes_a * sizes_b)`` across blocks
    and ``D_aa / (sizes_a * (sizes_a - 1) / 2)`` within a block; each pair
    becomes an edge with probability ``min(rate, 1)``.  Block pairs are
    visited in a fixed (a <= b) order so output depends only on the rng
    state.  Raises RateOverflow if any pairwise rate exceeds RATE_GUARD.
    """
    k = assignment.k
    sizes = assignment.sizes.astype(np.float64)
    if block_matrix.k != k:
        raise InvalidParams("block matrix size does not match assignment")
    if theta.theta.shape[0] != assignment.n:
        raise InvalidParams("theta length does not match assignment")

    node_idx = [np.flatnonzero(assignment.labels == c) for c in range(k)]
    th = theta.theta
    chunks = []
    for a in range(k):
        for b in range(a, k):
            ia = node_idx[a]
            if a == b:
                pairs = sizes[a] * (sizes[a] - 1) / 2.0
                if pairs == 0:
                    continue
                base = block_matrix.entries[a, a] / pairs
                iu, iv = np.triu_indices(ia.shape[0], 1)
                u_nodes, v_nodes = ia[iu], ia[iv]
            else:
                ib = node_idx[b]
                base = block_matrix.entries[a, b] / (sizes[a] * sizes[b])
                u_nodes = np.repeat(ia, ib.shape[0])
                v_nodes = np.tile(ib, ia.shape[0])
            lam = th[u_nodes] * th[v_nodes] * base
            if lam.size and lam.max() > RATE_GUARD:
                raise RateOverflow(
                    f"pairwise rate {lam.max():.3g} exceeds guard {RATE_GUARD} "
                    f"for block pair ({a}, {b})"
                )
            hit = rng.random(lam.shape[0]) < np.minimum(lam, 1.0)
            if hit.any():
                uu, vv = u_nodes[hit], v_nodes[hit]
                lo = np.minimum(uu, vv)
                hi = np.maximum(uu, vv)
                chunks.append(np.column_stack([lo, hi]))

    if chunks:
        edges = np.concatenate(chunks)
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        edges = edges[order]
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    return Graph(n=assignment.n, edges=edges)


def detectability_threshold(d: float, k: int) -> float:
    """Critical cross-cluster sub-degree ``d / k - sqrt(d / k)``.

    Below the returned value the planted clusters are recoverable from the
    graph alone; above it graph-only methods degrade towards chance.
    Clamped to 0 when ``d / k < 1``.
    """
    if d <= 0:
        raise InvalidParams(f"d must be positive, got {d}")
    if k < 2:
        raise InvalidParams(f"k must be >= 2, got {k}")
    ratio = d / k
    return max(ratio - np.sqrt(ratio), 0.0)


def graph_stats(graph: Graph, assignment: ClusterAssignment) -> GraphStats:
    """Average degree, degree histogram, and per-block-pair edge counts."""
    if graph.n != assignment.n:
        raise InvalidParams("graph and assignment disagree on n")
    k = assignment.k
    counts = np.zeros((k, k), dtype=np.float64)
    m = graph.num_edges
    if m:
        la = assignment.labels[graph.edges[:, 0]]
        lb = assignment.labels[graph.edges[:, 1]]
        lo = np.minimum(la, lb)
        hi = np.maximum(la, lb)
        np.add.at(counts, (lo, hi), 1.0)
        counts = counts + np.triu(counts, 1).T
    deg = graph.degrees()
    hist = np.bincount(deg) if deg.size else np.zeros(1, dtype=np.int64)
    within = float(np.trace(counts) / m) if m else 1.0
    return GraphStats(
        average_degree=float(2.0 * m / graph.n),
        degree_histogram=hist,
        within_block_fraction=within,
        block_pair_counts=counts,
    )
