"""Independent brute-force oracles used to freeze expected values.

Everything here is deliberately slow and simple; nothing imports the code
paths it checks.
"""

import itertools
import math

import numpy as np


def nmi_bruteforce(a, b) -> float:
    """NMI via explicit probability sums with natural logs."""
    a = list(a)
    b = list(b)
    n = len(a)
    ca = sorted(set(a))
    cb = sorted(set(b))

    def h(labels, classes):
        total = 0.0
        for c in classes:
            p = sum(1 for x in labels if x == c) / n
            if p > 0:
                total -= p * math.log(p)
        return total

    ha, hb = h(a, ca), h(b, cb)
    if ha + hb == 0.0:
        return 0.0
    mi = 0.0
    for x in ca:
        for y in cb:
            pxy = sum(1 for i in range(n) if a[i] == x and b[i] == y) / n
            px = sum(1 for v in a if v == x) / n
            py = sum(1 for v in b if v == y) / n
            if pxy > 0:
                mi += pxy * math.log(pxy / (px * py))
    return min(max(2.0 * mi / (ha + hb), 0.0), 1.0)


def clustering_accuracy_bruteforce(a, b) -> float:
    """Max agreement over all bijective relabelings, by exhaustive search."""
    a = [x.item() if hasattr(x, "item") else x for x in a]
    b = [x.item() if hasattr(x, "item") else x for x in b]
    ca = sorted(set(a))
    cb = sorted(set(b))
    k = max(len(ca), len(cb))
    # pad both sides to k symbols so every bijection is a permutation
    ca = ca + [("pad_a", i) for i in range(k - len(ca))]
    cb = cb + [("pad_b", i) for i in range(k - len(cb))]
    best = 0
    for perm in itertools.permutations(range(k)):
        mapping = {ca[i]: cb[perm[i]] for i in range(k)}
        best = max(best, sum(1 for x, y in zip(a, b) if mapping[x] == y))
    return best / len(a)


def best_two_partition_sse(points) -> float:
    """Minimum k=2 SSE over all nonempty bipartitions of the points."""
    X = np.asarray(points, dtype=float)
    n = X.shape[0]
    best = math.inf
    for bits in range(1, 2 ** (n - 1)):
        mask = np.array([(bits >> i) & 1 for i in range(n)], dtype=bool)
        if not mask.any() or mask.all():
            continue
        sse = 0.0
        for part in (X[mask], X[~mask]):
            sse += float(np.sum((part - part.mean(axis=0)) ** 2))
        best = min(best, sse)
    return best


def kmeans_sse(points, labels) -> float:
    X = np.asarray(points, dtype=float)
    labels = np.asarray(labels)
    sse = 0.0
    for c in np.unique(labels):
        part = X[labels == c]
        sse += float(np.sum((part - part.mean(axis=0)) ** 2))
    return sse


def truncated_power_law_mean(d_min, d_max, alpha) -> float:
    """E[X] for density ~ x^(-alpha) on [d_min, d_max] by quadrature."""
    from scipy.integrate import quad

    norm, _ = quad(lambda x: x**-alpha, d_min, d_max)
    num, _ = quad(lambda x: x * x**-alpha, d_min, d_max)
    return num / norm


def is_refinement(fine, coarse) -> bool:
    """Every fine-cluster is contained in exactly one coarse-cluster."""
    fine = list(fine)
    coarse = list(coarse)
    for c in set(fine):
        parents = {coarse[i] for i in range(len(fine)) if fine[i] == c}
        if len(parents) != 1:
            return False
    return True
