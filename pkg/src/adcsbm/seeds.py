"""Deterministic seed derivation for stages and sweep cells."""

from __future__ import annotations

import numpy as np

# Fixed per-stage spawn keys so adding a stage never shifts the others.
STAGES = (
    "memberships",
    "theta",
    "graph",
    "feature_memberships",
    "centers",
    "node_features",
    "edge_features",
    "split",
)


def stage_rng(seed: int, stage: str) -> np.random.Generator:
    """Independent generator for one named generation stage."""
    idx = STAGES.index(stage)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(idx,))
    return np.random.default_rng(ss)


def derive_trial_seed(master_seed: int, grid_index: int, trial_index: int) -> int:
    """Stable 64-bit seed for one (grid value, trial) sweep cell."""
    ss = np.random.SeedSequence([int(master_seed), int(grid_index), int(trial_index)])
    return int(ss.generate_state(1, np.uint64)[0])
