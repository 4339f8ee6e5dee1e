"""Deterministic random streams for batched simulation."""

import numpy as np


def child_generator(seed: int, batch: int) -> np.random.Generator:
    """Independent counter-based stream for batch `batch` of a run seeded with `seed`."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(batch,))))


def batch_sizes(n_paths: int, batch_size: int) -> list[int]:
    """Split n_paths into full batches followed by one remainder batch."""
    full, rest = divmod(n_paths, batch_size)
    return [batch_size] * full + ([rest] if rest else [])
