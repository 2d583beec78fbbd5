"""Seedable random streams with documented, reproducible behavior.

A stream is a NumPy PCG64 generator keyed by (master_seed, stream_id) through
SeedSequence spawning, so distinct stream ids are statistically independent
and every (seed, id) pair replays identically on any platform.
"""
from __future__ import annotations

import numpy as np


def seeded_stream(master_seed: int, stream_id: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(stream_id,))
    return np.random.Generator(np.random.PCG64(seq))
