"""Deterministic per-trajectory random number streams.

Streams are built on the Philox4x64-10 counter-based bit generator keyed by
(master_seed, trajectory_index).  The mapping is pure: the same pair always
yields the same stream, independent of how trajectories are scheduled across
workers, and states serialize/restore losslessly for mid-run resumption.
"""

import numpy as np


def rng_stream(master_seed, trajectory_index=0):
    """Independent, reproducible generator for one trajectory."""
    key = np.array([np.uint64(master_seed), np.uint64(trajectory_index)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def stream_state(gen):
    """Serializable state of a stream (a plain dict)."""
    return gen.bit_generator.state


def restore_stream(state):
    """Rebuild a generator from a serialized state."""
    bg = np.random.Philox()
    bg.state = state
    return np.random.Generator(bg)
